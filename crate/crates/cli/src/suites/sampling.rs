//! Random populations for the suites.

use gamma_lagrangians::geometry::{MetricField, MetricSpec, Point, Profile};
use gamma_lagrangians::lagrangians::{FieldStrength, ParticleState, Potential, WorldvolumeJacobian};
use gamma_lagrangians::linalg::SpinMatrix;
use num_complex::Complex64;
use rand::Rng;

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

pub fn vec4(rng: &mut impl Rng, r: f64) -> [f64; 4] {
    std::array::from_fn(|_| rng.gen_range(-r..r))
}

pub fn complex_matrix(rng: &mut impl Rng, r: f64) -> SpinMatrix {
    SpinMatrix::new(std::array::from_fn(|_| {
        std::array::from_fn(|_| Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r)))
    }))
    .expect("finite entries")
}

/// Gram–Schmidt on the columns of a random complex matrix.
pub fn unitary(rng: &mut impl Rng) -> SpinMatrix {
    let m = complex_matrix(rng, 1.0);
    let mut cols: Vec<[Complex64; 4]> = Vec::with_capacity(4);
    for j in 0..4 {
        let mut v: [Complex64; 4] = std::array::from_fn(|i| m.entries()[i][j]);
        for q in &cols {
            let dot: Complex64 = (0..4).map(|i| q[i].conj() * v[i]).sum();
            for i in 0..4 {
                v[i] -= dot * q[i];
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.map(|z| z / n));
    }
    SpinMatrix::new(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))).expect("finite entries")
}

pub fn antisymmetric_rank3(rng: &mut impl Rng) -> [[[f64; 4]; 4]; 4] {
    let mut f = [[[0.0; 4]; 4]; 4];
    for comp in f.iter_mut() {
        for mu in 0..4 {
            for nu in mu + 1..4 {
                let v = rng.gen_range(-1.0..1.0);
                comp[mu][nu] = v;
                comp[nu][mu] = -v;
            }
        }
    }
    f
}

pub fn profile(rng: &mut impl Rng, slope: f64) -> Profile {
    if rng.gen_bool(0.5) {
        Profile::Affine { offset: uniform(rng, 0.8, 1.5), slope: vec4(rng, slope) }
    } else {
        Profile::Exponential { amplitude: uniform(rng, 0.8, 1.5), rate: vec4(rng, slope) }
    }
}

/// Point outside the horizon region, `3M ≤ |x| ≤ 10M`.
pub fn schwarzschild_point(rng: &mut impl Rng, mass: f64) -> Point {
    let dir = vec4(rng, 1.0);
    let n = (dir[1] * dir[1] + dir[2] * dir[2] + dir[3] * dir[3]).sqrt().max(1e-3);
    let radius = uniform(rng, 3.0, 10.0) * mass;
    [dir[0], dir[1] / n * radius, dir[2] / n * radius, dir[3] / n * radius]
}

/// Cycles flat, conformal-diagonal and Schwarzschild by `which`.
pub fn particle_geometry(rng: &mut impl Rng, which: usize) -> (MetricField, Point) {
    match which % 3 {
        0 => (MetricSpec::Flat.build().expect("flat"), vec4(rng, 5.0)),
        1 => {
            let x = vec4(rng, 0.5);
            let spec = MetricSpec::ConformalDiagonal { profiles: std::array::from_fn(|_| profile(rng, 0.2)) };
            (spec.build_at(&x).expect("profiles stay positive on the sample box"), x)
        }
        _ => {
            let mass = uniform(rng, 0.5, 2.0);
            let x = schwarzschild_point(rng, mass);
            (MetricSpec::SchwarzschildIsotropic { mass }.build_at(&x).expect("outside the horizon"), x)
        }
    }
}

pub fn particle_state(rng: &mut impl Rng, x: Point) -> ParticleState {
    ParticleState {
        mass: uniform(rng, 0.1, 3.0),
        charge: uniform(rng, -2.0, 2.0),
        position: x,
        velocity: vec4(rng, 2.0),
        potential: Potential::affine(vec4(rng, 1.0), std::array::from_fn(|_| vec4(rng, 0.3))),
    }
}

pub fn field_strength(rng: &mut impl Rng) -> FieldStrength {
    FieldStrength::from_upper(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

pub fn jacobian(rng: &mut impl Rng, p: usize, x: Point) -> WorldvolumeJacobian {
    WorldvolumeJacobian::new((0..=p).map(|_| vec4(rng, 1.0)).collect(), x).expect("p is 1 or 2")
}
