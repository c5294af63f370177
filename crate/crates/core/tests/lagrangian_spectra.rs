mod common;

use common::*;
use gamma_lagrangians::clifford::{build_gamma_basis, GammaBasis};
use gamma_lagrangians::geometry::{ricci_scalar, riemann_at, MetricField, MetricSpec, Point, Profile};
use gamma_lagrangians::lagrangians::*;
use gamma_lagrangians::linalg::{degeneracy_tolerance, eigenvalues4, is_scalar_matrix, spectral_distance, SpinMatrix};
use rand::Rng;

const H: f64 = 1e-3;

fn random_profile(r: &mut impl Rng) -> Profile {
    if r.gen_bool(0.5) {
        Profile::Affine { offset: uniform(r, 0.8, 1.5), slope: vec4(r, 0.2) }
    } else {
        Profile::Exponential { amplitude: uniform(r, 0.8, 1.5), rate: vec4(r, 0.2) }
    }
}

/// Random preset among flat, conformal-diagonal and Schwarzschild, with a
/// point where it is valid.
fn random_geometry(r: &mut impl Rng, which: usize) -> (MetricField, Point) {
    match which % 3 {
        0 => (MetricSpec::Flat.build().unwrap(), vec4(r, 5.0)),
        1 => {
            let x = vec4(r, 0.5);
            let spec = MetricSpec::ConformalDiagonal { profiles: std::array::from_fn(|_| random_profile(r)) };
            (spec.build_at(&x).unwrap(), x)
        }
        _ => {
            let mass = uniform(r, 0.5, 2.0);
            let dir = vec4(r, 1.0);
            let n = (dir[1] * dir[1] + dir[2] * dir[2] + dir[3] * dir[3]).sqrt().max(1e-3);
            let radius = uniform(r, 3.0, 10.0) * mass;
            let x = [dir[0], dir[1] / n * radius, dir[2] / n * radius, dir[3] / n * radius];
            (MetricSpec::SchwarzschildIsotropic { mass }.build_at(&x).unwrap(), x)
        }
    }
}

fn random_state(r: &mut impl Rng, x: Point) -> ParticleState {
    ParticleState {
        mass: uniform(r, 0.1, 3.0),
        charge: uniform(r, -2.0, 2.0),
        position: x,
        velocity: vec4(r, 2.0),
        potential: Potential::affine(vec4(r, 1.0), std::array::from_fn(|_| vec4(r, 0.3))),
    }
}

#[test]
fn particle_spectra_match_closed_form() {
    let b = build_gamma_basis();
    let mut r = rng(41);
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let (metric, x) = random_geometry(&mut r, trial);
        let s = random_state(&mut r, x);
        let m = point_particle_matrix(&s, &metric, &b).unwrap();
        let got = eigenvalues4(&m).unwrap();
        let want = point_particle_spectrum(&s, &metric);
        worst = worst.max(spectral_distance(&got, &want));
        assert_eq!(got.degeneracy_pattern(degeneracy_tolerance(&m)), vec![2, 2], "trial {trial}");
    }
    assert!(worst <= 1e-9, "{worst:e}");
}

#[test]
fn massless_particle_collapses_to_one_eigenvalue() {
    let b = build_gamma_basis();
    let mut r = rng(42);
    for trial in 0..100 {
        let (metric, x) = random_geometry(&mut r, trial);
        let mut s = random_state(&mut r, x);
        s.mass = 0.0;
        let m = point_particle_matrix(&s, &metric, &b).unwrap();
        let got = eigenvalues4(&m).unwrap();
        assert_eq!(got.degeneracy_pattern(degeneracy_tolerance(&m)), vec![4]);
        assert!(spectral_distance(&got, &point_particle_spectrum(&s, &metric)) < 1e-12);
    }
}

#[test]
fn null_velocity_collapses_to_one_eigenvalue() {
    let b = build_gamma_basis();
    let flat = MetricSpec::Flat.build().unwrap();
    let mut r = rng(43);
    for _ in 0..100 {
        let dir = vec4(&mut r, 1.0);
        let n = (dir[1] * dir[1] + dir[2] * dir[2] + dir[3] * dir[3]).sqrt();
        let mut s = random_state(&mut r, [0.0; 4]);
        s.velocity = [1.0, dir[1] / n, dir[2] / n, dir[3] / n];
        let m = point_particle_matrix(&s, &flat, &b).unwrap();
        let got = eigenvalues4(&m).unwrap();
        // P − qA·ẋ is nilpotent, so the eigensolver only resolves it to √ε
        assert!(spectral_distance(&got, &point_particle_spectrum(&s, &flat)) < 1e-6);
        assert_eq!(got.degeneracy_pattern(1e-6), vec![4]);
    }
}

fn random_field(r: &mut impl Rng) -> FieldStrength {
    FieldStrength::from_upper(std::array::from_fn(|_| uniform(r, -1.0, 1.0)))
}

#[test]
fn electrodynamics_decomposition_and_spectrum() {
    let b = build_gamma_basis();
    let mut r = rng(44);
    let (mut res, mut dist): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let f = random_field(&mut r);
        res = res.max(electrodynamics_decomposition_residual(&f, &b));
        let got = eigenvalues4(&electrodynamics_matrix(&f, &b)).unwrap();
        dist = dist.max(spectral_distance(&got, &electrodynamics_spectrum(&f)));
    }
    assert!(res <= 1e-12, "{res:e}");
    assert!(dist <= 1e-10, "{dist:e}");
}

#[test]
fn field_strength_from_quadratic_potential() {
    // A_b = c_b + L_{bk}x^k + Q_{bkl}x^kx^l, so ∂_a A_b = L_{ba} + (Q_{bal} + Q_{bla})x^l
    let mut r = rng(45);
    for _ in 0..20 {
        let lin: [[f64; 4]; 4] = std::array::from_fn(|_| vec4(&mut r, 1.0));
        let quad: [[[f64; 4]; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| vec4(&mut r, 1.0)));
        let x = vec4(&mut r, 1.0);
        let pot = |p: &Point| -> [f64; 4] {
            std::array::from_fn(|bb| {
                let mut v = 0.0;
                for k in 0..4 {
                    v += lin[bb][k] * p[k];
                    for l in 0..4 {
                        v += quad[bb][k][l] * p[k] * p[l];
                    }
                }
                v
            })
        };
        let d =
            |a: usize, bb: usize| lin[bb][a] + (0..4).map(|l| (quad[bb][a][l] + quad[bb][l][a]) * x[l]).sum::<f64>();
        let f = field_strength_from_potential(pot, &x, H);
        for a in 0..4 {
            for bb in 0..4 {
                assert!((f.get(a, bb) - (d(a, bb) - d(bb, a))).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn yang_mills_decomposition() {
    let b = build_gamma_basis();
    let mut r = rng(46);
    let mut worst: f64 = 0.0;
    for trial in 0..500 {
        let n = 1 + trial % 8;
        let g = NonabelianFieldStrength::new((0..n).map(|_| random_field(&mut r)).collect()).unwrap();
        worst = worst.max(yang_mills_decomposition_residual(&g, &b));
        if n == 1 {
            assert_eq!(yang_mills_matrix(&g, &b), electrodynamics_matrix(&g.components()[0], &b));
        }
        if n == 3 {
            let m = yang_mills_matrix(&g, &b);
            let s = eigenvalues4(&m).unwrap();
            assert_eq!(s.degeneracy_pattern(degeneracy_tolerance(&m)), vec![2, 2]);
        }
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

fn gravity_scalar(metric: &MetricField, x: &Point, b: &GammaBasis) -> (f64, f64) {
    let riem = riemann_at(metric, x, H).unwrap();
    let g = gr_matrix(&riem, metric, x, b, GR_SCALAR_TOLERANCE).unwrap();
    let c = is_scalar_matrix(&g, 1e-5).expect("scalar");
    assert!(c.im.abs() < 1e-5);
    (c.re, ricci_scalar(&riem, &metric.inverse_metric(x).unwrap()))
}

#[test]
fn gravity_matrix_is_scalar_with_universal_ratio() {
    let b = build_gamma_basis();
    let flat = MetricSpec::Flat.build().unwrap();
    assert_eq!(gravity_scalar(&flat, &[0.0; 4], &b).0, 0.0);

    let schw = MetricSpec::SchwarzschildIsotropic { mass: 1.0 }.build().unwrap();
    let (s, _) = gravity_scalar(&schw, &[0.0, 4.0, 2.0, -1.0], &b);
    assert!(s.abs() < 1e-5);

    let conformal = MetricSpec::ConformalDiagonal {
        profiles: [
            Profile::Affine { offset: 1.0, slope: [0.1, 0.3, 0.0, -0.2] },
            Profile::Exponential { amplitude: 1.0, rate: [0.2, 0.0, 0.1, 0.0] },
            Profile::constant(1.0),
            Profile::Affine { offset: 1.2, slope: [0.0, 0.1, 0.25, 0.0] },
        ],
    }
    .build()
    .unwrap();
    let fixture = load_fixture().metric.build().unwrap();
    let mut kappas = Vec::new();
    for (m, x) in [(&conformal, [0.1, 0.2, -0.1, 0.3]), (&fixture, [0.05, -0.1, 0.2, 0.0])] {
        let (s, ricci) = gravity_scalar(m, &x, &b);
        assert!(ricci.abs() > 1e-2);
        kappas.push(s / ricci);
    }
    assert!((kappas[0] - kappas[1]).abs() <= 1e-4 * kappas[0].abs(), "{kappas:?}");
    assert!((kappas[0] + 0.5).abs() < 1e-4);
}

fn random_jacobian(r: &mut impl Rng, p: usize, x: Point) -> WorldvolumeJacobian {
    WorldvolumeJacobian::new((0..=p).map(|_| vec4(r, 1.0)).collect(), x).unwrap()
}

fn extended_geometries() -> Vec<(MetricField, Point)> {
    vec![
        (MetricSpec::Flat.build().unwrap(), [0.0; 4]),
        (MetricSpec::SchwarzschildIsotropic { mass: 1.0 }.build().unwrap(), [0.0, 3.0, 1.0, 2.0]),
        (load_fixture().metric.build().unwrap(), [0.1, 0.0, -0.2, 0.1]),
    ]
}

#[test]
fn string_square_is_minus_induced_determinant() {
    let b = build_gamma_basis();
    let mut r = rng(47);
    let geoms = extended_geometries();
    for trial in 0..1000 {
        let (metric, x) = &geoms[trial % geoms.len()];
        let w = random_jacobian(&mut r, 1, *x);
        let tension = uniform(&mut r, 0.1, 3.0);
        let res = string_square_residuals(tension, &w, metric, &b).unwrap();
        assert!(res.minus_det <= 1e-10 * res.scale, "{res:?}");
        assert!(string_matrix(tension, &w, metric, &b).is_ok());
    }
}

/// The membrane square carries the same sign as the string one, `−det G`.
#[test]
fn membrane_square_is_minus_induced_determinant() {
    let b = build_gamma_basis();
    let mut r = rng(48);
    let geoms = extended_geometries();
    for trial in 0..1000 {
        let (metric, x) = &geoms[trial % geoms.len()];
        let w = random_jacobian(&mut r, 2, *x);
        let tension = uniform(&mut r, 0.1, 3.0);
        let res = membrane_square_residuals(tension, &w, metric, &b).unwrap();
        assert!(res.minus_det <= 1e-10 * res.scale, "{res:?}");
        let det = induced_metric(&w, metric).determinant();
        let expected_gap = 2.0 * tension * tension * det.abs();
        assert!((res.plus_det - expected_gap).abs() <= 1e-10 * res.scale);
    }
}

#[test]
fn string_minimum_eigenvalue_is_nambu_goto() {
    let b = build_gamma_basis();
    let mut r = rng(49);
    let geoms = extended_geometries();
    let mut checked = 0;
    for trial in 0..1000 {
        let (metric, x) = &geoms[trial % geoms.len()];
        let w = random_jacobian(&mut r, 1, *x);
        let tension = uniform(&mut r, 0.1, 3.0);
        let gind = induced_metric(&w, metric);
        let lagrangian = nambu_goto_lagrangian(tension, &gind, 1);
        if -gind.determinant() <= 1e-6 {
            continue;
        }
        let p = string_matrix(tension, &w, metric, &b).unwrap();
        let s = eigenvalues4(&p).unwrap();
        let min = s.min_real(1e-9).unwrap();
        assert!((min - lagrangian.re).abs() <= 1e-10 * lagrangian.norm().max(1.0), "{min} vs {lagrangian}");
        checked += 1;
    }
    assert!(checked > 300);
}

/// For a physical membrane (`det G > 0`) the spectrum is `±iΛ√det G`: purely
/// imaginary, so no real eigenvalue can equal the Nambu–Goto density.
#[test]
fn timelike_membrane_spectrum_is_imaginary() {
    let b = build_gamma_basis();
    let flat = MetricSpec::Flat.build().unwrap();
    let mut r = rng(50);
    let mut seen = 0;
    for _ in 0..500 {
        let w = random_jacobian(&mut r, 2, [0.0; 4]);
        let det = induced_metric(&w, &flat).determinant();
        if det <= 1e-3 {
            continue;
        }
        let tension = uniform(&mut r, 0.5, 2.0);
        let s = eigenvalues4(&membrane_matrix(tension, &w, &flat, &b).unwrap()).unwrap();
        for z in s.eigenvalues() {
            assert!(z.re.abs() < 1e-9);
            assert!((z.im.abs() - tension * det.sqrt()).abs() < 1e-9);
        }
        seen += 1;
    }
    assert!(seen > 20);
}

#[test]
fn membrane_eigenvalues_pair_up() {
    let b = build_gamma_basis();
    let mut r = rng(51);
    for (metric, x) in extended_geometries() {
        for _ in 0..50 {
            let w = random_jacobian(&mut r, 2, x);
            let m = membrane_matrix(1.0, &w, &metric, &b).unwrap();
            assert!(m.trace().norm() < 1e-12);
            let s = eigenvalues4(&m).unwrap();
            let negated = gamma_lagrangians::linalg::Spectrum::new(s.eigenvalues().map(|z| -z));
            assert!(spectral_distance(&s, &negated) < 1e-9);
        }
    }
}

#[test]
fn brackets_agree_with_determinant_oracle() {
    let mut r = rng(52);
    for _ in 0..200 {
        let w = random_jacobian(&mut r, 1, [0.0; 4]);
        let pb = poisson_bracket(&w).unwrap();
        let j = w.rows();
        for mu in 0..4 {
            for nu in 0..4 {
                let minor = j[0][mu] * j[1][nu] - j[1][mu] * j[0][nu];
                assert!((pb[mu][nu] - minor).abs() < 1e-15);
                assert_eq!(pb[mu][nu], -pb[nu][mu]);
            }
        }
        let w = random_jacobian(&mut r, 2, [0.0; 4]);
        let nb = nambu_bracket(&w).unwrap();
        let j = w.rows();
        for mu in 0..4 {
            for nu in 0..4 {
                for rho in 0..4 {
                    let m = nalgebra::Matrix3::new(
                        j[0][mu], j[0][nu], j[0][rho], j[1][mu], j[1][nu], j[1][rho], j[2][mu], j[2][nu], j[2][rho],
                    );
                    assert!((nb[mu][nu][rho] - m.determinant()).abs() < 1e-14);
                    assert_eq!(nb[mu][nu][rho], -nb[nu][mu][rho]);
                    assert_eq!(nb[mu][nu][rho], -nb[mu][rho][nu]);
                    assert_eq!(nb[mu][nu][rho], nb[nu][rho][mu]);
                }
            }
        }
    }
}

#[test]
fn degenerate_maps_give_zero_matrices() {
    let b = build_gamma_basis();
    let flat = MetricSpec::Flat.build().unwrap();
    let row = [0.3, -0.2, 0.7, 0.1];
    let w = WorldvolumeJacobian::string([row, row], [0.0; 4]);
    assert_eq!(string_matrix(2.0, &w, &flat, &b).unwrap(), SpinMatrix::zero());
    let w = WorldvolumeJacobian::membrane([row, [1.0, 0.0, 0.0, 0.0], row], [0.0; 4]);
    assert_eq!(membrane_matrix(2.0, &w, &flat, &b).unwrap(), SpinMatrix::zero());
}
