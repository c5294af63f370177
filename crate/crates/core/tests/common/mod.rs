//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use gamma_lagrangians::dynamics::FsfSearchResult;
use gamma_lagrangians::linalg::SpinMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

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
    .unwrap()
}

/// Unitary matrix from Gram–Schmidt on a random complex matrix.
pub fn unitary(rng: &mut impl Rng) -> SpinMatrix {
    let m = complex_matrix(rng, 1.0);
    let mut cols: Vec<[Complex64; 4]> = Vec::new();
    for j in 0..4 {
        let mut v: [Complex64; 4] = std::array::from_fn(|i| m[(i, j)]);
        for q in &cols {
            let dot: Complex64 = (0..4).map(|i| q[i].conj() * v[i]).sum();
            for i in 0..4 {
                v[i] -= dot * q[i];
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.map(|z| z / n));
    }
    SpinMatrix::new(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))).unwrap()
}

/// Polynomial multiplication, coefficients lowest degree first.
fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn permutations4() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&k| !std::mem::replace(&mut seen[k], true)) {
                        let mut inversions = 0;
                        for i in 0..4 {
                            for j in i + 1..4 {
                                if p[i] > p[j] {
                                    inversions += 1;
                                }
                            }
                        }
                        out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
    }
    out
}

/// `det(λ·1 − m)` by the Leibniz expansion, coefficients lowest degree first.
pub fn leibniz_charpoly(m: &SpinMatrix) -> [Complex64; 5] {
    let zero = Complex64::new(0.0, 0.0);
    let mut total = [zero; 5];
    for (p, sign) in permutations4() {
        let mut prod = vec![Complex64::new(sign, 0.0)];
        for (i, &j) in p.iter().enumerate() {
            let factor = if i == j { vec![-m[(i, j)], Complex64::new(1.0, 0.0)] } else { vec![-m[(i, j)]] };
            prod = poly_mul(&prod, &factor);
        }
        for (k, c) in prod.into_iter().enumerate() {
            total[k] += c;
        }
    }
    std::array::from_fn(|k| total[k])
}

/// Durand–Kerner iteration on a monic quartic.
pub fn durand_kerner(poly: &[Complex64; 5]) -> [Complex64; 4] {
    let eval = |z: Complex64| poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let radius = 1.0 + poly[..4].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: [Complex64; 4] = std::array::from_fn(|k| seed.powu(k as u32) * radius);
    for _ in 0..2000 {
        let mut change: f64 = 0.0;
        for i in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-16 * radius {
            break;
        }
    }
    roots
}

pub fn load_fixture() -> FsfSearchResult {
    toml::from_str(gamma_lagrangians::FSF_FIXTURE_TOML).expect("fixture parses")
}
