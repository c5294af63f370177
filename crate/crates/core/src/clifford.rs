//! Dirac gamma matrices in the standard (Dirac) representation, their
//! antisymmetrized products, and numerical checks of the 4D gamma identities.
//!
//! Conventions: signature `(+,−,−,−)`, `ε^{0123} = +1`. Upper-index flat
//! matrices `γ^a` are the textbook Dirac ones; the stored basis holds the
//! lower-index `γ_a = η_{ab} γ^b`. `γ⁵ = i γ^0 γ^1 γ^2 γ^3`.

use num_complex::Complex64;

use crate::linalg::{anticommutator, commutator, SpinMatrix, DIM};

/// Minkowski metric diagonal.
pub const ETA: [f64; DIM] = [1.0, -1.0, -1.0, -1.0];

#[inline]
pub fn eta(a: usize, b: usize) -> f64 {
    if a == b {
        ETA[a]
    } else {
        0.0
    }
}

/// Sign of the permutation `idx`, or 0 when an index repeats.
pub fn permutation_sign(idx: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `ε^{abcd}` with `ε^{0123} = +1`.
#[inline]
pub fn levi_civita(a: usize, b: usize, c: usize, d: usize) -> f64 {
    permutation_sign(&[a, b, c, d]) as f64
}

/// Worldsheet symbol `ε^{αβ}`, `ε^{01} = +1`.
#[inline]
pub fn levi_civita2(a: usize, b: usize) -> f64 {
    permutation_sign(&[a, b]) as f64
}

/// Worldvolume symbol `ε^{αβγ}`, `ε^{012} = +1`.
#[inline]
pub fn levi_civita3(a: usize, b: usize, c: usize) -> f64 {
    permutation_sign(&[a, b, c]) as f64
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Flat gamma matrices `γ_a` (lower index) and `γ⁵`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaBasis {
    pub gamma: [SpinMatrix; DIM],
    pub gamma5: SpinMatrix,
}

impl GammaBasis {
    /// Wraps arbitrary matrices without checking the Clifford relations.
    /// Useful for similarity-transformed or deliberately broken bases.
    pub fn from_matrices(gamma: [SpinMatrix; DIM], gamma5: SpinMatrix) -> Self {
        Self { gamma, gamma5 }
    }

    /// `γ_a`
    pub fn lower(&self, a: usize) -> SpinMatrix {
        self.gamma[a]
    }

    /// `γ^a = η^{aa} γ_a`
    pub fn upper(&self, a: usize) -> SpinMatrix {
        self.gamma[a] * ETA[a]
    }

    /// `U γ U⁻¹` applied to every member.
    pub fn conjugated(&self, u: &SpinMatrix, u_inv: &SpinMatrix) -> Self {
        let conj = |m: &SpinMatrix| *u * *m * *u_inv;
        Self { gamma: self.gamma.map(|g| conj(&g)), gamma5: conj(&self.gamma5) }
    }

    /// Largest violation of `{γ_a,γ_b} = 2η_ab`, `{γ⁵,γ_a} = 0`, `(γ⁵)² = 1`
    /// and `γ⁵ = iγ^0γ^1γ^2γ^3`.
    pub fn clifford_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..DIM {
            for b in 0..DIM {
                let r = anticommutator(&self.gamma[a], &self.gamma[b]) - SpinMatrix::identity() * (2.0 * eta(a, b));
                worst = worst.max(r.norm_max());
            }
            worst = worst.max(anticommutator(&self.gamma5, &self.gamma[a]).norm_max());
        }
        worst = worst.max((self.gamma5 * self.gamma5 - SpinMatrix::identity()).norm_max());
        let product = self.upper(0) * self.upper(1) * self.upper(2) * self.upper(3);
        worst.max((product.scale(c(0.0, 1.0)) - self.gamma5).norm_max())
    }
}

/// The standard Dirac representation.
pub fn build_gamma_basis() -> GammaBasis {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    // upper-index γ^a
    let g0 = [[one, o, o, o], [o, one, o, o], [o, o, -one, o], [o, o, o, -one]];
    let g1 = [[o, o, o, one], [o, o, one, o], [o, -one, o, o], [-one, o, o, o]];
    let g2 = [[o, o, o, -i], [o, o, i, o], [o, i, o, o], [-i, o, o, o]];
    let g3 = [[o, o, one, o], [o, o, o, -one], [-one, o, o, o], [o, one, o, o]];
    let g5 = [[o, o, one, o], [o, o, o, one], [one, o, o, o], [o, one, o, o]];
    let upper = [g0, g1, g2, g3].map(|m| SpinMatrix::new(m).expect("finite literal"));
    let mut gamma = upper;
    for (a, g) in gamma.iter_mut().enumerate() {
        *g = *g * ETA[a];
    }
    GammaBasis { gamma, gamma5: SpinMatrix::new(g5).expect("finite literal") }
}

/// `γ^{ab} = [γ^a, γ^b]/2` (upper flat indices).
pub fn gamma2(basis: &GammaBasis, a: usize, b: usize) -> SpinMatrix {
    commutator(&basis.upper(a), &basis.upper(b)) * 0.5
}

/// `γ_{ab} = η_{aa}η_{bb} γ^{ab}` (lower flat indices).
pub fn gamma2_lower(basis: &GammaBasis, a: usize, b: usize) -> SpinMatrix {
    gamma2(basis, a, b) * (ETA[a] * ETA[b])
}

/// `γ^{abc} = (γ^{ab}γ^c + γ^{bc}γ^a + γ^{ca}γ^b)/3` (upper flat indices).
pub fn gamma3(basis: &GammaBasis, a: usize, b: usize, c: usize) -> SpinMatrix {
    (gamma2(basis, a, b) * basis.upper(c) + gamma2(basis, b, c) * basis.upper(a) + gamma2(basis, c, a) * basis.upper(b))
        * (1.0 / 3.0)
}

/// `γ_{abc}` with all three indices lowered by η.
pub fn gamma3_lower(basis: &GammaBasis, a: usize, b: usize, c: usize) -> SpinMatrix {
    gamma3(basis, a, b, c) * (ETA[a] * ETA[b] * ETA[c])
}

/// `i ε^{abcd} γ_d γ⁵`, the dual form of `γ^{abc}` in four dimensions.
pub fn gamma3_dual_form(basis: &GammaBasis, a: usize, b: usize, c: usize) -> SpinMatrix {
    (0..DIM).map(|d| (basis.lower(d) * basis.gamma5).scale(Complex64::new(0.0, levi_civita(a, b, c, d)))).sum()
}

/// Curved-space gamma matrices `γ_μ(x) = e^a_μ γ_a`, where `vielbein[a][μ] = e^a_μ`.
pub fn curved_gamma(basis: &GammaBasis, vielbein: &[[f64; DIM]; DIM]) -> [SpinMatrix; DIM] {
    std::array::from_fn(|mu| (0..DIM).map(|a| basis.lower(a) * vielbein[a][mu]).sum())
}

/// Max residual of `{γ^{ab},γ^{cd}} = −2(η^{ac}η^{bd} − η^{ad}η^{bc})1 − 2iγ⁵ε^{abcd}`
/// over all 256 index tuples.
pub fn check_gamma2_identity(basis: &GammaBasis) -> f64 {
    let g2: [[SpinMatrix; DIM]; DIM] = std::array::from_fn(|a| std::array::from_fn(|b| gamma2(basis, a, b)));
    let mut worst: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            for cc in 0..DIM {
                for d in 0..DIM {
                    let lhs = anticommutator(&g2[a][b], &g2[cc][d]);
                    let metric_part = -2.0 * (eta(a, cc) * eta(b, d) - eta(a, d) * eta(b, cc));
                    let rhs = SpinMatrix::identity() * metric_part
                        + basis.gamma5.scale(c(0.0, -2.0 * levi_civita(a, b, cc, d)));
                    worst = worst.max((lhs - rhs).norm_max());
                }
            }
        }
    }
    worst
}

/// `−det` of the 3×3 block of η picked out by the two index triples.
fn eta_minor_det(l: [usize; 3], r: [usize; 3]) -> f64 {
    let m = |i: usize, j: usize| eta(l[i], r[j]);
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// Max residual of `{γ^{abc},γ^{a'b'c'}} = 2ε^{abcd}ε^{a'b'c'd'}η_{dd'}1 = −2det(η-block)1`,
/// covering both equalities, the dual form `γ^{abc} = iε^{abcd}γ_dγ⁵`, and the
/// mutual consistency of the two right-hand sides.
pub fn check_gamma3_identity(basis: &GammaBasis) -> f64 {
    let mut g3 = Vec::with_capacity(64);
    let mut worst: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            for cc in 0..DIM {
                let m = gamma3(basis, a, b, cc);
                worst = worst.max((m - gamma3_dual_form(basis, a, b, cc)).norm_max());
                g3.push(([a, b, cc], m));
            }
        }
    }
    for (l, ml) in &g3 {
        for (r, mr) in &g3 {
            let lhs = anticommutator(ml, mr);
            let eps_form: f64 = 2.0
                * (0..DIM)
                    .map(|d| levi_civita(l[0], l[1], l[2], d) * levi_civita(r[0], r[1], r[2], d) * ETA[d])
                    .sum::<f64>();
            let det_form = -2.0 * eta_minor_det(*l, *r);
            worst = worst
                .max((lhs - SpinMatrix::identity() * eps_form).norm_max())
                .max((lhs - SpinMatrix::identity() * det_form).norm_max())
                .max((eps_form - det_form).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_mul;

    #[test]
    fn basis_satisfies_clifford_relations_exactly() {
        assert_eq!(build_gamma_basis().clifford_residual(), 0.0);
    }

    #[test]
    fn squares_follow_signature() {
        let g = build_gamma_basis();
        assert_eq!(mat_mul(&g.gamma[0], &g.gamma[0]), SpinMatrix::identity());
        assert_eq!(mat_mul(&g.gamma[1], &g.gamma[1]), -SpinMatrix::identity());
        assert_eq!(anticommutator(&g.gamma[2], &g.gamma[2]), SpinMatrix::identity() * -2.0);
        assert_eq!(anticommutator(&g.gamma[1], &g.gamma[2]), SpinMatrix::zero());
        assert_eq!(anticommutator(&g.gamma[0], &g.gamma[1]), SpinMatrix::zero());
    }

    #[test]
    fn gammas_are_traceless() {
        let g = build_gamma_basis();
        for a in 0..DIM {
            assert_eq!(g.gamma[a].trace(), Complex64::new(0.0, 0.0));
        }
        assert_eq!(g.gamma5.trace(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn gamma2_examples() {
        let g = build_gamma_basis();
        for a in 0..DIM {
            assert_eq!(gamma2(&g, a, a), SpinMatrix::zero());
        }
        let g01 = g.upper(0) * g.upper(1);
        assert_eq!(gamma2(&g, 0, 1), g01);
        assert_eq!(gamma2(&g, 1, 0), -g01);
        assert_eq!(commutator(&g.gamma[0], &g.gamma[1]), (g.gamma[0] * g.gamma[1]) * 2.0);
    }

    #[test]
    fn gamma2_is_traceless_off_diagonal() {
        let g = build_gamma_basis();
        for a in 0..DIM {
            for b in 0..DIM {
                assert_eq!(gamma2(&g, a, b).trace().norm(), 0.0);
            }
        }
    }

    #[test]
    fn gamma3_examples() {
        let g = build_gamma_basis();
        assert_eq!(gamma3(&g, 0, 0, 1), SpinMatrix::zero());
        let expected = (g.lower(3) * g.gamma5).scale(Complex64::new(0.0, 1.0));
        assert_eq!(gamma3(&g, 0, 1, 2), expected);
        assert_eq!(gamma3(&g, 1, 0, 2), -gamma3(&g, 0, 1, 2));
    }

    #[test]
    fn gamma3_totally_antisymmetric() {
        let g = build_gamma_basis();
        let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        for a in 0..DIM {
            for b in 0..DIM {
                for cc in 0..DIM {
                    let idx = [a, b, cc];
                    let base = gamma3(&g, a, b, cc);
                    for p in perms {
                        let sign = permutation_sign(&p) as f64;
                        let m = gamma3(&g, idx[p[0]], idx[p[1]], idx[p[2]]);
                        assert!((m - base * sign).norm_max() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma3_identity_worked_tuple() {
        let g = build_gamma_basis();
        let m = gamma3(&g, 0, 1, 2);
        assert_eq!(anticommutator(&m, &m), SpinMatrix::identity() * -2.0);
    }

    #[test]
    fn identities_exact_in_standard_basis() {
        let g = build_gamma_basis();
        assert_eq!(check_gamma2_identity(&g), 0.0);
        assert_eq!(check_gamma3_identity(&g), 0.0);
    }

    #[test]
    fn corrupted_basis_is_detected() {
        let g = build_gamma_basis();
        let mut gamma = g.gamma;
        gamma[0] = gamma[0] * 1.1;
        let bad = GammaBasis::from_matrices(gamma, g.gamma5);
        assert!(check_gamma2_identity(&bad) > 0.1);
        assert!(check_gamma3_identity(&bad) > 0.1);
    }

    #[test]
    fn levi_civita_orientation() {
        assert_eq!(levi_civita(0, 1, 2, 3), 1.0);
        assert_eq!(levi_civita(1, 0, 2, 3), -1.0);
        assert_eq!(levi_civita(1, 2, 3, 0), -1.0);
        assert_eq!(levi_civita(0, 0, 2, 3), 0.0);
        assert_eq!(levi_civita3(2, 0, 1), 1.0);
        assert_eq!(levi_civita2(1, 0), -1.0);
    }

    #[test]
    fn curved_gamma_flat_and_scaled() {
        let g = build_gamma_basis();
        let mut e = [[0.0; DIM]; DIM];
        for (a, row) in e.iter_mut().enumerate() {
            row[a] = 1.0;
        }
        assert_eq!(curved_gamma(&g, &e), g.gamma);
        e[0][0] = 2.0;
        let cg = curved_gamma(&g, &e);
        assert_eq!(cg[0], g.gamma[0] * 2.0);
        assert_eq!(cg[0] * cg[0], SpinMatrix::identity() * 4.0);
    }
}
