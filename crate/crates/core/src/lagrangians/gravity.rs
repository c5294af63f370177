use crate::clifford::{gamma2, GammaBasis};
use crate::error::{Error, Result};
use crate::geometry::{vielbein_at, MetricField, Point, RiemannAtPoint};
use crate::linalg::{off_scalar_residual, SpinMatrix};

/// Default scalarness tolerance for [`gr_matrix`], relative to `max(1, ‖G‖_max)`.
pub const GR_SCALAR_TOLERANCE: f64 = 1e-6;

/// `¼R_{μνρσ}γ^{μν}(x)γ^{ρσ}(x)` with `γ^{μν}(x) = e_a^μ e_b^ν γ^{ab}`, no checks.
pub fn gr_matrix_unchecked(
    r: &RiemannAtPoint,
    metric: &MetricField,
    x: &Point,
    basis: &GammaBasis,
) -> Result<SpinMatrix> {
    let e = vielbein_at(metric, x)?;
    let e_inv = e.try_inverse().ok_or(Error::SingularMetric { point: *x, det: e.determinant() })?;
    // e_inv[(μ, a)] = e_a^μ
    let flat: [[SpinMatrix; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|b| gamma2(basis, a, b)));
    let curved: [[SpinMatrix; 4]; 4] = std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            let mut s = SpinMatrix::zero();
            for a in 0..4 {
                for b in 0..4 {
                    if a != b {
                        s += flat[a][b] * (e_inv[(mu, a)] * e_inv[(nu, b)]);
                    }
                }
            }
            s
        })
    });

    let mut out = SpinMatrix::zero();
    for mu in 0..4 {
        for nu in 0..4 {
            if mu == nu {
                continue;
            }
            // Σ_{ρσ} R_{μνρσ} γ^{ρσ}
            let mut inner = SpinMatrix::zero();
            for rho in 0..4 {
                for sigma in 0..4 {
                    let v = r.r[mu][nu][rho][sigma];
                    if rho != sigma && v != 0.0 {
                        inner += curved[rho][sigma] * v;
                    }
                }
            }
            out += curved[mu][nu] * inner;
        }
    }
    Ok(out * 0.25)
}

/// Gravity matrix, required to be a multiple of the identity within
/// `tol·max(1, ‖G‖_max)`.
pub fn gr_matrix(
    r: &RiemannAtPoint,
    metric: &MetricField,
    x: &Point,
    basis: &GammaBasis,
    tol: f64,
) -> Result<SpinMatrix> {
    let g = gr_matrix_unchecked(r, metric, x, basis)?;
    let residual = off_scalar_residual(&g);
    let tolerance = tol * g.norm_max().max(1.0);
    if residual > tolerance {
        return Err(Error::IdentityViolation { context: "gravity matrix is not scalar", residual, tolerance });
    }
    Ok(g)
}
