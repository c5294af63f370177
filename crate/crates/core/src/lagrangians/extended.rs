use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{gamma2_lower, gamma3_lower, levi_civita2, levi_civita3, GammaBasis};
use crate::error::{Error, Result};
use crate::geometry::{to_array, vielbein_at, MetricField, Point};
use crate::linalg::{off_scalar_residual, SpinMatrix};

/// Tangent map of a string (`p = 1`) or membrane (`p = 2`) at one worldvolume
/// point: `j[α][μ] = ∂_α X^μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldvolumeJacobian {
    p: usize,
    j: Vec<[f64; 4]>,
    x: Point,
}

impl WorldvolumeJacobian {
    pub fn new(j: Vec<[f64; 4]>, x: Point) -> Result<Self> {
        let p = j.len().wrapping_sub(1);
        if !(1..=2).contains(&p) {
            return Err(Error::InvalidInput(format!("worldvolume jacobian needs 2 or 3 rows, got {}", j.len())));
        }
        Ok(Self { p, j, x })
    }

    pub fn string(j: [[f64; 4]; 2], x: Point) -> Self {
        Self { p: 1, j: j.to_vec(), x }
    }

    pub fn membrane(j: [[f64; 4]; 3], x: Point) -> Self {
        Self { p: 2, j: j.to_vec(), x }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> &[[f64; 4]] {
        &self.j
    }

    pub fn point(&self) -> &Point {
        &self.x
    }
}

/// `G_{αβ} = ∂_αX^μ ∂_βX^ν g_{μν}(X)`.
pub fn induced_metric(w: &WorldvolumeJacobian, metric: &MetricField) -> DMatrix<f64> {
    let g = metric.metric(&w.x);
    let n = w.p + 1;
    DMatrix::from_fn(n, n, |al, be| {
        let mut s = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                s += w.j[al][mu] * w.j[be][nu] * g[(mu, nu)];
            }
        }
        s
    })
}

/// `L = −Λ√((−1)^p det G)`, principal root.
pub fn nambu_goto_lagrangian(tension: f64, gind: &DMatrix<f64>, p: usize) -> Complex64 {
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    let radicand = sign * gind.determinant();
    -tension * Complex64::new(radicand, 0.0).sqrt()
}

fn expect_p(w: &WorldvolumeJacobian, p: usize) -> Result<()> {
    if w.p != p {
        return Err(Error::WrongDimension { expected: p, got: w.p });
    }
    Ok(())
}

/// `{X^μ, X^ν} = ε^{αβ}∂_αX^μ∂_βX^ν`, `ε^{01} = 1`. Only `μ < ν` is summed;
/// the other entries are filled by antisymmetry so it holds exactly.
pub fn poisson_bracket(w: &WorldvolumeJacobian) -> Result<[[f64; 4]; 4]> {
    expect_p(w, 1)?;
    let j = &w.j;
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in mu + 1..4 {
            let mut s = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    s += levi_civita2(a, b) * j[a][mu] * j[b][nu];
                }
            }
            out[mu][nu] = s;
            out[nu][mu] = -s;
        }
    }
    Ok(out)
}

/// `{X^μ, X^ν, X^ρ} = ε^{αβγ}∂_αX^μ∂_βX^ν∂_γX^ρ`, `ε^{012} = 1`, summed for
/// `μ < ν < ρ` and copied to the five other orderings with their signs.
pub fn nambu_bracket(w: &WorldvolumeJacobian) -> Result<[[[f64; 4]; 4]; 4]> {
    expect_p(w, 2)?;
    let j = &w.j;
    let mut out = [[[0.0; 4]; 4]; 4];
    for mu in 0..4 {
        for nu in mu + 1..4 {
            for rho in nu + 1..4 {
                let mut s = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            let e = levi_civita3(a, b, c);
                            if e != 0.0 {
                                s += e * j[a][mu] * j[b][nu] * j[c][rho];
                            }
                        }
                    }
                }
                for (p, sign) in [
                    ([mu, nu, rho], 1.0),
                    ([nu, rho, mu], 1.0),
                    ([rho, mu, nu], 1.0),
                    ([nu, mu, rho], -1.0),
                    ([mu, rho, nu], -1.0),
                    ([rho, nu, mu], -1.0),
                ] {
                    out[p[0]][p[1]][p[2]] = sign * s;
                }
            }
        }
    }
    Ok(out)
}

/// How far `P²` is from `±det(G)Λ²·1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareResiduals {
    /// `‖P² − det(G)Λ²·1‖_max`
    pub plus_det: f64,
    /// `‖P² + det(G)Λ²·1‖_max`
    pub minus_det: f64,
    /// `‖P² − (tr P²/4)·1‖_max`
    pub off_scalar: f64,
    /// `max(1, Λ²|det G|)`, the scale the residuals are judged against.
    pub scale: f64,
}

impl SquareResiduals {
    fn measure(p: &SpinMatrix, det_g: f64, tension: f64) -> Self {
        let sq = *p * *p;
        let target = det_g * tension * tension;
        Self {
            plus_det: (sq - SpinMatrix::identity() * target).norm_max(),
            minus_det: (sq + SpinMatrix::identity() * target).norm_max(),
            off_scalar: off_scalar_residual(&sq),
            scale: target.abs().max(1.0),
        }
    }
}

const SQUARE_TOLERANCE: f64 = 1e-10;

fn require_scalar_square(p: &SpinMatrix, context: &'static str) -> Result<()> {
    let sq = *p * *p;
    let residual = off_scalar_residual(&sq);
    let tolerance = SQUARE_TOLERANCE * sq.norm_max().max(1.0);
    if residual > tolerance {
        return Err(Error::IdentityViolation { context, residual, tolerance });
    }
    Ok(())
}

fn curved_frame(w: &WorldvolumeJacobian, metric: &MetricField) -> Result<[[f64; 4]; 4]> {
    Ok(to_array(&vielbein_at(metric, &w.x)?))
}

fn string_matrix_raw(
    tension: f64,
    w: &WorldvolumeJacobian,
    metric: &MetricField,
    basis: &GammaBasis,
) -> Result<SpinMatrix> {
    let br = poisson_bracket(w)?;
    let e = curved_frame(w, metric)?;
    // pull the bracket to the flat frame: B^{ab} = e^a_μ e^b_ν {X^μ,X^ν}
    let mut out = SpinMatrix::zero();
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            let mut coeff = 0.0;
            for mu in 0..4 {
                for nu in 0..4 {
                    coeff += e[a][mu] * e[b][nu] * br[mu][nu];
                }
            }
            if coeff != 0.0 {
                out += gamma2_lower(basis, a, b) * coeff;
            }
        }
    }
    Ok(out * (0.5 * tension))
}

fn membrane_matrix_raw(
    tension: f64,
    w: &WorldvolumeJacobian,
    metric: &MetricField,
    basis: &GammaBasis,
) -> Result<SpinMatrix> {
    let br = nambu_bracket(w)?;
    let e = curved_frame(w, metric)?;
    let mut out = SpinMatrix::zero();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a == b || b == c || a == c {
                    continue;
                }
                let mut coeff = 0.0;
                for mu in 0..4 {
                    for nu in 0..4 {
                        for rho in 0..4 {
                            coeff += e[a][mu] * e[b][nu] * e[c][rho] * br[mu][nu][rho];
                        }
                    }
                }
                if coeff != 0.0 {
                    out += gamma3_lower(basis, a, b, c) * coeff;
                }
            }
        }
    }
    Ok(out * (tension / 6.0))
}

/// `P_string = (Λ/2!)γ_{μν}(X){X^μ,X^ν}` with `γ_{μν}(X) = e^a_μ e^b_ν γ_{ab}`.
/// Fails if `P²` is not a multiple of the identity.
pub fn string_matrix(
    tension: f64,
    w: &WorldvolumeJacobian,
    metric: &MetricField,
    basis: &GammaBasis,
) -> Result<SpinMatrix> {
    let p = string_matrix_raw(tension, w, metric, basis)?;
    require_scalar_square(&p, "string matrix square is not scalar")?;
    Ok(p)
}

/// `P_membrane = (Λ/3!)γ_{μνρ}(X){X^μ,X^ν,X^ρ}`.
/// Fails if `P²` is not a multiple of the identity.
pub fn membrane_matrix(
    tension: f64,
    w: &WorldvolumeJacobian,
    metric: &MetricField,
    basis: &GammaBasis,
) -> Result<SpinMatrix> {
    let p = membrane_matrix_raw(tension, w, metric, basis)?;
    require_scalar_square(&p, "membrane matrix square is not scalar")?;
    Ok(p)
}

pub fn string_square_residuals(
    tension: f64,
    w: &WorldvolumeJacobian,
    metric: &MetricField,
    basis: &GammaBasis,
) -> Result<SquareResiduals> {
    let p = string_matrix_raw(tension, w, metric, basis)?;
    Ok(SquareResiduals::measure(&p, induced_metric(w, metric).determinant(), tension))
}

pub fn membrane_square_residuals(
    tension: f64,
    w: &WorldvolumeJacobian,
    metric: &MetricField,
    basis: &GammaBasis,
) -> Result<SquareResiduals> {
    let p = membrane_matrix_raw(tension, w, metric, basis)?;
    Ok(SquareResiduals::measure(&p, induced_metric(w, metric).determinant(), tension))
}
