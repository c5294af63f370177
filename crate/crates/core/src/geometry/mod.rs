//! Spacetime geometry: metric fields, vielbeins, Christoffel symbols and the
//! Riemann tensor, all evaluated pointwise with finite differences.
//!
//! Curvature convention:
//! `R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}`,
//! lowered on the first index with `g`. The Ricci scalar is
//! `g^{μρ}g^{νσ}R_{μνρσ}` (positive on spheres).

pub mod fd;
pub mod presets;

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix4, SymmetricEigen};

use crate::clifford::levi_civita;
use crate::error::{Error, Result};
pub use fd::{DiffScheme, DEFAULT_STEP};
pub use presets::{MetricSpec, Poly2, Profile, VielbeinComponent, PRESET_NAMES};

pub type Point = [f64; 4];
pub type Rank3 = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

type MatrixFn = Arc<dyn Fn(&Point) -> Matrix4<f64> + Send + Sync>;
type Rank3Fn = Arc<dyn Fn(&Point) -> Rank3 + Send + Sync>;

/// A spacetime geometry given as callables.
///
/// `metric` maps a point to `g_μν`. When an analytic vielbein is attached,
/// `vielbein(x)[(a, μ)] = e^a_μ(x)`, and the optional derivative is laid out as
/// `de[ν][a][μ] = ∂_ν e^a_μ`.
#[derive(Clone)]
pub struct MetricField {
    label: String,
    metric: MatrixFn,
    vielbein: Option<MatrixFn>,
    vielbein_derivative: Option<Rank3Fn>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("label", &self.label)
            .field("analytic_vielbein", &self.vielbein.is_some())
            .field("analytic_vielbein_derivative", &self.vielbein_derivative.is_some())
            .finish()
    }
}

impl MetricField {
    /// Metric known only pointwise.
    pub fn new(label: impl Into<String>, g: impl Fn(&Point) -> Matrix4<f64> + Send + Sync + 'static) -> Self {
        Self { label: label.into(), metric: Arc::new(g), vielbein: None, vielbein_derivative: None }
    }

    /// Metric induced by an analytic vielbein, `g = eᵀ η e`.
    pub fn from_vielbein(label: impl Into<String>, e: impl Fn(&Point) -> Matrix4<f64> + Send + Sync + 'static) -> Self {
        let e: MatrixFn = Arc::new(e);
        let e2 = Arc::clone(&e);
        let eta = presets::minkowski();
        Self {
            label: label.into(),
            metric: Arc::new(move |x| {
                let v = e2(x);
                v.transpose() * eta * v
            }),
            vielbein: Some(e),
            vielbein_derivative: None,
        }
    }

    pub fn with_vielbein_derivative(mut self, de: impl Fn(&Point) -> Rank3 + Send + Sync + 'static) -> Self {
        self.vielbein_derivative = Some(Arc::new(de));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn metric(&self, x: &Point) -> Matrix4<f64> {
        (self.metric)(x)
    }

    pub fn has_analytic_vielbein(&self) -> bool {
        self.vielbein.is_some()
    }

    pub fn inverse_metric(&self, x: &Point) -> Result<Matrix4<f64>> {
        let g = self.metric(x);
        check_nonsingular(&g, x)?;
        g.try_inverse().ok_or(Error::SingularMetric { point: *x, det: 0.0 })
    }
}

fn check_nonsingular(g: &Matrix4<f64>, x: &Point) -> Result<()> {
    let det = g.determinant();
    let scale = g.amax().max(f64::MIN_POSITIVE);
    if !det.is_finite() || det.abs() <= 1e-14 * scale.powi(4) {
        return Err(Error::SingularMetric { point: *x, det });
    }
    Ok(())
}

/// Rejects singular metrics and any signature other than one positive and
/// three negative eigenvalues.
pub fn check_signature(g: &Matrix4<f64>, x: &Point) -> Result<()> {
    check_nonsingular(g, x)?;
    let eig = SymmetricEigen::new(symmetrize(g));
    let positive = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
    let negative = eig.eigenvalues.iter().filter(|&&l| l < 0.0).count();
    if positive != 1 || negative != 3 {
        return Err(Error::Signature { point: *x, positive, negative });
    }
    Ok(())
}

fn symmetrize(g: &Matrix4<f64>) -> Matrix4<f64> {
    (g + g.transpose()) * 0.5
}

pub fn to_array(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn flatten(m: &Matrix4<f64>) -> [f64; 16] {
    std::array::from_fn(|k| m[(k / 4, k % 4)])
}

/// `e^a_μ(x)` with rows indexed by the flat index `a`.
///
/// Uses the analytic vielbein when the metric carries one. Otherwise factorizes
/// `g = VΛVᵀ` and sets `e = diag(√|λ|) Vᵀ`, timelike eigenvector first and the
/// spacelike ones ordered by the axis of their largest component. This gauge is
/// deterministic but not guaranteed smooth from point to point.
pub fn vielbein_at(metric: &MetricField, x: &Point) -> Result<Matrix4<f64>> {
    if let Some(e) = &metric.vielbein {
        return Ok(e(x));
    }
    let g = metric.metric(x);
    check_signature(&g, x)?;
    let eig = SymmetricEigen::new(symmetrize(&g));

    let mut timelike = None;
    let mut spacelike = Vec::with_capacity(3);
    for k in 0..4 {
        let lambda = eig.eigenvalues[k];
        let mut v = eig.eigenvectors.column(k).into_owned();
        let axis = v.iamax();
        if v[axis] < 0.0 {
            v = -v;
        }
        let row = v.transpose() * lambda.abs().sqrt();
        if lambda > 0.0 {
            timelike = Some(row);
        } else {
            spacelike.push((axis, row));
        }
    }
    spacelike.sort_by_key(|(axis, _)| *axis);

    let mut e = Matrix4::zeros();
    e.set_row(0, &timelike.expect("signature checked"));
    for (i, (_, row)) in spacelike.into_iter().enumerate() {
        e.set_row(i + 1, &row);
    }
    Ok(e)
}

/// `de[ν][a][μ] = ∂_ν e^a_μ(x)`.
///
/// Exact when the metric supplies an analytic derivative; otherwise finite
/// differences of the analytic vielbein. Factorized vielbeins are refused.
pub fn vielbein_derivative(metric: &MetricField, x: &Point, h: f64) -> Result<Rank3> {
    if let Some(de) = &metric.vielbein_derivative {
        return Ok(de(x));
    }
    let e = metric.vielbein.as_ref().ok_or_else(|| Error::UnsupportedDerivative(metric.label.clone()))?;
    let grad = fd::gradient(|p| Ok::<_, Error>(flatten(&e(p))), x, h, DiffScheme::Richardson)?;
    Ok(std::array::from_fn(|nu| std::array::from_fn(|a| std::array::from_fn(|mu| grad[nu][a * 4 + mu]))))
}

/// `Γ^ρ_{μσ}` stored as `gamma[ρ][μ][σ]`, symmetric in the last two slots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChristoffelAtPoint {
    pub gamma: Rank3,
}

impl ChristoffelAtPoint {
    /// `Γ^ρ_{μσ} v^μ v^σ`
    pub fn contract(&self, v: &[f64; 4]) -> [f64; 4] {
        contract_connection(&self.gamma, v)
    }
}

pub(crate) fn contract_connection(gamma: &Rank3, v: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|rho| {
        let mut s = 0.0;
        for mu in 0..4 {
            for sigma in 0..4 {
                s += gamma[rho][mu][sigma] * v[mu] * v[sigma];
            }
        }
        s
    })
}

pub fn christoffel_at(metric: &MetricField, x: &Point, h: f64) -> Result<ChristoffelAtPoint> {
    christoffel_at_with(metric, x, h, DiffScheme::Richardson)
}

/// `Γ^ρ_{μσ} = ½ g^{ρν}(∂_μ g_νσ + ∂_σ g_νμ − ∂_ν g_μσ)`.
pub fn christoffel_at_with(metric: &MetricField, x: &Point, h: f64, scheme: DiffScheme) -> Result<ChristoffelAtPoint> {
    let g_inv = metric.inverse_metric(x)?;
    let dg = fd::gradient(
        |p| {
            let g = metric.metric(p);
            check_nonsingular(&g, p)?;
            Ok::<_, Error>(flatten(&g))
        },
        x,
        h,
        scheme,
    )?;
    let d = |lambda: usize, i: usize, j: usize| dg[lambda][i * 4 + j];

    let mut gamma = [[[0.0; 4]; 4]; 4];
    for rho in 0..4 {
        for mu in 0..4 {
            for sigma in mu..4 {
                let mut s = 0.0;
                for nu in 0..4 {
                    s += g_inv[(rho, nu)] * (d(mu, nu, sigma) + d(sigma, nu, mu) - d(nu, mu, sigma));
                }
                gamma[rho][mu][sigma] = 0.5 * s;
                gamma[rho][sigma][mu] = 0.5 * s;
            }
        }
    }
    Ok(ChristoffelAtPoint { gamma })
}

/// `R_{μνρσ}` at a point, all indices lowered, stored as `r[μ][ν][ρ][σ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiemannAtPoint {
    pub r: Rank4,
}

/// Largest violations of the algebraic Riemann symmetries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryResiduals {
    pub first_pair: f64,
    pub second_pair: f64,
    pub pair_exchange: f64,
    pub bianchi: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.first_pair.max(self.second_pair).max(self.pair_exchange).max(self.bianchi)
    }
}

impl RiemannAtPoint {
    pub fn max_abs(&self) -> f64 {
        self.r.iter().flatten().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn symmetry_residuals(&self) -> SymmetryResiduals {
        let r = &self.r;
        let mut out = SymmetryResiduals { first_pair: 0.0, second_pair: 0.0, pair_exchange: 0.0, bianchi: 0.0 };
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        out.first_pair = out.first_pair.max((r[a][b][c][d] + r[b][a][c][d]).abs());
                        out.second_pair = out.second_pair.max((r[a][b][c][d] + r[a][b][d][c]).abs());
                        out.pair_exchange = out.pair_exchange.max((r[a][b][c][d] - r[c][d][a][b]).abs());
                        out.bianchi = out.bianchi.max((r[a][b][c][d] + r[a][c][d][b] + r[a][d][b][c]).abs());
                    }
                }
            }
        }
        out
    }

    /// Tolerance `10·h²·max(1, max|R|)` for the symmetry residuals.
    pub fn symmetry_tolerance(&self, h: f64) -> f64 {
        10.0 * h * h * self.max_abs().max(1.0)
    }

    /// Projection onto tensors antisymmetric in each pair and symmetric under
    /// pair exchange (average over the 8 images with their signs).
    pub fn pair_symmetrized(&self) -> RiemannAtPoint {
        let r = &self.r;
        let mut out = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let s = r[a][b][c][d] - r[b][a][c][d] - r[a][b][d][c] + r[b][a][d][c] + r[c][d][a][b]
                            - r[d][c][a][b]
                            - r[c][d][b][a]
                            + r[d][c][b][a];
                        out[a][b][c][d] = s / 8.0;
                    }
                }
            }
        }
        RiemannAtPoint { r: out }
    }

    /// `R_{μνρσ}R^{μνρσ}`
    pub fn kretschmann(&self, g_inv: &Matrix4<f64>) -> f64 {
        let raised = raise_all(&self.r, g_inv);
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        s += self.r[a][b][c][d] * raised[a][b][c][d];
                    }
                }
            }
        }
        s
    }
}

fn raise_all(r: &Rank4, g_inv: &Matrix4<f64>) -> Rank4 {
    let mut t = *r;
    for slot in 0..4 {
        let mut next = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut s = 0.0;
                        for k in 0..4 {
                            let mut j = idx;
                            j[slot] = k;
                            s += g_inv[(idx[slot], k)] * t[j[0]][j[1]][j[2]][j[3]];
                        }
                        next[a][b][c][d] = s;
                    }
                }
            }
        }
        t = next;
    }
    t
}

pub fn riemann_at(metric: &MetricField, x: &Point, h: f64) -> Result<RiemannAtPoint> {
    riemann_at_with(metric, x, h, DiffScheme::Richardson)
}

/// Riemann tensor from finite-differenced Christoffel symbols, lowered with `g(x)`.
pub fn riemann_at_with(metric: &MetricField, x: &Point, h: f64, scheme: DiffScheme) -> Result<RiemannAtPoint> {
    let g = metric.metric(x);
    let gam = christoffel_at_with(metric, x, h, scheme)?.gamma;
    let dgam = fd::gradient(
        |p| {
            let c = christoffel_at_with(metric, p, h, scheme)?;
            Ok::<_, Error>(std::array::from_fn::<f64, 64, _>(|k| c.gamma[k / 16][(k / 4) % 4][k % 4]))
        },
        x,
        h,
        scheme,
    )?;
    let d = |lambda: usize, rho: usize, mu: usize, sigma: usize| dgam[lambda][rho * 16 + mu * 4 + sigma];

    // R^ρ_{σμν}
    let mut up = [[[[0.0; 4]; 4]; 4]; 4];
    for rho in 0..4 {
        for sigma in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut v = d(mu, rho, nu, sigma) - d(nu, rho, mu, sigma);
                    for l in 0..4 {
                        v += gam[rho][mu][l] * gam[l][nu][sigma] - gam[rho][nu][l] * gam[l][mu][sigma];
                    }
                    up[rho][sigma][mu][nu] = v;
                }
            }
        }
    }
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for alpha in 0..4 {
        for sigma in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    r[alpha][sigma][mu][nu] = (0..4).map(|rho| g[(alpha, rho)] * up[rho][sigma][mu][nu]).sum();
                }
            }
        }
    }
    Ok(RiemannAtPoint { r })
}

/// `g^{μρ}g^{νσ}R_{μνρσ}`
pub fn ricci_scalar(r: &RiemannAtPoint, g_inv: &Matrix4<f64>) -> f64 {
    let mut s = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    s += g_inv[(mu, rho)] * g_inv[(nu, sigma)] * r.r[mu][nu][rho][sigma];
                }
            }
        }
    }
    s
}

/// `ε^{μνρσ}R_{μνρσ}` by full contraction, cross-checked against
/// `8(R_{0123} + R_{0231} + R_{0312})` evaluated on the pair-symmetrized tensor
/// (the three-term form presupposes those symmetries).
pub fn riemann_dual_scalar(r: &RiemannAtPoint) -> Result<f64> {
    let mut full = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let e = levi_civita(a, b, c, d);
                    if e != 0.0 {
                        full += e * r.r[a][b][c][d];
                    }
                }
            }
        }
    }
    let s = r.pair_symmetrized().r;
    let reduced = 8.0 * (s[0][1][2][3] + s[0][2][3][1] + s[0][3][1][2]);
    let tol = 1e-12 * 24.0 * r.max_abs();
    if (full - reduced).abs() > tol {
        return Err(Error::InternalConsistency { full, reduced });
    }
    Ok(full)
}
