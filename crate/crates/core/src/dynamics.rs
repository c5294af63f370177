//! Matrix equations of motion built from the vielbein curl
//! `f^a_{μν} = ∂_μ e^a_ν − ∂_ν e^a_μ`.
//!
//! The scalar `(f*f)` used throughout is normalized as
//! `¼·f^a_{νσ}*f^{νσ b}η_{ab}`; with that normalization
//! `{f_{μν}, *f^{νρ}} = −2δ^ρ_μ(f*f)` holds exactly. The raw contraction is
//! kept alongside as [`FFieldAtPoint::fsf_contraction`].

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{levi_civita, GammaBasis, ETA};
use crate::error::{Error, Result};
use crate::geometry::fd::{self, DiffScheme};
use crate::geometry::{
    christoffel_at, vielbein_at, vielbein_derivative, MetricField, MetricSpec, Point, Poly2, Rank3, VielbeinComponent,
};
use crate::linalg::{anticommutator, is_scalar_matrix, SpinMatrix};

/// Relative threshold below which `(f*f)` counts as zero; scaled by `max|f|⁴`.
pub const FSF_DEGENERACY_THRESHOLD: f64 = 1e-10;
/// Scalarness tolerance for the velocity reconstruction matrices.
pub const VELOCITY_SCALAR_TOLERANCE: f64 = 1e-8;
/// Tracelessness tolerance for `C_ν`.
pub const TRACE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FFieldAtPoint {
    /// `f^a_{μν}` as `components[a][μ][ν]`.
    pub components: Rank3,
    /// `f_{μν} = f^a_{μν}γ_a`.
    pub matrices: [[SpinMatrix; 4]; 4],
    /// `*f^{μν a} = ½ε^{μνρσ}f^a_{ρσ}` as `dual[a][μ][ν]`.
    pub dual: Rank3,
    /// Normalized `(f*f)`.
    pub fsf: f64,
    /// `f^a_{νσ}*f^{νσ b}η_{ab}`, equal to `4·fsf`.
    pub fsf_contraction: f64,
    /// `max|f^a_{μν}|`.
    pub scale: f64,
}

fn dual_of(f: &Rank3) -> Rank3 {
    std::array::from_fn(|a| {
        std::array::from_fn(|mu| {
            std::array::from_fn(|nu| {
                let mut s = 0.0;
                for rho in 0..4 {
                    for sigma in 0..4 {
                        let e = levi_civita(mu, nu, rho, sigma);
                        if e != 0.0 {
                            s += e * f[a][rho][sigma];
                        }
                    }
                }
                0.5 * s
            })
        })
    })
}

fn frame_matrix(basis: &GammaBasis, coeff: impl Fn(usize) -> f64) -> SpinMatrix {
    (0..4).map(|a| basis.lower(a) * coeff(a)).sum()
}

impl FFieldAtPoint {
    /// Builds the field from `f^a_{μν}`, rejecting anything not exactly
    /// antisymmetric in `μν`.
    pub fn from_components(components: Rank3, basis: &GammaBasis) -> Result<Self> {
        for comp in &components {
            for mu in 0..4 {
                for nu in mu..4 {
                    if comp[mu][nu] != -comp[nu][mu] {
                        return Err(Error::NotAntisymmetric(mu, nu));
                    }
                }
            }
        }
        let dual = dual_of(&components);
        let matrices =
            std::array::from_fn(|mu| std::array::from_fn(|nu| frame_matrix(basis, |a| components[a][mu][nu])));
        let mut contraction = 0.0;
        for a in 0..4 {
            for nu in 0..4 {
                for sigma in 0..4 {
                    contraction += ETA[a] * components[a][nu][sigma] * dual[a][nu][sigma];
                }
            }
        }
        let scale = components.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self { components, matrices, dual, fsf: 0.25 * contraction, fsf_contraction: contraction, scale })
    }

    /// `*f^{μν} = *f^{μν a}γ_a`.
    pub fn dual_matrix(&self, basis: &GammaBasis, mu: usize, nu: usize) -> SpinMatrix {
        frame_matrix(basis, |a| self.dual[a][mu][nu])
    }

    pub fn degeneracy_threshold(&self) -> f64 {
        FSF_DEGENERACY_THRESHOLD * self.scale.powi(4)
    }

    pub fn is_degenerate(&self) -> bool {
        self.fsf.abs() <= self.degeneracy_threshold()
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::DegenerateGeometry { fsf: self.fsf, threshold: self.degeneracy_threshold() });
        }
        Ok(())
    }
}

/// `f^a_{μν}(x)` from the vielbein derivative.
pub fn f_components_at(metric: &MetricField, x: &Point, h: f64) -> Result<Rank3> {
    let de = vielbein_derivative(metric, x, h)?;
    Ok(std::array::from_fn(|a| std::array::from_fn(|mu| std::array::from_fn(|nu| de[mu][a][nu] - de[nu][a][mu]))))
}

pub fn f_field_at(metric: &MetricField, x: &Point, h: f64, basis: &GammaBasis) -> Result<FFieldAtPoint> {
    FFieldAtPoint::from_components(f_components_at(metric, x, h)?, basis)
}

/// `df[σ][a][μ][ν] = ∂_σ f^a_{μν}`, Richardson-extrapolated.
pub fn f_field_gradient(metric: &MetricField, x: &Point, h: f64) -> Result<[Rank3; 4]> {
    let grad = fd::gradient(
        |p| {
            let f = f_components_at(metric, p, h)?;
            Ok::<_, Error>(std::array::from_fn::<f64, 64, _>(|k| f[k / 16][(k / 4) % 4][k % 4]))
        },
        x,
        h,
        DiffScheme::Richardson,
    )?;
    Ok(std::array::from_fn(|s| {
        std::array::from_fn(|a| std::array::from_fn(|mu| std::array::from_fn(|nu| grad[s][a * 16 + mu * 4 + nu])))
    }))
}

/// Residual of `f^a_{μν}*f^{νρ a} = −¼(f^a_{νσ}*f^{νσ a})δ^ρ_μ` for each fixed
/// `a`, on arbitrary arrays (no antisymmetry assumed).
pub fn rank2_dual_identity_residual(f: &Rank3, dual: &Rank3) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..4 {
        let mut c = 0.0;
        for nu in 0..4 {
            for sigma in 0..4 {
                c += f[a][nu][sigma] * dual[a][nu][sigma];
            }
        }
        for mu in 0..4 {
            for rho in 0..4 {
                let lhs: f64 = (0..4).map(|nu| f[a][mu][nu] * dual[a][nu][rho]).sum();
                let rhs = if mu == rho { -0.25 * c } else { 0.0 };
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

pub fn check_rank2_dual_identity(ff: &FFieldAtPoint) -> f64 {
    rank2_dual_identity_residual(&ff.components, &ff.dual)
}

/// `max_{μ,ρ} ‖Σ_ν{f_{μν}, *f^{νρ}} + 2δ^ρ_μ(f*f)·1‖_max`.
pub fn check_matrix_dual_identity(ff: &FFieldAtPoint, basis: &GammaBasis) -> f64 {
    let duals: [[SpinMatrix; 4]; 4] =
        std::array::from_fn(|nu| std::array::from_fn(|rho| ff.dual_matrix(basis, nu, rho)));
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for rho in 0..4 {
            let lhs: SpinMatrix = (0..4).map(|nu| anticommutator(&ff.matrices[mu][nu], &duals[nu][rho])).sum();
            let rhs = if mu == rho { SpinMatrix::identity() * (-2.0 * ff.fsf) } else { SpinMatrix::zero() };
            worst = worst.max((lhs - rhs).norm_max());
        }
    }
    worst
}

/// `max_ν ‖ẋ^μ f_{μν}‖_max`.
pub fn unmodified_eom_residual(ff: &FFieldAtPoint, xdot: &[f64; 4]) -> f64 {
    (0..4).map(|nu| contract_velocity(ff, xdot, nu).norm_max()).fold(0.0, f64::max)
}

fn contract_velocity(ff: &FFieldAtPoint, xdot: &[f64; 4], nu: usize) -> SpinMatrix {
    (0..4).map(|mu| ff.matrices[mu][nu] * xdot[mu]).sum()
}

/// The four constant matrices `C_ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantMatrixC {
    c: [SpinMatrix; 4],
}

impl ConstantMatrixC {
    pub fn new(c: [SpinMatrix; 4]) -> Result<Self> {
        for (index, m) in c.iter().enumerate() {
            let trace = m.trace().norm();
            if trace > TRACE_TOLERANCE * m.norm_max().max(1.0) {
                return Err(Error::NotTraceless { index, trace });
            }
        }
        Ok(Self { c })
    }

    pub fn matrices(&self) -> &[SpinMatrix; 4] {
        &self.c
    }

    /// `max_ν ‖C_ν − other_ν‖_max`
    pub fn distance(&self, other: &Self) -> f64 {
        self.c.iter().zip(&other.c).map(|(a, b)| (*a - *b).norm_max()).fold(0.0, f64::max)
    }
}

/// `C_ν = ẋ^μ f_{μν}` at the initial point.
pub fn c_from_initial(ff0: &FFieldAtPoint, xdot0: &[f64; 4]) -> Result<ConstantMatrixC> {
    ConstantMatrixC::new(std::array::from_fn(|nu| contract_velocity(ff0, xdot0, nu)))
}

/// `ẋ^ρ = −(1/2(f*f)) Σ_ν{C_ν, *f^{νρ}}`, requiring each right-hand side to be
/// a real multiple of the identity.
pub fn velocity_from_c(ff: &FFieldAtPoint, c: &ConstantMatrixC, basis: &GammaBasis) -> Result<[f64; 4]> {
    ff.require_nondegenerate()?;
    let mut v = [0.0; 4];
    for (rho, slot) in v.iter_mut().enumerate() {
        let sum: SpinMatrix = (0..4).map(|nu| anticommutator(&c.c[nu], &ff.dual_matrix(basis, nu, rho))).sum();
        let m = sum * (-1.0 / (2.0 * ff.fsf));
        let tol = VELOCITY_SCALAR_TOLERANCE * m.norm_max().max(1.0);
        let scalar = is_scalar_matrix(&m, tol)
            .ok_or_else(|| Error::InconsistentC { residual: crate::linalg::off_scalar_residual(&m) })?;
        if scalar.im.abs() > tol {
            return Err(Error::InconsistentC { residual: scalar.im.abs() });
        }
        *slot = scalar.re;
    }
    Ok(v)
}

/// `Γ̃^ρ_{μσ} = (1/2(f*f)) *f^{ρν a}(∂_σ f^b_{μν} + ∂_μ f^b_{σν})η_{ab}`,
/// stored as `[ρ][μ][σ]`.
pub fn gamma_tilde_at(metric: &MetricField, x: &Point, h: f64, basis: &GammaBasis) -> Result<Rank3> {
    let ff = f_field_at(metric, x, h, basis)?;
    ff.require_nondegenerate()?;
    let df = f_field_gradient(metric, x, h)?;
    let k = 1.0 / (2.0 * ff.fsf);
    let mut out = [[[0.0; 4]; 4]; 4];
    for rho in 0..4 {
        for mu in 0..4 {
            for sigma in mu..4 {
                let mut s = 0.0;
                for a in 0..4 {
                    for nu in 0..4 {
                        s += ETA[a] * ff.dual[a][rho][nu] * (df[sigma][a][mu][nu] + df[mu][a][sigma][nu]);
                    }
                }
                out[rho][mu][sigma] = k * s;
                out[rho][sigma][mu] = k * s;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub tau: f64,
    pub x: Point,
    pub xdot: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub integrator: String,
    pub step: f64,
    pub geometry: String,
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_reason: Option<String>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory holds the initial sample")
    }
}

type State = [f64; 8];

fn rk4(
    accel: impl Fn(&Point, &[f64; 4]) -> Result<[f64; 4]>,
    x0: &Point,
    xdot0: &[f64; 4],
    dt: f64,
    n: usize,
    integrator: &str,
    geometry: &str,
) -> Trajectory {
    let deriv = |s: &State| -> Result<State> {
        let x = [s[0], s[1], s[2], s[3]];
        let v = [s[4], s[5], s[6], s[7]];
        let a = accel(&x, &v)?;
        Ok([v[0], v[1], v[2], v[3], a[0], a[1], a[2], a[3]])
    };
    let axpy = |s: &State, k: &State, c: f64| -> State { std::array::from_fn(|i| s[i] + c * k[i]) };

    let mut traj = Trajectory {
        samples: vec![Sample { tau: 0.0, x: *x0, xdot: *xdot0 }],
        integrator: integrator.to_string(),
        step: dt,
        geometry: geometry.to_string(),
        truncated: false,
        truncation_reason: None,
    };
    let mut s: State = [x0[0], x0[1], x0[2], x0[3], xdot0[0], xdot0[1], xdot0[2], xdot0[3]];
    for i in 1..=n {
        let step = (|| -> Result<State> {
            let k1 = deriv(&s)?;
            let k2 = deriv(&axpy(&s, &k1, 0.5 * dt))?;
            let k3 = deriv(&axpy(&s, &k2, 0.5 * dt))?;
            let k4 = deriv(&axpy(&s, &k3, dt))?;
            Ok(std::array::from_fn(|j| s[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])))
        })();
        match step {
            Ok(next) if next.iter().all(|v| v.is_finite()) => {
                s = next;
                traj.samples.push(Sample {
                    tau: i as f64 * dt,
                    x: [s[0], s[1], s[2], s[3]],
                    xdot: [s[4], s[5], s[6], s[7]],
                });
            }
            Ok(_) => {
                traj.truncated = true;
                traj.truncation_reason = Some("non-finite state".into());
                break;
            }
            Err(e) => {
                traj.truncated = true;
                traj.truncation_reason = Some(e.to_string());
                break;
            }
        }
    }
    traj
}

fn contract_neg(gamma: &Rank3, v: &[f64; 4]) -> [f64; 4] {
    crate::geometry::contract_connection(gamma, v).map(|c| -c)
}

fn check_step(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {dt}")));
    }
    Ok(())
}

/// RK4 for `ẍ^ρ + Γ̃^ρ_{μσ}ẋ^μẋ^σ = 0`.
pub fn integrate_modified(
    metric: &MetricField,
    basis: &GammaBasis,
    x0: &Point,
    xdot0: &[f64; 4],
    dt: f64,
    n: usize,
    h: f64,
) -> Result<Trajectory> {
    check_step(dt)?;
    Ok(rk4(
        |x, v| Ok(contract_neg(&gamma_tilde_at(metric, x, h, basis)?, v)),
        x0,
        xdot0,
        dt,
        n,
        "rk4-modified",
        metric.label(),
    ))
}

/// RK4 for the geodesic equation with finite-difference Christoffel symbols.
pub fn integrate_geodesic(
    metric: &MetricField,
    x0: &Point,
    xdot0: &[f64; 4],
    dt: f64,
    n: usize,
    h: f64,
) -> Result<Trajectory> {
    check_step(dt)?;
    Ok(rk4(
        |x, v| Ok(contract_neg(&christoffel_at(metric, x, h)?.gamma, v)),
        x0,
        xdot0,
        dt,
        n,
        "rk4-geodesic",
        metric.label(),
    ))
}

/// `max_τ max_ν ‖C_ν(τ) − C_ν(0)‖_max` along a trajectory.
pub fn c_drift(metric: &MetricField, basis: &GammaBasis, traj: &Trajectory, h: f64) -> Result<f64> {
    let first = &traj.samples[0];
    let c0 = c_from_initial(&f_field_at(metric, &first.x, h, basis)?, &first.xdot)?;
    let mut worst: f64 = 0.0;
    for s in &traj.samples[1..] {
        let c = c_from_initial(&f_field_at(metric, &s.x, h, basis)?, &s.xdot)?;
        worst = worst.max(c.distance(&c0));
    }
    Ok(worst)
}

/// `g_{μν}ẋ^μẋ^ν` at a sample.
pub fn velocity_norm(metric: &MetricField, s: &Sample) -> f64 {
    let g = metric.metric(&s.x);
    let v = nalgebra::Vector4::from(s.xdot);
    (v.transpose() * g * v)[(0, 0)]
}

/// `max_τ |g_{μν}ẋ^μẋ^ν(τ) − g_{μν}ẋ^μẋ^ν(0)|`.
pub fn norm_drift(metric: &MetricField, traj: &Trajectory) -> f64 {
    let n0 = velocity_norm(metric, &traj.samples[0]);
    traj.samples.iter().map(|s| (velocity_norm(metric, s) - n0).abs()).fold(0.0, f64::max)
}

/// The fixed set of 16 probe velocities: `e_i`, `e_i + e_j`, `e_i − e_j`.
pub fn probe_velocities() -> Vec<[f64; 4]> {
    let unit = |i: usize| -> [f64; 4] { std::array::from_fn(|k| if k == i { 1.0 } else { 0.0 }) };
    let mut out: Vec<[f64; 4]> = (0..4).map(unit).collect();
    for sign in [1.0, -1.0] {
        for i in 0..4 {
            for j in i + 1..4 {
                out.push(std::array::from_fn(|k| unit(i)[k] + sign * unit(j)[k]));
            }
        }
    }
    out
}

/// Side-by-side measurement of `Γ̃` and `Γ` at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionComparison {
    pub point: Point,
    pub gamma_tilde: Rank3,
    pub christoffel: Rank3,
    pub difference: Rank3,
    pub max_abs_difference: f64,
    pub probes: Vec<[f64; 4]>,
    pub contracted_tilde: Vec<[f64; 4]>,
    pub contracted_christoffel: Vec<[f64; 4]>,
    pub max_contracted_difference: f64,
}

pub fn compare_connections(
    metric: &MetricField,
    x: &Point,
    h: f64,
    basis: &GammaBasis,
) -> Result<ConnectionComparison> {
    let gt = gamma_tilde_at(metric, x, h, basis)?;
    let gc = christoffel_at(metric, x, h)?.gamma;
    let difference: Rank3 =
        std::array::from_fn(|r| std::array::from_fn(|m| std::array::from_fn(|s| gt[r][m][s] - gc[r][m][s])));
    let max_abs_difference = difference.iter().flatten().flatten().fold(0.0, |m: f64, v| m.max(v.abs()));
    let probes = probe_velocities();
    let contracted_tilde: Vec<_> = probes.iter().map(|v| crate::geometry::contract_connection(&gt, v)).collect();
    let contracted_christoffel: Vec<_> = probes.iter().map(|v| crate::geometry::contract_connection(&gc, v)).collect();
    let max_contracted_difference = contracted_tilde
        .iter()
        .zip(&contracted_christoffel)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    Ok(ConnectionComparison {
        point: *x,
        gamma_tilde: gt,
        christoffel: gc,
        difference,
        max_abs_difference,
        probes,
        contracted_tilde,
        contracted_christoffel,
        max_contracted_difference,
    })
}

/// Knobs for [`search_fsf_geometry`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsfSearchSettings {
    pub probe: Point,
    pub max_attempts: usize,
    /// Accept when `|fsf| > min_fsf` at the probe.
    pub min_fsf: f64,
    pub linear_range: f64,
    pub quadratic_range: f64,
    /// Coefficients are rounded to multiples of this.
    pub rounding: f64,
    pub fd_step: f64,
}

impl Default for FsfSearchSettings {
    fn default() -> Self {
        Self {
            probe: [0.0; 4],
            max_attempts: 1000,
            min_fsf: 0.01,
            linear_range: 0.3,
            quadratic_range: 0.1,
            rounding: 1e-3,
            fd_step: fd::DEFAULT_STEP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsfSearchResult {
    pub metric: MetricSpec,
    pub probe: Point,
    pub fsf: f64,
    pub attempts: usize,
}

/// Randomized search for a polynomial vielbein with `(f*f) ≠ 0` at the probe.
/// Every component gets `δ^a_μ` plus random linear and quadratic terms; the
/// metric must also have signature `(+,−,−,−)` there.
pub fn search_fsf_geometry<R: Rng>(
    rng: &mut R,
    settings: &FsfSearchSettings,
    basis: &GammaBasis,
) -> Result<FsfSearchResult> {
    // divide by the integer reciprocal so decimal steps print exactly
    let inv = (1.0 / settings.rounding).round();
    let round = |v: f64| (v * inv).round() / inv;
    for attempt in 1..=settings.max_attempts {
        let mut components = Vec::with_capacity(16);
        for a in 0..4 {
            for mu in 0..4 {
                let mut poly = Poly2 { constant: if a == mu { 1.0 } else { 0.0 }, ..Poly2::default() };
                for l in poly.linear.iter_mut() {
                    *l = round(rng.gen_range(-settings.linear_range..=settings.linear_range));
                }
                for i in 0..4 {
                    for j in i..4 {
                        poly.quadratic[i][j] =
                            round(rng.gen_range(-settings.quadratic_range..=settings.quadratic_range));
                    }
                }
                components.push(VielbeinComponent { a, mu, poly });
            }
        }
        let spec = MetricSpec::PolynomialVielbein { components };
        let Ok(metric) = spec.build_at(&settings.probe) else {
            continue;
        };
        let ff = f_field_at(&metric, &settings.probe, settings.fd_step, basis)?;
        if ff.fsf.abs() > settings.min_fsf && vielbein_at(&metric, &settings.probe)?.determinant().abs() > 0.5 {
            return Ok(FsfSearchResult { metric: spec, probe: settings.probe, fsf: ff.fsf, attempts: attempt });
        }
    }
    Err(Error::InvalidInput(format!(
        "no geometry with |fsf| > {} found in {} attempts",
        settings.min_fsf, settings.max_attempts
    )))
}
