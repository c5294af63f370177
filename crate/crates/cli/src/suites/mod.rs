//! Verification suites. Each suite owns one ChaCha8 generator seeded with the
//! run seed, so a suite produces the same records alone or inside `all`.

mod dynamics;
mod extended;
mod gauge;
mod gravity;
mod identities;
mod sampling;
mod spectra;

use gamma_lagrangians::clifford::{build_gamma_basis, GammaBasis};
use gamma_lagrangians::dynamics::{compare_connections, integrate_geodesic, integrate_modified, FsfSearchResult};
use gamma_lagrangians::geometry::{ricci_scalar, riemann_at, MetricField, MetricSpec, Point};
use gamma_lagrangians::lagrangians::{gr_matrix, theta_report, GR_SCALAR_TOLERANCE};
use gamma_lagrangians::linalg::is_scalar_matrix;
use gamma_lagrangians::FSF_FIXTURE_TOML;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::claims::{self, Claim};
use crate::config::{default_conformal_profiles, RunConfig, Suite};
use crate::report::{CheckRecord, Conventions, Outcome, Report};

pub(crate) struct Context<'a> {
    pub config: &'a RunConfig,
    pub basis: GammaBasis,
    pub rng: ChaCha8Rng,
    pub fixture: FsfSearchResult,
}

impl<'a> Context<'a> {
    fn new(config: &'a RunConfig) -> Self {
        Self { config, basis: build_gamma_basis(), rng: ChaCha8Rng::seed_from_u64(config.seed), fixture: fixture() }
    }

    pub fn h(&self) -> f64 {
        self.config.fd_step
    }

    pub fn claim(name: &str) -> &'static Claim {
        claims::find(name).unwrap_or_else(|| panic!("check `{name}` missing from the claim table"))
    }

    /// Configured override, else the claim default.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerance_or(name, Self::claim(name).tolerance)
    }

    pub fn tolerance_or(&self, name: &str, fallback: f64) -> f64 {
        self.config.tolerances.get(name).copied().unwrap_or(fallback)
    }

    pub fn measure(&self, name: &str, residual: f64, trials: usize) -> CheckRecord {
        CheckRecord::measured(Self::claim(name), self.tolerance(name), residual, trials)
    }

    pub fn measure_with(&self, name: &str, residual: f64, tolerance: f64, trials: usize) -> CheckRecord {
        CheckRecord::measured(Self::claim(name), tolerance, residual, trials)
    }

    pub fn unevaluated(&self, name: &str, outcome: Outcome, note: String) -> CheckRecord {
        CheckRecord::unevaluated(Self::claim(name), self.tolerance(name), outcome, note)
    }
}

/// The checked-in geometry with nonzero `(f*f)` at the origin.
pub fn fixture() -> FsfSearchResult {
    toml::from_str(FSF_FIXTURE_TOML).expect("embedded fixture parses")
}

pub fn run_suite(config: &RunConfig) -> Report {
    let mut report = Report::new(config.clone(), conventions());
    let suites: Vec<Suite> = match config.suite {
        Suite::All => Suite::COMPONENTS.to_vec(),
        s => vec![s],
    };
    for suite in suites {
        let mut ctx = Context::new(config);
        match suite {
            Suite::Identities => report.extend(identities::run(&mut ctx)),
            Suite::Spectra => report.extend(spectra::run(&mut ctx)),
            Suite::Gauge => report.extend(gauge::run(&mut ctx)),
            Suite::Gravity => report.extend(gravity::run(&mut ctx)),
            Suite::Extended => report.extend(extended::run(&mut ctx)),
            Suite::Dynamics => dynamics::run(&mut ctx, &mut report),
            Suite::All => unreachable!("expanded above"),
        }
    }
    report
}

/// Integrates both flows from the configured initial data and measures the
/// connections at `x0`. No pass/fail checks are attached.
pub fn simulate(config: &RunConfig) -> Result<Report, gamma_lagrangians::Error> {
    let mut report = Report::new(config.clone(), conventions());
    let basis = build_gamma_basis();
    let spec = config.metric.clone().unwrap_or_else(|| fixture().metric);
    let it = &config.integrator;
    let metric = spec.build_at(&it.x0)?;
    let h = config.fd_step;
    report.trajectories.push(integrate_modified(&metric, &basis, &it.x0, &it.xdot0, it.dt, it.steps, h)?);
    report.trajectories.push(integrate_geodesic(&metric, &it.x0, &it.xdot0, it.dt, it.steps, h)?);
    if let Ok(cmp) = compare_connections(&metric, &it.x0, h, &basis) {
        report.connections.push(cmp);
    }
    Ok(report)
}

/// Point at which `κ` is quoted in the conventions block.
pub const KAPPA_PROBE: Point = [0.1, 0.2, -0.1, 0.3];

pub fn kappa_metric() -> MetricField {
    MetricSpec::ConformalDiagonal { profiles: default_conformal_profiles() }
        .build_at(&KAPPA_PROBE)
        .expect("fixed conformal metric is valid")
}

/// `(G/1, R)` where `G = ¼R_{μνρσ}γ^{μν}γ^{ρσ}`.
pub fn gravity_scalar_and_ricci(
    metric: &MetricField,
    x: &Point,
    h: f64,
    basis: &GammaBasis,
) -> Result<(f64, f64), gamma_lagrangians::Error> {
    let riem = riemann_at(metric, x, h)?;
    let g = gr_matrix(&riem, metric, x, basis, GR_SCALAR_TOLERANCE)?;
    let c = is_scalar_matrix(&g, GR_SCALAR_TOLERANCE * g.norm_max().max(1.0)).expect("gr_matrix checked scalarness");
    Ok((c.re, ricci_scalar(&riem, &metric.inverse_metric(x)?)))
}

pub fn conventions() -> Conventions {
    let basis = build_gamma_basis();
    let (g, r) = gravity_scalar_and_ricci(&kappa_metric(), &KAPPA_PROBE, crate::config::DEFAULT_FD_STEP, &basis)
        .expect("κ probe metric is curved and valid");
    Conventions {
        signature: "(+,−,−,−), η = diag(1, −1, −1, −1); γ⁵ = iγ⁰γ¹γ²γ³".into(),
        epsilon: "ε^{0123} = +1, hence ε_{0123} = −1".into(),
        antisymmetrization: "weight 1: F_ab = ∂_aA_b − ∂_bA_a, f^a_{μν} = ∂_μe^a_ν − ∂_νe^a_μ; γ^{ab} = [γ^a, γ^b]/2; \
                             *F^{ab} = ½ε^{abcd}F_cd"
            .into(),
        curvature: "R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}, \
                    R = g^{μρ}g^{νσ}R_{μνρσ}; de Sitter has R = −12H²"
            .into(),
        kappa_definition: "¼R_{μνρσ}γ^{μν}γ^{ρσ} = κR·1, γ^{μν} = e_a^μe_b^νγ^{ab}".into(),
        kappa: g / r,
        theta: theta_report(),
        yang_mills_normalization: "matrix = ⅛Σ_A(γ^{ab}G^A_ab)², the prefactor that yields \
                                   −¼G^A_abG^{abA}·1 − ¼iγ⁵G^A_ab*G^{abA}; a −¼ prefactor on the matrix \
                                   would give −2G·G·1 − 2iγ⁵G·*G instead"
            .into(),
        fsf_normalization: "(f*f) = ¼f^a_{νσ}*f^{νσ b}η_ab, the normalization for which \
                            {f_{μν}, *f^{νρ}} = −2δ^ρ_μ(f*f); the bare contraction is 4(f*f)"
            .into(),
    }
}
