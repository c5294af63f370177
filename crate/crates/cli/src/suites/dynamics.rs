use gamma_lagrangians::dynamics::{
    c_drift, c_from_initial, compare_connections, f_field_at, gamma_tilde_at, integrate_geodesic, integrate_modified,
    norm_drift, unmodified_eom_residual, velocity_from_c, Trajectory,
};
use gamma_lagrangians::geometry::{MetricField, MetricSpec};
use gamma_lagrangians::Error;

use super::{sampling, Context};
use crate::report::{CheckRecord, Outcome, Report};

const ROUND_TRIP_RADIUS: f64 = 0.3;
const OBSTRUCTION_VELOCITIES: usize = 100;
/// RK4 drift ratio under step halving.
const FOURTH_ORDER_RATIO: f64 = 16.0;
/// Drifts below this are rounding noise and count as conserved.
const DRIFT_FLOOR: f64 = 1e-12;

/// Presets whose vielbein is diagonal, where `(f*f) = 0` is predicted.
fn predicted_degenerate(spec: &MetricSpec) -> bool {
    !matches!(spec, MetricSpec::PolynomialVielbein { .. })
}

pub fn run(ctx: &mut Context, report: &mut Report) {
    let h = ctx.h();
    let it = ctx.config.integrator.clone();
    let spec = ctx.config.metric.clone().unwrap_or_else(|| ctx.fixture.metric.clone());
    let metric = match spec.build_at(&it.x0) {
        Ok(m) => m,
        Err(e) => {
            for name in [
                "dynamics.fsf-nonzero",
                "dynamics.velocity-round-trip",
                "dynamics.unmodified-obstruction",
                "dynamics.c-conservation",
                "dynamics.norm-conservation",
                "dynamics.connection-comparison",
            ] {
                report.push(ctx.unevaluated(name, Outcome::Fail, format!("{}: {e}", spec.name())));
            }
            report.push(conformal_fsf(ctx));
            report.push(flat_degenerate(ctx));
            report.push(flat_geodesic(ctx));
            return;
        }
    };

    let ff0 = f_field_at(&metric, &it.x0, h, &ctx.basis);
    let degenerate = match &ff0 {
        Ok(ff) => {
            ff.is_degenerate().then(|| format!("|(f*f)| = {:e} below {:e}", ff.fsf.abs(), ff.degeneracy_threshold()))
        }
        Err(e) => Some(e.to_string()),
    };
    // what a degenerate geometry turns into: expected for diagonal vielbeins
    let degenerate_outcome = if predicted_degenerate(&spec) { Outcome::ExpectedDegenerate } else { Outcome::Fail };

    match &ff0 {
        Ok(ff) => {
            let tol = ctx.tolerance_or("dynamics.fsf-nonzero", ff.degeneracy_threshold());
            let mut rec = ctx.measure_with("dynamics.fsf-nonzero", ff.fsf.abs(), tol, 1).with_note(format!(
                "{} at x0 = {:?}",
                spec.name(),
                it.x0
            ));
            if rec.outcome == Outcome::Fail {
                rec.outcome = degenerate_outcome;
            }
            report.push(rec);
        }
        Err(e) => report.push(ctx.unevaluated("dynamics.fsf-nonzero", Outcome::Fail, e.to_string())),
    }

    match &degenerate {
        None => {
            report.push(round_trip(ctx, &metric));
            report.push(obstruction(ctx, &metric));
        }
        Some(why) => {
            for name in ["dynamics.velocity-round-trip", "dynamics.unmodified-obstruction"] {
                report.push(ctx.unevaluated(name, degenerate_outcome, why.clone()));
            }
        }
    }
    report.push(conformal_fsf(ctx));
    report.push(flat_degenerate(ctx));

    match &degenerate {
        None => {
            let (rec, traj) = conservation(ctx, &metric, Flow::Modified);
            report.push(rec);
            report.trajectories.extend(traj);
        }
        Some(why) => report.push(ctx.unevaluated("dynamics.c-conservation", degenerate_outcome, why.clone())),
    }
    let (rec, traj) = conservation(ctx, &metric, Flow::Geodesic);
    report.push(rec);
    report.trajectories.extend(traj);
    report.push(flat_geodesic(ctx));

    match &degenerate {
        None => {
            let first = compare_connections(&metric, &it.x0, h, &ctx.basis);
            let second = compare_connections(&metric, &it.x0, h, &ctx.basis);
            match (first, second) {
                (Ok(a), Ok(b)) => {
                    let differing = bits(&a.gamma_tilde, &b.gamma_tilde) + bits(&a.christoffel, &b.christoffel);
                    report.push(ctx.measure("dynamics.connection-comparison", differing as f64, 2).with_note(format!(
                        "residual counts entries differing bitwise between two evaluations; \
                             max|Γ̃ − Γ| = {}, max over probe velocities of |Γ̃(v,v) − Γ(v,v)| = {}",
                        a.max_abs_difference, a.max_contracted_difference
                    )));
                    report.connections.push(a);
                }
                (Err(e), _) | (_, Err(e)) => {
                    report.push(ctx.unevaluated("dynamics.connection-comparison", Outcome::Fail, e.to_string()))
                }
            }
        }
        Some(why) => report.push(ctx.unevaluated("dynamics.connection-comparison", degenerate_outcome, why.clone())),
    }
}

fn bits(a: &[[[f64; 4]; 4]; 4], b: &[[[f64; 4]; 4]; 4]) -> usize {
    a.iter().flatten().flatten().zip(b.iter().flatten().flatten()).filter(|(x, y)| x.to_bits() != y.to_bits()).count()
}

fn round_trip(ctx: &mut Context, metric: &MetricField) -> CheckRecord {
    let h = ctx.h();
    let x0 = ctx.config.integrator.x0;
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut skipped = 0;
    let mut failures = Vec::new();
    for _ in 0..ctx.config.trials {
        let d = sampling::vec4(&mut ctx.rng, ROUND_TRIP_RADIUS);
        let x = std::array::from_fn(|k| x0[k] + d[k]);
        let v = sampling::vec4(&mut ctx.rng, 2.0);
        let ff = match f_field_at(metric, &x, h, &ctx.basis) {
            Ok(ff) if !ff.is_degenerate() => ff,
            _ => {
                skipped += 1;
                continue;
            }
        };
        checked += 1;
        match c_from_initial(&ff, &v).and_then(|c| velocity_from_c(&ff, &c, &ctx.basis)) {
            Ok(back) => {
                for k in 0..4 {
                    worst = worst.max((back[k] - v[k]).abs());
                }
            }
            Err(e) => {
                worst = f64::INFINITY;
                if failures.len() < 3 {
                    failures.push(e.to_string());
                }
            }
        }
    }
    let mut note = format!("points within {ROUND_TRIP_RADIUS} of x0; {skipped} degenerate or invalid points skipped");
    if !failures.is_empty() {
        note = format!("{note}; {}", failures.join("; "));
    }
    ctx.measure("dynamics.velocity-round-trip", worst, checked).with_note(note)
}

fn obstruction(ctx: &mut Context, metric: &MetricField) -> CheckRecord {
    let it = &ctx.config.integrator;
    let ff = f_field_at(metric, &it.x0, ctx.h(), &ctx.basis).expect("evaluated by the caller");
    let mut least = f64::INFINITY;
    for _ in 0..OBSTRUCTION_VELOCITIES {
        let v = sampling::vec4(&mut ctx.rng, 1.0);
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        least = least.min(unmodified_eom_residual(&ff, &v.map(|c| c / n)));
    }
    ctx.measure("dynamics.unmodified-obstruction", least, OBSTRUCTION_VELOCITIES)
        .with_note("smallest max_ν‖ẋ^μ f_{μν}‖ over unit velocities; positive means no moving solution")
}

fn conformal_fsf(ctx: &mut Context) -> CheckRecord {
    let h = ctx.h();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for _ in 0..ctx.config.trials {
        let profiles = std::array::from_fn(|_| sampling::profile(&mut ctx.rng, 0.5));
        let x = sampling::vec4(&mut ctx.rng, 0.5);
        let Ok(m) = (MetricSpec::ConformalDiagonal { profiles }).build_at(&x) else {
            continue;
        };
        match f_field_at(&m, &x, h, &ctx.basis) {
            Ok(ff) => worst = worst.max(ff.fsf.abs()),
            Err(_) => worst = f64::INFINITY,
        }
        checked += 1;
    }
    ctx.measure("dynamics.conformal-fsf", worst, checked)
        .with_note("random affine and exponential profiles at random points")
}

fn flat_degenerate(ctx: &Context) -> CheckRecord {
    let x0 = ctx.config.integrator.x0;
    let flat = MetricSpec::Flat.build().expect("flat");
    let h = ctx.h();
    let f_max = match f_field_at(&flat, &x0, h, &ctx.basis) {
        Ok(ff) => ff.components.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs())),
        Err(e) => return ctx.unevaluated("dynamics.flat-degenerate", Outcome::Fail, e.to_string()),
    };
    let mut rec = ctx.measure("dynamics.flat-degenerate", f_max, 1);
    match gamma_tilde_at(&flat, &x0, h, &ctx.basis) {
        Err(Error::DegenerateGeometry { .. }) if rec.outcome == Outcome::Pass => {
            rec.outcome = Outcome::ExpectedDegenerate;
            rec.with_note("max|f| on flat space; Γ̃ is undefined there, as predicted")
        }
        other => {
            rec.outcome = Outcome::Fail;
            rec.with_note(format!("flat space was not reported degenerate: {:?}", other.map(|_| ())))
        }
    }
}

fn flat_geodesic(ctx: &Context) -> CheckRecord {
    let it = &ctx.config.integrator;
    let flat = MetricSpec::Flat.build().expect("flat");
    match integrate_geodesic(&flat, &it.x0, &it.xdot0, it.dt, it.steps, ctx.h()) {
        Ok(t) => {
            let worst = t
                .samples
                .iter()
                .flat_map(|s| (0..4).map(move |k| (s.x[k] - (it.x0[k] + s.tau * it.xdot0[k])).abs()))
                .fold(0.0, f64::max);
            ctx.measure("dynamics.flat-geodesic", if t.truncated { f64::INFINITY } else { worst }, t.samples.len())
        }
        Err(e) => ctx.unevaluated("dynamics.flat-geodesic", Outcome::Fail, e.to_string()),
    }
}

#[derive(Clone, Copy)]
enum Flow {
    Modified,
    Geodesic,
}

/// Drift at `dt` and `dt/2` over the same interval; for a conserved quantity
/// RK4 drift falls by 16.
fn conservation(ctx: &Context, metric: &MetricField, flow: Flow) -> (CheckRecord, Option<Trajectory>) {
    let it = &ctx.config.integrator;
    let h = ctx.h();
    let name = match flow {
        Flow::Modified => "dynamics.c-conservation",
        Flow::Geodesic => "dynamics.norm-conservation",
    };
    let run = |dt: f64, n: usize| -> Result<(f64, Trajectory), Error> {
        let t = match flow {
            Flow::Modified => integrate_modified(metric, &ctx.basis, &it.x0, &it.xdot0, dt, n, h)?,
            Flow::Geodesic => integrate_geodesic(metric, &it.x0, &it.xdot0, dt, n, h)?,
        };
        if t.truncated {
            return Err(Error::InvalidInput(format!(
                "trajectory truncated: {}",
                t.truncation_reason.clone().unwrap_or_default()
            )));
        }
        let d = match flow {
            Flow::Modified => c_drift(metric, &ctx.basis, &t, h)?,
            Flow::Geodesic => norm_drift(metric, &t),
        };
        Ok((d, t))
    };
    match (run(it.dt, it.steps), run(it.dt / 2.0, 2 * it.steps)) {
        (Ok((d1, t1)), Ok((d2, _))) => {
            let ratio = d1 / d2;
            let residual =
                if d1 <= DRIFT_FLOOR && d2 <= DRIFT_FLOOR { 0.0 } else { (ratio / FOURTH_ORDER_RATIO - 1.0).abs() };
            let rec = ctx.measure(name, residual, 2).with_note(format!(
                "drift {d1:e} at dt = {}, {d2:e} at dt = {}, ratio {ratio} (fourth order gives 16)",
                it.dt,
                it.dt / 2.0
            ));
            (rec, Some(t1))
        }
        (Err(e), _) | (_, Err(e)) => (ctx.unevaluated(name, Outcome::Fail, e.to_string()), None),
    }
}
