use gamma_lagrangians::geometry::{MetricField, MetricSpec, Point};
use gamma_lagrangians::lagrangians::{
    induced_metric, membrane_matrix, membrane_square_residuals, nambu_bracket, nambu_goto_lagrangian, poisson_bracket,
    string_matrix, string_square_residuals,
};
use gamma_lagrangians::linalg::eigenvalues4;

use super::{sampling, Context};
use crate::report::CheckRecord;

/// Radicands below this are treated as null worldvolumes and skipped.
const RADICAND_FLOOR: f64 = 1e-6;
/// Eigenvalues with `|Im λ|` below this count as real.
const REAL_TOLERANCE: f64 = 1e-9;

fn geometries(ctx: &Context) -> Vec<(&'static str, MetricField, Point)> {
    let x_s = [0.0, 3.0, 1.0, 2.0];
    let x_f = [0.1, 0.0, -0.2, 0.1];
    vec![
        ("flat", MetricSpec::Flat.build().expect("flat"), [0.0; 4]),
        (
            "schwarzschild-isotropic",
            MetricSpec::SchwarzschildIsotropic { mass: 1.0 }.build_at(&x_s).expect("outside the horizon"),
            x_s,
        ),
        ("fsf fixture", ctx.fixture.metric.build_at(&x_f).expect("fixture valid near origin"), x_f),
    ]
}

pub fn run(ctx: &mut Context) -> Vec<CheckRecord> {
    let trials = ctx.config.trials;
    let geoms = geometries(ctx);
    let b = ctx.basis;
    let names: Vec<_> = geoms.iter().map(|g| g.0).collect();
    let on = format!("geometries cycle {}", names.join(", "));

    let mut square = [0.0f64; 2];
    let mut opposite = [0.0f64; 2];
    let mut ng = [0.0f64; 2];
    let mut ng_trials = [0usize; 2];
    let mut no_real = [0usize; 2];
    let mut antisym = 0.0f64;
    for trial in 0..trials {
        let (_, metric, x) = &geoms[trial % geoms.len()];
        for (k, p) in [1usize, 2].into_iter().enumerate() {
            let w = sampling::jacobian(&mut ctx.rng, p, *x);
            let tension = sampling::uniform(&mut ctx.rng, 0.1, 3.0);
            let (res, matrix) = if p == 1 {
                (string_square_residuals(tension, &w, metric, &b), string_matrix(tension, &w, metric, &b))
            } else {
                (membrane_square_residuals(tension, &w, metric, &b), membrane_matrix(tension, &w, metric, &b))
            };
            let Ok(res) = res else {
                square[k] = f64::INFINITY;
                continue;
            };
            // the stated sign is −det G for strings and +det G for membranes
            let (stated, other) = if p == 1 { (res.minus_det, res.plus_det) } else { (res.plus_det, res.minus_det) };
            square[k] = square[k].max(stated / res.scale);
            opposite[k] = opposite[k].max(other / res.scale);

            let gind = induced_metric(&w, metric);
            let radicand = if p == 1 { -gind.determinant() } else { gind.determinant() };
            if radicand <= RADICAND_FLOOR {
                continue;
            }
            let lagrangian = nambu_goto_lagrangian(tension, &gind, p).re;
            let scale = lagrangian.abs().max(1.0);
            ng_trials[k] += 1;
            let spectrum = matrix.and_then(|m| eigenvalues4(&m));
            let Ok(spectrum) = spectrum else {
                ng[k] = f64::INFINITY;
                continue;
            };
            let dev = match spectrum.min_real(REAL_TOLERANCE) {
                Some(min) => (min - lagrangian).abs(),
                None => {
                    no_real[k] += 1;
                    spectrum.eigenvalues().iter().map(|z| (z - lagrangian).norm()).fold(f64::INFINITY, f64::min)
                }
            };
            ng[k] = ng[k].max(dev / scale);
        }

        let w = sampling::jacobian(&mut ctx.rng, 1, *x);
        if let Ok(pb) = poisson_bracket(&w) {
            for mu in 0..4 {
                for nu in 0..4 {
                    antisym = antisym.max((pb[mu][nu] + pb[nu][mu]).abs());
                }
            }
        }
        let w = sampling::jacobian(&mut ctx.rng, 2, *x);
        if let Ok(nb) = nambu_bracket(&w) {
            for mu in 0..4 {
                for nu in 0..4 {
                    for rho in 0..4 {
                        let v = nb[mu][nu][rho];
                        antisym = antisym
                            .max((v + nb[nu][mu][rho]).abs())
                            .max((v + nb[mu][rho][nu]).abs())
                            .max((v - nb[nu][rho][mu]).abs());
                    }
                }
            }
        }
    }

    vec![
        ctx.measure("extended.string-square", square[0], trials)
            .with_note(format!("{on}; residual relative to max(1, ‖P²‖, Λ²|det G|)")),
        ctx.measure("extended.membrane-square", square[1], trials).with_note(format!(
            "{on}; the opposite sign P_membrane² = −det G·Λ²·1 holds to {:e}, so the stated sign misses by 2Λ²|det G|",
            opposite[1]
        )),
        ctx.measure("extended.string-nambu-goto", ng[0], ng_trials[0])
            .with_note(format!("{on}; worldsheets with −det G > {RADICAND_FLOOR:e}")),
        ctx.measure("extended.membrane-nambu-goto", ng[1], ng_trials[1]).with_note(format!(
            "{on}; {} of {} membranes with det G > {RADICAND_FLOOR:e} have no real eigenvalue (spectrum ±iΛ√det G), \
             residual there is the distance from the Nambu–Goto value to the nearest eigenvalue",
            no_real[1], ng_trials[1]
        )),
        ctx.measure("extended.bracket-antisymmetry", antisym, 2 * trials),
    ]
}
