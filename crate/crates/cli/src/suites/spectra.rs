use gamma_lagrangians::lagrangians::{point_particle_matrix, point_particle_spectrum};
use gamma_lagrangians::linalg::{degeneracy_tolerance, eigenvalues4, spectral_distance};

use super::{sampling, Context};
use crate::report::CheckRecord;

/// Below this gap between `P_+` and `P_−` the 2+2 pattern is not asserted.
const SPLIT_THRESHOLD: f64 = 1e-6;

pub fn run(ctx: &mut Context) -> Vec<CheckRecord> {
    let trials = ctx.config.trials;
    let mut worst = 0.0f64;
    let mut pattern_misses = 0usize;
    let mut split = 0usize;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let (metric, x) = sampling::particle_geometry(&mut ctx.rng, trial);
        let state = sampling::particle_state(&mut ctx.rng, x);
        let want = point_particle_spectrum(&state, &metric);
        let got = point_particle_matrix(&state, &metric, &ctx.basis).and_then(|m| Ok((eigenvalues4(&m)?, m)));
        let (got, m) = match got {
            Ok(v) => v,
            Err(e) => {
                worst = f64::INFINITY;
                failures.push(format!("trial {trial}: {e}"));
                continue;
            }
        };
        worst = worst.max(spectral_distance(&got, &want));
        let [plus, _, minus, _] = *want.eigenvalues();
        if (plus - minus).norm() > SPLIT_THRESHOLD {
            split += 1;
            if got.degeneracy_pattern(degeneracy_tolerance(&m)) != [2, 2] {
                pattern_misses += 1;
            }
        }
    }
    let mut spectrum = ctx
        .measure("spectra.point-particle", worst, trials)
        .with_note("presets cycle flat, conformal-diagonal, schwarzschild-isotropic; distance is the optimal matching");
    if !failures.is_empty() {
        spectrum = spectrum.with_note(failures.join("; "));
    }
    let pattern = ctx
        .measure("spectra.point-particle-degeneracy", pattern_misses as f64, split)
        .with_note("residual counts nondegenerate states whose eigenvalue clusters are not 2+2");
    vec![spectrum, pattern]
}
