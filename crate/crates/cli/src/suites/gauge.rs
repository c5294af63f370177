use gamma_lagrangians::lagrangians::{
    electrodynamics_decomposition_residual, electrodynamics_matrix, electrodynamics_spectrum,
    yang_mills_decomposition_residual, yang_mills_matrix, FieldStrength, NonabelianFieldStrength,
};
use gamma_lagrangians::linalg::{degeneracy_tolerance, eigenvalues4, spectral_distance, Spectrum};

use super::{sampling, Context};
use crate::report::CheckRecord;

const MAX_GAUGE_COMPONENTS: usize = 8;

pub fn run(ctx: &mut Context) -> Vec<CheckRecord> {
    let trials = ctx.config.trials;
    let b = &ctx.basis;

    let (mut decomposition, mut spectrum) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let f = sampling::field_strength(&mut ctx.rng);
        decomposition = decomposition.max(electrodynamics_decomposition_residual(&f, b));
        spectrum = spectrum.max(match eigenvalues4(&electrodynamics_matrix(&f, b)) {
            Ok(got) => spectral_distance(&got, &electrodynamics_spectrum(&f)),
            Err(_) => f64::INFINITY,
        });
    }

    let mut electric = 0.0f64;
    let mut fourfold = true;
    for _ in 0..trials {
        let e0 = sampling::uniform(&mut ctx.rng, 0.1, 3.0);
        let m = electrodynamics_matrix(&FieldStrength::from_upper([e0, 0.0, 0.0, 0.0, 0.0, 0.0]), b);
        match eigenvalues4(&m) {
            Ok(got) => {
                electric = electric.max(spectral_distance(&got, &Spectrum::from_real([0.5 * e0 * e0; 4])));
                fourfold &= got.degeneracy_pattern(degeneracy_tolerance(&m)) == [4];
            }
            Err(_) => electric = f64::INFINITY,
        }
    }

    let mut ym = 0.0f64;
    let mut u1 = 0.0f64;
    let mut u1_cases = 0;
    for trial in 0..trials {
        let n = 1 + trial % MAX_GAUGE_COMPONENTS;
        let comps: Vec<_> = (0..n).map(|_| sampling::field_strength(&mut ctx.rng)).collect();
        let g = NonabelianFieldStrength::new(comps).expect("at least one component");
        ym = ym.max(yang_mills_decomposition_residual(&g, b));
        if n == 1 {
            u1 = u1.max((yang_mills_matrix(&g, b) - electrodynamics_matrix(&g.components()[0], b)).norm_max());
            u1_cases += 1;
        }
    }

    let mut pure = ctx.measure("gauge.pure-electric", electric, trials);
    if !fourfold {
        pure.outcome = crate::report::Outcome::Fail;
        pure = pure.with_note("eigenvalue clusters were not a single fourfold cluster");
    }
    vec![
        ctx.measure("gauge.electrodynamics-decomposition", decomposition, trials),
        ctx.measure("gauge.electrodynamics-spectrum", spectrum, trials),
        pure,
        ctx.measure("gauge.yang-mills-decomposition", ym, trials)
            .with_note(format!("1 to {MAX_GAUGE_COMPONENTS} gauge components, prefactor ⅛")),
        ctx.measure("gauge.yang-mills-u1", u1, u1_cases),
    ]
}
