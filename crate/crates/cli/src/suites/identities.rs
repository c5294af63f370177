use gamma_lagrangians::clifford::{check_gamma2_identity, check_gamma3_identity, GammaBasis};
use gamma_lagrangians::dynamics::{check_matrix_dual_identity, check_rank2_dual_identity, FFieldAtPoint};
use gamma_lagrangians::linalg::SpinMatrix;

use super::{sampling, Context};
use crate::report::CheckRecord;

pub const SIMILARITY_TRANSFORMS: usize = 50;

type BasisCheck = fn(&GammaBasis) -> f64;

pub fn run(ctx: &mut Context) -> Vec<CheckRecord> {
    let standard = ctx.basis;
    // alternate unitary and general (near-identity) similarity transforms
    let mut bases = vec![standard];
    for k in 0..SIMILARITY_TRANSFORMS {
        let (s, s_inv) = if k % 2 == 0 {
            let u = sampling::unitary(&mut ctx.rng);
            (u, u.adjoint())
        } else {
            let s = SpinMatrix::identity() + sampling::complex_matrix(&mut ctx.rng, 0.3);
            let inv = s.inverse().expect("near-identity matrix is invertible");
            (s, inv)
        };
        bases.push(standard.conjugated(&s, &s_inv));
    }

    let mut out = Vec::new();
    let checks: [(&str, BasisCheck); 3] = [
        ("identities.clifford", |b| b.clifford_residual()),
        ("identities.gamma2-anticommutator", check_gamma2_identity),
        ("identities.gamma3-dual", check_gamma3_identity),
    ];
    for (name, f) in checks {
        let exact = f(&standard);
        let worst = bases.iter().map(f).fold(0.0, f64::max);
        let mut rec = ctx.measure(name, worst, bases.len()).with_note(format!(
            "standard representation residual {exact:e}; {SIMILARITY_TRANSFORMS} random similarity transforms"
        ));
        if exact != 0.0 {
            rec.outcome = crate::report::Outcome::Fail;
        }
        out.push(rec);
    }

    let (mut rank2, mut matrix) = (0.0f64, 0.0f64);
    let trials = ctx.config.trials;
    for _ in 0..trials {
        let f = sampling::antisymmetric_rank3(&mut ctx.rng);
        let ff = FFieldAtPoint::from_components(f, &ctx.basis).expect("antisymmetric by construction");
        rank2 = rank2.max(check_rank2_dual_identity(&ff));
        matrix = matrix.max(check_matrix_dual_identity(&ff, &ctx.basis));
    }
    out.push(ctx.measure("identities.dual-anticommutator", matrix, trials));
    out.push(ctx.measure("identities.rank2-dual", rank2, trials));
    out
}
