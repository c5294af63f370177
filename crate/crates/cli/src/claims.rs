//! Every check the verifier can emit, with its anchor formula and default
//! tolerance. `docs/claims.md` lists the same anchors verbatim.

use serde::{Deserialize, Serialize};

/// Which side of the tolerance a residual must fall on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Clone, Copy, Debug)]
pub struct Claim {
    pub name: &'static str,
    pub anchor: &'static str,
    pub tolerance: f64,
    pub bound: Bound,
}

const fn at_most(name: &'static str, anchor: &'static str, tolerance: f64) -> Claim {
    Claim { name, anchor, tolerance, bound: Bound::AtMost }
}

const fn at_least(name: &'static str, anchor: &'static str, tolerance: f64) -> Claim {
    Claim { name, anchor, tolerance, bound: Bound::AtLeast }
}

pub const CLAIMS: &[Claim] = &[
    at_most("identities.clifford", "{γ_a, γ_b} = 2η_ab·1", 1e-12),
    at_most(
        "identities.gamma2-anticommutator",
        "{γ^{ab}, γ^{cd}} = −2(η^{ac}η^{bd} − η^{ad}η^{bc})·1 − 2iγ⁵ε^{abcd}",
        1e-12,
    ),
    at_most("identities.gamma3-dual", "γ^{abc} = iε^{abcd}γ_dγ⁵", 1e-12),
    at_most("identities.dual-anticommutator", "{f_{μν}, *f^{νρ}} = −2δ^ρ_μ(f*f)", 1e-12),
    at_most("identities.rank2-dual", "f^a_{μν}*f^{νρ a} = −¼δ^ρ_μ f^a_{νσ}*f^{νσ a} (no sum on a)", 1e-12),
    at_most("spectra.point-particle", "P_± = ±m√(g_{μν}ẋ^μẋ^ν) + qA_μẋ^μ", 1e-9),
    at_most("spectra.point-particle-degeneracy", "P_+ and P_− are each twofold", 0.0),
    at_most("gauge.electrodynamics-decomposition", "⅛(γ^{ab}F_ab)² = −¼F_abF^ab·1 − ¼iγ⁵F_ab*F^ab", 1e-12),
    at_most("gauge.electrodynamics-spectrum", "λ = −¼F_abF^ab ± ¼iF_ab*F^ab", 1e-10),
    at_most("gauge.pure-electric", "F_01 = E₀ alone gives the fourfold eigenvalue E₀²/2", 1e-12),
    at_most("gauge.yang-mills-decomposition", "⅛Σ_A(γ^{ab}G^A_ab)² = −¼G^A_abG^{abA}·1 − ¼iγ⁵G^A_ab*G^{abA}", 1e-12),
    at_most("gauge.yang-mills-u1", "one gauge component reduces to ⅛(γ^{ab}F_ab)²", 0.0),
    at_most("gravity.scalar", "¼R_{μνρσ}γ^{μν}γ^{ρσ} ∝ 1", 1e-5),
    at_most("gravity.kappa-universal", "¼R_{μνρσ}γ^{μν}γ^{ρσ} = κR·1 with one κ for all metrics", 1e-4),
    at_most("gravity.riemann-dual", "ε^{μνρσ}R_{μνρσ} = 0", 1e-5),
    at_most("gravity.fd-convergence", "finite-difference curvature error is O(h²)", 0.125),
    at_most("gravity.vacuum-ricci", "R = 0 for Schwarzschild", 1e-5),
    at_most("extended.string-square", "P_string² = −det G·Λ²·1", 1e-10),
    at_most("extended.membrane-square", "P_membrane² = det G·Λ²·1", 1e-10),
    at_most("extended.string-nambu-goto", "min real λ(P_string) = −Λ√((−1)^p det G_{αβ}), p = 1", 1e-10),
    at_most("extended.membrane-nambu-goto", "min real λ(P_membrane) = −Λ√((−1)^p det G_{αβ}), p = 2", 1e-10),
    at_most("extended.bracket-antisymmetry", "{X^μ, X^ν} and {X^μ, X^ν, X^ρ} are totally antisymmetric", 0.0),
    at_least("dynamics.fsf-nonzero", "(f*f) ≠ 0 makes the modified equations invertible", 1e-10),
    at_most("dynamics.velocity-round-trip", "ẋ^ρ = −(1/2(f*f))Σ_ν{C_ν, *f^{νρ}}", 1e-9),
    at_most("dynamics.conformal-fsf", "(f*f) = 0 for diagonal vielbeins", 1e-10),
    at_least("dynamics.unmodified-obstruction", "ẋ^μ f_{μν} = 0 admits only ẋ = 0 when (f*f) ≠ 0", 1e-6),
    at_most("dynamics.flat-degenerate", "f_{μν} = 0 in flat space, so the matrix action is a total derivative", 0.0),
    at_most(
        "dynamics.c-conservation",
        "C_ν = ẋ^μ f_{μν} is constant along the modified flow (RK4 drift falls 16× per step halving)",
        0.3,
    ),
    at_most(
        "dynamics.norm-conservation",
        "g_{μν}ẋ^μẋ^ν is constant along geodesics (RK4 drift falls 16× per step halving)",
        0.3,
    ),
    at_most("dynamics.flat-geodesic", "flat-space geodesics are straight lines", 1e-12),
    at_most("dynamics.connection-comparison", "Γ̃ versus Γ is measured, not asserted equal", 0.0),
];

pub fn find(name: &str) -> Option<&'static Claim> {
    CLAIMS.iter().find(|c| c.name == name)
}
