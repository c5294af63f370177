use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{gamma2, levi_civita, GammaBasis, ETA};
use crate::error::{Error, Result};
use crate::geometry::fd::{gradient, DiffScheme};
use crate::geometry::Point;
use crate::linalg::{eigenvalues4, Spectrum, SpinMatrix};

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Antisymmetric `F_{ab}` with flat lower indices, stored as the upper
/// triangle `[F01, F02, F03, F12, F13, F23]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldStrength {
    upper: [f64; 6],
}

impl FieldStrength {
    pub fn from_upper(upper: [f64; 6]) -> Self {
        Self { upper }
    }

    /// Accepts a full 4×4 array only if it is exactly antisymmetric.
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Result<Self> {
        for a in 0..4 {
            for b in a..4 {
                if m[a][b] != -m[b][a] {
                    return Err(Error::NotAntisymmetric(a, b));
                }
            }
        }
        Ok(Self { upper: PAIRS.map(|(a, b)| m[a][b]) })
    }

    pub fn upper_triangle(&self) -> [f64; 6] {
        self.upper
    }

    /// `F_{ab}`
    pub fn get(&self, a: usize, b: usize) -> f64 {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.upper[pair_index(a, b)],
            std::cmp::Ordering::Greater => -self.upper[pair_index(b, a)],
        }
    }

    /// `F^{ab} = η^{aa}η^{bb}F_{ab}`
    pub fn raised(&self, a: usize, b: usize) -> f64 {
        ETA[a] * ETA[b] * self.get(a, b)
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|a| std::array::from_fn(|b| self.get(a, b)))
    }

    /// `F_{ab}F^{ab}`
    pub fn square(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.get(a, b) * self.raised(a, b);
            }
        }
        s
    }

    /// `F_{ab} *F^{ab}` with `*F^{ab} = ½ε^{abcd}F_{cd}`.
    pub fn dual_contraction(&self) -> f64 {
        let dual = dual_upper(self);
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.get(a, b) * dual[a][b];
            }
        }
        s
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { upper: self.upper.map(|v| v * c) }
    }
}

fn pair_index(a: usize, b: usize) -> usize {
    PAIRS.iter().position(|&p| p == (a, b)).expect("a < b < 4")
}

/// `*F^{ab} = ½ε^{abcd}F_{cd}` with upper indices.
fn dual_upper(f: &FieldStrength) -> [[f64; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut s = 0.0;
            for c in 0..4 {
                for d in 0..4 {
                    s += levi_civita(a, b, c, d) * f.get(c, d);
                }
            }
            0.5 * s
        })
    })
}

/// Hodge dual `*F^{ab} = ½ε^{abcd}F_{cd}`, returned with indices lowered by η.
pub fn hodge_dual_2form(f: &FieldStrength) -> FieldStrength {
    let up = dual_upper(f);
    FieldStrength { upper: PAIRS.map(|(a, b)| ETA[a] * ETA[b] * up[a][b]) }
}

/// `F_{ab} = ∂_a A_b − ∂_b A_a` (weight one, no ½), by central differences.
pub fn field_strength_from_potential(potential: impl Fn(&Point) -> [f64; 4], x: &Point, h: f64) -> FieldStrength {
    let da = gradient(|p| Ok::<_, std::convert::Infallible>(potential(p)), x, h, DiffScheme::Richardson)
        .unwrap_or_else(|e| match e {});
    FieldStrength { upper: PAIRS.map(|(a, b)| da[a][b] - da[b][a]) }
}

/// `γ^{ab}F_{ab}` summed over all 16 index pairs.
fn slashed(f: &FieldStrength, basis: &GammaBasis) -> SpinMatrix {
    let mut s = SpinMatrix::zero();
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                s += gamma2(basis, a, b) * f.get(a, b);
            }
        }
    }
    s
}

/// `E = ⅛(γ^{ab}F_{ab})²`.
pub fn electrodynamics_matrix(f: &FieldStrength, basis: &GammaBasis) -> SpinMatrix {
    let s = slashed(f, basis);
    (s * s) * 0.125
}

/// `−¼F_{ab}F^{ab}·1 − ¼iγ⁵F_{ab}*F^{ab}`
fn decomposed(ff: f64, fdual: f64, basis: &GammaBasis) -> SpinMatrix {
    SpinMatrix::identity() * (-0.25 * ff) + basis.gamma5.scale(Complex64::new(0.0, -0.25 * fdual))
}

/// Max-norm distance between `E` and its scalar + `γ⁵` decomposition.
pub fn electrodynamics_decomposition_residual(f: &FieldStrength, basis: &GammaBasis) -> f64 {
    let rhs = decomposed(f.square(), f.dual_contraction(), basis);
    (electrodynamics_matrix(f, basis) - rhs).norm_max()
}

/// `{E₊, E₊, E₋, E₋}`, `E± = −¼F_{ab}F^{ab} ± ¼iF_{ab}*F^{ab}`.
pub fn electrodynamics_spectrum(f: &FieldStrength) -> Spectrum {
    let re = -0.25 * f.square();
    let im = 0.25 * f.dual_contraction();
    let plus = Complex64::new(re, im);
    let minus = Complex64::new(re, -im);
    Spectrum::new([plus, plus, minus, minus])
}

/// One field strength per adjoint index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonabelianFieldStrength {
    components: Vec<FieldStrength>,
}

impl NonabelianFieldStrength {
    pub fn new(components: Vec<FieldStrength>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("nonabelian field strength needs at least one component".into()));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[FieldStrength] {
        &self.components
    }
}

/// Prefactor used for the Yang–Mills matrix. The stated right-hand side
/// `−¼G·G·1 − ¼iγ⁵G·*G` only follows from `+⅛`, as for Maxwell.
pub const YANG_MILLS_PREFACTOR: f64 = 0.125;

/// `Σ_A ⅛(γ^{ab}G^A_{ab})²`. A single component reproduces
/// [`electrodynamics_matrix`] bit for bit.
pub fn yang_mills_matrix(g: &NonabelianFieldStrength, basis: &GammaBasis) -> SpinMatrix {
    let mut iter = g.components.iter().map(|c| electrodynamics_matrix(c, basis));
    let first = iter.next().expect("nonempty by construction");
    iter.fold(first, |acc, m| acc + m)
}

pub fn yang_mills_decomposition_residual(g: &NonabelianFieldStrength, basis: &GammaBasis) -> f64 {
    let gg: f64 = g.components.iter().map(FieldStrength::square).sum();
    let gd: f64 = g.components.iter().map(FieldStrength::dual_contraction).sum();
    (yang_mills_matrix(g, basis) - decomposed(gg, gd, basis)).norm_max()
}

/// Yang–Mills spectrum via the eigensolver, for degeneracy checks.
pub fn yang_mills_spectrum(g: &NonabelianFieldStrength, basis: &GammaBasis) -> Result<Spectrum> {
    eigenvalues4(&yang_mills_matrix(g, basis))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaConvention {
    pub theta: f64,
    pub convention: String,
    /// `−θ/(32π²)`, the coefficient multiplying `i G·*G`.
    pub coefficient: f64,
}

/// The vacuum angle fixed by keeping the `G*G` term: `θ = 8π²`.
pub fn theta_report() -> ThetaConvention {
    let theta = 8.0 * PI * PI;
    ThetaConvention {
        theta,
        convention: "−(θi/32π²)G^A_{ab}*G^{abA}".to_string(),
        coefficient: -theta / (32.0 * PI * PI),
    }
}
