//! Declarative metric presets.
//!
//! Presets are plain data (serde-friendly) so that run configurations and
//! checked-in fixtures can describe geometries without embedded code.

use std::sync::Arc;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::{MetricField, Point, Rank3};
use crate::clifford::ETA;
use crate::error::{Error, Result};

/// Scalar profile `f(x)` for the conformal-diagonal preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    /// `offset + slope·x`
    Affine { offset: f64, slope: [f64; 4] },
    /// `amplitude · exp(rate·x)`
    Exponential { amplitude: f64, rate: [f64; 4] },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Affine { offset: value, slope: [0.0; 4] }
    }

    pub fn value(&self, x: &Point) -> f64 {
        match self {
            Profile::Affine { offset, slope } => offset + dot(slope, x),
            Profile::Exponential { amplitude, rate } => amplitude * dot(rate, x).exp(),
        }
    }

    pub fn gradient(&self, x: &Point) -> [f64; 4] {
        match self {
            Profile::Affine { slope, .. } => *slope,
            Profile::Exponential { amplitude, rate } => {
                let v = amplitude * dot(rate, x).exp();
                rate.map(|k| k * v)
            }
        }
    }

    fn from_params(p: &[f64]) -> Result<Self> {
        let tail = [p[2], p[3], p[4], p[5]];
        match p[0] as i64 {
            0 => Ok(Profile::Affine { offset: p[1], slope: tail }),
            1 => Ok(Profile::Exponential { amplitude: p[1], rate: tail }),
            k => Err(Error::InvalidParameters(format!("unknown profile kind {k}"))),
        }
    }
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Degree-≤2 polynomial `constant + linear·x + xᵀ·quadratic·x`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly2 {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub linear: [f64; 4],
    #[serde(default)]
    pub quadratic: [[f64; 4]; 4],
}

impl Poly2 {
    pub fn value(&self, x: &Point) -> f64 {
        let mut v = self.constant + dot(&self.linear, x);
        for i in 0..4 {
            for j in 0..4 {
                v += self.quadratic[i][j] * x[i] * x[j];
            }
        }
        v
    }

    pub fn gradient(&self, x: &Point) -> [f64; 4] {
        std::array::from_fn(|k| {
            self.linear[k] + (0..4).map(|j| (self.quadratic[k][j] + self.quadratic[j][k]) * x[j]).sum::<f64>()
        })
    }

    /// Constant Hessian `∂_k∂_l p`.
    pub fn hessian(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|k| std::array::from_fn(|l| self.quadratic[k][l] + self.quadratic[l][k]))
    }

    fn from_params(p: &[f64]) -> Self {
        let mut q = Poly2 { constant: p[0], linear: [p[1], p[2], p[3], p[4]], quadratic: [[0.0; 4]; 4] };
        let mut k = 5;
        for i in 0..4 {
            for j in i..4 {
                q.quadratic[i][j] = p[k];
                k += 1;
            }
        }
        q
    }
}

/// Override of one vielbein component `e^a_μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VielbeinComponent {
    pub a: usize,
    pub mu: usize,
    #[serde(flatten)]
    pub poly: Poly2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum MetricSpec {
    Flat,
    /// `g_μν = η_μν f_μ(x)²`, `e^a_μ = δ^a_μ f_μ(x)`.
    ConformalDiagonal {
        profiles: [Profile; 4],
    },
    /// Schwarzschild in isotropic coordinates, `x = (t, x, y, z)`.
    SchwarzschildIsotropic {
        mass: f64,
    },
    /// `e^a_μ = δ^a_μ` except for the listed polynomial components.
    PolynomialVielbein {
        #[serde(default)]
        components: Vec<VielbeinComponent>,
    },
}

pub const PRESET_NAMES: [&str; 4] = ["flat", "conformal-diagonal", "schwarzschild-isotropic", "polynomial-vielbein"];

/// Number of reals per vielbein component in the flat parameter layout
/// (1 constant, 4 linear, 10 upper-triangular quadratic).
pub const POLY_PARAMS: usize = 15;

impl MetricSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MetricSpec::Flat => PRESET_NAMES[0],
            MetricSpec::ConformalDiagonal { .. } => PRESET_NAMES[1],
            MetricSpec::SchwarzschildIsotropic { .. } => PRESET_NAMES[2],
            MetricSpec::PolynomialVielbein { .. } => PRESET_NAMES[3],
        }
    }

    /// Builds a spec from a preset name and a flat list of reals:
    ///
    /// * `flat`: no parameters
    /// * `schwarzschild-isotropic`: `[mass]`
    /// * `conformal-diagonal`: four blocks `[kind, c, k0, k1, k2, k3]`, kind 0 =
    ///   affine (`c + k·x`), kind 1 = exponential (`c·exp(k·x)`)
    /// * `polynomial-vielbein`: 16 blocks of [`POLY_PARAMS`] reals, one per
    ///   `(a, μ)` in row-major order, each holding the full polynomial
    ///   (identity entries included)
    pub fn from_name_params(name: &str, params: &[f64]) -> Result<Self> {
        let expect = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameters(format!("`{name}` takes {n} parameters, got {}", params.len())))
            }
        };
        match name {
            "flat" => {
                expect(0)?;
                Ok(MetricSpec::Flat)
            }
            "schwarzschild-isotropic" => {
                expect(1)?;
                Ok(MetricSpec::SchwarzschildIsotropic { mass: params[0] })
            }
            "conformal-diagonal" => {
                expect(24)?;
                let mut profiles = Vec::with_capacity(4);
                for block in params.chunks(6) {
                    profiles.push(Profile::from_params(block)?);
                }
                let profiles: [Profile; 4] = profiles.try_into().expect("four blocks");
                Ok(MetricSpec::ConformalDiagonal { profiles })
            }
            "polynomial-vielbein" => {
                expect(16 * POLY_PARAMS)?;
                let components = params
                    .chunks(POLY_PARAMS)
                    .enumerate()
                    .map(|(k, block)| VielbeinComponent { a: k / 4, mu: k % 4, poly: Poly2::from_params(block) })
                    .collect();
                Ok(MetricSpec::PolynomialVielbein { components })
            }
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    /// Point at which presets are validated when no probe is supplied.
    pub fn default_probe(&self) -> Point {
        match self {
            MetricSpec::SchwarzschildIsotropic { mass } => [0.0, 10.0 * mass.abs().max(1.0), 0.0, 0.0],
            _ => [0.0; 4],
        }
    }

    pub fn build(&self) -> Result<MetricField> {
        self.build_at(&self.default_probe())
    }

    /// Builds the metric and checks it is nondegenerate with signature
    /// `(+,−,−,−)` at `probe`.
    pub fn build_at(&self, probe: &Point) -> Result<MetricField> {
        let field = match self {
            MetricSpec::Flat => MetricField::from_vielbein("flat", |_| Matrix4::identity())
                .with_vielbein_derivative(|_| [[[0.0; 4]; 4]; 4]),
            MetricSpec::ConformalDiagonal { profiles } => conformal_diagonal(profiles.clone()),
            MetricSpec::SchwarzschildIsotropic { mass } => {
                if !(mass.is_finite() && *mass >= 0.0) {
                    return Err(Error::InvalidParameters(format!("mass must be ≥ 0, got {mass}")));
                }
                schwarzschild_isotropic(*mass)
            }
            MetricSpec::PolynomialVielbein { components } => polynomial_vielbein(components)?,
        };
        super::check_signature(&field.metric(probe), probe)?;
        Ok(field)
    }
}

fn conformal_diagonal(profiles: [Profile; 4]) -> MetricField {
    let profiles = Arc::new(profiles);
    let p2 = Arc::clone(&profiles);
    MetricField::from_vielbein("conformal-diagonal", move |x| {
        Matrix4::from_diagonal(&nalgebra::Vector4::from_fn(|i, _| profiles[i].value(x)))
    })
    .with_vielbein_derivative(move |x| {
        let mut de: Rank3 = [[[0.0; 4]; 4]; 4];
        for mu in 0..4 {
            let grad = p2[mu].gradient(x);
            for (nu, slot) in de.iter_mut().enumerate() {
                slot[mu][mu] = grad[nu];
            }
        }
        de
    })
}

/// Conformal factors `(A, B)` with `g = diag(A², −B⁴, −B⁴, −B⁴)` and their
/// isotropic-radius derivatives.
fn schwarzschild_factors(mass: f64, r: f64) -> (f64, f64, f64, f64) {
    let u = mass / (2.0 * r);
    let a = (1.0 - u) / (1.0 + u);
    let b = 1.0 + u;
    let du = -mass / (2.0 * r * r);
    let da = -2.0 * du / ((1.0 + u) * (1.0 + u));
    (a, b, da, du)
}

fn schwarzschild_isotropic(mass: f64) -> MetricField {
    MetricField::from_vielbein("schwarzschild-isotropic", move |x| {
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        let (a, b, _, _) = schwarzschild_factors(mass, r);
        let b2 = b * b;
        Matrix4::from_diagonal(&nalgebra::Vector4::new(a, b2, b2, b2))
    })
    .with_vielbein_derivative(move |x| {
        let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
        let (_, b, da, db) = schwarzschild_factors(mass, r);
        let mut de: Rank3 = [[[0.0; 4]; 4]; 4];
        for nu in 1..4 {
            let dr = x[nu] / r;
            de[nu][0][0] = da * dr;
            for k in 1..4 {
                de[nu][k][k] = 2.0 * b * db * dr;
            }
        }
        de
    })
}

fn polynomial_vielbein(components: &[VielbeinComponent]) -> Result<MetricField> {
    let mut table: [[Poly2; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|mu| Poly2 { constant: if a == mu { 1.0 } else { 0.0 }, ..Poly2::default() })
    });
    for c in components {
        if c.a >= 4 || c.mu >= 4 {
            return Err(Error::InvalidParameters(format!("vielbein component ({}, {}) out of range", c.a, c.mu)));
        }
        table[c.a][c.mu] = c.poly.clone();
    }
    let table = Arc::new(table);
    let t2 = Arc::clone(&table);
    Ok(MetricField::from_vielbein("polynomial-vielbein", move |x| Matrix4::from_fn(|a, mu| table[a][mu].value(x)))
        .with_vielbein_derivative(move |x| {
            let mut de: Rank3 = [[[0.0; 4]; 4]; 4];
            for a in 0..4 {
                for mu in 0..4 {
                    let g = t2[a][mu].gradient(x);
                    for nu in 0..4 {
                        de[nu][a][mu] = g[nu];
                    }
                }
            }
            de
        }))
}

/// `η` as a matrix.
pub fn minkowski() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::from(ETA))
}
