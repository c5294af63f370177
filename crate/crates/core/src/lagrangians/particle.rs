use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::{curved_gamma, GammaBasis};
use crate::error::Result;
use crate::geometry::{to_array, vielbein_at, MetricField, Point};
use crate::linalg::{Spectrum, SpinMatrix};

/// Electromagnetic potential `A_μ(x)` (lower index).
#[derive(Clone)]
pub struct Potential(Arc<PotentialFn>);

type PotentialFn = dyn Fn(&Point) -> [f64; 4] + Send + Sync;

impl Potential {
    pub fn new(f: impl Fn(&Point) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn zero() -> Self {
        Self::constant([0.0; 4])
    }

    pub fn constant(a: [f64; 4]) -> Self {
        Self::new(move |_| a)
    }

    /// `A_μ(x) = offset_μ + gradient[μ][ν] x^ν`
    pub fn affine(offset: [f64; 4], gradient: [[f64; 4]; 4]) -> Self {
        Self::new(move |x| {
            std::array::from_fn(|mu| offset[mu] + (0..4).map(|nu| gradient[mu][nu] * x[nu]).sum::<f64>())
        })
    }

    pub fn at(&self, x: &Point) -> [f64; 4] {
        (self.0)(x)
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Potential(..)")
    }
}

#[derive(Clone, Debug)]
pub struct ParticleState {
    pub mass: f64,
    pub charge: f64,
    pub position: Point,
    pub velocity: [f64; 4],
    pub potential: Potential,
}

impl ParticleState {
    /// `q A_μ(x) ẋ^μ`
    pub fn potential_term(&self) -> f64 {
        let a = self.potential.at(&self.position);
        self.charge * a.iter().zip(&self.velocity).map(|(a, v)| a * v).sum::<f64>()
    }
}

/// `P = m γ_μ(x) ẋ^μ + q A_μ(x) ẋ^μ · 1`.
pub fn point_particle_matrix(state: &ParticleState, metric: &MetricField, basis: &GammaBasis) -> Result<SpinMatrix> {
    let e = vielbein_at(metric, &state.position)?;
    let gammas = curved_gamma(basis, &to_array(&e));
    let kinetic: SpinMatrix = gammas.iter().zip(&state.velocity).map(|(g, v)| *g * (state.mass * v)).sum();
    Ok(kinetic + SpinMatrix::identity() * state.potential_term())
}

/// `{P₊, P₊, P₋, P₋}` with `P± = ±m√(g_μν ẋ^μ ẋ^ν) + qA_μẋ^μ`; the principal
/// complex root is used for spacelike velocities.
pub fn point_particle_spectrum(state: &ParticleState, metric: &MetricField) -> Spectrum {
    let g = metric.metric(&state.position);
    let v = nalgebra::Vector4::from(state.velocity);
    let norm2 = (v.transpose() * g * v)[(0, 0)];
    let root = Complex64::new(norm2, 0.0).sqrt() * state.mass;
    let shift = Complex64::new(state.potential_term(), 0.0);
    let plus = shift + root;
    let minus = shift - root;
    Spectrum::new([plus, plus, minus, minus])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_gamma_basis;
    use crate::geometry::MetricSpec;
    use crate::linalg::{eigenvalues4, spectra_match};

    fn state(mass: f64, charge: f64, velocity: [f64; 4], potential: Potential) -> ParticleState {
        ParticleState { mass, charge, position: [0.0; 4], velocity, potential }
    }

    #[test]
    fn resting_unit_mass_gives_gamma0() {
        let b = build_gamma_basis();
        let flat = MetricSpec::Flat.build().unwrap();
        let s = state(1.0, 0.0, [1.0, 0.0, 0.0, 0.0], Potential::zero());
        assert_eq!(point_particle_matrix(&s, &flat, &b).unwrap(), b.gamma[0]);
        assert_eq!(point_particle_spectrum(&s, &flat), Spectrum::from_real([-1.0, -1.0, 1.0, 1.0]));
    }

    #[test]
    fn pure_potential_term() {
        let b = build_gamma_basis();
        let flat = MetricSpec::Flat.build().unwrap();
        // A·ẋ = 3
        let s = state(0.0, 2.0, [1.0, 0.0, 0.0, 0.0], Potential::constant([3.0, 0.0, 0.0, 0.0]));
        assert_eq!(point_particle_matrix(&s, &flat, &b).unwrap(), SpinMatrix::identity() * 6.0);
        assert_eq!(point_particle_spectrum(&s, &flat), Spectrum::from_real([6.0; 4]));
    }

    #[test]
    fn closed_form_substitution() {
        let flat = MetricSpec::Flat.build().unwrap();
        let s = state(2.0, 1.0, [1.0, 0.0, 0.0, 0.0], Potential::constant([0.5, 0.0, 0.0, 0.0]));
        assert_eq!(point_particle_spectrum(&s, &flat), Spectrum::from_real([-1.5, -1.5, 2.5, 2.5]));
    }

    #[test]
    fn spacelike_velocity_gives_imaginary_pair() {
        let b = build_gamma_basis();
        let flat = MetricSpec::Flat.build().unwrap();
        let s = state(1.0, 0.0, [0.0, 1.0, 0.0, 0.0], Potential::zero());
        let want = point_particle_spectrum(&s, &flat);
        assert!((want.eigenvalues()[0].im.abs() - 1.0).abs() < 1e-15);
        let got = eigenvalues4(&point_particle_matrix(&s, &flat, &b).unwrap()).unwrap();
        assert!(spectra_match(&got, &want, 1e-12));
    }

    #[test]
    fn trace_is_four_times_potential_term() {
        let b = build_gamma_basis();
        let m = MetricSpec::SchwarzschildIsotropic { mass: 1.0 }.build().unwrap();
        let mut s = state(1.3, -0.7, [1.2, 0.1, -0.3, 0.2], Potential::affine([0.1, 0.2, -0.4, 0.3], [[0.01; 4]; 4]));
        s.position = [0.0, 4.0, 1.0, -2.0];
        let p = point_particle_matrix(&s, &m, &b).unwrap();
        assert!((p.trace().re - 4.0 * s.potential_term()).abs() < 1e-12);
        assert!(p.trace().im.abs() < 1e-12);
    }
}
