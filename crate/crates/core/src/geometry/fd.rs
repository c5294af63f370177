//! Central finite differences on fixed-size array-valued functions of a
//! spacetime point.

use serde::{Deserialize, Serialize};

use super::Point;

/// Default step in coordinate units.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffScheme {
    /// Plain second-order central difference.
    Central,
    /// Central differences at `h` and `h/2`, combined as `(4D(h/2) − D(h))/3`.
    #[default]
    Richardson,
}

fn shifted(x: &Point, axis: usize, delta: f64) -> Point {
    let mut y = *x;
    y[axis] += delta;
    y
}

fn central<const N: usize, E>(
    f: &impl Fn(&Point) -> Result<[f64; N], E>,
    x: &Point,
    axis: usize,
    h: f64,
) -> Result<[f64; N], E> {
    let plus = f(&shifted(x, axis, h))?;
    let minus = f(&shifted(x, axis, -h))?;
    Ok(std::array::from_fn(|i| (plus[i] - minus[i]) / (2.0 * h)))
}

/// `∂_axis f(x)`.
pub fn partial<const N: usize, E>(
    f: impl Fn(&Point) -> Result<[f64; N], E>,
    x: &Point,
    axis: usize,
    h: f64,
    scheme: DiffScheme,
) -> Result<[f64; N], E> {
    match scheme {
        DiffScheme::Central => central(&f, x, axis, h),
        DiffScheme::Richardson => {
            let coarse = central(&f, x, axis, h)?;
            let fine = central(&f, x, axis, 0.5 * h)?;
            Ok(std::array::from_fn(|i| (4.0 * fine[i] - coarse[i]) / 3.0))
        }
    }
}

/// All four partials: `out[λ] = ∂_λ f(x)`.
pub fn gradient<const N: usize, E>(
    f: impl Fn(&Point) -> Result<[f64; N], E>,
    x: &Point,
    h: f64,
    scheme: DiffScheme,
) -> Result<[[f64; N]; 4], E> {
    let mut out = [[0.0; N]; 4];
    for (axis, slot) in out.iter_mut().enumerate() {
        *slot = partial(&f, x, axis, h, scheme)?;
    }
    Ok(out)
}
