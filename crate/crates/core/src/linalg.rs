//! Fixed-size 4×4 complex matrices and their eigenvalues.
//!
//! Everything here operates on [`SpinMatrix`], the 4×4 complex matrix that
//! acts on Dirac spinors. The eigensolver reduces to Hessenberg form with
//! Householder reflections and then runs a Wilkinson-shifted complex QR
//! iteration with deflation. It only returns eigenvalues.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DIM: usize = 4;

/// Iteration cap for the QR eigensolver (total over all deflations).
pub const MAX_QR_ITERATIONS: usize = 500;

/// Relative distance below which two eigenvalues are reported as one
/// degenerate cluster; scaled by `max(1, ‖m‖)`.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 4×4 complex matrix acting on spinor space.
#[derive(Clone, Copy, PartialEq)]
pub struct SpinMatrix([[Complex64; DIM]; DIM]);

impl SpinMatrix {
    /// Builds a matrix, rejecting NaN or infinite entries.
    pub fn new(entries: [[Complex64; DIM]; DIM]) -> Result<Self> {
        for (row, r) in entries.iter().enumerate() {
            for (col, z) in r.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: [[f64; DIM]; DIM]) -> Result<Self> {
        Self::new(entries.map(|r| r.map(|x| Complex64::new(x, 0.0))))
    }

    pub const fn zero() -> Self {
        Self([[ZERO; DIM]; DIM])
    }

    pub fn identity() -> Self {
        Self::scalar(ONE)
    }

    pub fn scalar(c: Complex64) -> Self {
        let mut m = Self::zero();
        for i in 0..DIM {
            m.0[i][i] = c;
        }
        m
    }

    pub fn entries(&self) -> &[[Complex64; DIM]; DIM] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.map(|r| r.map(|z| z * c)))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self(self.0.map(|r| r.map(|z| z * c)))
    }

    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    /// Max absolute entry; the norm used for every tolerance in this crate.
    pub fn norm_max(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let mut a = self.0;
        let mut det = ONE;
        for k in 0..DIM {
            let pivot = (k..DIM).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap_or(k);
            if a[pivot][k] == ZERO {
                return ZERO;
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..DIM {
                let factor = a[i][k] / a[k][k];
                for j in k..DIM {
                    let t = a[k][j];
                    a[i][j] -= factor * t;
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for k in 0..DIM {
            let pivot = (k..DIM).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))?;
            if a[pivot][k].norm() == 0.0 {
                return None;
            }
            a.swap(pivot, k);
            inv.swap(pivot, k);
            let p = a[k][k];
            for j in 0..DIM {
                a[k][j] /= p;
                inv[k][j] /= p;
            }
            for i in 0..DIM {
                if i != k {
                    let factor = a[i][k];
                    for j in 0..DIM {
                        let (akj, ikj) = (a[k][j], inv[k][j]);
                        a[i][j] -= factor * akj;
                        inv[i][j] -= factor * ikj;
                    }
                }
            }
        }
        Some(Self(inv))
    }

    /// Coefficients `[c0, c1, c2, c3]` of the monic characteristic polynomial
    /// `λ⁴ + c3 λ³ + c2 λ² + c1 λ + c0`, via the Faddeev–LeVerrier recursion.
    pub fn characteristic_polynomial(&self) -> [Complex64; DIM] {
        let mut coeffs = [ZERO; DIM];
        let mut m_k = Self::zero();
        let mut c_prev = ONE;
        for k in 1..=DIM {
            m_k = *self * m_k + Self::scalar(c_prev);
            let c = -(*self * m_k).trace() / k as f64;
            coeffs[DIM - k] = c;
            c_prev = c;
        }
        coeffs
    }
}

impl Default for SpinMatrix {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for SpinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SpinMatrix [")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for SpinMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for SpinMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Add for SpinMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        mat_add(&self, &rhs)
    }
}

impl AddAssign for SpinMatrix {
    fn add_assign(&mut self, rhs: Self) {
        *self = mat_add(self, &rhs);
    }
}

impl Sub for SpinMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..DIM {
            for j in 0..DIM {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Neg for SpinMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|r| r.map(|z| -z)))
    }
}

impl Mul for SpinMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        mat_mul(&self, &rhs)
    }
}

impl Mul<Complex64> for SpinMatrix {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for SpinMatrix {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale_real(rhs)
    }
}

impl std::iter::Sum for SpinMatrix {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, m| acc + m)
    }
}

pub fn mat_add(a: &SpinMatrix, b: &SpinMatrix) -> SpinMatrix {
    let mut out = *a;
    for i in 0..DIM {
        for j in 0..DIM {
            out.0[i][j] += b.0[i][j];
        }
    }
    out
}

pub fn mat_mul(a: &SpinMatrix, b: &SpinMatrix) -> SpinMatrix {
    let mut out = SpinMatrix::zero();
    for i in 0..DIM {
        for k in 0..DIM {
            let aik = a.0[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..DIM {
                out.0[i][j] += aik * b.0[k][j];
            }
        }
    }
    out
}

/// `ab + ba`
pub fn anticommutator(a: &SpinMatrix, b: &SpinMatrix) -> SpinMatrix {
    mat_mul(a, b) + mat_mul(b, a)
}

/// `ab − ba`
pub fn commutator(a: &SpinMatrix, b: &SpinMatrix) -> SpinMatrix {
    mat_mul(a, b) - mat_mul(b, a)
}

/// Returns `c = trace(m)/4` when `‖m − c·1‖_max ≤ tol`.
pub fn is_scalar_matrix(m: &SpinMatrix, tol: f64) -> Option<Complex64> {
    let c = m.trace() / DIM as f64;
    let off = (*m - SpinMatrix::scalar(c)).norm_max();
    (off <= tol).then_some(c)
}

/// Distance of `m` from the nearest multiple of the identity, in the max norm.
pub fn off_scalar_residual(m: &SpinMatrix) -> f64 {
    let c = m.trace() / DIM as f64;
    (*m - SpinMatrix::scalar(c)).norm_max()
}

/// Four eigenvalues counted with multiplicity, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: [Complex64; DIM],
}

/// A group of numerically coincident eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

fn sort_key(z: &Complex64) -> (f64, f64) {
    let round = |x: f64| {
        let r = (x * 1e12).round() / 1e12;
        // collapse -0.0 so it sorts with +0.0
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    (round(z.re), round(z.im))
}

impl Spectrum {
    pub fn new(mut eigenvalues: [Complex64; DIM]) -> Self {
        eigenvalues.sort_by(|a, b| {
            let (ka, kb) = (sort_key(a), sort_key(b));
            ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
        });
        Self { eigenvalues }
    }

    pub fn from_real(values: [f64; DIM]) -> Self {
        Self::new(values.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn eigenvalues(&self) -> &[Complex64; DIM] {
        &self.eigenvalues
    }

    pub fn sum(&self) -> Complex64 {
        self.eigenvalues.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.eigenvalues.iter().product()
    }

    /// Smallest real part among eigenvalues whose imaginary part is within `tol`.
    pub fn min_real(&self, tol: f64) -> Option<f64> {
        self.eigenvalues.iter().filter(|z| z.im.abs() <= tol).map(|z| z.re).reduce(f64::min)
    }

    /// Groups eigenvalues lying within `tol` of a cluster's first member.
    pub fn clusters(&self, tol: f64) -> Vec<Cluster> {
        let mut out: Vec<(Complex64, Complex64, usize)> = Vec::new();
        for &z in &self.eigenvalues {
            match out.iter_mut().find(|(first, _, _)| (z - first).norm() <= tol) {
                Some((_, sum, n)) => {
                    *sum += z;
                    *n += 1;
                }
                None => out.push((z, z, 1)),
            }
        }
        out.into_iter().map(|(_, sum, n)| Cluster { value: sum / n as f64, multiplicity: n }).collect()
    }

    /// Multiplicities of the clusters, sorted descending (e.g. `[2, 2]`).
    pub fn degeneracy_pattern(&self, tol: f64) -> Vec<usize> {
        let mut pattern: Vec<usize> = self.clusters(tol).iter().map(|c| c.multiplicity).collect();
        pattern.sort_unstable_by(|a, b| b.cmp(a));
        pattern
    }
}

/// Cluster tolerance for eigenvalues of `m`.
pub fn degeneracy_tolerance(m: &SpinMatrix) -> f64 {
    DEGENERACY_TOLERANCE * m.norm_max().max(1.0)
}

/// Bottleneck distance between two spectra: the smallest achievable maximum
/// pairwise distance over all perfect matchings.
pub fn spectral_distance(a: &Spectrum, b: &Spectrum) -> f64 {
    let mut perm = [0usize, 1, 2, 3];
    let mut best = f64::INFINITY;
    permutations(&mut perm, 0, &mut |p| {
        let worst = (0..DIM).map(|i| (a.eigenvalues[i] - b.eigenvalues[p[i]]).norm()).fold(0.0, f64::max);
        best = best.min(worst);
    });
    best
}

/// True iff some perfect matching pairs the eigenvalues within `tol`.
pub fn spectra_match(a: &Spectrum, b: &Spectrum, tol: f64) -> bool {
    spectral_distance(a, b) <= tol
}

fn permutations(p: &mut [usize; DIM], k: usize, visit: &mut impl FnMut(&[usize; DIM])) {
    if k == DIM {
        visit(p);
        return;
    }
    for i in k..DIM {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Eigenvalues of `m` with multiplicity.
pub fn eigenvalues4(m: &SpinMatrix) -> Result<Spectrum> {
    if !m.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    let mut h = hessenberg(m);
    let norm = m.norm_max();
    let mut values = [ZERO; DIM];
    let mut hi = DIM - 1;
    let mut total = 0usize;
    let mut since_deflation = 0usize;

    loop {
        if hi == 0 {
            values[0] = h[0][0];
            break;
        }
        // locate the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let mut scale = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if scale == 0.0 {
                scale = norm;
            }
            if h[lo][lo - 1].norm() <= f64::EPSILON * scale {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values[hi] = h[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > MAX_QR_ITERATIONS {
            return Err(Error::SolverFailure { iterations: total, matrix: Box::new(*m) });
        }

        let shift = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            let extra = if hi >= 2 { h[hi - 1][hi - 2].re.abs() } else { 0.0 };
            h[hi][hi] + Complex64::new(h[hi][hi - 1].re.abs() + extra, 0.0)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        qr_step(&mut h, lo, hi, shift);
    }

    Ok(Spectrum::new(values))
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (r1, r2) = (mean + disc, mean - disc);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// One explicit shifted QR sweep on the active block `lo..=hi` using Givens rotations.
fn qr_step(h: &mut [[Complex64; DIM]; DIM], lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        h[i][i] -= shift;
    }
    let mut rotations = [(ONE, ZERO); DIM];
    for k in lo..hi {
        let (x, y) = (h[k][k], h[k + 1][k]);
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (x / r, y / r) };
        rotations[k] = (c, s);
        for j in k..=hi {
            let (u, v) = (h[k][j], h[k + 1][j]);
            h[k][j] = c.conj() * u + s.conj() * v;
            h[k + 1][j] = -s * u + c * v;
        }
    }
    for k in lo..hi {
        let (c, s) = rotations[k];
        for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
            let (u, v) = (row[k], row[k + 1]);
            row[k] = u * c + v * s;
            row[k + 1] = -u * s.conj() + v * c.conj();
        }
    }
    for i in lo..=hi {
        h[i][i] += shift;
    }
}

/// Unitary similarity to upper Hessenberg form via Householder reflections.
fn hessenberg(m: &SpinMatrix) -> [[Complex64; DIM]; DIM] {
    let mut h = m.0;
    for k in 0..DIM - 2 {
        let norm_x = (k + 1..DIM).map(|i| h[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm_x;
        let mut v = [ZERO; DIM];
        for i in k + 1..DIM {
            v[i] = h[i][k];
        }
        v[k + 1] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h ← (I − 2vv^H) h
        for j in 0..DIM {
            let dot: Complex64 = (k + 1..DIM).map(|i| v[i].conj() * h[i][j]).sum();
            for i in k + 1..DIM {
                h[i][j] -= v[i] * dot * 2.0;
            }
        }
        // h ← h (I − 2vv^H)
        for row in h.iter_mut() {
            let dot: Complex64 = (k + 1..DIM).map(|j| row[j] * v[j]).sum();
            for j in k + 1..DIM {
                row[j] -= dot * v[j].conj() * 2.0;
            }
        }
        for row in h.iter_mut().skip(k + 2) {
            row[k] = ZERO;
        }
    }
    h
}
