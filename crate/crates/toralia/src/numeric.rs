//! Small numerical helpers: roots of unity, scale-aware residuals, least
//! squares and polynomial roots on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type M2 = Matrix2<C64>;
pub type M3 = Matrix3<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `exp(2πi·k/n)`.
pub fn root_of_unity(k: i64, n: i64) -> C64 {
    let r = k.rem_euclid(n) as f64 / n as f64;
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r)
}

/// Frobenius norm of a complex matrix slice.
pub fn frob<R: nalgebra::Dim, Cc: nalgebra::Dim, S>(m: &nalgebra::Matrix<C64, R, Cc, S>) -> f64
where
    S: nalgebra::RawStorage<C64, R, Cc>,
{
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|a - b| / max(1, |a|, |b|)`: absolute for moderate values, relative
/// near poles where values are large.
pub fn scaled_diff(a: C64, b: C64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Matrix version of [`scaled_diff`] with Frobenius norms.
pub fn scaled_mdiff<R: nalgebra::Dim, Cc: nalgebra::Dim, S1, S2>(
    a: &nalgebra::Matrix<C64, R, Cc, S1>,
    b: &nalgebra::Matrix<C64, R, Cc, S2>,
) -> f64
where
    S1: nalgebra::RawStorage<C64, R, Cc>,
    S2: nalgebra::RawStorage<C64, R, Cc>,
{
    let na = frob(a);
    let nb = frob(b);
    let diff: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    diff / 1f64.max(na).max(nb)
}

pub fn det2(m: &M2) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Inverse of a 2×2 matrix via the adjugate.
pub fn inv2(m: &M2) -> Option<M2> {
    let d = det2(m);
    if d.norm() == 0.0 || !d.is_finite() {
        return None;
    }
    Some(M2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / d)
}

pub fn inv3(m: &M3) -> Option<M3> {
    m.try_inverse()
}

/// Least-squares solution of `a·x ≈ b` by SVD, with columns rescaled to unit
/// max-norm first so that wildly different monomial magnitudes stay
/// well-conditioned.
pub fn lstsq(a: &DMatrix<C64>, b: &DVector<C64>) -> Option<DVector<C64>> {
    let mut scaled = a.clone();
    let mut scales = vec![1.0; a.ncols()];
    for (j, s) in scales.iter_mut().enumerate() {
        let m = a.column(j).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            *s = m;
            scaled.column_mut(j).iter_mut().for_each(|z| *z /= m);
        }
    }
    let svd = scaled.svd(true, true);
    let x = svd.solve(b, 1e-14).ok()?;
    Some(DVector::from_iterator(
        x.len(),
        x.iter().zip(&scales).map(|(v, s)| v / s),
    ))
}

/// Roots of `Σ coeffs[k]·x^k` (ascending order) from the companion matrix.
/// Leading coefficients that are numerically zero must be trimmed by the
/// caller.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::<C64>::zeros(deg, deg);
    for k in 0..deg {
        comp[(0, k)] = -coeffs[deg - 1 - k] / lead;
        if k + 1 < deg {
            comp[(k + 1, k)] = C64::new(1.0, 0.0);
        }
    }
    comp.schur().eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
}

/// Group nearly equal values; `tol` is relative to the largest magnitude with
/// an absolute floor.
pub fn count_distinct(values: &[C64], rel_tol: f64, floor: f64) -> usize {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = (rel_tol * scale).max(floor);
    let mut reps: Vec<C64> = Vec::new();
    for &v in values {
        if !reps.iter().any(|r| (r - v).norm() <= tol) {
            reps.push(v);
        }
    }
    reps.len()
}

pub fn poly_eval(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * x + a)
}
