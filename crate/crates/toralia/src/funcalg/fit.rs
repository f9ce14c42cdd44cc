//! Least-squares recovery of ring elements from sampled torus functions.

use super::function::{probe_points, TorusFunction};
use super::wpoly::WPoly;
use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numeric::{c, lstsq, poly_eval, scaled_diff, C64};
use nalgebra::{DMatrix, DVector};

/// Held-out residual above which a function is declared outside the ring.
pub const FIT_TOL: f64 = 1e-6;
/// Separation of fitting samples from poles, in min periods.
pub const FIT_SEPARATION: f64 = 0.15;
const HELD_OUT: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FitConfig {
    pub seed: u64,
    pub held_out: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { seed: 0x5eed, held_out: HELD_OUT }
    }
}

/// Samples on the carrier of `f`, away from its poles and from `avoid`.
fn samples(f: &TorusFunction, extra: &[C64], count: usize, seed: u64) -> Vec<C64> {
    let mut avoid = f.pole_points();
    avoid.extend_from_slice(extra);
    probe_points(f.lattice(), &avoid, count, seed, FIT_SEPARATION)
}

fn max_residual(rows: &[(C64, C64)]) -> f64 {
    rows.iter().map(|&(a, b)| scaled_diff(a, b)).fold(0.0, f64::max)
}

/// Express `f` as `a(℘) + b(℘)℘′` of `ring` with weighted degree at most
/// `degree_bound` (`℘` weight 2, `℘′` weight 3).
pub fn fit_wpoly(f: &TorusFunction, ring: &Lattice, degree_bound: usize, cfg: FitConfig) -> Result<WPoly> {
    let w = Weierstrass::new(ring);
    let na = degree_bound / 2 + 1;
    let nb = if degree_bound >= 3 { (degree_bound - 3) / 2 + 1 } else { 0 };
    let cols = na + nb;
    let ring_points: Vec<C64> = super::function::superlattice_points(ring, f.lattice())?
        .into_iter()
        .map(|p| p.to_complex(f.lattice()))
        .collect();
    let pts = samples(f, &ring_points, 3 * cols + 12 + cfg.held_out, cfg.seed);
    let (train, test) = pts.split_at(pts.len() - cfg.held_out);
    let row = |z: C64| -> Vec<C64> {
        let (x, y) = w.eval(z).unwrap_or((c(f64::NAN, 0.0), c(f64::NAN, 0.0)));
        let mut r: Vec<C64> = (0..na).map(|k| x.powi(k as i32)).collect();
        r.extend((0..nb).map(|k| x.powi(k as i32) * y));
        r
    };
    let a = DMatrix::from_fn(train.len(), cols, |i, k| row(train[i])[k]);
    let b = DVector::from_iterator(train.len(), train.iter().map(|&z| f.eval(z)));
    let coef = lstsq(&a, &b).ok_or_else(|| Error::Inconsistent("least squares failed".into()))?;
    let form = WPoly::new(coef.iter().take(na).copied().collect(), coef.iter().skip(na).copied().collect(), w.g2(), w.g3());
    let residual = max_residual(&test.iter().map(|&z| (f.eval(z), form.eval_at(&w, z))).collect::<Vec<_>>());
    if residual >= FIT_TOL {
        return Err(Error::NotInRing { residual });
    }
    Ok(form)
}

/// Univariate fit `f ≈ Σ c_k t^k` for `k ≤ degree`, validated at held-out
/// points. Returns ascending coefficients and the held-out residual.
pub fn fit_univariate(f: &TorusFunction, t: &TorusFunction, degree: usize, cfg: FitConfig) -> Result<(Vec<C64>, f64)> {
    let pts = samples(f, &t.pole_points(), 3 * (degree + 1) + 12 + cfg.held_out, cfg.seed);
    let (train, test) = pts.split_at(pts.len() - cfg.held_out);
    let a = DMatrix::from_fn(train.len(), degree + 1, |i, k| t.eval(train[i]).powi(k as i32));
    let b = DVector::from_iterator(train.len(), train.iter().map(|&z| f.eval(z)));
    let coef: Vec<C64> = lstsq(&a, &b).ok_or_else(|| Error::Inconsistent("least squares failed".into()))?.iter().copied().collect();
    let residual = max_residual(&test.iter().map(|&z| (f.eval(z), poly_eval(&coef, t.eval(z)))).collect::<Vec<_>>());
    if residual >= FIT_TOL {
        return Err(Error::NotInRing { residual });
    }
    Ok((coef, residual))
}

/// Drop trailing coefficients that are negligible against the largest one.
pub fn trim_coefficients(mut coef: Vec<C64>, rel: f64) -> Vec<C64> {
    let m = coef.iter().map(|z| z.norm()).fold(0.0, f64::max);
    while coef.len() > 1 && coef.last().is_some_and(|z| z.norm() <= rel * m) {
        coef.pop();
    }
    coef
}
