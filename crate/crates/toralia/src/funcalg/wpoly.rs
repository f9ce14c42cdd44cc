//! Elements `a(x) + b(x)·y` of `ℂ[x, y]/(y² − 4x³ + g₂x + g₃)`.

use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::numeric::{c, poly_eval, scaled_diff, C64};
use std::fmt;

/// Invariants closer than this (scaled) are treated as the same curve.
const CURVE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct WPoly {
    a: Vec<C64>,
    b: Vec<C64>,
    g2: C64,
    g3: C64,
}

fn trim(mut v: Vec<C64>) -> Vec<C64> {
    while v.last().is_some_and(|z| *z == c(0.0, 0.0)) {
        v.pop();
    }
    v
}

fn add_into(dst: &mut Vec<C64>, src: &[C64], factor: C64) {
    if dst.len() < src.len() {
        dst.resize(src.len(), c(0.0, 0.0));
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s * factor;
    }
}

fn convolve(p: &[C64], q: &[C64]) -> Vec<C64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![c(0.0, 0.0); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (k, y) in q.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

impl WPoly {
    /// `a(x) + b(x)·y` with ascending coefficient lists.
    pub fn new(a: Vec<C64>, b: Vec<C64>, g2: C64, g3: C64) -> Self {
        Self { a: trim(a), b: trim(b), g2, g3 }
    }

    pub fn zero(g2: C64, g3: C64) -> Self {
        Self::new(Vec::new(), Vec::new(), g2, g3)
    }

    pub fn constant(v: C64, g2: C64, g3: C64) -> Self {
        Self::new(vec![v], Vec::new(), g2, g3)
    }

    pub fn x(g2: C64, g3: C64) -> Self {
        Self::new(vec![c(0.0, 0.0), c(1.0, 0.0)], Vec::new(), g2, g3)
    }

    pub fn y(g2: C64, g3: C64) -> Self {
        Self::new(Vec::new(), vec![c(1.0, 0.0)], g2, g3)
    }

    /// Ring of the curve attached to `wp`.
    pub fn for_curve(wp: &Weierstrass) -> (C64, C64) {
        (wp.g2(), wp.g3())
    }

    pub fn a(&self) -> &[C64] {
        &self.a
    }

    pub fn b(&self) -> &[C64] {
        &self.b
    }

    pub fn invariants(&self) -> (C64, C64) {
        (self.g2, self.g3)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// `Some(v)` when the element is the constant `v`.
    pub fn as_constant(&self) -> Option<C64> {
        match (self.a.len(), self.b.len()) {
            (0, 0) => Some(c(0.0, 0.0)),
            (1, 0) => Some(self.a[0]),
            _ => None,
        }
    }

    /// Pole order at the origin with `x` of weight 2 and `y` of weight 3.
    pub fn weighted_degree(&self) -> Option<usize> {
        let da = self.a.len().checked_sub(1).map(|d| 2 * d);
        let db = self.b.len().checked_sub(1).map(|d| 2 * d + 3);
        da.max(db)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if scaled_diff(self.g2, other.g2) > CURVE_TOL || scaled_diff(self.g3, other.g3) > CURVE_TOL {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        add_into(&mut a, &other.a, c(1.0, 0.0));
        add_into(&mut b, &other.b, c(1.0, 0.0));
        Ok(Self::new(a, b, self.g2, self.g3))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(
            self.a.iter().map(|z| z * k).collect(),
            self.b.iter().map(|z| z * k).collect(),
            self.g2,
            self.g3,
        )
    }

    /// Product with `y²` rewritten as `4x³ − g₂x − g₃`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let cubic = [-self.g3, -self.g2, c(0.0, 0.0), c(4.0, 0.0)];
        let mut a = convolve(&self.a, &other.a);
        add_into(&mut a, &convolve(&convolve(&self.b, &other.b), &cubic), c(1.0, 0.0));
        let mut b = convolve(&self.a, &other.b);
        add_into(&mut b, &convolve(&self.b, &other.a), c(1.0, 0.0));
        Ok(Self::new(a, b, self.g2, self.g3))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        (0..k).try_fold(Self::constant(c(1.0, 0.0), self.g2, self.g3), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        poly_eval(&self.a, x) + poly_eval(&self.b, x) * y
    }

    /// Value at `z` using `(℘(z), ℘′(z))` of `wp`.
    pub fn eval_at(&self, wp: &Weierstrass, z: C64) -> C64 {
        match wp.eval(z) {
            Some((x, y)) => self.eval(x, y),
            None => c(f64::INFINITY, 0.0),
        }
    }

    /// Coefficients with modulus below `tol·max|coef|` set to zero.
    pub fn chop(&self, tol: f64) -> Self {
        let m = self.a.iter().chain(&self.b).map(|z| z.norm()).fold(0.0, f64::max);
        let f = |v: &[C64]| v.iter().map(|z| if z.norm() <= tol * m { c(0.0, 0.0) } else { *z }).collect();
        Self::new(f(&self.a), f(&self.b), self.g2, self.g3)
    }

    /// Largest coefficient difference, relative to the larger coefficient
    /// vector.
    pub fn distance(&self, other: &Self) -> f64 {
        let n = |v: &[C64], k: usize| v.get(k).copied().unwrap_or(c(0.0, 0.0));
        let la = self.a.len().max(other.a.len());
        let lb = self.b.len().max(other.b.len());
        let mut num = 0.0f64;
        let mut den = 1.0f64;
        for k in 0..la {
            num = num.max((n(&self.a, k) - n(&other.a, k)).norm());
            den = den.max(n(&self.a, k).norm()).max(n(&other.a, k).norm());
        }
        for k in 0..lb {
            num = num.max((n(&self.b, k) - n(&other.b, k)).norm());
            den = den.max(n(&self.b, k).norm()).max(n(&other.b, k).norm());
        }
        num / den
    }
}

fn fmt_poly(v: &[C64], var: &str, f: &mut fmt::Formatter<'_>, first: &mut bool) -> fmt::Result {
    for (k, z) in v.iter().enumerate() {
        if z.norm() == 0.0 {
            continue;
        }
        if !*first {
            write!(f, " + ")?;
        }
        *first = false;
        write!(f, "({:.6}{:+.6}i)", z.re, z.im)?;
        match k {
            0 => {}
            1 => write!(f, "·x")?,
            _ => write!(f, "·x^{k}")?,
        }
        write!(f, "{var}")?;
    }
    Ok(())
}

impl fmt::Display for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        fmt_poly(&self.a, "", f, &mut first)?;
        fmt_poly(&self.b, "·y", f, &mut first)?;
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
