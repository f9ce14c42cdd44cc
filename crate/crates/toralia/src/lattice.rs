//! Complex lattices `ω₁(ℤ ⊕ ℤτ)`, exact torsion points, integer row reduction
//! for superlattices, and reduction of `τ` to the `SL₂(ℤ)` fundamental domain.
//!
//! The fundamental domain is `Re τ ∈ [-1/2, 1/2)`, `|τ| ≥ 1`, and on the unit
//! arc only `Re τ ≤ 0` is kept. With this convention the hexagonal class is
//! represented by `exp(2πi/3)` and the square class by `i`.

use crate::error::{Error, Result};
use crate::numeric::{c, C64};
use num_integer::Integer;
use std::f64::consts::PI;

/// Tolerance used when deciding which side of a boundary of the fundamental
/// domain a value lies on.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// A rank-2 lattice with oriented basis `(ω₁, ω₂) = (scale, scale·τ)`.
///
/// Most callers use `scale = 1`; scaled lattices appear as `½Λ`, as the
/// superlattices `Λ_(α)` and when checking homothety invariance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    scale: C64,
    tau: C64,
}

impl Lattice {
    pub fn new(tau: C64) -> Result<Self> {
        Self::with_scale(c(1.0, 0.0), tau)
    }

    pub fn with_scale(scale: C64, tau: C64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("Im(tau) must be positive, got {tau}")));
        }
        if scale.norm() == 0.0 || !scale.is_finite() {
            return Err(Error::Domain("lattice scale must be nonzero".into()));
        }
        Ok(Self { scale, tau })
    }

    pub fn square() -> Self {
        Self { scale: c(1.0, 0.0), tau: c(0.0, 1.0) }
    }

    /// `ℤ ⊕ ℤω₃` with `ω₃ = exp(2πi/3)`.
    pub fn hexagonal() -> Self {
        Self { scale: c(1.0, 0.0), tau: C64::from_polar(1.0, 2.0 * PI / 3.0) }
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn scale(&self) -> C64 {
        self.scale
    }

    pub fn periods(&self) -> (C64, C64) {
        (self.scale, self.scale * self.tau)
    }

    /// The homothetic lattice `α·Λ` with the same basis labels.
    pub fn scaled(&self, alpha: C64) -> Result<Self> {
        Self::with_scale(self.scale * alpha, self.tau)
    }

    /// `s·ω₁ + t·ω₂`.
    pub fn point(&self, s: f64, t: f64) -> C64 {
        self.scale * (c(s, 0.0) + self.tau * t)
    }

    /// Real coordinates `(s, t)` with `z = s·ω₁ + t·ω₂`.
    pub fn coords(&self, z: C64) -> (f64, f64) {
        let u = z / self.scale;
        let t = u.im / self.tau.im;
        (u.re - t * self.tau.re, t)
    }

    /// Same point set expressed in the reduced basis `λ(1, τ_red)`.
    pub fn canonical(&self) -> Self {
        let m = reduce_modular(self.tau).expect("valid lattice");
        let [_, [cc, d]] = m.transform;
        let lambda = self.scale * (self.tau * cc as f64 + d as f64);
        Self { scale: lambda, tau: m.tau_reduced }
    }

    /// Length of a shortest nonzero lattice vector.
    pub fn min_period(&self) -> f64 {
        self.canonical().scale.norm()
    }

    /// Whether both lattices contain exactly the same points.
    pub fn same_points(&self, other: &Lattice, tol: f64) -> bool {
        let (a1, a2) = self.periods();
        let (b1, b2) = other.periods();
        [b1, b2].iter().all(|&w| self.contains(w, tol)) && [a1, a2].iter().all(|&w| other.contains(w, tol))
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        let (s, t) = self.coords(z);
        (s - s.round()).abs() < tol && (t - t.round()).abs() < tol
    }
}

/// Result of reducing `τ` into the fundamental domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModularClass {
    pub tau_reduced: C64,
    /// `[[a, b], [c, d]]` with `(aτ + b)/(cτ + d) = tau_reduced`.
    pub transform: [[i64; 2]; 2],
}

impl ModularClass {
    pub fn apply(&self, tau: C64) -> C64 {
        let [[a, b], [cc, d]] = self.transform;
        (tau * a as f64 + b as f64) / (tau * cc as f64 + d as f64)
    }
}

/// Gauss reduction of `τ` modulo `SL₂(ℤ)`.
pub fn reduce_modular(tau: C64) -> Result<ModularClass> {
    if !(tau.im > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("Im(tau) must be positive, got {tau}")));
    }
    let mut t = tau;
    // Rows of the accumulated matrix acting by Möbius transformation.
    let (mut a, mut b, mut cc, mut d) = (1i64, 0i64, 0i64, 1i64);
    for _ in 0..10_000 {
        let mut n = (t.re + 0.5).floor() as i64;
        if t.re - n as f64 >= 0.5 - BOUNDARY_EPS {
            n += 1;
        }
        if n != 0 {
            t -= n as f64;
            a -= n * cc;
            b -= n * d;
        }
        let r2 = t.norm_sqr();
        if r2 < 1.0 - BOUNDARY_EPS {
            t = -1.0 / t;
            (a, b, cc, d) = (-cc, -d, a, b);
            continue;
        }
        if (r2 - 1.0).abs() <= BOUNDARY_EPS && t.re > BOUNDARY_EPS {
            t = -1.0 / t;
            (a, b, cc, d) = (-cc, -d, a, b);
        }
        break;
    }
    // Normalise the sign so that c > 0, or c = 0 and d > 0.
    if cc < 0 || (cc == 0 && d < 0) {
        (a, b, cc, d) = (-a, -b, -cc, -d);
    }
    Ok(ModularClass { tau_reduced: t, transform: [[a, b], [cc, d]] })
}

/// A point `(a·ω₁ + b·ω₂)/n` of the torus, stored exactly and in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    a: i64,
    b: i64,
    n: i64,
}

impl TorsionPoint {
    pub fn new(a: i64, b: i64, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("torsion denominator must be nonzero".into()));
        }
        Ok(Self::normalized(a, b, n))
    }

    fn normalized(a: i64, b: i64, n: i64) -> Self {
        let (mut a, mut b, mut n) = (a, b, n);
        if n < 0 {
            (a, b, n) = (-a, -b, -n);
        }
        a = a.rem_euclid(n);
        b = b.rem_euclid(n);
        let g = a.gcd(&b).gcd(&n);
        Self { a: a / g, b: b / g, n: n / g }
    }

    pub fn zero() -> Self {
        Self { a: 0, b: 0, n: 1 }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.n == 1
    }

    /// Additive order in `ℂ/Λ`; equal to the reduced denominator.
    pub fn order(&self) -> i64 {
        self.n
    }

    pub fn add(&self, o: &Self) -> Self {
        let l = self.n.lcm(&o.n);
        Self::normalized(self.a * (l / self.n) + o.a * (l / o.n), self.b * (l / self.n) + o.b * (l / o.n), l)
    }

    pub fn neg(&self) -> Self {
        Self::normalized(-self.a, -self.b, self.n)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn times(&self, k: i64) -> Self {
        Self::normalized(self.a * k, self.b * k, self.n)
    }

    /// Image under the lattice endomorphism with integer matrix `m` acting on
    /// row vectors of coordinates.
    pub fn transform(&self, m: &[[i64; 2]; 2]) -> Self {
        Self::normalized(
            self.a * m[0][0] + self.b * m[1][0],
            self.a * m[0][1] + self.b * m[1][1],
            self.n,
        )
    }

    pub fn to_complex(&self, lattice: &Lattice) -> C64 {
        lattice.point(self.a as f64 / self.n as f64, self.b as f64 / self.n as f64)
    }
}

impl std::fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.a, self.b, self.n)
    }
}

impl std::str::FromStr for TorsionPoint {
    type Err = Error;

    /// Parses `"a/b/n"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('/').collect();
        if parts.len() != 3 {
            return Err(Error::Domain(format!("expected a/b/n, got {s:?}")));
        }
        let mut v = [0i64; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.trim().parse().map_err(|_| Error::Domain(format!("bad integer {p:?}")))?;
        }
        Self::new(v[0], v[1], v[2])
    }
}

pub fn torsion_order(p: &TorsionPoint) -> i64 {
    p.order()
}

/// Hermite normal form of the subgroup of `ℤ²` spanned by `generators`
/// (coordinates `(x, y)` over `(ω₁, ω₂)`).
///
/// Returns `[(d, 0), (c, g)]` with `d, g > 0` and `0 ≤ c < d`: the real-axis
/// generator first, then the one carrying the `ω₂` component.
pub fn hnf_basis(generators: &[(i64, i64)]) -> Result<[(i64, i64); 2]> {
    // Pivot on the ω₂ coordinate, collecting the ω₁-only remainders.
    let mut pivot: Option<(i64, i64)> = None;
    let mut real_gcd = 0i64;
    for &(x, y) in generators {
        match pivot {
            None if y != 0 => pivot = Some((x, y)),
            None => real_gcd = real_gcd.gcd(&x),
            Some((px, py)) => {
                if y == 0 {
                    real_gcd = real_gcd.gcd(&x);
                    continue;
                }
                let eg = py.extended_gcd(&y);
                let g = eg.gcd;
                let new_pivot = (eg.x * px + eg.y * x, g);
                // (y/g)·pivot − (py/g)·row has zero ω₂ part.
                let rem = (y / g) * px - (py / g) * x;
                real_gcd = real_gcd.gcd(&rem);
                pivot = Some(new_pivot);
            }
        }
    }
    let rank = usize::from(pivot.is_some()) + usize::from(real_gcd != 0);
    let (Some((px, py)), true) = (pivot, real_gcd != 0) else {
        return Err(Error::DegenerateLattice { rank });
    };
    let (px, py) = if py < 0 { (-px, -py) } else { (px, py) };
    let d = real_gcd.abs();
    Ok([(d, 0), (px.rem_euclid(d), py)])
}

/// Lattice generated by the points `(x·ω₁ + y·ω₂)/n` of `base`.
pub fn sublattice_basis(generators: &[(i64, i64)], n: i64, base: &Lattice) -> Result<Lattice> {
    if n <= 0 {
        return Err(Error::Domain("denominator must be positive".into()));
    }
    let [(d, _), (cc, g)] = hnf_basis(generators)?;
    let (w1, w2) = base.periods();
    let v1 = w1 * (d as f64 / n as f64);
    let v2 = (w1 * cc as f64 + w2 * g as f64) / n as f64;
    Lattice::with_scale(v1, v2 / v1)
}

/// Representative of `z` in `{s·ω₁ + t·ω₂ : s, t ∈ [0, 1)}`.
pub fn torus_reduce(z: C64, lattice: &Lattice) -> C64 {
    let (s, t) = lattice.coords(z);
    lattice.point(unit_frac(s), unit_frac(t))
}

fn unit_frac(s: f64) -> f64 {
    let f = s - s.floor();
    if !(1e-12..=1.0 - 1e-12).contains(&f) {
        0.0
    } else {
        f
    }
}

/// Distance from `z` to `w` in `ℂ/Λ`.
pub fn torus_distance(z: C64, w: C64, lattice: &Lattice) -> f64 {
    let canon = lattice.canonical();
    let u = torus_reduce(z - w, &canon);
    let (w1, w2) = canon.periods();
    let mut best = f64::INFINITY;
    for i in -1..=1 {
        for j in -1..=1 {
            best = best.min((u + w1 * i as f64 + w2 * j as f64).norm());
        }
    }
    best
}
