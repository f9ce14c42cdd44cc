//! Meromorphic functions on a torus, carried as pure evaluators plus a
//! declared pole divisor.

use super::wpoly::WPoly;
use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::lattice::{torus_distance, Lattice, TorsionPoint};
use crate::numeric::{c, C64};
use crate::sl2rep::Character;
use crate::torusgroup::GroupEmbedding;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type Evaluator = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Pole bound: torsion point (in the carrier basis) to maximal order.
pub type Divisor = BTreeMap<TorsionPoint, u32>;

#[derive(Clone)]
pub struct TorusFunction {
    eval: Evaluator,
    poles: Divisor,
    closed_form: Option<WPoly>,
    lattice: Lattice,
}

impl fmt::Debug for TorusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusFunction")
            .field("poles", &self.poles)
            .field("closed_form", &self.closed_form)
            .field("lattice", &self.lattice)
            .finish()
    }
}

fn merge(a: &Divisor, b: &Divisor, sum: bool) -> Divisor {
    let mut out = a.clone();
    for (p, &m) in b {
        let e = out.entry(*p).or_insert(0);
        *e = if sum { *e + m } else { (*e).max(m) };
    }
    out
}

impl TorusFunction {
    pub fn new(lattice: &Lattice, poles: Divisor, eval: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(eval), poles, closed_form: None, lattice: *lattice }
    }

    pub fn constant(lattice: &Lattice, v: C64) -> Self {
        Self::new(lattice, Divisor::new(), move |_| v)
    }

    /// `℘` of `lattice`.
    pub fn wp(lattice: &Lattice) -> Self {
        let w = Weierstrass::new(lattice);
        let (g2, g3) = (w.g2(), w.g3());
        let poles = Divisor::from([(TorsionPoint::zero(), 2)]);
        Self::new(lattice, poles, move |z| w.wp(z)).with_closed_form(WPoly::x(g2, g3))
    }

    /// `℘′` of `lattice`.
    pub fn wp_prime(lattice: &Lattice) -> Self {
        let w = Weierstrass::new(lattice);
        let (g2, g3) = (w.g2(), w.g3());
        let poles = Divisor::from([(TorsionPoint::zero(), 3)]);
        Self::new(lattice, poles, move |z| w.wp_prime(z)).with_closed_form(WPoly::y(g2, g3))
    }

    /// `℘_ring` viewed on the coarser torus `ℂ/carrier`, `carrier ⊂ ring`.
    pub fn wp_of(ring: &Lattice, carrier: &Lattice) -> Result<Self> {
        let w = Weierstrass::new(ring);
        let poles = superlattice_points(ring, carrier)?.into_iter().map(|p| (p, 2)).collect();
        Ok(Self::new(carrier, poles, move |z| w.wp(z)))
    }

    pub fn wp_prime_of(ring: &Lattice, carrier: &Lattice) -> Result<Self> {
        let w = Weierstrass::new(ring);
        let poles = superlattice_points(ring, carrier)?.into_iter().map(|p| (p, 3)).collect();
        Ok(Self::new(carrier, poles, move |z| w.wp_prime(z)))
    }

    pub fn with_closed_form(mut self, form: WPoly) -> Self {
        self.closed_form = Some(form);
        self
    }

    pub fn closed_form(&self) -> Option<&WPoly> {
        self.closed_form.as_ref()
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.eval)(z)
    }

    pub fn evaluator(&self) -> Evaluator {
        self.eval.clone()
    }

    pub fn poles(&self) -> &Divisor {
        &self.poles
    }

    pub fn pole_points(&self) -> Vec<C64> {
        self.poles.keys().map(|p| p.to_complex(&self.lattice)).collect()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    fn same_carrier(&self, other: &Self) -> Result<()> {
        let (a1, a2) = self.lattice.periods();
        let (b1, b2) = other.lattice.periods();
        if (a1 - b1).norm() + (a2 - b2).norm() > 1e-12 * (a1.norm() + a2.norm()) {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_carrier(other)?;
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Ok(Self::new(&self.lattice, merge(&self.poles, &other.poles, false), move |z| f(z) + g(z)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_carrier(other)?;
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let mut out = Self::new(&self.lattice, merge(&self.poles, &other.poles, true), move |z| f(z) * g(z));
        if let (Some(a), Some(b)) = (&self.closed_form, &other.closed_form) {
            out.closed_form = a.mul(b).ok();
        }
        Ok(out)
    }

    pub fn scale(&self, k: C64) -> Self {
        let f = self.eval.clone();
        let mut out = Self::new(&self.lattice, self.poles.clone(), move |z| f(z) * k);
        out.closed_form = self.closed_form.as_ref().map(|w| w.scale(k));
        out
    }

    pub fn powi(&self, k: u32) -> Self {
        let f = self.eval.clone();
        let poles = self.poles.iter().map(|(p, m)| (*p, m * k)).collect();
        let mut out = Self::new(&self.lattice, poles, move |z| f(z).powi(k as i32));
        out.closed_form = self.closed_form.as_ref().and_then(|w| w.pow(k).ok());
        out
    }

    /// `z ↦ f(a·z + b)`; poles are not transported, the caller supplies them.
    pub fn precompose(&self, a: C64, b: C64, poles: Divisor) -> Self {
        let f = self.eval.clone();
        Self::new(&self.lattice, poles, move |z| f(a * z + b))
    }

    /// Distance on the torus from `z` to the nearest declared pole.
    pub fn pole_distance(&self, z: C64) -> f64 {
        self.pole_points()
            .into_iter()
            .map(|p| torus_distance(z, p, &self.lattice))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Points of `ring` modulo `carrier` as torsion points in the carrier basis.
pub fn superlattice_points(ring: &Lattice, carrier: &Lattice) -> Result<Vec<TorsionPoint>> {
    let (v1, v2) = ring.periods();
    let to_torsion = |v: C64| -> Result<TorsionPoint> {
        let (s, t) = carrier.coords(v);
        for n in 1..=64i64 {
            let (a, b) = ((s * n as f64).round(), (t * n as f64).round());
            if (a - s * n as f64).abs() < 1e-7 && (b - t * n as f64).abs() < 1e-7 {
                return TorsionPoint::new(a as i64, b as i64, n);
            }
        }
        Err(Error::LatticeMismatch)
    };
    let gens = [to_torsion(v1)?, to_torsion(v2)?];
    let mut points = vec![TorsionPoint::zero()];
    let mut frontier = points.clone();
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let q = p.add(g);
            if !points.contains(&q) {
                points.push(q);
                frontier.push(q);
            }
        }
    }
    points.sort();
    Ok(points)
}

/// Seeded probe set in the fundamental cell of `lattice`, keeping a distance
/// of at least `separation·min_period` from every point of `avoid`.
pub fn probe_points(lattice: &Lattice, avoid: &[C64], count: usize, seed: u64, separation: f64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gap = separation * lattice.min_period();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let z = lattice.point(rng.gen(), rng.gen());
        if avoid.iter().all(|&p| torus_distance(z, p, lattice) >= gap) {
            out.push(z);
        }
    }
    out
}

/// Default probe-grid separation from declared poles.
pub const PROBE_SEPARATION: f64 = 0.05;
pub const PROBE_COUNT: usize = 200;

/// Probe set avoiding the declared poles of `f`.
pub fn probe_for(f: &TorusFunction, count: usize, seed: u64) -> Vec<C64> {
    probe_points(f.lattice(), &f.pole_points(), count, seed, PROBE_SEPARATION)
}

pub fn sup_norm(f: &TorusFunction, points: &[C64]) -> f64 {
    points.iter().map(|&z| f.eval(z).norm()).fold(0.0, f64::max)
}

/// Number of quadrature nodes on a residue circle.
pub const RESIDUE_NODES: usize = 128;

/// `(1/2πi)∮ f dz` around `p` with an automatically chosen radius.
pub fn residue_at(f: &TorusFunction, p: C64) -> Result<C64> {
    let iso = isolation(f, p);
    residue_with_radius(f, p, 0.4 * iso, RESIDUE_NODES)
}

fn isolation(f: &TorusFunction, p: C64) -> f64 {
    let own = f.lattice().min_period();
    f.pole_points()
        .into_iter()
        .map(|q| torus_distance(p, q, f.lattice()))
        .filter(|&d| d > 1e-9 * own)
        .fold(own, f64::min)
}

/// Trapezoid rule with `nodes` points on `|z − p| = radius`.
pub fn residue_with_radius(f: &TorusFunction, p: C64, radius: f64, nodes: usize) -> Result<C64> {
    if radius <= 0.0 || radius >= isolation(f, p) {
        return Err(Error::Domain(format!("residue circle of radius {radius} meets another declared pole")));
    }
    let mut acc = c(0.0, 0.0);
    for k in 0..nodes {
        let w = C64::from_polar(radius, 2.0 * PI * k as f64 / nodes as f64);
        acc += f.eval(p + w) * w;
    }
    Ok(acc / nodes as f64)
}

/// `z ↦ (1/|Γ|) Σ χ̄(γ) f(γ⁻¹z)`.
pub fn character_project(f: &TorusFunction, emb: &GroupEmbedding, chi: &Character) -> Result<TorusFunction> {
    if !emb.kind().is_abelian() {
        return Err(Error::Unsupported(format!("{} is not abelian", emb.label())));
    }
    let probe = TorusFunction::constant(emb.lattice(), c(0.0, 0.0));
    f.same_carrier(&probe)?;
    let order = emb.order();
    let terms: Vec<(C64, crate::torusgroup::AffineAutomorphism)> = (0..order)
        .map(|k| (chi.value(emb, k).conj() / order as f64, emb.elements()[emb.inverse_index(k)].map))
        .collect();
    let mut poles = Divisor::new();
    for (p, &m) in f.poles() {
        for (_, g) in &terms {
            let e = poles.entry(g.apply_point(p)).or_insert(0);
            *e = (*e).max(m);
        }
    }
    let inner = f.evaluator();
    Ok(TorusFunction::new(emb.lattice(), poles, move |z| {
        terms.iter().map(|(w, g)| w * inner(g.apply(z))).sum()
    }))
}

/// `C_N` character `χ_j` with `χ_j(r) = ω_N^j`.
pub fn cyclic_character(j: i64) -> Character {
    Character::new(vec![j])
}

/// `max |f(γ⁻¹z) − χ(γ)f(z)|` over generators, relative to `max(1, |f(z)|)`.
pub fn character_defect(f: &TorusFunction, emb: &GroupEmbedding, chi: &Character, points: &[C64]) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..emb.order() {
        let inv = &emb.elements()[emb.inverse_index(k)].map;
        let x = chi.value(emb, k);
        for &z in points {
            let fz = f.eval(z);
            let d = (f.eval(inv.apply(z)) - x * fz).norm() / 1f64.max(fz.norm());
            worst = worst.max(d);
        }
    }
    worst
}
