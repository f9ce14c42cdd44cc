//! The equivariant functions `P_j = Σ_k ω_N^{−kj} v(z − kα)` with
//! `v = ℘′/(℘ − ℘(α))`, and the constants `λ, μ` of the quadratic identity
//! they satisfy.

use super::function::{character_project, cyclic_character, probe_points, Divisor, TorusFunction};
use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::lattice::{sublattice_basis, Lattice, TorsionPoint};
use crate::numeric::{c, C64};
use crate::torusgroup::{GroupEmbedding, GroupKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Probe points for fitting stay this far (in min periods) from the orbit.
pub const FIT_SEPARATION: f64 = 0.15;
/// Held-out points used to validate a fitted identity.
pub const HELD_OUT: usize = 20;
/// Residual bound for the λ, μ identity at held-out points.
pub const LAMBDA_MU_TOL: f64 = 1e-7;
/// Floor below which `μ` counts as zero.
pub const MU_FLOOR: f64 = 1e-9;

const RETRIES: u64 = 8;

#[derive(Clone, Debug)]
pub struct PFamily {
    emb: GroupEmbedding,
    alpha: TorsionPoint,
    n: u32,
    v: TorusFunction,
}

impl PFamily {
    /// Family for a cyclic translation group of order `N ≥ 2`.
    pub fn new(emb: &GroupEmbedding) -> Result<Self> {
        if emb.kind() != GroupKind::CnTranslation {
            return Err(Error::Unsupported(format!("P-functions need a translation group, got {}", emb.label())));
        }
        let alpha = emb.shift().ok_or_else(|| Error::Inconsistent("translation group without shift".into()))?;
        let n = emb.param();
        if n < 2 || alpha.order() != n as i64 {
            return Err(Error::Domain(format!("shift {alpha} must have order N ≥ 2")));
        }
        let lattice = *emb.lattice();
        let w = Arc::new(Weierstrass::new(&lattice));
        let wa = w.wp(alpha.to_complex(&lattice));
        let poles = Divisor::from([(TorsionPoint::zero(), 1), (alpha, 1), (alpha.neg(), 1)]);
        let v = TorusFunction::new(&lattice, poles, move |z| match w.eval(z) {
            Some((p, dp)) => dp / (p - wa),
            None => c(f64::INFINITY, 0.0),
        });
        Ok(Self { emb: emb.clone(), alpha, n, v })
    }

    /// Family on `Λ̂` for even `N`, carrying a shift of order `2N` with the
    /// same complex value as `α`.
    pub fn cover(emb: &GroupEmbedding) -> Result<Self> {
        let (cover, _) = cover_embedding(emb)?;
        Self::new(&cover)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> TorsionPoint {
        self.alpha
    }

    pub fn alpha_value(&self) -> C64 {
        self.alpha.to_complex(self.emb.lattice())
    }

    pub fn lattice(&self) -> &Lattice {
        self.emb.lattice()
    }

    pub fn embedding(&self) -> &GroupEmbedding {
        &self.emb
    }

    /// `v = ℘′/(℘ − ℘(α))`.
    pub fn v(&self) -> &TorusFunction {
        &self.v
    }

    /// `P_j = N·π_{χ_j}(v)`; depends on `j mod N` only.
    pub fn p(&self, j: i64) -> TorusFunction {
        let j = j.rem_euclid(self.n as i64);
        let proj = character_project(&self.v, &self.emb, &cyclic_character(j)).expect("cyclic group is abelian");
        proj.scale(c(self.n as f64, 0.0))
    }

    /// Orbit `{kα}` where every `P_j` may have poles.
    pub fn orbit_points(&self) -> Vec<C64> {
        (0..self.n as i64).map(|k| self.alpha.times(k).to_complex(self.lattice())).collect()
    }

    /// `Λ_(α) = Λ + ℤα`, the lattice of the quotient torus.
    pub fn quotient_lattice(&self) -> Result<Lattice> {
        quotient_lattice(self.lattice(), &self.alpha)
    }
}

pub fn quotient_lattice(lattice: &Lattice, alpha: &TorsionPoint) -> Result<Lattice> {
    let n = alpha.n();
    sublattice_basis(&[(n, 0), (0, n), (alpha.a(), alpha.b())], n, lattice)
}

/// Double cover `Λ̂ ⊂ Λ` for even `N` and the order-`2N` translation by the
/// same `α`: `Λ̂ = 2ℤω₁ + ℤω₂` when `a` is odd, `ℤω₁ + 2ℤω₂` otherwise.
pub fn cover_embedding(emb: &GroupEmbedding) -> Result<(GroupEmbedding, Lattice)> {
    if emb.kind() != GroupKind::CnTranslation {
        return Err(Error::Unsupported("double cover is built for translation groups".into()));
    }
    let alpha = emb.shift().ok_or_else(|| Error::Inconsistent("translation group without shift".into()))?;
    let n = alpha.n();
    if n % 2 != 0 {
        return Err(Error::Domain("double cover is only needed for even N".into()));
    }
    let lattice = emb.lattice();
    let (cover, shift) = if alpha.a() % 2 != 0 {
        let l = Lattice::with_scale(lattice.scale() * 2.0, lattice.tau() / 2.0)?;
        (l, TorsionPoint::new(alpha.a(), 2 * alpha.b(), 2 * n)?)
    } else {
        let l = Lattice::with_scale(lattice.scale(), lattice.tau() * 2.0)?;
        (l, TorsionPoint::new(2 * alpha.a(), alpha.b(), 2 * n)?)
    };
    debug_assert!((shift.to_complex(&cover) - alpha.to_complex(lattice)).norm() < 1e-12);
    Ok((GroupEmbedding::cn_translation(&cover, shift)?, cover))
}

/// Fitted constants of `P_{2j}P_{−j}² − P_{−2j}P_j² = λP_{−k}P_k + μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaMu {
    pub lambda: C64,
    pub mu: C64,
    /// Largest scaled residual over held-out points.
    pub residual: f64,
}

/// Left and right building blocks of the identity at `z`.
fn identity_terms(p: &[TorusFunction; 6], z: C64) -> (C64, C64) {
    let [pj, pmj, p2j, pm2j, pk, pmk] = p;
    let lhs = p2j.eval(z) * pmj.eval(z).powi(2) - pm2j.eval(z) * pj.eval(z).powi(2);
    (lhs, pmk.eval(z) * pk.eval(z))
}

pub fn fit_lambda_mu(family: &PFamily, j: i64, k: i64, seed: u64) -> Result<LambdaMu> {
    let n = family.order() as i64;
    if k.rem_euclid(n) == 0 {
        return Err(Error::InvalidCharacter { j: k, order: n as u32 });
    }
    let fns = [family.p(j), family.p(-j), family.p(2 * j), family.p(-2 * j), family.p(k), family.p(-k)];
    let orbit = family.orbit_points();
    let held = probe_points(family.lattice(), &orbit, HELD_OUT, seed ^ 0x9e37_79b9, FIT_SEPARATION);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let pair = probe_points(family.lattice(), &orbit, 2, rng.gen(), FIT_SEPARATION);
        let (l0, g0) = identity_terms(&fns, pair[0]);
        let (l1, g1) = identity_terms(&fns, pair[1]);
        if (g0 - g1).norm() < 1e-6 * g0.norm().max(g1.norm()).max(1.0) {
            continue;
        }
        let lambda = (l0 - l1) / (g0 - g1);
        let mu = l0 - lambda * g0;
        let residual = held
            .iter()
            .map(|&z| {
                let (l, g) = identity_terms(&fns, z);
                (l - lambda * g - mu).norm() / l.norm().max(1.0)
            })
            .fold(0.0, f64::max);
        if residual >= LAMBDA_MU_TOL {
            continue;
        }
        let nonzero_expected = n >= 3 && (k - j).rem_euclid(n) * (k + j).rem_euclid(n) == 0 && (2 * j).rem_euclid(n) != 0;
        if nonzero_expected && mu.norm() <= MU_FLOOR {
            return Err(Error::Construction(format!("μ vanished for N = {n}, j = {j}, k = {k}")));
        }
        return Ok(LambdaMu { lambda, mu, residual });
    }
    Err(Error::Construction(format!("no well-conditioned λ, μ fit for N = {n}, j = {j}, k = {k}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::function::{character_defect, probe_for, residue_at, sup_norm};
    use crate::lattice::torus_distance;
    use crate::numeric::{root_of_unity, scaled_diff};
    use std::f64::consts::PI;

    fn family(tau: C64, alpha: TorsionPoint) -> PFamily {
        let l = Lattice::new(tau).unwrap();
        PFamily::new(&GroupEmbedding::cn_translation(&l, alpha).unwrap()).unwrap()
    }

    #[test]
    fn p_zero_vanishes() {
        for n in 3..=6 {
            let f = family(c(0.31, 1.07), TorsionPoint::new(1, 2, n).unwrap());
            let p0 = f.p(0);
            let pts = probe_for(&p0, 200, 5);
            assert!(sup_norm(&p0, &pts) < 1e-9, "N = {n}");
            let pn = f.p(n);
            assert!(pts.iter().take(10).all(|&z| scaled_diff(pn.eval(z), p0.eval(z)) < 1e-12));
        }
    }

    #[test]
    fn residues_on_the_orbit() {
        for n in 3..=6i64 {
            let f = family(c(0.31, 1.07), TorsionPoint::new(1, 2, n).unwrap());
            for j in 1..n {
                let expect = -2.0 + 2.0 * (2.0 * PI * j as f64 / n as f64).cos();
                let r0 = residue_at(&f.p(j), c(0.0, 0.0)).unwrap();
                assert!((r0 - c(expect, 0.0)).norm() < 1e-6, "N = {n}, j = {j}: {r0}");
            }
        }
        let f = family(c(0.0, 1.0), TorsionPoint::new(1, 0, 4).unwrap());
        let p = f.p(1);
        let r0 = residue_at(&p, c(0.0, 0.0)).unwrap();
        let ra = residue_at(&p, f.alpha_value()).unwrap();
        assert!(r0.norm() > 0.5);
        assert!((ra.norm() - r0.norm()).abs() < 1e-8);
    }

    #[test]
    fn reflection_swaps_characters() {
        let f = family(c(-0.2, 1.3), TorsionPoint::new(2, 1, 5).unwrap());
        for j in 1..5 {
            let (pj, pmj) = (f.p(j), f.p(-j));
            let pts = probe_for(&pj, 50, 11);
            for &z in &pts {
                assert!((pj.eval(-z) + pmj.eval(z)).norm() / pmj.eval(z).norm().max(1.0) < 1e-8);
            }
            assert!(character_defect(&pj, f.embedding(), &cyclic_character(j), &pts) < 1e-8);
        }
    }

    #[test]
    fn lambda_mu_identity() {
        let f5 = family(c(0.31, 1.07), TorsionPoint::new(1, 0, 5).unwrap());
        let lm = fit_lambda_mu(&f5, 1, 1, 3).unwrap();
        assert!(lm.residual < LAMBDA_MU_TOL);
        assert!(fit_lambda_mu(&f5, 2, 2, 3).unwrap().mu.norm() > MU_FLOOR);
        let f4 = family(c(0.31, 1.07), TorsionPoint::new(1, 0, 4).unwrap());
        assert!(fit_lambda_mu(&f4, 1, 1, 9).unwrap().residual < LAMBDA_MU_TOL);
        assert!(matches!(fit_lambda_mu(&f4, 1, 4, 9), Err(Error::InvalidCharacter { .. })));
    }

    #[test]
    fn hauptmodul_separates_orbits() {
        let f = family(c(0.31, 1.07), TorsionPoint::new(1, 0, 3).unwrap());
        let (p1, p2) = (f.p(1), f.p(2));
        let pts = probe_points(f.lattice(), &f.orbit_points(), 40, 2, 0.15);
        let alpha = f.alpha_value();
        for (i, &z) in pts.iter().enumerate() {
            for &w in &pts[i + 1..] {
                let same_orbit = (0..3).any(|k| torus_distance(z, w + alpha * k as f64, f.lattice()) < 1e-9);
                let (a, b) = ((p1.eval(z), p2.eval(z)), (p1.eval(w), p2.eval(w)));
                let gap = (a.0 - b.0).norm() + (a.1 - b.1).norm();
                let size = a.0.norm().max(a.1.norm()).max(b.0.norm()).max(b.1.norm()).max(1.0);
                if !same_orbit {
                    assert!(gap > 1e-6 * size);
                }
            }
        }
    }

    #[test]
    fn cover_keeps_shift_value() {
        let l = Lattice::new(c(0.1, 1.2)).unwrap();
        for alpha in [TorsionPoint::new(1, 0, 2).unwrap(), TorsionPoint::new(0, 1, 4).unwrap(), TorsionPoint::new(1, 3, 6).unwrap()] {
            let emb = GroupEmbedding::cn_translation(&l, alpha).unwrap();
            let (cover, cl) = cover_embedding(&emb).unwrap();
            assert_eq!(cover.param() as i64, 2 * alpha.n());
            assert!((cover.shift().unwrap().to_complex(&cl) - alpha.to_complex(&l)).norm() < 1e-12);
            let (w1, w2) = l.periods();
            assert!(cl.contains(2.0 * w1, 1e-9) && cl.contains(2.0 * w2, 1e-9));
            assert!(!cl.contains(w1, 1e-9) || !cl.contains(w2, 1e-9));
            let fam = PFamily::cover(&emb).unwrap();
            assert_eq!(fam.order() as i64, 2 * alpha.n());
            let omega = root_of_unity(1, 2 * alpha.n());
            let p = fam.p(1);
            let z = cl.point(0.37, 0.21);
            assert!(scaled_diff(p.eval(z - alpha.to_complex(&l)), omega * p.eval(z)) < 1e-9);
        }
    }
}
