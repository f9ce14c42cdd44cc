//! The odd functions `p₀, p₁, p₂` attached to the translation group by half
//! periods, and the constants relating their squares.

use super::function::{character_project, TorusFunction};
use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, TorsionPoint};
use crate::numeric::{c, root_of_unity, C64, I};
use crate::sl2rep::Character;
use crate::torusgroup::{GroupEmbedding, GroupKind};
use std::collections::BTreeMap;

/// `p_χ = 4π_χ(1/℘′)` for the three nontrivial characters.
#[derive(Clone, Debug)]
pub struct KleinFunctions {
    /// Sign `−1` under both half-period translations.
    pub p0: TorusFunction,
    /// Sign `−1` under `ω₁/2`, `+1` under `ω₂/2`.
    pub p1: TorusFunction,
    /// Sign `+1` under `ω₁/2`, `−1` under `ω₂/2`.
    pub p2: TorusFunction,
}

pub fn inverse_wp_prime(lattice: &Lattice) -> Result<TorusFunction> {
    let w = Weierstrass::new(lattice);
    let poles: BTreeMap<TorsionPoint, u32> = [(1, 0), (0, 1), (1, 1)]
        .into_iter()
        .map(|(a, b)| TorsionPoint::new(a, b, 2).map(|p| (p, 1)))
        .collect::<Result<_>>()?;
    Ok(TorusFunction::new(lattice, poles, move |z| 1.0 / w.wp_prime(z)))
}

/// The projection of `4/℘′` onto the character with the given signs.
pub fn klein_projection(emb: &GroupEmbedding, chi: [i64; 2]) -> Result<TorusFunction> {
    let u = inverse_wp_prime(emb.lattice())?;
    Ok(character_project(&u, emb, &Character::new(chi.to_vec()))?.scale(c(4.0, 0.0)))
}

pub fn p_small(emb: &GroupEmbedding) -> Result<KleinFunctions> {
    if emb.kind() != GroupKind::C2xC2Translation {
        return Err(Error::Unsupported(format!("p-functions need the half-period group, got {}", emb.label())));
    }
    Ok(KleinFunctions {
        p0: klein_projection(emb, [1, 1])?,
        p1: klein_projection(emb, [1, 0])?,
        p2: klein_projection(emb, [0, 1])?,
    })
}

/// Coefficients of `p₁² = α₁p₂² + α₂`, `p₀² = β₁p₂² + β₂` and the square
/// roots entering the intertwiner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C2C2Constants {
    pub alpha1: C64,
    pub alpha2: C64,
    pub beta1: C64,
    pub beta2: C64,
    pub a1: C64,
    pub b1: C64,
    pub sqrt_a2b2: C64,
    pub e: (C64, C64, C64),
}

/// Bases with `τ` this close to `ω₃` or `ω₆` use the fixed hexagonal roots.
pub const HEXAGONAL_TOL: f64 = 1e-9;

/// `τ = ω₃` or `τ = ω₆`: the hexagonal lattice in either of its two
/// standard bases. Constants depend on which one, since the bases swap
/// `e₂` and `e₃`.
pub fn is_hexagonal_basis(lattice: &Lattice) -> bool {
    let t = lattice.tau();
    (t - root_of_unity(1, 3)).norm() < HEXAGONAL_TOL || (t - root_of_unity(1, 6)).norm() < HEXAGONAL_TOL
}

pub fn c2c2_constants(lattice: &Lattice) -> C2C2Constants {
    let (e1, e2, e3) = Weierstrass::new(lattice).half_period_values();
    let ra = (e1 - e3) / (e2 - e3);
    let rb = (e1 - e2) / (e2 - e3);
    let alpha1 = ra * ra;
    let beta1 = rb * rb;
    let alpha2 = 4.0 / ((e1 - e2) * (e2 - e3).powi(2));
    let beta2 = 4.0 / ((e1 - e3) * (e2 - e3).powi(2));
    let (a1, b1) = if is_hexagonal_basis(lattice) {
        (-I, c(1.0, 0.0))
    } else {
        (ra.powf(1.5), rb.powf(1.5))
    };
    let sqrt_a2b2 = a1 * b1 * (alpha2 / alpha1 - beta2 / beta1);
    C2C2Constants { alpha1, alpha2, beta1, beta2, a1, b1, sqrt_a2b2, e: (e1, e2, e3) }
}

impl C2C2Constants {
    /// Coefficient `κ` in `p₀² = κ·(℘_{½Λ} − 4e₃)`.
    pub fn p0_square_coefficient(&self) -> C64 {
        let (e1, e2, e3) = self.e;
        1.0 / ((e1 - e3).powi(2) * (e2 - e3).powi(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::function::{character_defect, probe_for, residue_at, sup_norm};
    use crate::numeric::scaled_diff;

    fn lattices() -> Vec<Lattice> {
        vec![Lattice::square(), Lattice::hexagonal(), Lattice::new(c(0.31, 1.07)).unwrap(), Lattice::new(c(-0.2, 1.3)).unwrap()]
    }

    #[test]
    fn trivial_projection_vanishes() {
        for l in lattices() {
            let emb = GroupEmbedding::c2xc2(&l).unwrap();
            let p00 = klein_projection(&emb, [0, 0]).unwrap();
            let pts = probe_for(&p00, 100, 4);
            assert!(sup_norm(&p00, &pts) < 1e-9);
        }
    }

    #[test]
    fn characters_and_parity() {
        let l = Lattice::new(c(0.31, 1.07)).unwrap();
        let emb = GroupEmbedding::c2xc2(&l).unwrap();
        let k = p_small(&emb).unwrap();
        let pts = probe_for(&k.p1, 30, 5);
        for (f, chi) in [(&k.p0, [1, 1]), (&k.p1, [1, 0]), (&k.p2, [0, 1])] {
            assert!(character_defect(f, &emb, &Character::new(chi.to_vec()), &pts) < 1e-9);
            assert!(pts.iter().all(|&z| (f.eval(-z) + f.eval(z)).norm() < 1e-9 * f.eval(z).norm().max(1.0)));
            assert!(residue_at(f, c(0.0, 0.0)).unwrap().norm() > 1e-3);
        }
        let (w1, w2) = l.periods();
        for &z in &pts {
            assert!(scaled_diff(k.p1.eval(z + w1 / 2.0), -k.p1.eval(z)) < 1e-9);
            assert!(scaled_diff(k.p1.eval(z + w2 / 2.0), k.p1.eval(z)) < 1e-9);
        }
        assert!(p_small(&GroupEmbedding::cl_rotation(&l, 2).unwrap()).is_err());
    }

    #[test]
    fn quoted_constant_values() {
        let sq = c2c2_constants(&Lattice::square());
        assert!((sq.alpha1 - 1.0).norm() < 1e-9);
        assert!((sq.beta1 - 4.0).norm() < 1e-9);
        let w = root_of_unity(1, 3);
        let hex6 = c2c2_constants(&Lattice::new(root_of_unity(1, 6)).unwrap());
        assert!((hex6.alpha1 - w).norm() < 1e-9);
        assert!((hex6.beta1 - w * w).norm() < 1e-9);
        let hex3 = c2c2_constants(&Lattice::hexagonal());
        assert!((hex3.alpha1 - w * w).norm() < 1e-9);
        assert!((hex3.beta1 - w).norm() < 1e-9);
        let mut all = lattices();
        all.push(Lattice::new(root_of_unity(1, 6)).unwrap());
        for l in all {
            let k = c2c2_constants(&l);
            let (e1, e2, e3) = k.e;
            assert!(scaled_diff(k.a1 * k.a1, ((e1 - e3) / (e2 - e3)).powi(3)) < 1e-9);
            assert!(scaled_diff(k.b1 * k.b1, ((e1 - e2) / (e2 - e3)).powi(3)) < 1e-9);
            assert!(scaled_diff(k.sqrt_a2b2 * k.sqrt_a2b2, k.alpha2 * k.beta2) < 1e-9);
            assert!(k.alpha2.norm() > 0.0 && k.beta2.norm() > 0.0);
        }
    }

    #[test]
    fn square_relations_and_factorisation() {
        for l in lattices() {
            let emb = GroupEmbedding::c2xc2(&l).unwrap();
            let k = p_small(&emb).unwrap();
            let kc = c2c2_constants(&l);
            let half = Weierstrass::new(&l.scaled(c(0.5, 0.0)).unwrap());
            let pts = probe_for(&k.p0, 30, 6);
            for &z in &pts {
                let (p0, p1, p2) = (k.p0.eval(z), k.p1.eval(z), k.p2.eval(z));
                assert!(scaled_diff(p1 * p1, kc.alpha1 * p2 * p2 + kc.alpha2) < 1e-7);
                assert!(scaled_diff(p0 * p0, kc.beta1 * p2 * p2 + kc.beta2) < 1e-7);
                let lhs = (kc.a1 / kc.alpha1 * p1 + kc.b1 / kc.beta1 * p0) * (kc.a1 / kc.alpha1 * p1 - kc.b1 / kc.beta1 * p0);
                assert!(scaled_diff(lhs, p2 * p2) < 1e-7);
                let wh = half.wp(z);
                assert!(scaled_diff(p0 * p0, kc.p0_square_coefficient() * (wh - 4.0 * kc.e.2)) < 1e-7);
            }
        }
    }

    #[test]
    fn sum_of_squares_is_constant_only_when_g2_vanishes() {
        for (l, constant) in [(Lattice::hexagonal(), true), (Lattice::square(), false), (Lattice::new(c(0.31, 1.07)).unwrap(), false)] {
            let k = p_small(&GroupEmbedding::c2xc2(&l).unwrap()).unwrap();
            let pts = probe_for(&k.p0, 40, 8);
            let vals: Vec<C64> = pts.iter().map(|&z| k.p0.eval(z).powi(2) + k.p1.eval(z).powi(2) + k.p2.eval(z).powi(2)).collect();
            let spread = vals.iter().map(|v| scaled_diff(*v, vals[0])).fold(0.0, f64::max);
            assert_eq!(spread < 1e-7, constant, "{l:?}: spread {spread}");
        }
    }
}
