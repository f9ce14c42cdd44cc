//! Weierstrass `℘`, `℘′` and the lattice invariants.
//!
//! Every lattice is first rewritten as `λ·(ℤ ⊕ ℤτ′)` with `τ′` in the
//! fundamental domain, so `|q| = |e^{2πiτ′}| ≤ e^{-π√3} ≈ 0.0043` and the
//! Lambert-type series below converge after a handful of terms:
//!
//! ```text
//! ℘(u)  = -π²/3·E₂ + π²/sin²(πu) - 8π² Σ n qⁿ/(1-qⁿ) cos(2πnu)
//! ℘′(u) = -2π³ cos(πu)/sin³(πu) + 16π³ Σ n² qⁿ/(1-qⁿ) sin(2πnu)
//! g₂ = (4π⁴/3)·E₄,  g₃ = (8π⁶/27)·E₆
//! ```
//!
//! and then `℘_Λ(z) = λ⁻²℘(z/λ)` by homogeneity.

use crate::lattice::{reduce_modular, Lattice};
use crate::numeric::{c, C64, I};
use std::f64::consts::PI;

/// Series truncation settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesConfig {
    /// Hard cap on the number of q-series terms.
    pub max_terms: usize,
    /// Stop once a term falls below `rel_tol` times the running sum.
    pub rel_tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { max_terms: 64, rel_tol: 1e-18 }
    }
}

/// Below this reduced radius (in units of the shortest period) the Laurent
/// expansion is used instead of the trigonometric series.
pub const LAURENT_RADIUS: f64 = 1e-6;

/// `g₂, g₃`, half-period values, discriminant and `j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticInvariants {
    pub g2: C64,
    pub g3: C64,
    pub e1: C64,
    pub e2: C64,
    pub e3: C64,
    pub discriminant: C64,
    pub j: C64,
}

/// Precomputed evaluator for `℘` and `℘′` of one lattice.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    lattice: Lattice,
    /// `Λ = λ·(ℤ ⊕ ℤτ′)`.
    lambda: C64,
    tau_red: C64,
    q: C64,
    e2_series: C64,
    g2_norm: C64,
    g3_norm: C64,
    cfg: SeriesConfig,
}

impl Weierstrass {
    pub fn new(lattice: &Lattice) -> Self {
        Self::with_config(lattice, SeriesConfig::default())
    }

    pub fn with_config(lattice: &Lattice, cfg: SeriesConfig) -> Self {
        let m = reduce_modular(lattice.tau()).expect("lattice has Im tau > 0");
        let [_, [cc, d]] = m.transform;
        let lambda = lattice.scale() * (lattice.tau() * cc as f64 + d as f64);
        let tau_red = m.tau_reduced;
        let q = (2.0 * PI * I * tau_red).exp();
        let lambert = |k: i32| -> C64 {
            let mut sum = c(0.0, 0.0);
            let mut qn = c(1.0, 0.0);
            for n in 1..=cfg.max_terms {
                qn *= q;
                let term = qn / (1.0 - qn) * (n as f64).powi(k);
                sum += term;
                if term.norm() <= cfg.rel_tol * sum.norm().max(1.0) {
                    break;
                }
            }
            sum
        };
        let e2_series = 1.0 - 24.0 * lambert(1);
        let e4 = 1.0 + 240.0 * lambert(3);
        let e6 = 1.0 - 504.0 * lambert(5);
        Self {
            lattice: *lattice,
            lambda,
            tau_red,
            q,
            e2_series,
            g2_norm: 4.0 * PI.powi(4) / 3.0 * e4,
            g3_norm: 8.0 * PI.powi(6) / 27.0 * e6,
            cfg,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn g2(&self) -> C64 {
        self.g2_norm / self.lambda.powi(4)
    }

    pub fn g3(&self) -> C64 {
        self.g3_norm / self.lambda.powi(6)
    }

    pub fn discriminant(&self) -> C64 {
        self.g2().powi(3) - 27.0 * self.g3().powi(2)
    }

    pub fn j_invariant(&self) -> C64 {
        1728.0 * self.g2_norm.powi(3) / (self.g2_norm.powi(3) - 27.0 * self.g3_norm.powi(2))
    }

    /// Half-period values `(℘(ω₁/2), ℘(ω₂/2), ℘((ω₁+ω₂)/2))` for the basis the
    /// lattice was given in.
    pub fn half_period_values(&self) -> (C64, C64, C64) {
        let (w1, w2) = self.lattice.periods();
        (self.wp(w1 / 2.0), self.wp(w2 / 2.0), self.wp((w1 + w2) / 2.0))
    }

    pub fn invariants(&self) -> EllipticInvariants {
        let (e1, e2, e3) = self.half_period_values();
        EllipticInvariants {
            g2: self.g2(),
            g3: self.g3(),
            e1,
            e2,
            e3,
            discriminant: self.discriminant(),
            j: self.j_invariant(),
        }
    }

    /// Representative of `u` (normalised coordinates) in the centred cell
    /// `|Re u| ≤ 1/2`, `|Im u| ≤ Im τ′/2`.
    fn centre(&self, u: C64) -> C64 {
        let n = (u.im / self.tau_red.im).round();
        let u = u - self.tau_red * n;
        u - u.re.round()
    }

    /// `(℘(z), ℘′(z))`, or `None` on a lattice point.
    pub fn eval(&self, z: C64) -> Option<(C64, C64)> {
        let u = self.centre(z / self.lambda);
        if u.norm() == 0.0 {
            return None;
        }
        let (p, dp) = if u.norm() < LAURENT_RADIUS {
            self.laurent(u)
        } else {
            self.series(u)
        };
        Some((p / self.lambda.powi(2), dp / self.lambda.powi(3)))
    }

    /// `℘(z)`; returns complex infinity on lattice points.
    pub fn wp(&self, z: C64) -> C64 {
        self.eval(z).map_or(c(f64::INFINITY, 0.0), |v| v.0)
    }

    /// `℘′(z)`; returns complex infinity on lattice points.
    pub fn wp_prime(&self, z: C64) -> C64 {
        self.eval(z).map_or(c(f64::INFINITY, 0.0), |v| v.1)
    }

    fn laurent(&self, u: C64) -> (C64, C64) {
        let (g2, g3) = (self.g2_norm, self.g3_norm);
        let u2 = u * u;
        let p = 1.0 / u2 + g2 / 20.0 * u2 + g3 / 28.0 * u2 * u2 + g2 * g2 / 1200.0 * u2 * u2 * u2;
        let dp = -2.0 / (u2 * u) + g2 / 10.0 * u + g3 / 7.0 * u2 * u + g2 * g2 / 200.0 * u2 * u2 * u;
        (p, dp)
    }

    fn series(&self, u: C64) -> (C64, C64) {
        let s = (PI * u).sin();
        let co = (PI * u).cos();
        let mut p = -PI * PI / 3.0 * self.e2_series + PI * PI / (s * s);
        let mut dp = -2.0 * PI.powi(3) * co / (s * s * s);
        let w = (2.0 * PI * I * u).exp();
        let winv = 1.0 / w;
        let (mut wn, mut wmn, mut qn) = (c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let mut acc_p = c(0.0, 0.0);
        let mut acc_dp = c(0.0, 0.0);
        for n in 1..=self.cfg.max_terms {
            wn *= w;
            wmn *= winv;
            qn *= self.q;
            let nf = n as f64;
            let lam = qn / (1.0 - qn);
            let cos_n = (wn + wmn) / 2.0;
            let sin_n = (wn - wmn) / (2.0 * I);
            let tp = lam * nf * cos_n;
            let tdp = lam * nf * nf * sin_n;
            acc_p += tp;
            acc_dp += tdp;
            if tp.norm() <= self.cfg.rel_tol * acc_p.norm().max(1.0)
                && tdp.norm() <= self.cfg.rel_tol * acc_dp.norm().max(1.0)
            {
                break;
            }
        }
        p -= 8.0 * PI * PI * acc_p;
        dp += 16.0 * PI.powi(3) * acc_dp;
        (p, dp)
    }
}

pub fn invariants(lattice: &Lattice) -> EllipticInvariants {
    Weierstrass::new(lattice).invariants()
}

pub fn wp(z: C64, lattice: &Lattice) -> C64 {
    Weierstrass::new(lattice).wp(z)
}

pub fn wp_prime(z: C64, lattice: &Lattice) -> C64 {
    Weierstrass::new(lattice).wp_prime(z)
}

/// `|℘_{αΛ}(z) − α⁻²℘_Λ(z/α)|`.
pub fn scale_check(alpha: C64, z: C64, lattice: &Lattice) -> f64 {
    let scaled = lattice.scaled(alpha).expect("alpha must be nonzero");
    (wp(z, &scaled) - wp(z / alpha, lattice) / (alpha * alpha)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Symmetric truncated lattice sum for `℘`, convergent thanks to the
    /// `-1/ω²` counter-terms.
    fn wp_lattice_sum(z: C64, l: &Lattice, m: i64) -> C64 {
        let (w1, w2) = l.periods();
        let mut s = 1.0 / (z * z);
        for a in -m..=m {
            for b in -m..=m {
                if a == 0 && b == 0 {
                    continue;
                }
                let w = w1 * a as f64 + w2 * b as f64;
                s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
            }
        }
        s
    }

    #[test]
    fn series_agrees_with_lattice_sum() {
        let l = Lattice::new(c(0.31, 1.07)).unwrap();
        let z = c(0.23, 0.41);
        let a = wp(z, &l);
        let b = wp_lattice_sum(z, &l, 120);
        // Truncation error of the direct sum ~ 1/M.
        assert!((a - b).norm() < 1e-3, "{a} vs {b}");
    }

    #[test]
    fn square_lattice_half_periods() {
        let w = Weierstrass::new(&Lattice::square());
        let (e1, e2, e3) = w.half_period_values();
        assert!((e2 + e1).norm() < 1e-10);
        assert!(e3.norm() < 1e-10);
        assert!(w.g3().norm() < 1e-10);
    }

    #[test]
    fn hexagonal_g2_vanishes() {
        assert!(Weierstrass::new(&Lattice::hexagonal()).g2().norm() < 1e-10);
    }

    #[test]
    fn lattice_points_are_poles() {
        let l = Lattice::new(c(0.2, 1.4)).unwrap();
        let w = Weierstrass::new(&l);
        assert!(w.eval(c(0.0, 0.0)).is_none());
        assert!(w.eval(l.point(2.0, -1.0)).is_none() || w.wp(l.point(2.0, -1.0)).norm() > 1e20);
        assert!(w.wp(c(0.0, 0.0)).re.is_infinite());
    }

    #[test]
    fn laurent_branch_matches_series_at_the_switch() {
        let l = Lattice::new(c(0.1, 1.1)).unwrap();
        let w = Weierstrass::new(&l);
        let u = c(0.7, 0.4) * (LAURENT_RADIUS * 1.0001);
        let (p_series, dp_series) = w.series(u);
        let (p_laurent, dp_laurent) = w.laurent(u);
        assert!((p_series - p_laurent).norm() / p_series.norm() < 1e-9);
        assert!((dp_series - dp_laurent).norm() / dp_series.norm() < 1e-9);
    }

    #[test]
    fn scale_check_examples() {
        let sq = Lattice::square();
        assert!(scale_check(c(1.0, 0.0), c(0.3, 0.4), &sq) < 1e-12);
        assert!(scale_check(c(2.0, 0.0), c(0.3, 0.4), &sq) < 1e-9);
        // α = i on the square lattice: ℘(i⁻¹z) = −℘(z).
        let z = c(0.3, 0.17);
        assert!((wp(z / I, &sq) + wp(z, &sq)).norm() < 1e-9);
        assert!(scale_check(I, z, &sq) < 1e-9);
    }

    #[test]
    fn discriminant_matches_half_period_product() {
        let inv = invariants(&Lattice::new(c(-0.4, 0.9)).unwrap());
        let alt = 16.0 * ((inv.e1 - inv.e2) * (inv.e1 - inv.e3) * (inv.e2 - inv.e3)).powi(2);
        assert!((alt - inv.discriminant).norm() < 1e-8 * inv.discriminant.norm());
    }

    fn lattice_strategy() -> impl Strategy<Value = Lattice> {
        (-0.5f64..0.5, 0.6f64..2.0, 0.3f64..2.0, -1.0f64..1.0)
            .prop_map(|(re, im, r, th)| Lattice::with_scale(C64::from_polar(r, th), c(re, im)).unwrap())
    }

    proptest! {
        #[test]
        fn wp_even_and_prime_odd(l in lattice_strategy(), s in 0.05f64..0.95, t in 0.05f64..0.95) {
            let w = Weierstrass::new(&l);
            let z = l.point(s, t);
            let scale = w.wp(z).norm().max(1.0);
            prop_assert!((w.wp(-z) - w.wp(z)).norm() < 1e-9 * scale);
            let dscale = w.wp_prime(z).norm().max(1.0);
            prop_assert!((w.wp_prime(-z) + w.wp_prime(z)).norm() < 1e-9 * dscale);
        }

        #[test]
        fn double_periodicity(re in -0.5f64..0.5, im in 0.8f64..1.5, s in 0.1f64..0.9, t in 0.1f64..0.9) {
            let l = Lattice::new(c(re, im)).unwrap();
            let w = Weierstrass::new(&l);
            let z = l.point(s, t);
            let (w1, w2) = l.periods();
            prop_assert!((w.wp(z + w1) - w.wp(z)).norm() < 1e-9);
            prop_assert!((w.wp(z + w2) - w.wp(z)).norm() < 1e-9);
        }

        #[test]
        fn wp_prime_vanishes_at_half_periods(l in lattice_strategy()) {
            let w = Weierstrass::new(&l);
            let (w1, w2) = l.periods();
            for h in [w1 / 2.0, w2 / 2.0, (w1 + w2) / 2.0] {
                let scale = w.wp(h).norm().max(1.0).powf(1.5);
                prop_assert!(w.wp_prime(h).norm() < 1e-8 * scale);
            }
        }

        #[test]
        fn invariant_homogeneity(l in lattice_strategy(), r in 0.3f64..3.0, th in -3.0f64..3.0) {
            let alpha = C64::from_polar(r, th);
            let a = invariants(&l);
            let b = invariants(&l.scaled(alpha).unwrap());
            prop_assert!((b.g2 - a.g2 / alpha.powi(4)).norm() <= 1e-8 * b.g2.norm().max(1e-300));
            prop_assert!((b.g3 - a.g3 / alpha.powi(6)).norm() <= 1e-8 * b.g3.norm().max(1e-300));
        }

        #[test]
        fn j_is_modular(re in -0.5f64..0.5, im in 0.9f64..1.6, k in -3i64..3) {
            let tau = c(re, im);
            let other = -1.0 / (tau + k as f64);
            let ja = Weierstrass::new(&Lattice::new(tau).unwrap()).j_invariant();
            let jb = Weierstrass::new(&Lattice::new(other).unwrap()).j_invariant();
            prop_assert!((ja - jb).norm() <= 1e-8 * ja.norm().max(1.0));
        }

        #[test]
        fn half_period_symmetric_functions(l in lattice_strategy()) {
            let inv = invariants(&l);
            let scale = inv.g2.norm().max(inv.g3.norm()).max(1.0);
            prop_assert!((inv.e1 + inv.e2 + inv.e3).norm() < 1e-10 * scale);
            let s2 = inv.e1 * inv.e2 + inv.e1 * inv.e3 + inv.e2 * inv.e3;
            prop_assert!((s2 + inv.g2 / 4.0).norm() < 1e-9 * scale);
            prop_assert!((inv.e1 * inv.e2 * inv.e3 - inv.g3 / 4.0).norm() < 1e-9 * scale);
        }
    }
}
