//! Normal forms `[H,E] = 2E`, `[H,F] = −2F`, `[E,F] = H⊗p` for every
//! catalog case, verified pointwise, with `p` recovered by fitting.

use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::funcalg::fit::{fit_univariate, fit_wpoly, trim_coefficients, FitConfig};
use crate::funcalg::function::{probe_points, superlattice_points, Divisor, TorusFunction};
use crate::funcalg::pfamily::quotient_lattice;
use crate::funcalg::wpoly::WPoly;
use crate::intertwine::{psi, standard_phi, Intertwiner1, Intertwiner2};
use crate::lattice::Lattice;
use crate::numeric::{c, frob, poly_eval, poly_roots, scaled_diff, scaled_mdiff, C64, M2};
use crate::sl2rep::{basis_e, basis_f, basis_h, from_coords, GroupRepresentation};
use crate::torusgroup::{GroupEmbedding, GroupKind};
use nalgebra::Vector3;
use std::fmt;
use std::sync::Arc;

/// Seed for the `λ, μ` fit behind every `Φ_j`.
pub const PHI_SEED: u64 = 0x70a1;
/// Relative tolerance for dropping trailing structure coefficients.
pub const TRIM_TOL: f64 = 1e-9;
/// Two roots are merged when their gap is within this multiple of their
/// combined uncertainty. A true double root splits by `s` with uncertainty
/// about `s` each, so any factor above 1 merges it; larger factors start
/// merging the nearly degenerate roots of thin ring lattices.
pub const ROOT_SAFETY: f64 = 2.0;
pub const ROOT_FLOOR: f64 = 1e-9;
/// Smallest relative value error attributed to a fitted polynomial.
pub const ROOT_EPS: f64 = 1e-12;
/// Probe separation from poles when checking generators.
pub const GENERATOR_SEPARATION: f64 = 0.1;

/// Generator of a polynomial invariant ring, in terms of `℘, ℘′` of the ring
/// lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingGenerator {
    Wp,
    WpPrime,
    WpSquared,
    WpCubed,
}

impl RingGenerator {
    /// Pole order of the generator at the origin.
    pub fn weight(&self) -> usize {
        match self {
            Self::Wp => 2,
            Self::WpPrime => 3,
            Self::WpSquared => 4,
            Self::WpCubed => 6,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Wp => "wp",
            Self::WpPrime => "wp'",
            Self::WpSquared => "wp^2",
            Self::WpCubed => "wp^3",
        }
    }
}

/// `𝒪^Γ` described through the lattice whose `℘` it is built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InvariantRing {
    /// All elliptic functions for `lattice`, that is `ℂ[℘, ℘′]`.
    Elliptic { lattice: Lattice },
    /// `ℂ[t]` for a single generator `t`.
    Polynomial { lattice: Lattice, generator: RingGenerator },
}

impl InvariantRing {
    pub fn lattice(&self) -> &Lattice {
        match self {
            Self::Elliptic { lattice } | Self::Polynomial { lattice, .. } => lattice,
        }
    }

    /// The generator as a function on `carrier`.
    pub fn generator(&self, carrier: &Lattice) -> Result<Option<TorusFunction>> {
        let Self::Polynomial { lattice, generator } = self else {
            return Ok(None);
        };
        let f = match generator {
            RingGenerator::Wp => TorusFunction::wp_of(lattice, carrier)?,
            RingGenerator::WpPrime => TorusFunction::wp_prime_of(lattice, carrier)?,
            RingGenerator::WpSquared => TorusFunction::wp_of(lattice, carrier)?.powi(2),
            RingGenerator::WpCubed => TorusFunction::wp_of(lattice, carrier)?.powi(3),
        };
        Ok(Some(f))
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Elliptic { lattice } => format!("C[wp, wp'] of tau = {}", fmt_c(lattice.tau())),
            Self::Polynomial { lattice, generator } => format!("C[{}] of tau = {}", generator.name(), fmt_c(lattice.tau())),
        }
    }
}

fn fmt_c(z: C64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

/// The structure polynomial in two coordinates: as an element of `ℂ[℘,℘′]`
/// of the ring lattice, and as a polynomial in the ring generator.
#[derive(Clone, Debug, PartialEq)]
pub struct StructurePolynomial {
    pub wpoly: WPoly,
    /// Ascending coefficients in the ring generator (a single constant for
    /// elliptic rings).
    pub univariate: Vec<C64>,
    pub fit_residual: f64,
}

type Triple = Arc<dyn Fn(C64) -> [M2; 3] + Send + Sync>;
type Scalar = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Generators `(H, E, F)` of an automorphic Lie algebra as pointwise
/// `𝔰𝔩₂`-valued functions.
#[derive(Clone)]
pub struct AliaGenerators {
    emb: GroupEmbedding,
    rep: GroupRepresentation,
    ring: InvariantRing,
    triple: Triple,
    /// `p` as the construction gives it, `[E,F] = H⊗p` by design.
    nominal_p: Scalar,
    poles: Vec<C64>,
    structure: StructurePolynomial,
    structure_bound: usize,
}

impl fmt::Debug for AliaGenerators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AliaGenerators")
            .field("group", &self.emb.label())
            .field("ring", &self.ring)
            .field("structure", &self.structure)
            .finish()
    }
}

fn scalar(m: M2, k: C64) -> M2 {
    m * k
}

struct Draft {
    ring: InvariantRing,
    triple: Triple,
    p: Scalar,
    poles: Vec<C64>,
    bound: usize,
}

fn one() -> Scalar {
    Arc::new(|_| c(1.0, 0.0))
}

fn phi_triple(ph: Intertwiner1, factor: Option<Weierstrass>) -> Triple {
    Arc::new(move |z| {
        let k = factor.as_ref().map_or(c(1.0, 0.0), |w| w.wp_prime(z));
        [ph.h_display(z), scalar(ph.e_display(z), k), scalar(ph.f_display(z), k)]
    })
}

fn psi_triple(ps: Intertwiner2, half: Option<Weierstrass>) -> Triple {
    Arc::new(move |z| {
        let m = ps.matrix(z);
        let col = |k: usize| from_coords(&Vector3::new(m[(0, k)], m[(1, k)], m[(2, k)]));
        match &half {
            None => [col(0), col(1), col(2)],
            Some(w) => {
                let x = w.wp(z);
                [col(0), scalar(col(1), x * x), scalar(col(2), x)]
            }
        }
    })
}

fn draft(emb: &GroupEmbedding, j: i64) -> Result<Draft> {
    let lattice = *emb.lattice();
    match emb.kind() {
        GroupKind::CnTranslation if emb.param() == 1 => Ok(Draft {
            ring: InvariantRing::Elliptic { lattice },
            triple: Arc::new(|_| [basis_h(), basis_e(), basis_f()]),
            p: one(),
            poles: Vec::new(),
            bound: 0,
        }),
        GroupKind::CnTranslation => {
            let ph = standard_phi(emb, j, PHI_SEED)?;
            let ring = quotient_lattice(&lattice, &emb.shift().expect("translation shift"))?;
            let poles = ph.poles();
            Ok(Draft { ring: InvariantRing::Elliptic { lattice: ring }, triple: phi_triple(ph, None), p: one(), poles, bound: 0 })
        }
        GroupKind::Dn => {
            let ph = standard_phi(emb, j, PHI_SEED)?;
            let ring = quotient_lattice(&lattice, &emb.shift().expect("dihedral shift"))?;
            let poles = ph.poles();
            let w = Weierstrass::new(&ring);
            Ok(Draft {
                ring: InvariantRing::Polynomial { lattice: ring, generator: RingGenerator::Wp },
                triple: phi_triple(ph, Some(w.clone())),
                p: Arc::new(move |z| w.wp_prime(z).powi(2)),
                poles,
                bound: 6,
            })
        }
        GroupKind::ClRotation => {
            let w = Weierstrass::new(&lattice);
            let (generator, bound, ea, fa): (RingGenerator, usize, fn(C64, C64) -> C64, fn(C64, C64) -> C64) = match emb.param() {
                2 => (RingGenerator::Wp, 6, |_, y| y, |_, y| y),
                3 => (RingGenerator::WpPrime, 6, |x, _| x, |x, _| x * x),
                4 => (RingGenerator::WpSquared, 8, |_, y| y, |x, y| x * y),
                6 => (RingGenerator::WpCubed, 12, |x, y| x * y, |x, y| x * x * y),
                l => return Err(Error::Unsupported(format!("rotation of order {l}"))),
            };
            let xy = Arc::new(move |z| w.eval(z).unwrap_or((c(f64::INFINITY, 0.0), c(f64::INFINITY, 0.0))));
            let xy2 = xy.clone();
            let triple: Triple = Arc::new(move |z| {
                let (x, y) = xy(z);
                [basis_h(), basis_e() * ea(x, y), basis_f() * fa(x, y)]
            });
            let p: Scalar = Arc::new(move |z| {
                let (x, y) = xy2(z);
                ea(x, y) * fa(x, y)
            });
            Ok(Draft { ring: InvariantRing::Polynomial { lattice, generator }, triple, p, poles: vec![c(0.0, 0.0)], bound })
        }
        GroupKind::C2xC2Translation => {
            let ps = psi(emb)?;
            let poles = ps.poles();
            let half = lattice.scaled(c(0.5, 0.0))?;
            Ok(Draft { ring: InvariantRing::Elliptic { lattice: half }, triple: psi_triple(ps, None), p: one(), poles, bound: 0 })
        }
        GroupKind::A4 => {
            let ps = psi(emb)?;
            let poles = ps.poles();
            let half = lattice.scaled(c(0.5, 0.0))?;
            let w = Weierstrass::new(&half);
            Ok(Draft {
                ring: InvariantRing::Polynomial { lattice: half, generator: RingGenerator::WpPrime },
                triple: psi_triple(ps, Some(w.clone())),
                p: Arc::new(move |z| w.wp(z).powi(3)),
                poles,
                bound: 6,
            })
        }
    }
}

/// Build the normal-form generators of `(𝔰𝔩₂ ⊗ 𝒪)^Γ` for `emb` acting on
/// `𝔰𝔩₂` through `rep` (the standard representation with character `j`),
/// and extract its structure polynomial.
pub fn normal_form(emb: &GroupEmbedding, rep: &GroupRepresentation, j: i64) -> Result<AliaGenerators> {
    let d = draft(emb, j)?;
    let mut g = AliaGenerators {
        emb: emb.clone(),
        rep: rep.clone(),
        ring: d.ring,
        triple: d.triple,
        nominal_p: d.p,
        poles: d.poles,
        structure: StructurePolynomial { wpoly: WPoly::zero(c(0.0, 0.0), c(0.0, 0.0)), univariate: Vec::new(), fit_residual: f64::NAN },
        structure_bound: d.bound,
    };
    g.structure = structure_polynomial(&g)?;
    Ok(g)
}

impl AliaGenerators {
    pub fn embedding(&self) -> &GroupEmbedding {
        &self.emb
    }

    pub fn representation(&self) -> &GroupRepresentation {
        &self.rep
    }

    pub fn ring(&self) -> &InvariantRing {
        &self.ring
    }

    pub fn structure(&self) -> &StructurePolynomial {
        &self.structure
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    /// `[H(z), E(z), F(z)]`.
    pub fn eval(&self, z: C64) -> [M2; 3] {
        (self.triple)(z)
    }

    /// `p(z)` for the structure function built into the construction.
    pub fn p_at(&self, z: C64) -> C64 {
        (self.nominal_p)(z)
    }

    /// `p(z)` from the fitted structure polynomial. Near the roots of a
    /// polynomial with large coefficients this loses absolute accuracy,
    /// which is why the bracket check uses [`Self::p_at`].
    pub fn p_fit_at(&self, z: C64) -> C64 {
        self.structure.wpoly.eval_at(&Weierstrass::new(self.ring.lattice()), z)
    }

    /// Pointwise coefficient `q` with `[E,F] = q·H`, as the Hermitian
    /// projection `⟨[E,F], H⟩/‖H‖²`. The trace form `tr([E,F]H)/tr(H²)` would
    /// cancel catastrophically near poles, where `tr H² = 2` but `|H|` is large.
    pub fn pairing(&self, z: C64) -> C64 {
        let [h, e, f] = self.eval(z);
        let ef = e * f - f * e;
        let num: C64 = ef.iter().zip(h.iter()).map(|(a, b)| a * b.conj()).sum();
        num / h.norm_squared()
    }

    /// Copy with `F` multiplied by `k` but the same structure polynomial
    /// (negative control).
    pub fn with_scaled_f(&self, k: C64) -> Self {
        let inner = self.triple.clone();
        let mut out = self.clone();
        out.triple = Arc::new(move |z| {
            let [h, e, f] = inner(z);
            [h, e, f * k]
        });
        out
    }

    /// Copy with `E` perturbed by `ε|E|·e` (negative control).
    pub fn with_perturbed_e(&self, eps: C64) -> Self {
        let inner = self.triple.clone();
        let mut out = self.clone();
        out.triple = Arc::new(move |z| {
            let [h, e, f] = inner(z);
            [h, e + basis_e() * (eps * frob(&e).max(1.0)), f]
        });
        out
    }

    /// Probe points on the carrier torus away from the generators' poles.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<C64> {
        probe_points(self.emb.lattice(), &self.poles, count, seed, GENERATOR_SEPARATION)
    }
}

/// Largest pointwise bracket and trace residuals (scaled).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketReport {
    pub he: f64,
    pub hf: f64,
    pub ef: f64,
    pub trace: f64,
}

impl BracketReport {
    pub fn max(&self) -> f64 {
        self.he.max(self.hf).max(self.ef)
    }
}

pub fn verify_brackets(g: &AliaGenerators, n_samples: usize, seed: u64) -> BracketReport {
    let mut r = BracketReport { he: 0.0, hf: 0.0, ef: 0.0, trace: 0.0 };
    for z in g.sample(n_samples, seed) {
        let [h, e, f] = g.eval(z);
        let br = |a: &M2, b: &M2| a * b - b * a;
        r.he = r.he.max(scaled_mdiff(&br(&h, &e), &(e * c(2.0, 0.0))));
        r.hf = r.hf.max(scaled_mdiff(&br(&h, &f), &(f * c(-2.0, 0.0))));
        r.ef = r.ef.max(scaled_mdiff(&br(&e, &f), &(h * g.p_at(z))));
        for m in [h, e, f] {
            r.trace = r.trace.max(m.trace().norm() / frob(&m).max(1.0));
        }
    }
    r
}

/// `max ‖ρ(γ)X(γ⁻¹z) − X(z)‖` (scaled) over all elements and generators.
pub fn invariance_residual(g: &AliaGenerators, n_samples: usize, seed: u64) -> f64 {
    let emb = &g.emb;
    let mut worst = 0.0f64;
    for z in g.sample(n_samples, seed) {
        let here = g.eval(z);
        for k in 0..emb.order() {
            let inv = &emb.elements()[emb.inverse_index(k)].map;
            let there = g.eval(inv.apply(z));
            let act = g.rep.image(k);
            for (x, y) in there.iter().zip(&here) {
                worst = worst.max(scaled_mdiff(&act.apply(x), y));
            }
        }
    }
    worst
}

/// `max |p_fit − p|` (scaled) over probe points: the extracted structure
/// polynomial against the structure function of the construction.
pub fn structure_agreement(g: &AliaGenerators, n_samples: usize, seed: u64) -> f64 {
    g.sample(n_samples, seed).into_iter().map(|z| scaled_diff(g.p_fit_at(z), g.p_at(z))).fold(0.0, f64::max)
}

/// Fit the pairing `q` into the invariant ring.
pub fn structure_polynomial(g: &AliaGenerators) -> Result<StructurePolynomial> {
    let carrier = *g.emb.lattice();
    let ring_lattice = *g.ring.lattice();
    let poles: Divisor = superlattice_points(&ring_lattice, &carrier)?
        .into_iter()
        .map(|p| (p, g.structure_bound.max(1) as u32))
        .collect();
    let me = g.clone();
    let q = TorusFunction::new(&carrier, poles, move |z| me.pairing(z));
    let cfg = FitConfig::default();
    let wpoly = fit_wpoly(&q, &ring_lattice, g.structure_bound, cfg)
        .map_err(|e| Error::Inconsistent(format!("structure polynomial of {}: {e}", g.emb.label())))?;
    let (univariate, fit_residual) = match g.ring.generator(&carrier)? {
        None => {
            let (coef, res) = fit_univariate(&q, &TorusFunction::constant(&carrier, c(0.0, 0.0)), 0, cfg)?;
            (coef, res)
        }
        Some(t) => {
            let gen = match g.ring {
                InvariantRing::Polynomial { generator, .. } => generator,
                InvariantRing::Elliptic { .. } => unreachable!(),
            };
            fit_univariate(&q, &t, g.structure_bound / gen.weight(), cfg)
                .map_err(|e| Error::Inconsistent(format!("structure polynomial of {}: {e}", g.emb.label())))?
        }
    };
    Ok(StructurePolynomial { wpoly, univariate: trim_coefficients(univariate, TRIM_TOL), fit_residual })
}

/// Roots of the structure polynomial in the ring generator.
pub fn structure_roots(g: &AliaGenerators) -> Vec<C64> {
    poly_roots(&g.structure.univariate)
}

/// `dim 𝔄/[𝔄,𝔄]`: zero when `p` is a nonzero constant, otherwise the number
/// of distinct roots of `p`.
pub fn abelianization_dim(g: &AliaGenerators) -> Result<usize> {
    let u = &g.structure.univariate;
    let scale = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Inconsistent(format!("structure polynomial of {} vanishes", g.emb.label())));
    }
    if u.len() == 1 {
        return Ok(0);
    }
    Ok(count_roots(u, g.structure.fit_residual))
}

/// Distinct roots of `u`, given a relative value error `eta` in the fitted
/// polynomial. A root `r` moves by about `eta·max(1,|u(r)|)/|u′(r)|`, which
/// blows up at genuine multiple roots and keeps nearly degenerate but
/// distinct roots apart.
fn count_roots(u: &[C64], eta: f64) -> usize {
    let eta = eta.max(ROOT_EPS);
    let du: Vec<C64> = u.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
    let roots = poly_roots(u);
    let spread: Vec<f64> = roots
        .iter()
        .map(|&r| eta * poly_eval(u, r).norm().max(1.0) / poly_eval(&du, r).norm().max(f64::MIN_POSITIVE))
        .collect();
    let mut reps: Vec<usize> = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        let merged = reps.iter().any(|&k| {
            let gap = (r - roots[k]).norm();
            gap <= ROOT_FLOOR * (1.0 + r.norm()) || gap <= ROOT_SAFETY * (spread[i] + spread[k])
        });
        if !merged {
            reps.push(i);
        }
    }
    reps.len()
}
