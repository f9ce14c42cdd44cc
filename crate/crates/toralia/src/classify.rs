//! Classification of a catalog embedding by its number of branch points,
//! checked against the constructive normal form.

use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::lattice::{reduce_modular, Lattice, ModularClass};
use crate::normalform::{abelianization_dim, invariance_residual, normal_form, structure_agreement, verify_brackets, AliaGenerators, InvariantRing, RingGenerator};
use crate::numeric::{scaled_diff, C64};
use crate::sl2rep::standard_rep;
use crate::torusgroup::{branch_points, translation_subgroup, GroupEmbedding, GroupKind};
use std::fmt;

/// Thresholds used by [`cross_validate`].
pub const BRACKET_TOL: f64 = 1e-7;
pub const INVARIANCE_TOL: f64 = 1e-8;
pub const STRUCTURE_FIT_TOL: f64 = 1e-6;
pub const J_REL_TOL: f64 = 1e-7;
/// Agreement of an extracted cubic with `4x³ − g₂x − g₃` after rescaling.
pub const CUBIC_TOL: f64 = 1e-6;
pub const CROSS_SAMPLES: usize = 30;
pub const CROSS_SEED: u64 = 0xc1a55;

/// The three isomorphism families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `𝔰𝔩₂ ⊗ ℂ[℘, ℘′]`, no branch points.
    CurrentAlgebra,
    /// Two branch points.
    Onsager,
    /// `[E,F] = H ⊗ (4x³ − g₂x − g₃)`, three branch points.
    SFamily,
}

impl AlgebraKind {
    pub fn from_branch_count(n: usize) -> Result<Self> {
        match n {
            0 => Ok(Self::CurrentAlgebra),
            2 => Ok(Self::Onsager),
            3 => Ok(Self::SFamily),
            n => Err(Error::Inconsistent(format!("{n} branch points; only 0, 2 or 3 can occur"))),
        }
    }

    /// Roots of the structure polynomial this kind requires.
    pub fn root_count(&self) -> usize {
        match self {
            Self::CurrentAlgebra => 0,
            Self::Onsager => 2,
            Self::SFamily => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::CurrentAlgebra => "CurrentAlgebra",
            Self::Onsager => "Onsager",
            Self::SFamily => "SFamily",
        }
    }

    /// Expected kind per group family, read off the catalog.
    pub fn expected_for(kind: GroupKind, param: u32) -> Self {
        match kind {
            GroupKind::CnTranslation | GroupKind::C2xC2Translation => Self::CurrentAlgebra,
            GroupKind::ClRotation if param == 2 => Self::SFamily,
            GroupKind::Dn => Self::SFamily,
            GroupKind::ClRotation | GroupKind::A4 => Self::Onsager,
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Intermediate data behind a classification.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub label: String,
    /// Order of the translation subgroup `t(Γ)`.
    pub translation_order: usize,
    /// `T/t(Γ)` as computed, before reduction.
    pub quotient: Lattice,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub kind: AlgebraKind,
    /// Class of `T/t(Γ)`; absent for the Onsager family.
    pub tau_class: Option<ModularClass>,
    pub branch_count: usize,
    pub j_invariant: Option<C64>,
    pub provenance: Provenance,
    /// Set for the `S` family: whether the τ-class is a complete invariant
    /// there is not known, so it is metadata only.
    pub tau_caveat: bool,
}

pub fn classify(emb: &GroupEmbedding) -> Result<Classification> {
    let branch_count = branch_points(emb).count;
    let kind = AlgebraKind::from_branch_count(branch_count)?;
    let (sub, quotient) = translation_subgroup(emb)?;
    let (tau_class, j_invariant) = if kind == AlgebraKind::Onsager {
        (None, None)
    } else {
        let cls = reduce_modular(quotient.tau())?;
        let j = Weierstrass::new(&Lattice::new(cls.tau_reduced)?).j_invariant();
        (Some(cls), Some(j))
    };
    Ok(Classification {
        kind,
        tau_class,
        branch_count,
        j_invariant,
        provenance: Provenance { label: emb.label(), translation_order: sub.order(), quotient },
        tau_caveat: kind == AlgebraKind::SFamily,
    })
}

/// One line of a cross-validation report: `value` must not exceed `limit`
/// (or, for counts, must equal it).
#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl CheckEntry {
    fn below(name: &'static str, value: f64, limit: f64) -> Self {
        Self { name, value, limit, passed: value.is_finite() && value < limit }
    }

    fn equal(name: &'static str, value: usize, want: usize) -> Self {
        Self { name, value: value as f64, limit: want as f64, passed: value == want }
    }
}

#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub classification: Classification,
    pub abelianization_dim: Option<usize>,
    pub entries: Vec<CheckEntry>,
    /// Set when the normal form could not be built at all.
    pub error: Option<String>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.entries.iter().all(|e| e.passed)
    }
}

/// Build the normal form with character `j` and check it against the
/// classification. Failures are report entries, not errors; only a failed
/// classification itself is returned as `Err`.
pub fn cross_validate(emb: &GroupEmbedding, j: i64) -> Result<CrossValidation> {
    let classification = classify(emb)?;
    let mut out = CrossValidation { classification, abelianization_dim: None, entries: Vec::new(), error: None };
    let g = match standard_rep(emb, j).and_then(|rep| normal_form(emb, &rep, j)) {
        Ok(g) => g,
        Err(e) => {
            out.error = Some(e.to_string());
            return Ok(out);
        }
    };
    let cls = &out.classification;
    let mut entries = Vec::new();
    entries.push(CheckEntry::equal("kind_matches_group", (cls.kind == AlgebraKind::expected_for(emb.kind(), emb.param())) as usize, 1));
    let dim = abelianization_dim(&g).ok();
    entries.push(CheckEntry::equal("abelianization_dim", dim.unwrap_or(usize::MAX), cls.branch_count));
    entries.push(CheckEntry::equal("structure_roots", root_shape(&g, dim), cls.kind.root_count()));
    let br = verify_brackets(&g, CROSS_SAMPLES, CROSS_SEED);
    entries.push(CheckEntry::below("bracket_residual", br.max(), BRACKET_TOL));
    entries.push(CheckEntry::below("invariance_residual", invariance_residual(&g, CROSS_SAMPLES / 2, CROSS_SEED), INVARIANCE_TOL));
    entries.push(CheckEntry::below("structure_fit_residual", g.structure().fit_residual, STRUCTURE_FIT_TOL));
    entries.push(CheckEntry::below("structure_agreement", structure_agreement(&g, CROSS_SAMPLES, CROSS_SEED), STRUCTURE_FIT_TOL));
    if let Some(j0) = cls.j_invariant {
        let ring_j = Weierstrass::new(g.ring().lattice()).j_invariant();
        entries.push(CheckEntry::below("j_consistency", scaled_diff(ring_j, j0), J_REL_TOL));
    }
    if cls.kind == AlgebraKind::SFamily {
        entries.push(CheckEntry::below("cubic_shape", cubic_defect(&g), CUBIC_TOL));
    }
    out.abelianization_dim = dim;
    out.entries = entries;
    Ok(out)
}

/// Roots counted the way the kind is phrased: a constant has none.
fn root_shape(g: &AliaGenerators, dim: Option<usize>) -> usize {
    match g.structure().univariate.len() {
        0 => usize::MAX,
        1 => 0,
        _ => dim.unwrap_or(usize::MAX),
    }
}

/// Distance of the structure polynomial, rescaled to leading coefficient 4,
/// from `4x³ − g₂x − g₃` of the ring lattice. Only meaningful when the ring
/// is `ℂ[℘]`.
fn cubic_defect(g: &AliaGenerators) -> f64 {
    let u = &g.structure().univariate;
    let InvariantRing::Polynomial { lattice, generator: RingGenerator::Wp } = g.ring() else {
        return f64::INFINITY;
    };
    if u.len() != 4 {
        return f64::INFINITY;
    }
    let w = Weierstrass::new(lattice);
    let want = [-w.g3(), -w.g2(), C64::new(0.0, 0.0), C64::new(4.0, 0.0)];
    let k = 4.0 / u[3];
    let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
    u.iter().zip(&want).map(|(a, b)| (a * k - b).norm() / scale).fold(0.0, f64::max)
}
