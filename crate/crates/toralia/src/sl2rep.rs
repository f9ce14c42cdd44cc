//! `𝔰𝔩₂` in the ordered basis `𝓑 = (h, e, f)`, the adjoint action and the
//! representations `ρ: Γ → Aut(𝔰𝔩₂)` used for every catalog family.

use crate::error::{Error, Result};
use crate::numeric::{c, frob, inv2, root_of_unity, C64, I, M2, M3};
use crate::torusgroup::{GroupEmbedding, GroupKind};
use nalgebra::Vector3;
use num_integer::Integer;

pub type V3 = Vector3<C64>;

pub fn basis_h() -> M2 {
    M2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

pub fn basis_e() -> M2 {
    M2::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
}

pub fn basis_f() -> M2 {
    M2::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn basis() -> [M2; 3] {
    [basis_h(), basis_e(), basis_f()]
}

pub fn bracket(a: &M2, b: &M2) -> M2 {
    a * b - b * a
}

/// Coordinates of a traceless matrix `(x, y; z, −x)` in `𝓑`.
pub fn to_coords(m: &M2) -> V3 {
    V3::new(m[(0, 0)], m[(0, 1)], m[(1, 0)])
}

pub fn from_coords(v: &V3) -> M2 {
    M2::new(v[0], v[1], v[2], -v[0])
}

/// An automorphism of `𝔰𝔩₂` as a 3×3 matrix on `𝓑`, optionally remembering
/// a `GL₂` matrix it conjugates by (defined up to scalars).
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Automorphism {
    pub matrix: M3,
    pub lift: Option<M2>,
}

impl Sl2Automorphism {
    pub fn identity() -> Self {
        Self { matrix: M3::identity(), lift: Some(M2::identity()) }
    }

    pub fn apply(&self, x: &M2) -> M2 {
        from_coords(&(self.matrix * to_coords(x)))
    }

    pub fn compose(&self, other: &Self) -> Self {
        let lift = match (self.lift, other.lift) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        Self { matrix: self.matrix * other.matrix, lift }
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.matrix.try_inverse().expect("automorphisms are invertible"),
            lift: self.lift.and_then(|m| inv2(&m)),
        }
    }

    /// Largest bracket defect `‖φ[X,Y] − [φX, φY]‖` over basis pairs.
    pub fn bracket_defect(&self) -> f64 {
        let b = basis();
        let mut worst = 0.0f64;
        for x in &b {
            for y in &b {
                let lhs = self.apply(&bracket(x, y));
                let rhs = bracket(&self.apply(x), &self.apply(y));
                worst = worst.max(frob(&(lhs - rhs)));
            }
        }
        worst
    }
}

/// Matrix of `X ↦ mXm⁻¹` on `𝓑`.
pub fn ad(m: &M2) -> Result<Sl2Automorphism> {
    let inv = inv2(m).ok_or(Error::Singular)?;
    let cols: Vec<V3> = basis().iter().map(|x| to_coords(&(m * x * inv))).collect();
    Ok(Sl2Automorphism { matrix: M3::from_columns(&cols), lift: Some(*m) })
}

/// Closed form of `ad(m)` for `det m = 1`, `m = (a, b; c, d)`.
pub fn ad_unimodular(m: &M2) -> M3 {
    let (a, b, cc, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    M3::new(
        b * cc + a * d,
        -a * cc,
        b * d,
        -2.0 * a * b,
        a * a,
        -b * b,
        2.0 * cc * d,
        -cc * cc,
        d * d,
    )
}

pub fn diag2(a: C64, d: C64) -> M2 {
    M2::new(a, c(0.0, 0.0), c(0.0, 0.0), d)
}

/// `(0, 1; 1, 0)`, the flip used for the dihedral reflection.
pub fn flip() -> M2 {
    M2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

/// `R₁ = diag(i, −i)`.
pub fn quaternion_r1() -> M2 {
    diag2(I, -I)
}

/// `R₂ = (0, 1; −1, 0)`.
pub fn quaternion_r2() -> M2 {
    M2::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0))
}

/// `½(1+i, −1+i; 1+i, 1−i)`, the order-3 lift for the tetrahedral rotation.
pub fn tetrahedral_lift() -> M2 {
    M2::new(c(1.0, 1.0), c(-1.0, 1.0), c(1.0, 1.0), c(1.0, -1.0)) * c(0.5, 0.0)
}

/// `δ_{j,m}(r) = diag(ω_m^j, ω_m^{−j})`.
pub fn delta(j: i64, m: i64) -> M2 {
    diag2(root_of_unity(j, m), root_of_unity(-j, m))
}

/// Homomorphism `Γ → Aut(𝔰𝔩₂)`, stored on every enumerated element.
#[derive(Clone, Debug)]
pub struct GroupRepresentation {
    generators: Vec<Sl2Automorphism>,
    images: Vec<Sl2Automorphism>,
}

/// Tolerance for homomorphism and faithfulness checks.
pub const REP_TOL: f64 = 1e-10;

impl GroupRepresentation {
    /// Extend generator images along the exponent words of `emb`.
    pub fn from_generators(emb: &GroupEmbedding, generators: Vec<Sl2Automorphism>) -> Result<Self> {
        if generators.len() != emb.generators().len() {
            return Err(Error::Inconsistent("one image per generator required".into()));
        }
        let images = emb
            .elements()
            .iter()
            .map(|el| {
                el.word.iter().zip(&generators).fold(Sl2Automorphism::identity(), |acc, (&k, g)| {
                    (0..k).fold(acc, |a, _| a.compose(g))
                })
            })
            .collect();
        let rep = Self { generators, images };
        rep.check_homomorphism(emb)?;
        Ok(rep)
    }

    pub fn trivial(emb: &GroupEmbedding) -> Self {
        let generators = vec![Sl2Automorphism::identity(); emb.generators().len()];
        let images = vec![Sl2Automorphism::identity(); emb.order()];
        Self { generators, images }
    }

    pub fn generators(&self) -> &[Sl2Automorphism] {
        &self.generators
    }

    pub fn image(&self, element: usize) -> &Sl2Automorphism {
        &self.images[element]
    }

    pub fn images(&self) -> &[Sl2Automorphism] {
        &self.images
    }

    fn check_homomorphism(&self, emb: &GroupEmbedding) -> Result<()> {
        for i in 0..emb.order() {
            for k in 0..emb.order() {
                let prod = emb.product_index(i, k);
                let lhs = self.images[i].matrix * self.images[k].matrix;
                if frob(&(lhs - self.images[prod].matrix)) > REP_TOL {
                    return Err(Error::Inconsistent(format!(
                        "representation of {} violates the group law",
                        emb.label()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Only the identity maps to the identity automorphism.
    pub fn is_faithful(&self, emb: &GroupEmbedding) -> bool {
        emb.elements()
            .iter()
            .zip(&self.images)
            .all(|(el, img)| el.map.is_identity() || frob(&(img.matrix - M3::identity())) > 1e-6)
    }
}

/// `r ↦ Ad δ_{j,m}` on a cyclic translation group, or on the rotation part
/// of a dihedral group with `s ↦ Ad(flip)`.
pub fn delta_rep(emb: &GroupEmbedding, j: i64, m: i64) -> Result<GroupRepresentation> {
    let r = ad(&delta(j, m))?;
    match emb.kind() {
        GroupKind::CnTranslation => GroupRepresentation::from_generators(emb, vec![r]),
        GroupKind::Dn => GroupRepresentation::from_generators(emb, vec![ad(&flip())?, r]),
        _ => Err(Error::Unsupported(format!("delta representation on {}", emb.label()))),
    }
}

/// The right-hand representation paired with `Φ` on dihedral groups:
/// trivial on translations and `s ↦ Ad diag(−1, 1)`.
pub fn dihedral_tilde_rep(emb: &GroupEmbedding) -> Result<GroupRepresentation> {
    if emb.kind() != GroupKind::Dn {
        return Err(Error::Unsupported("tilde representation is defined for D_N only".into()));
    }
    let s = ad(&diag2(c(-1.0, 0.0), c(1.0, 0.0)))?;
    GroupRepresentation::from_generators(emb, vec![s, Sl2Automorphism::identity()])
}

/// Right-hand representation for `A₄`: trivial on the half-period
/// translations, `s ↦ Ad diag(ω₆, ω₆⁻¹)`.
pub fn tetrahedral_tilde_rep(emb: &GroupEmbedding) -> Result<GroupRepresentation> {
    if emb.kind() != GroupKind::A4 {
        return Err(Error::Unsupported("tilde representation is defined for A4 only".into()));
    }
    let s = ad(&delta(1, 6))?;
    GroupRepresentation::from_generators(emb, vec![s, Sl2Automorphism::identity(), Sl2Automorphism::identity()])
}

/// Root of unity order used for `δ` on a cyclic group of order `n`: `n` if odd,
/// `2n` on the double cover if even.
pub fn delta_order(n: u32) -> i64 {
    if n % 2 == 1 {
        n as i64
    } else {
        2 * n as i64
    }
}

/// The fixed representation for each catalog family.
pub fn standard_rep(emb: &GroupEmbedding, j: i64) -> Result<GroupRepresentation> {
    match emb.kind() {
        GroupKind::CnTranslation | GroupKind::Dn => {
            let n = emb.param();
            if n == 1 {
                return Ok(GroupRepresentation::trivial(emb));
            }
            if j.gcd(&(n as i64)) != 1 {
                return Err(Error::Unsupported(format!(
                    "j = {j} is not coprime to N = {n}; the representation would not be faithful"
                )));
            }
            delta_rep(emb, j, delta_order(n))
        }
        GroupKind::ClRotation => {
            let l = emb.param() as i64;
            GroupRepresentation::from_generators(emb, vec![ad(&delta(1, 2 * l))?])
        }
        GroupKind::C2xC2Translation => {
            GroupRepresentation::from_generators(emb, vec![ad(&quaternion_r1())?, ad(&quaternion_r2())?])
        }
        GroupKind::A4 => GroupRepresentation::from_generators(
            emb,
            vec![ad(&tetrahedral_lift())?, ad(&quaternion_r1())?, ad(&quaternion_r2())?],
        ),
    }
}

/// A character of an abelian group, given by one exponent per generator:
/// `χ(g₀^{w₀}g₁^{w₁}) = Π ω_{ord_i}^{c_i w_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub exponents: Vec<i64>,
}

impl Character {
    pub fn new(exponents: Vec<i64>) -> Self {
        Self { exponents }
    }

    pub fn value(&self, emb: &GroupEmbedding, element: usize) -> C64 {
        let word = &emb.elements()[element].word;
        self.exponents
            .iter()
            .zip(word.iter().zip(emb.generator_orders()))
            .map(|(&ci, (&w, &o))| root_of_unity(ci * w as i64, o as i64))
            .product()
    }
}

/// Full character group of an abelian embedding.
pub fn characters(emb: &GroupEmbedding) -> Result<Vec<Character>> {
    if !emb.kind().is_abelian() {
        return Err(Error::Unsupported(format!("{} is not abelian", emb.label())));
    }
    let orders = emb.generator_orders();
    let mut out = vec![Character::new(Vec::new())];
    for &o in orders {
        out = out
            .into_iter()
            .flat_map(|ch| {
                (0..o as i64).map(move |k| {
                    let mut e = ch.exponents.clone();
                    e.push(k);
                    Character::new(e)
                })
            })
            .collect();
    }
    Ok(out)
}

/// `(1/|Γ|) Σ χ̄(γ) ρ(γ)` on `𝓑`.
pub fn projector(rep: &GroupRepresentation, emb: &GroupEmbedding, chi: &Character) -> M3 {
    let mut p = M3::zeros();
    for k in 0..emb.order() {
        p += rep.image(k).matrix * chi.value(emb, k).conj();
    }
    p / c(emb.order() as f64, 0.0)
}

/// Orthonormal basis of the `χ`-isotypical component of `𝔰𝔩₂`.
pub fn isotypical_projection(rep: &GroupRepresentation, emb: &GroupEmbedding, chi: &Character) -> Result<Vec<V3>> {
    if !emb.kind().is_abelian() {
        return Err(Error::Unsupported(format!("{} is not abelian", emb.label())));
    }
    let p = projector(rep, emb, chi);
    let mut basis: Vec<V3> = Vec::new();
    for col in p.column_iter() {
        let mut v: V3 = col.into_owned();
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let n = v.norm();
        if n > 1e-8 {
            basis.push(v / c(n, 0.0));
        }
    }
    Ok(basis)
}
