//! Finite groups of torus automorphisms `z ↦ εz + α`, with exact group
//! arithmetic, fixed points, branch points and the translation subgroup.

use crate::error::{Error, Result};
use crate::lattice::{reduce_modular, sublattice_basis, Lattice, TorsionPoint};
use crate::numeric::{root_of_unity, C64, I};
use num_integer::Integer;
use std::collections::{BTreeSet, HashMap};

/// Recognition threshold for square and hexagonal lattices.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Extra symmetry of a lattice beyond `z ↦ −z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeSymmetry {
    Generic,
    Square,
    Hexagonal,
}

impl LatticeSymmetry {
    pub fn of(lattice: &Lattice) -> Self {
        let t = reduce_modular(lattice.tau()).expect("valid lattice").tau_reduced;
        if (t - I).norm() < SYMMETRY_TOL {
            Self::Square
        } else if (t - Lattice::hexagonal().tau()).norm() < SYMMETRY_TOL {
            Self::Hexagonal
        } else {
            Self::Generic
        }
    }

    /// Rotation orders `ℓ` with `e^{2πi/ℓ}Λ = Λ`.
    pub fn rotation_orders(&self) -> &'static [u32] {
        match self {
            Self::Generic => &[1, 2],
            Self::Square => &[1, 2, 4],
            Self::Hexagonal => &[1, 2, 3, 6],
        }
    }
}

/// Integer matrix of multiplication by `ε` on the basis `(ω₁, ω₂)`, acting on
/// row vectors of coordinates; `None` if `εΛ ≠ Λ`.
pub fn rotation_matrix(lattice: &Lattice, eps: C64) -> Option<[[i64; 2]; 2]> {
    let (w1, w2) = lattice.periods();
    let mut m = [[0i64; 2]; 2];
    for (row, w) in m.iter_mut().zip([w1, w2]) {
        let (s, t) = lattice.coords(eps * w);
        let (rs, rt) = (s.round(), t.round());
        if (s - rs).abs() > 1e-8 || (t - rt).abs() > 1e-8 {
            return None;
        }
        *row = [rs as i64, rt as i64];
    }
    Some(m)
}

/// The affine map `z ↦ εz + α` with `ε = exp(2πi·rot_num/rot_den)`.
#[derive(Clone, Copy, Debug)]
pub struct AffineAutomorphism {
    rot_num: i64,
    rot_den: i64,
    shift: TorsionPoint,
    matrix: [[i64; 2]; 2],
    lattice: Lattice,
}

impl PartialEq for AffineAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for AffineAutomorphism {}

impl std::hash::Hash for AffineAutomorphism {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl AffineAutomorphism {
    pub fn new(lattice: &Lattice, rot_num: i64, rot_den: i64, shift: TorsionPoint) -> Result<Self> {
        if rot_den <= 0 {
            return Err(Error::Domain("rotation denominator must be positive".into()));
        }
        let g = rot_num.gcd(&rot_den);
        let (num, den) = ((rot_num / g).rem_euclid(rot_den / g), rot_den / g);
        let (num, den) = if num == 0 { (0, 1) } else { (num, den) };
        if ![1, 2, 3, 4, 6].contains(&den) {
            return Err(Error::Unsupported(format!("rotation of order {den} cannot preserve a lattice")));
        }
        let matrix = rotation_matrix(lattice, root_of_unity(num, den))
            .ok_or_else(|| Error::Unsupported(format!("lattice does not admit rotation of order {den}")))?;
        Ok(Self { rot_num: num, rot_den: den, shift, matrix, lattice: *lattice })
    }

    pub fn identity(lattice: &Lattice) -> Self {
        Self::new(lattice, 0, 1, TorsionPoint::zero()).expect("identity is always admissible")
    }

    pub fn translation(lattice: &Lattice, shift: TorsionPoint) -> Self {
        Self::new(lattice, 0, 1, shift).expect("translations are always admissible")
    }

    pub fn rotation(lattice: &Lattice, rot_num: i64, rot_den: i64) -> Result<Self> {
        Self::new(lattice, rot_num, rot_den, TorsionPoint::zero())
    }

    /// Exact identity of the map; floats of the lattice are not compared.
    pub fn key(&self) -> (i64, i64, TorsionPoint) {
        (self.rot_num, self.rot_den, self.shift)
    }

    pub fn rot_num(&self) -> i64 {
        self.rot_num
    }

    pub fn rot_den(&self) -> i64 {
        self.rot_den
    }

    pub fn shift(&self) -> TorsionPoint {
        self.shift
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn epsilon(&self) -> C64 {
        root_of_unity(self.rot_num, self.rot_den)
    }

    pub fn is_identity(&self) -> bool {
        self.rot_den == 1 && self.shift.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.rot_den == 1
    }

    pub fn apply(&self, z: C64) -> C64 {
        self.epsilon() * z + self.shift.to_complex(&self.lattice)
    }

    /// Exact image of a torsion point.
    pub fn apply_point(&self, p: &TorsionPoint) -> TorsionPoint {
        p.transform(&self.matrix).add(&self.shift)
    }

    fn same_lattice(&self, other: &Self) -> bool {
        self.lattice.same_points(&other.lattice, 1e-9)
            && (self.lattice.periods().0 - other.lattice.periods().0).norm() < 1e-9
            && (self.lattice.periods().1 - other.lattice.periods().1).norm() < 1e-9
    }
}

/// `g ∘ h`.
pub fn compose(g: &AffineAutomorphism, h: &AffineAutomorphism) -> Result<AffineAutomorphism> {
    if !g.same_lattice(h) {
        return Err(Error::LatticeMismatch);
    }
    let num = g.rot_num * h.rot_den + h.rot_num * g.rot_den;
    let den = g.rot_den * h.rot_den;
    let shift = h.shift.transform(&g.matrix).add(&g.shift);
    AffineAutomorphism::new(&g.lattice, num, den, shift)
}

pub fn inverse(g: &AffineAutomorphism) -> AffineAutomorphism {
    let inv_rot = AffineAutomorphism::new(&g.lattice, -g.rot_num, g.rot_den, TorsionPoint::zero())
        .expect("inverse rotation preserves the lattice");
    let shift = g.shift.transform(&inv_rot.matrix).neg();
    AffineAutomorphism { shift, ..inv_rot }
}

/// `g h g⁻¹ h⁻¹`.
pub fn commutator(g: &AffineAutomorphism, h: &AffineAutomorphism) -> Result<AffineAutomorphism> {
    compose(&compose(g, h)?, &compose(&inverse(g), &inverse(h))?)
}

/// Solutions of `(ε − 1)z ≡ −α (mod Λ)`.
pub fn fixed_points(g: &AffineAutomorphism) -> Result<Vec<TorsionPoint>> {
    if g.is_identity() {
        return Err(Error::Domain("the identity fixes every point".into()));
    }
    if g.is_translation() {
        return Ok(Vec::new());
    }
    let m = g.matrix;
    let k = [[m[0][0] - 1, m[0][1]], [m[1][0], m[1][1] - 1]];
    let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    let adj = [[k[1][1], -k[0][1]], [-k[1][0], k[0][0]]];
    let (a, b, n) = (g.shift.a(), g.shift.b(), g.shift.n());
    // z = ((u, v) − (a, b)/n)·K⁻¹ for (u, v) ranging over ℤ²/ℤ²K.
    let mut out = BTreeSet::new();
    for u in 0..det.abs() {
        for v in 0..det.abs() {
            let (x, y) = (u * n - a, v * n - b);
            let num_x = x * adj[0][0] + y * adj[1][0];
            let num_y = x * adj[0][1] + y * adj[1][1];
            out.insert(TorsionPoint::new(num_x, num_y, n * det)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Family of the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `C_N` acting by `z ↦ z + α` with `α` of order `N`.
    CnTranslation,
    /// `C_ℓ` acting by `z ↦ e^{2πi/ℓ}z`.
    ClRotation,
    /// `C₂ ⋉ C_N` with `s(z) = −z`, `r(z) = z + α`.
    Dn,
    /// `C₂ × C₂` acting by the half periods `ω₁/2`, `ω₂/2`.
    C2xC2Translation,
    /// `A₄ = C₃ ⋉ (C₂ × C₂)` on the hexagonal lattice.
    A4,
}

impl GroupKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CnTranslation => "CN_translation",
            Self::ClRotation => "Cl_rotation",
            Self::Dn => "DN",
            Self::C2xC2Translation => "C2xC2_translation",
            Self::A4 => "A4",
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, Self::CnTranslation | Self::ClRotation | Self::C2xC2Translation)
    }
}

/// One enumerated group element with its exponent word on the generators.
///
/// Words are read left to right: `[a, b]` stands for `g₀^a ∘ g₁^b`, and for
/// the three-generator groups `[a, b, c]` is `g₀^a ∘ g₁^b ∘ g₂^c`.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub map: AffineAutomorphism,
    pub word: Vec<u32>,
}

/// A finite subgroup `Γ ⊂ Aut(T)` together with its action on `T`.
#[derive(Clone, Debug)]
pub struct GroupEmbedding {
    kind: GroupKind,
    /// `N` for translations and dihedral groups, `ℓ` for rotations, 4 and 12
    /// for the Klein and tetrahedral groups.
    param: u32,
    shift: Option<TorsionPoint>,
    lattice: Lattice,
    generators: Vec<AffineAutomorphism>,
    generator_orders: Vec<u32>,
    elements: Vec<GroupElement>,
    index: HashMap<(i64, i64, TorsionPoint), usize>,
}

impl GroupEmbedding {
    /// `C_N` generated by `z ↦ z + α`, `N = ord(α)`. `α = 0` gives the trivial
    /// group.
    pub fn cn_translation(lattice: &Lattice, alpha: TorsionPoint) -> Result<Self> {
        let n = alpha.order() as u32;
        let r = AffineAutomorphism::translation(lattice, alpha);
        Self::build(GroupKind::CnTranslation, n, Some(alpha), lattice, vec![r], vec![n])
    }

    /// `C_ℓ` generated by `z ↦ e^{2πi/ℓ}z`.
    pub fn cl_rotation(lattice: &Lattice, l: u32) -> Result<Self> {
        if !LatticeSymmetry::of(lattice).rotation_orders().contains(&l) || l == 1 {
            return Err(Error::Unsupported(format!(
                "rotation of order {l} on a {:?} lattice",
                LatticeSymmetry::of(lattice)
            )));
        }
        let s = AffineAutomorphism::rotation(lattice, 1, l as i64)?;
        Self::build(GroupKind::ClRotation, l, None, lattice, vec![s], vec![l])
    }

    /// `C₂ ⋉ C_N` generated by `s(z) = −z` and `r(z) = z + α`.
    pub fn dihedral(lattice: &Lattice, alpha: TorsionPoint) -> Result<Self> {
        let n = alpha.order() as u32;
        if n < 2 {
            return Err(Error::Domain("dihedral groups need a shift of order ≥ 2".into()));
        }
        let s = AffineAutomorphism::rotation(lattice, 1, 2)?;
        let r = AffineAutomorphism::translation(lattice, alpha);
        Self::build(GroupKind::Dn, n, Some(alpha), lattice, vec![s, r], vec![2, n])
    }

    /// Translations by `ω₁/2` and `ω₂/2`.
    pub fn c2xc2(lattice: &Lattice) -> Result<Self> {
        let r1 = AffineAutomorphism::translation(lattice, TorsionPoint::new(1, 0, 2)?);
        let r2 = AffineAutomorphism::translation(lattice, TorsionPoint::new(0, 1, 2)?);
        Self::build(GroupKind::C2xC2Translation, 4, None, lattice, vec![r1, r2], vec![2, 2])
    }

    /// `A₄` on a hexagonal lattice, expressed in the basis `λ(1, ω₃)` of the
    /// same point set, with `s(z) = ω₃⁻¹z`, `r₁(z) = z + λ/2`,
    /// `r₂(z) = z + λω₃/2`.
    pub fn a4(lattice: &Lattice) -> Result<Self> {
        if LatticeSymmetry::of(lattice) != LatticeSymmetry::Hexagonal {
            return Err(Error::Unsupported("A4 requires a hexagonal lattice".into()));
        }
        let canon = lattice.canonical();
        let s = AffineAutomorphism::rotation(&canon, 2, 3)?;
        let r1 = AffineAutomorphism::translation(&canon, TorsionPoint::new(1, 0, 2)?);
        let r2 = AffineAutomorphism::translation(&canon, TorsionPoint::new(0, 1, 2)?);
        Self::build(GroupKind::A4, 12, None, &canon, vec![s, r1, r2], vec![3, 2, 2])
    }

    fn build(
        kind: GroupKind,
        param: u32,
        shift: Option<TorsionPoint>,
        lattice: &Lattice,
        generators: Vec<AffineAutomorphism>,
        generator_orders: Vec<u32>,
    ) -> Result<Self> {
        let total: u32 = generator_orders.iter().product();
        let mut elements = Vec::with_capacity(total as usize);
        for code in 0..total {
            // Mixed-radix digits, last generator fastest.
            let mut word = vec![0u32; generators.len()];
            let mut rest = code;
            for (slot, &o) in word.iter_mut().zip(&generator_orders).rev() {
                *slot = rest % o;
                rest /= o;
            }
            let mut map = AffineAutomorphism::identity(lattice);
            for (g, &e) in generators.iter().zip(&word) {
                for _ in 0..e {
                    map = compose(&map, g)?;
                }
            }
            elements.push(GroupElement { map, word });
        }
        let mut index = HashMap::new();
        for (k, e) in elements.iter().enumerate() {
            if index.insert(e.map.key(), k).is_some() {
                return Err(Error::Inconsistent(format!("{} words are not distinct", kind.name())));
            }
        }
        let emb = Self { kind, param, shift, lattice: *lattice, generators, generator_orders, elements, index };
        emb.check_closure()?;
        Ok(emb)
    }

    fn check_closure(&self) -> Result<()> {
        for g in &self.elements {
            for h in &self.elements {
                if self.index_of(&compose(&g.map, &h.map)?).is_none() {
                    return Err(Error::Inconsistent(format!("{} is not closed", self.kind.name())));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn param(&self) -> u32 {
        self.param
    }

    pub fn shift(&self) -> Option<TorsionPoint> {
        self.shift
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[AffineAutomorphism] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u32] {
        &self.generator_orders
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &AffineAutomorphism) -> Option<usize> {
        self.index.get(&g.key()).copied()
    }

    /// Index of `elements[i] ∘ elements[k]`.
    pub fn product_index(&self, i: usize, k: usize) -> usize {
        let g = compose(&self.elements[i].map, &self.elements[k].map).expect("same lattice");
        self.index_of(&g).expect("group is closed")
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.index_of(&inverse(&self.elements[i].map)).expect("group is closed")
    }

    /// Human-readable label, e.g. `D5(alpha=1/0/5)`.
    pub fn label(&self) -> String {
        match (self.kind, self.shift) {
            (GroupKind::CnTranslation, Some(a)) => format!("C{}_translation(alpha={a})", self.param),
            (GroupKind::Dn, Some(a)) => format!("D{}(alpha={a})", self.param),
            (GroupKind::ClRotation, _) => format!("C{}_rotation", self.param),
            (GroupKind::C2xC2Translation, _) => "C2xC2_translation".into(),
            (GroupKind::A4, _) => "A4".into(),
            _ => self.kind.name().into(),
        }
    }

    /// Checks the defining relations of the presentation exactly.
    pub fn relations_hold(&self) -> Result<bool> {
        let id = AffineAutomorphism::identity(&self.lattice);
        let pow = |g: &AffineAutomorphism, k: u32| -> Result<AffineAutomorphism> {
            let mut m = id;
            for _ in 0..k {
                m = compose(&m, g)?;
            }
            Ok(m)
        };
        let gens = &self.generators;
        let orders_ok = gens
            .iter()
            .zip(&self.generator_orders)
            .map(|(g, &o)| Ok(pow(g, o)? == id && (1..o).all(|k| pow(g, k).map(|m| m != id).unwrap_or(false))))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        let extra = match self.kind {
            GroupKind::CnTranslation | GroupKind::ClRotation => true,
            GroupKind::Dn => {
                let sr = compose(&gens[0], &gens[1])?;
                compose(&sr, &sr)? == id
            }
            GroupKind::C2xC2Translation => compose(&gens[0], &gens[1])? == compose(&gens[1], &gens[0])?,
            GroupKind::A4 => {
                let (s, r1, r2) = (&gens[0], &gens[1], &gens[2]);
                let conj = |x: &AffineAutomorphism| compose(&compose(s, x)?, &inverse(s));
                conj(r1)? == compose(r1, r2)? && conj(r2)? == *r1
            }
        };
        Ok(orders_ok && extra)
    }

    /// Orbit `Γ·p`.
    pub fn orbit(&self, p: &TorsionPoint) -> BTreeSet<TorsionPoint> {
        self.elements.iter().map(|g| g.map.apply_point(p)).collect()
    }
}

/// Default catalog orders for the translation and dihedral families.
pub const DEFAULT_ORDERS: [u32; 5] = [2, 3, 4, 5, 6];

/// All catalog embeddings on `lattice`, with `C_N` and `D_N` built from the
/// shift `ω₁/N` for each requested `N`.
pub fn catalog(lattice: &Lattice, orders: &[u32]) -> Vec<GroupEmbedding> {
    let mut out = Vec::new();
    for &n in orders {
        if let Ok(alpha) = TorsionPoint::new(1, 0, n as i64) {
            if let Ok(e) = GroupEmbedding::cn_translation(lattice, alpha) {
                out.push(e);
            }
        }
    }
    for &l in &[2u32, 3, 4, 6] {
        if let Ok(e) = GroupEmbedding::cl_rotation(lattice, l) {
            out.push(e);
        }
    }
    if let Ok(e) = GroupEmbedding::c2xc2(lattice) {
        out.push(e);
    }
    for &n in orders {
        if let Ok(alpha) = TorsionPoint::new(1, 0, n as i64) {
            if let Ok(e) = GroupEmbedding::dihedral(lattice, alpha) {
                out.push(e);
            }
        }
    }
    if let Ok(e) = GroupEmbedding::a4(lattice) {
        out.push(e);
    }
    out
}

/// Branch data of `T → T/Γ` away from the image of `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchPoints {
    pub count: usize,
    pub orbits: Vec<BTreeSet<TorsionPoint>>,
}

/// Orbits of points with nontrivial stabiliser, excluding `Γ·0`.
pub fn branch_points(emb: &GroupEmbedding) -> BranchPoints {
    let mut special = BTreeSet::new();
    for g in emb.elements() {
        if !g.map.is_identity() {
            special.extend(fixed_points(&g.map).expect("non-identity element"));
        }
    }
    for p in emb.orbit(&TorsionPoint::zero()) {
        special.remove(&p);
    }
    let mut orbits = Vec::new();
    while let Some(p) = special.iter().next().copied() {
        let orb = emb.orbit(&p);
        for q in &orb {
            special.remove(q);
        }
        orbits.push(orb);
    }
    BranchPoints { count: orbits.len(), orbits }
}

/// Closed-form branch count of the catalog lemma.
pub fn expected_branch_count(emb: &GroupEmbedding) -> usize {
    match emb.kind() {
        GroupKind::CnTranslation | GroupKind::C2xC2Translation => 0,
        GroupKind::ClRotation if emb.param() == 2 => 3,
        GroupKind::ClRotation | GroupKind::A4 => 2,
        GroupKind::Dn => 3,
    }
}

/// `t(Γ)` and the lattice of `T/t(Γ)`.
pub fn translation_subgroup(emb: &GroupEmbedding) -> Result<(GroupEmbedding, Lattice)> {
    let translations: Vec<&GroupElement> = emb.elements().iter().filter(|g| g.map.is_translation()).collect();
    let lattice = emb.lattice();
    let denom = translations.iter().fold(1i64, |acc, g| acc.lcm(&g.map.shift().n()));
    let mut gens = vec![(denom, 0), (0, denom)];
    for g in &translations {
        let s = g.map.shift();
        gens.push((s.a() * denom / s.n(), s.b() * denom / s.n()));
    }
    let quotient = sublattice_basis(&gens, denom, lattice)?;
    let sub = match translations.len() {
        1 => GroupEmbedding::cn_translation(lattice, TorsionPoint::zero())?,
        n => match translations.iter().find(|g| g.map.shift().order() as usize == n) {
            Some(g) => GroupEmbedding::cn_translation(lattice, g.map.shift())?,
            None if n == 4 => GroupEmbedding::c2xc2(lattice)?,
            None => return Err(Error::Inconsistent(format!("translation subgroup of order {n}"))),
        },
    };
    Ok((sub, quotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;

    fn generic() -> Lattice {
        Lattice::new(c(0.37, 1.2)).unwrap()
    }

    fn tp(a: i64, b: i64, n: i64) -> TorsionPoint {
        TorsionPoint::new(a, b, n).unwrap()
    }

    #[test]
    fn catalog_membership() {
        let kinds = |l: &Lattice| -> Vec<String> { catalog(l, &DEFAULT_ORDERS).iter().map(|e| e.label()).collect() };
        let g = kinds(&generic());
        assert!(g.contains(&"C2_rotation".to_string()));
        assert!(g.contains(&"C2xC2_translation".to_string()));
        assert!(g.iter().any(|s| s.starts_with("D3")));
        assert!(g.iter().any(|s| s.starts_with("C5_translation")));
        assert!(!g.iter().any(|s| s == "C3_rotation" || s == "C4_rotation" || s == "C6_rotation" || s == "A4"));
        let h = kinds(&Lattice::hexagonal());
        assert!(h.contains(&"A4".to_string()) && h.contains(&"C3_rotation".to_string()));
        let w6 = Lattice::new(C64::from_polar(1.0, std::f64::consts::PI / 3.0)).unwrap();
        assert!(kinds(&w6).contains(&"A4".to_string()));
        let s = kinds(&Lattice::square());
        assert!(s.contains(&"C4_rotation".to_string()));
        assert!(!s.iter().any(|x| x == "C3_rotation" || x == "C6_rotation" || x == "A4"));
    }

    #[test]
    fn unsupported_rotations_error() {
        assert!(matches!(GroupEmbedding::cl_rotation(&generic(), 3), Err(Error::Unsupported(_))));
        assert!(matches!(GroupEmbedding::a4(&Lattice::square()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn composition_examples() {
        let l = generic();
        let neg = AffineAutomorphism::rotation(&l, 1, 2).unwrap();
        assert!(compose(&neg, &neg).unwrap().is_identity());
        // [s, r'] with r'(z) = z + α/2 gives translation by α.
        let alpha = tp(1, 2, 5);
        let half = AffineAutomorphism::translation(&l, tp(1, 2, 10));
        let comm = commutator(&neg, &half).unwrap();
        assert!(comm.is_translation());
        assert_eq!(comm.shift(), alpha.neg());
        let comm = commutator(&half, &neg).unwrap();
        assert_eq!(comm.shift(), alpha);
        // Rotation then translation, checked pointwise.
        let hex = Lattice::hexagonal();
        let w = AffineAutomorphism::rotation(&hex, 1, 3).unwrap();
        let t = AffineAutomorphism::translation(&hex, tp(1, 0, 2));
        let wt = compose(&w, &t).unwrap();
        for k in 0..20 {
            let z = c(0.05 * k as f64, 0.3 - 0.02 * k as f64);
            assert!((wt.apply(z) - w.apply(t.apply(z))).norm() < 1e-12);
        }
        let other = AffineAutomorphism::rotation(&Lattice::square(), 1, 2).unwrap();
        assert_eq!(compose(&neg, &other), Err(Error::LatticeMismatch));
    }

    #[test]
    fn fixed_point_examples() {
        let l = generic();
        assert!(fixed_points(&AffineAutomorphism::translation(&l, tp(1, 0, 2))).unwrap().is_empty());
        let neg = AffineAutomorphism::rotation(&l, 1, 2).unwrap();
        let fp = fixed_points(&neg).unwrap();
        assert_eq!(fp, vec![tp(0, 0, 1), tp(0, 1, 2), tp(1, 0, 2), tp(1, 1, 2)]);
        let hex = Lattice::hexagonal();
        let w3 = AffineAutomorphism::rotation(&hex, 1, 3).unwrap();
        assert_eq!(fixed_points(&w3).unwrap().len(), 3);
        assert!(fixed_points(&AffineAutomorphism::identity(&l)).is_err());
    }

    /// Brute force over all points with denominator `n·|det(ε−1)|`.
    fn brute_fixed(g: &AffineAutomorphism) -> BTreeSet<TorsionPoint> {
        let m = g.shift().n() * 12;
        let mut out = BTreeSet::new();
        for a in 0..m {
            for b in 0..m {
                let p = tp(a, b, m);
                if g.apply_point(&p) == p {
                    out.insert(p);
                }
            }
        }
        out
    }

    #[test]
    fn fixed_points_match_brute_force() {
        for l in [generic(), Lattice::square(), Lattice::hexagonal()] {
            for e in catalog(&l, &[2, 3, 4]) {
                for g in e.elements() {
                    if g.map.is_identity() || g.map.shift().n() > 4 {
                        continue;
                    }
                    let fast: BTreeSet<_> = fixed_points(&g.map).unwrap().into_iter().collect();
                    assert_eq!(fast, brute_fixed(&g.map), "{} {:?}", e.label(), g.word);
                    for p in &fast {
                        let z = p.to_complex(e.lattice());
                        assert!(e.lattice().contains(g.map.apply(z) - z, 1e-9));
                    }
                }
            }
        }
    }

    #[test]
    fn catalog_orders_and_relations() {
        let lattices = [generic(), Lattice::square(), Lattice::hexagonal(), Lattice::new(c(-0.2, 0.8)).unwrap()];
        for l in &lattices {
            for e in catalog(l, &DEFAULT_ORDERS) {
                let expected = match e.kind() {
                    GroupKind::CnTranslation | GroupKind::ClRotation => e.param() as usize,
                    GroupKind::Dn => 2 * e.param() as usize,
                    GroupKind::C2xC2Translation => 4,
                    GroupKind::A4 => 12,
                };
                assert_eq!(e.order(), expected, "{}", e.label());
                assert!(e.relations_hold().unwrap(), "{}", e.label());
            }
        }
    }

    #[test]
    fn branch_counts_match_closed_form() {
        let mut lattices = vec![Lattice::square(), Lattice::hexagonal()];
        for k in 0..5 {
            let t = c(-0.45 + 0.2 * k as f64, 0.9 + 0.13 * k as f64);
            lattices.push(Lattice::new(t).unwrap());
        }
        for l in &lattices {
            for e in catalog(l, &DEFAULT_ORDERS) {
                assert_eq!(branch_points(&e).count, expected_branch_count(&e), "{}", e.label());
            }
        }
    }

    #[test]
    fn hexagonal_c3_branch_orbits() {
        let e = GroupEmbedding::cl_rotation(&Lattice::hexagonal(), 3).unwrap();
        let b = branch_points(&e);
        assert_eq!(b.count, 2);
        assert!(b.orbits.iter().all(|o| o.len() == 1));
    }

    #[test]
    fn commutators_are_translations() {
        for l in [generic(), Lattice::square(), Lattice::hexagonal()] {
            for e in catalog(&l, &DEFAULT_ORDERS) {
                for g in e.elements() {
                    for h in e.elements() {
                        assert!(commutator(&g.map, &h.map).unwrap().is_translation());
                    }
                }
            }
        }
    }

    #[test]
    fn fixed_sets_are_conjugation_equivariant() {
        for l in [generic(), Lattice::hexagonal()] {
            for e in catalog(&l, &[2, 3]) {
                for g in e.elements().iter().filter(|g| !g.map.is_identity()) {
                    let fp: BTreeSet<_> = fixed_points(&g.map).unwrap().into_iter().collect();
                    for h in e.elements() {
                        let conj = compose(&compose(&h.map, &g.map).unwrap(), &inverse(&h.map)).unwrap();
                        let mapped: BTreeSet<_> = fp.iter().map(|p| h.map.apply_point(p)).collect();
                        let direct: BTreeSet<_> = fixed_points(&conj).unwrap().into_iter().collect();
                        assert_eq!(mapped, direct);
                    }
                }
            }
        }
    }

    #[test]
    fn translation_subgroups() {
        let l = generic();
        let (t, q) = translation_subgroup(&GroupEmbedding::cl_rotation(&l, 2).unwrap()).unwrap();
        assert_eq!(t.order(), 1);
        assert!(q.same_points(&l, 1e-9));
        let alpha = tp(1, 2, 3);
        let (t, q) = translation_subgroup(&GroupEmbedding::cn_translation(&l, alpha).unwrap()).unwrap();
        assert_eq!(t.order(), 3);
        let expected = sublattice_basis(&[(3, 0), (0, 3), (1, 2)], 3, &l).unwrap();
        assert!(q.same_points(&expected, 1e-9));
        let hex = Lattice::hexagonal();
        let (t, q) = translation_subgroup(&GroupEmbedding::a4(&hex).unwrap()).unwrap();
        assert_eq!(t.kind(), GroupKind::C2xC2Translation);
        assert!(q.same_points(&hex.scaled(c(0.5, 0.0)).unwrap(), 1e-9));
        let (t, _) = translation_subgroup(&GroupEmbedding::dihedral(&l, tp(1, 0, 4)).unwrap()).unwrap();
        assert_eq!((t.kind(), t.order()), (GroupKind::CnTranslation, 4));
    }
}
