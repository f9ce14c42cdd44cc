//! Matrix-valued intertwiners `M(γ·z) = ρ(γ)M(z)ρ̃(γ)⁻¹`: the 2×2 matrix `Φ_j`
//! for cyclic and dihedral groups, and the 3×3 matrix `Ψ` in the basis
//! `(h, e, f)` for the half-period group and `A₄`.

use crate::error::{Error, Result};
use crate::funcalg::function::{probe_points, TorusFunction};
use crate::funcalg::klein::{c2c2_constants, p_small, C2C2Constants, KleinFunctions};
use crate::funcalg::pfamily::{cover_embedding, fit_lambda_mu, LambdaMu, PFamily};
use crate::lattice::{torus_distance, Lattice};
use crate::numeric::{c, scaled_mdiff, C64, M2};
use crate::sl2rep::{ad, dihedral_tilde_rep, standard_rep, tetrahedral_tilde_rep, GroupRepresentation};
use crate::torusgroup::{GroupEmbedding, GroupKind};
use nalgebra::DMatrix;
use std::sync::Arc;

pub type MatrixEvaluator = Arc<dyn Fn(C64) -> DMatrix<C64> + Send + Sync>;

/// Samples for equivariance checks keep this far (in min periods) from poles.
pub const CHECK_SEPARATION: f64 = 0.1;

#[derive(Clone)]
pub struct MatrixFunction {
    eval: MatrixEvaluator,
    dim: usize,
    poles: Vec<C64>,
    lattice: Lattice,
}

impl std::fmt::Debug for MatrixFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixFunction").field("dim", &self.dim).field("poles", &self.poles).finish()
    }
}

pub fn m2_to_dyn(m: &M2) -> DMatrix<C64> {
    DMatrix::from_column_slice(2, 2, m.as_slice())
}

pub fn dyn_to_m2(m: &DMatrix<C64>) -> M2 {
    M2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

impl MatrixFunction {
    pub fn new(lattice: &Lattice, dim: usize, poles: Vec<C64>, eval: impl Fn(C64) -> DMatrix<C64> + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(eval), dim, poles, lattice: *lattice }
    }

    pub fn constant(lattice: &Lattice, m: DMatrix<C64>) -> Self {
        let dim = m.nrows();
        Self::new(lattice, dim, Vec::new(), move |_| m.clone())
    }

    pub fn eval(&self, z: C64) -> DMatrix<C64> {
        (self.eval)(z)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared pole positions (complex representatives).
    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Same function with column `col` negated (negative controls).
    pub fn with_column_negated(&self, col: usize) -> Self {
        let f = self.eval.clone();
        Self::new(&self.lattice, self.dim, self.poles.clone(), move |z| {
            let mut m = f(z);
            m.column_mut(col).neg_mut();
            m
        })
    }

    /// `max |det M(z) − 1|` over `points`.
    pub fn det_defect(&self, points: &[C64]) -> f64 {
        points.iter().map(|&z| (self.eval(z).determinant() - 1.0).norm()).fold(0.0, f64::max)
    }
}

/// Probe points on `lattice` away from the poles of `m`.
pub fn sample_points(m: &MatrixFunction, lattice: &Lattice, count: usize, seed: u64) -> Vec<C64> {
    probe_points(lattice, m.poles(), count, seed, CHECK_SEPARATION)
}

/// `Φ_j` together with the data it is built from.
#[derive(Clone, Debug)]
pub struct Intertwiner1 {
    pub family: PFamily,
    pub j: i64,
    pub constants: LambdaMu,
    p: [TorusFunction; 4],
}

/// Values `(P_{−j}, P_j, P_{−2j}, P_{2j})` at a point.
#[derive(Clone, Copy, Debug)]
struct PValues {
    pm: C64,
    pp: C64,
    pm2: C64,
    pp2: C64,
}

impl Intertwiner1 {
    pub fn new(family: PFamily, j: i64, seed: u64) -> Result<Self> {
        let n = family.order() as i64;
        if (2 * j).rem_euclid(n) == 0 {
            return Err(Error::InvalidCharacter { j, order: n as u32 });
        }
        let constants = fit_lambda_mu(&family, j, j, seed)?;
        if constants.mu.norm() <= crate::funcalg::pfamily::MU_FLOOR {
            return Err(Error::Construction("μ vanishes; Φ is undefined".into()));
        }
        let p = [family.p(-j), family.p(j), family.p(-2 * j), family.p(2 * j)];
        Ok(Self { family, j, constants, p })
    }

    fn values(&self, z: C64) -> PValues {
        PValues { pm: self.p[0].eval(z), pp: self.p[1].eval(z), pm2: self.p[2].eval(z), pp2: self.p[3].eval(z) }
    }

    /// `Φ_j(z) = (P_{−j}, P_jP_{−2j}/μ + λP_{−j}/2μ; P_j, P_{−j}P_{2j}/μ − λP_j/2μ)`.
    pub fn matrix(&self, z: C64) -> M2 {
        let v = self.values(z);
        let LambdaMu { lambda, mu, .. } = self.constants;
        M2::new(
            v.pm,
            v.pp * v.pm2 / mu + lambda / (2.0 * mu) * v.pm,
            v.pp,
            v.pm * v.pp2 / mu - lambda / (2.0 * mu) * v.pp,
        )
    }

    /// `H_j = Φ_j h Φ_j⁻¹` written in the `P` functions.
    pub fn h_display(&self, z: C64) -> M2 {
        let v = self.values(z);
        let LambdaMu { lambda, mu, .. } = self.constants;
        let a = v.pm * v.pm * v.pp2 + v.pm2 * v.pp * v.pp;
        M2::new(a, -2.0 * v.pm * v.pp * v.pm2 - lambda * v.pm * v.pm, 2.0 * v.pm * v.pp * v.pp2 - lambda * v.pp * v.pp, -a) / mu
    }

    /// `E_j = Φ_j e Φ_j⁻¹`.
    pub fn e_display(&self, z: C64) -> M2 {
        let v = self.values(z);
        M2::new(-v.pm * v.pp, v.pm * v.pm, -v.pp * v.pp, v.pm * v.pp)
    }

    /// `F_j = Φ_j f Φ_j⁻¹`.
    pub fn f_display(&self, z: C64) -> M2 {
        let v = self.values(z);
        let LambdaMu { lambda, mu, .. } = self.constants;
        let a = 4.0 * v.pm * v.pp * v.pm2 * v.pp2 + lambda * lambda * v.pm * v.pp + 2.0 * lambda * mu;
        let b = -4.0 * v.pp * v.pp * v.pm2 * v.pm2 - 4.0 * lambda * v.pm * v.pp * v.pm2 - lambda * lambda * v.pm * v.pm;
        let cc = 4.0 * v.pm * v.pm * v.pp2 * v.pp2 - 4.0 * lambda * v.pm * v.pp * v.pp2 + lambda * lambda * v.pp * v.pp;
        M2::new(a, b, cc, -a) / (4.0 * mu * mu)
    }

    pub fn poles(&self) -> Vec<C64> {
        self.family.orbit_points()
    }

    /// Negative control: `Φ_j` with the `λ` term of the upper-right entry
    /// entering with the wrong sign.
    pub fn wrong_sign_q_column(&self) -> MatrixFunction {
        let me = self.clone();
        MatrixFunction::new(self.family.lattice(), 2, self.poles(), move |z| {
            let v = me.values(z);
            let LambdaMu { lambda, mu, .. } = me.constants;
            m2_to_dyn(&M2::new(
                v.pm,
                v.pp * v.pm2 / mu - lambda / (2.0 * mu) * v.pm,
                v.pp,
                v.pm * v.pp2 / mu - lambda / (2.0 * mu) * v.pp,
            ))
        })
    }

    pub fn as_matrix_function(&self) -> MatrixFunction {
        let me = self.clone();
        MatrixFunction::new(self.family.lattice(), 2, self.poles(), move |z| m2_to_dyn(&me.matrix(z)))
    }
}

/// `Φ_j` for a translation group (or the translation part of a dihedral
/// group) of order `N`, requiring `2j ≢ 0 mod N`.
pub fn phi(emb: &GroupEmbedding, j: i64, seed: u64) -> Result<Intertwiner1> {
    let translations = match emb.kind() {
        GroupKind::CnTranslation => emb.clone(),
        GroupKind::Dn => GroupEmbedding::cn_translation(emb.lattice(), emb.shift().expect("dihedral shift"))?,
        _ => return Err(Error::Unsupported(format!("Φ is defined for C_N and D_N, got {}", emb.label()))),
    };
    Intertwiner1::new(PFamily::new(&translations)?, j, seed)
}

/// The intertwiner matching `standard_rep(emb, j)`: `Φ_j` on `Λ` for odd `N`,
/// `Φ_j` on the double cover `Λ̂` with an order-`2N` shift for even `N`.
pub fn standard_phi(emb: &GroupEmbedding, j: i64, seed: u64) -> Result<Intertwiner1> {
    if emb.param() % 2 == 1 {
        return phi(emb, j, seed);
    }
    let translations = match emb.kind() {
        GroupKind::CnTranslation => emb.clone(),
        GroupKind::Dn => GroupEmbedding::cn_translation(emb.lattice(), emb.shift().expect("dihedral shift"))?,
        _ => return Err(Error::Unsupported(format!("Φ is defined for C_N and D_N, got {}", emb.label()))),
    };
    let (cover, _) = cover_embedding(&translations)?;
    Intertwiner1::new(PFamily::new(&cover)?, j, seed)
}

/// `Ψ` together with its ingredients.
#[derive(Clone, Debug)]
pub struct Intertwiner2 {
    pub constants: C2C2Constants,
    pub functions: KleinFunctions,
    lattice: Lattice,
}

impl Intertwiner2 {
    /// `[Ψ(z)]` in the basis `(h, e, f)`.
    pub fn matrix(&self, z: C64) -> DMatrix<C64> {
        let (p0, p1, p2) = (self.functions.p0.eval(z), self.functions.p1.eval(z), self.functions.p2.eval(z));
        let C2C2Constants { alpha1, alpha2, beta1, beta2, a1, b1, sqrt_a2b2: sq, .. } = self.constants;
        let minus = p0 * p1 - sq;
        let plus = p0 * p1 + sq;
        let den = 4.0 * alpha2 * beta2;
        let u = b1 * p1 - a1 * p0;
        let w = a1 * p0 + b1 * p1;
        DMatrix::from_row_slice(
            3,
            3,
            &[
                p0 * p1 / sq,
                -p2,
                (a1 * a1 * p0 * p0 - b1 * b1 * p1 * p1) * p2 / den,
                u * p2 / sq,
                a1 / alpha1 * p1 - b1 / beta1 * p0,
                u * minus / den,
                w * p2 / sq,
                -a1 / alpha1 * p1 - b1 / beta1 * p0,
                w * plus / den,
            ],
        )
    }

    pub fn poles(&self) -> Vec<C64> {
        self.functions.p0.pole_points()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn as_matrix_function(&self) -> MatrixFunction {
        let me = self.clone();
        MatrixFunction::new(&self.lattice, 3, self.poles(), move |z| me.matrix(z))
    }
}

/// `Ψ` for the half-period group, or for the half-period subgroup of `A₄`.
pub fn psi(emb: &GroupEmbedding) -> Result<Intertwiner2> {
    let klein = match emb.kind() {
        GroupKind::C2xC2Translation => emb.clone(),
        GroupKind::A4 => GroupEmbedding::c2xc2(emb.lattice())?,
        _ => return Err(Error::Unsupported(format!("Ψ is defined for C2xC2 and A4, got {}", emb.label()))),
    };
    Ok(Intertwiner2 {
        constants: c2c2_constants(klein.lattice()),
        functions: p_small(&klein)?,
        lattice: *klein.lattice(),
    })
}

fn rep_matrix(rep: &GroupRepresentation, k: usize, dim: usize) -> Result<DMatrix<C64>> {
    let img = rep.image(k);
    match dim {
        2 => img.lift.map(|m| m2_to_dyn(&m)).ok_or_else(|| Error::Inconsistent("representation has no 2×2 lift".into())),
        3 => Ok(DMatrix::from_column_slice(3, 3, img.matrix.as_slice())),
        _ => Err(Error::Inconsistent(format!("unsupported dimension {dim}"))),
    }
}

/// `max ‖M(γ·z) − ρ(γ)M(z)ρ̃(γ)⁻¹‖` (scaled) over all `γ` and sampled `z`.
/// Two-dimensional functions use the `GL₂` lifts of the representations.
pub fn check_intertwining(
    m: &MatrixFunction,
    rho: &GroupRepresentation,
    rho_tilde: &GroupRepresentation,
    emb: &GroupEmbedding,
    points: &[C64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, el) in emb.elements().iter().enumerate() {
        let left = rep_matrix(rho, k, m.dim())?;
        let right = rep_matrix(rho_tilde, k, m.dim())?
            .try_inverse()
            .ok_or(Error::Singular)?;
        for &z in points {
            let lhs = m.eval(el.map.apply(z));
            let rhs = &left * m.eval(z) * &right;
            worst = worst.max(scaled_mdiff(&lhs, &rhs));
        }
    }
    Ok(worst)
}

/// `max ‖ρ(γ)M(z)e_col − M(γ·z)e_col‖` (scaled): invariance of a single
/// column, as for `h′ = Ψh` under `A₄`.
pub fn column_invariance(m: &MatrixFunction, col: usize, rho: &GroupRepresentation, emb: &GroupEmbedding, points: &[C64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, el) in emb.elements().iter().enumerate() {
        let left = rep_matrix(rho, k, m.dim())?;
        for &z in points {
            let lhs = &left * m.eval(z).column(col);
            let rhs = m.eval(el.map.apply(z)).column(col).into_owned();
            worst = worst.max(scaled_mdiff(&lhs, &rhs));
        }
    }
    Ok(worst)
}

/// Points of `lattice` staying clear of the poles of `m` modulo `lattice`.
pub fn group_sample(m: &MatrixFunction, emb: &GroupEmbedding, count: usize, seed: u64) -> Vec<C64> {
    let l = emb.lattice();
    let pts = probe_points(l, m.poles(), count, seed, CHECK_SEPARATION);
    debug_assert!(pts.iter().all(|&z| m.poles().iter().all(|&p| torus_distance(z, p, l) > 0.0)));
    pts
}

/// Determinant and equivariance residuals of the intertwiner matching
/// `standard_rep(emb, j)`, plus the wrong-sign control where one exists.
#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerReport {
    /// `"Phi"` or `"Psi"`.
    pub name: &'static str,
    pub det_defect: f64,
    pub equivariance: f64,
    /// `A₄` only: invariance of the `h` column under `ρ`.
    pub h_column: Option<f64>,
    /// `Φ` only: the larger of the determinant defect and the equivariance
    /// residual of [`Intertwiner1::wrong_sign_q_column`]. Translations alone
    /// only see the determinant; the reflection of `D_N` sees both.
    pub wrong_sign: Option<f64>,
}

/// `Ad Φ` as a 3×3 function on the carrier torus; for even `N` the cover's
/// sign ambiguity `Φ ↦ −Φ` drops out.
fn adjoint_of(m: &MatrixFunction, carrier: &Lattice) -> MatrixFunction {
    let inner = m.clone();
    MatrixFunction::new(carrier, 3, m.poles().to_vec(), move |z| {
        let a = ad(&dyn_to_m2(&inner.eval(z))).map(|g| g.matrix).unwrap_or_else(|_| nalgebra::Matrix3::from_element(c(f64::NAN, 0.0)));
        DMatrix::from_column_slice(3, 3, a.as_slice())
    })
}

/// `None` for groups without an intertwiner (rotations, the trivial group).
pub fn intertwiner_report(emb: &GroupEmbedding, j: i64, samples: usize, seed: u64) -> Result<Option<IntertwinerReport>> {
    let carrier = emb.lattice();
    match emb.kind() {
        GroupKind::CnTranslation | GroupKind::Dn if emb.param() >= 2 => {
            let ph = standard_phi(emb, j, seed)?;
            let m = ph.as_matrix_function();
            let rho = standard_rep(emb, j)?;
            let tilde = match emb.kind() {
                GroupKind::Dn => dihedral_tilde_rep(emb)?,
                _ => GroupRepresentation::trivial(emb),
            };
            let adj = adjoint_of(&m, carrier);
            let pts = group_sample(&adj, emb, samples, seed);
            let wrong_m = ph.wrong_sign_q_column();
            let wrong = adjoint_of(&wrong_m, carrier);
            Ok(Some(IntertwinerReport {
                name: "Phi",
                det_defect: m.det_defect(&pts),
                equivariance: check_intertwining(&adj, &rho, &tilde, emb, &pts)?,
                h_column: None,
                wrong_sign: Some(wrong_m.det_defect(&pts).max(check_intertwining(&wrong, &rho, &tilde, emb, &pts)?)),
            }))
        }
        GroupKind::C2xC2Translation | GroupKind::A4 => {
            let m = psi(emb)?.as_matrix_function();
            let rho = standard_rep(emb, j)?;
            let pts = group_sample(&m, emb, samples, seed);
            let (tilde, h_column) = if emb.kind() == GroupKind::A4 {
                (tetrahedral_tilde_rep(emb)?, Some(column_invariance(&m, 0, &rho, emb, &pts)?))
            } else {
                (GroupRepresentation::trivial(emb), None)
            };
            Ok(Some(IntertwinerReport {
                name: "Psi",
                det_defect: m.det_defect(&pts),
                equivariance: check_intertwining(&m, &rho, &tilde, emb, &pts)?,
                h_column,
                wrong_sign: None,
            }))
        }
        _ => Ok(None),
    }
}

/// Identity intertwiner used as a sanity baseline.
pub fn identity_function(lattice: &Lattice, dim: usize) -> MatrixFunction {
    MatrixFunction::constant(lattice, DMatrix::identity(dim, dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TorsionPoint;
    use crate::numeric::{frob, inv2, root_of_unity, scaled_diff};
    use crate::sl2rep::{
        ad, basis_e, basis_f, basis_h, delta, delta_rep, dihedral_tilde_rep, flip, standard_rep, tetrahedral_tilde_rep,
        GroupRepresentation,
    };

    fn generic() -> Lattice {
        Lattice::new(c(0.31, 1.07)).unwrap()
    }

    #[test]
    fn phi_is_unimodular_and_equivariant() {
        for n in 3..=6i64 {
            let emb = GroupEmbedding::cn_translation(&generic(), TorsionPoint::new(1, 2, n).unwrap()).unwrap();
            for j in (1..n).filter(|j| (2 * j) % n != 0) {
                let ph = phi(&emb, j, 1).unwrap();
                let m = ph.as_matrix_function();
                let pts = group_sample(&m, &emb, 50, 2);
                assert!(m.det_defect(&pts) < 1e-8, "N = {n}, j = {j}");
                let rho = delta_rep(&emb, j, n).unwrap();
                let triv = GroupRepresentation::trivial(&emb);
                assert!(check_intertwining(&m, &rho, &triv, &emb, &pts).unwrap() < 1e-8);
                let d = delta(j, n);
                for &z in pts.iter().take(10) {
                    let lhs = ph.matrix(z + ph.family.alpha_value());
                    assert!(scaled_mdiff(&lhs, &(d * ph.matrix(z))) < 1e-8);
                }
            }
        }
    }

    #[test]
    fn phi_rejects_degenerate_characters() {
        let emb = GroupEmbedding::cn_translation(&generic(), TorsionPoint::new(1, 0, 4).unwrap()).unwrap();
        assert!(matches!(phi(&emb, 2, 0), Err(Error::InvalidCharacter { .. })));
        assert!(matches!(phi(&emb, 0, 0), Err(Error::InvalidCharacter { .. })));
    }

    #[test]
    fn dihedral_reflection() {
        let emb = GroupEmbedding::dihedral(&Lattice::new(c(0.2, 1.3)).unwrap(), TorsionPoint::new(1, 0, 5).unwrap()).unwrap();
        let ph = phi(&emb, 1, 4).unwrap();
        let m = ph.as_matrix_function();
        let pts = group_sample(&m, &emb, 30, 5);
        let s = flip();
        let d = M2::new(c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        for &z in &pts {
            assert!(scaled_mdiff(&ph.matrix(-z), &(s * ph.matrix(z) * d)) < 1e-8);
        }
        let rho = delta_rep(&emb, 1, 5).unwrap();
        let tilde = dihedral_tilde_rep(&emb).unwrap();
        assert!(check_intertwining(&m, &rho, &tilde, &emb, &pts).unwrap() < 1e-8);
        let bad = check_intertwining(&ph.wrong_sign_q_column(), &rho, &tilde, &emb, &pts).unwrap();
        assert!(bad > 0.1);
        assert!(ph.wrong_sign_q_column().det_defect(&pts) > 0.1);
        // A column sign is invisible to diagonal ρ̃ but not to the determinant.
        assert!(check_intertwining(&m.with_column_negated(1), &rho, &tilde, &emb, &pts).unwrap() < 1e-8);
        assert!((m.with_column_negated(1).det_defect(&pts) - 2.0).abs() < 1e-8);
    }

    #[test]
    fn displays_match_conjugation() {
        let emb = GroupEmbedding::cn_translation(&generic(), TorsionPoint::new(1, 0, 5).unwrap()).unwrap();
        let ph = phi(&emb, 2, 3).unwrap();
        let pts = group_sample(&ph.as_matrix_function(), &emb, 10, 1);
        for &z in &pts {
            let m = ph.matrix(z);
            let mi = inv2(&m).unwrap();
            assert!(scaled_mdiff(&ph.h_display(z), &(m * basis_h() * mi)) < 1e-9);
            assert!(scaled_mdiff(&ph.e_display(z), &(m * basis_e() * mi)) < 1e-9);
            assert!(scaled_mdiff(&ph.f_display(z), &(m * basis_f() * mi)) < 1e-9);
        }
    }

    #[test]
    fn even_order_cover() {
        for alpha in [TorsionPoint::new(1, 0, 2).unwrap(), TorsionPoint::new(0, 1, 4).unwrap(), TorsionPoint::new(1, 1, 6).unwrap()] {
            let emb = GroupEmbedding::cn_translation(&generic(), alpha).unwrap();
            let ph = standard_phi(&emb, 1, 7).unwrap();
            let n = alpha.n();
            let pts = group_sample(&ph.as_matrix_function(), &emb, 20, 3);
            let rho = standard_rep(&emb, 1).unwrap();
            let adj = |z: C64| ad(&ph.matrix(z)).unwrap().matrix;
            let (w1, w2) = generic().periods();
            let a = alpha.to_complex(&generic());
            for &z in &pts {
                assert!(scaled_mdiff(&adj(z + a), &(rho.generators()[0].matrix * adj(z))) < 1e-8);
                assert!(scaled_mdiff(&adj(z + a * n as f64), &adj(z)) < 1e-8);
                assert!(scaled_mdiff(&adj(z + w1), &adj(z)) < 1e-8);
                assert!(scaled_mdiff(&adj(z + w2), &adj(z)) < 1e-8);
            }
        }
    }

    #[test]
    fn psi_on_three_lattices() {
        for l in [Lattice::square(), Lattice::hexagonal(), generic()] {
            let emb = GroupEmbedding::c2xc2(&l).unwrap();
            let ps = psi(&emb).unwrap();
            let m = ps.as_matrix_function();
            let pts = group_sample(&m, &emb, 50, 9);
            assert!(m.det_defect(&pts) < 1e-8);
            let rho = standard_rep(&emb, 1).unwrap();
            let triv = GroupRepresentation::trivial(&emb);
            assert!(check_intertwining(&m, &rho, &triv, &emb, &pts).unwrap() < 1e-8);
            assert!((m.with_column_negated(2).det_defect(&pts) - 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn psi_columns_form_an_sl2_triple() {
        let emb = GroupEmbedding::c2xc2(&generic()).unwrap();
        let ps = psi(&emb).unwrap();
        let z = generic().point(0.3, 0.2);
        let m = ps.matrix(z);
        let cols: Vec<M2> = (0..3)
            .map(|k| crate::sl2rep::from_coords(&nalgebra::Vector3::new(m[(0, k)], m[(1, k)], m[(2, k)])))
            .collect();
        let br = |a: &M2, b: &M2| a * b - b * a;
        assert!(frob(&(br(&cols[0], &cols[1]) - cols[1] * c(2.0, 0.0))) < 1e-8 * frob(&cols[1]).max(1.0));
        assert!(frob(&(br(&cols[1], &cols[2]) - cols[0])) < 1e-8 * frob(&cols[0]).max(1.0));
    }

    #[test]
    fn tetrahedral_h_column() {
        let emb = GroupEmbedding::a4(&Lattice::hexagonal()).unwrap();
        let ps = psi(&emb).unwrap();
        let m = ps.as_matrix_function();
        let pts = group_sample(&m, &emb, 30, 12);
        let rho = standard_rep(&emb, 1).unwrap();
        assert!(column_invariance(&m, 0, &rho, &emb, &pts).unwrap() < 1e-8);
        assert!(column_invariance(&m, 1, &rho, &emb, &pts).unwrap() > 1e-3);
        let tilde = tetrahedral_tilde_rep(&emb).unwrap();
        assert!(check_intertwining(&m, &rho, &tilde, &emb, &pts).unwrap() < 1e-8);
        let w = root_of_unity(1, 3);
        let z = pts[0];
        let r = ps.matrix(w.conj() * z).try_inverse().unwrap() * DMatrix::from_column_slice(3, 3, rho.generators()[0].matrix.as_slice()) * ps.matrix(z);
        assert!(scaled_diff(r[(1, 1)], w) < 1e-8 && scaled_diff(r[(2, 2)], w * w) < 1e-8);
    }

    #[test]
    fn reports_cover_the_catalog() {
        for l in [Lattice::square(), Lattice::hexagonal(), generic()] {
            for emb in crate::torusgroup::catalog(&l, &crate::torusgroup::DEFAULT_ORDERS) {
                let Some(r) = intertwiner_report(&emb, 1, 20, 3).unwrap() else {
                    assert!(matches!(emb.kind(), GroupKind::ClRotation));
                    continue;
                };
                assert!(r.det_defect < 1e-8 && r.equivariance < 1e-8, "{}: {r:?}", emb.label());
                assert!(r.h_column.is_none_or(|v| v < 1e-8));
                if emb.param() >= 3 || emb.kind() == GroupKind::Dn {
                    assert!(r.wrong_sign.is_none_or(|v| v > 1e-3), "{}: {r:?}", emb.label());
                }
            }
        }
    }

    #[test]
    fn identity_is_trivially_intertwining() {
        let emb = GroupEmbedding::c2xc2(&generic()).unwrap();
        let rho = standard_rep(&emb, 1).unwrap();
        let id = identity_function(&generic(), 3);
        let pts = group_sample(&id, &emb, 5, 0);
        assert_eq!(check_intertwining(&id, &rho, &rho, &emb, &pts).unwrap(), 0.0);
    }
}
