use crate::args::{Common, EvalArgs, VerifyArgs};
use crate::report::{checks_value, cx, dmat, m2, Check};
use serde_json::{json, Map, Value};
use toralia::classify::{classify, cross_validate, AlgebraKind, Classification};
use toralia::elliptic::{SeriesConfig, Weierstrass};
use toralia::funcalg::{c2c2_constants, fit_lambda_mu, PFamily};
use toralia::intertwine::{intertwiner_report, psi, standard_phi};
use toralia::lattice::torus_distance;
use toralia::normalform::{abelianization_dim, invariance_residual, normal_form, structure_agreement, verify_brackets, AliaGenerators};
use toralia::numeric::{c, det2, frob, scaled_diff};
use toralia::sl2rep::standard_rep;
use toralia::torusgroup::{branch_points, catalog, expected_branch_count, GroupEmbedding, GroupKind, LatticeSymmetry, DEFAULT_ORDERS};

/// How a command ended, apart from its report.
pub enum Outcome {
    Pass(Value),
    /// Report produced, but some verification failed.
    Fail(Value),
}

pub type CmdResult = Result<Outcome, String>;

/// Points closer than this (in min periods) to a pole are refused by `eval`.
pub const POLE_GUARD: f64 = 1e-3;
/// Relative size of the perturbations behind the negative controls.
pub const CONTROL_EPS: f64 = 1e-2;
pub const CONTROL_FLOOR: f64 = 1e-3;

pub const BRACKET_TOL: f64 = 1e-7;
pub const TRACE_TOL: f64 = 1e-10;
pub const INVARIANCE_TOL: f64 = 1e-8;
pub const FIT_TOL: f64 = 1e-6;
pub const J_TOL: f64 = 1e-7;
pub const INTERTWINER_TOL: f64 = 1e-8;
/// Exact (integer) comparisons pass when the difference is below this.
const EXACT: f64 = 0.5;

fn lattice_value(l: &toralia::lattice::Lattice) -> Value {
    json!({ "tau": cx(l.tau()), "scale": cx(l.scale()) })
}

fn symmetry_name(s: LatticeSymmetry) -> &'static str {
    match s {
        LatticeSymmetry::Generic => "generic",
        LatticeSymmetry::Square => "square",
        LatticeSymmetry::Hexagonal => "hexagonal",
    }
}

fn build(emb: &GroupEmbedding, j: i64) -> Result<AliaGenerators, String> {
    standard_rep(emb, j).and_then(|rep| normal_form(emb, &rep, j)).map_err(|e| e.to_string())
}

pub fn catalog_cmd(cfg: &Common) -> CmdResult {
    let l = cfg.lattice()?;
    let sym = LatticeSymmetry::of(&l);
    let entries: Vec<Value> = catalog(&l, &DEFAULT_ORDERS)
        .iter()
        .map(|emb| {
            let k = classify(emb).map(|k| k.kind.name().to_string()).unwrap_or_else(|e| format!("error: {e}"));
            json!({
                "label": emb.label(),
                "group": emb.kind().name(),
                "order": emb.order(),
                "branch_count": branch_points(emb).count,
                "kind": k,
            })
        })
        .collect();
    let mut notes = vec![format!("C_N and D_N are listed for N in {DEFAULT_ORDERS:?} with shift w1/N; any a/b/n works via --torsion")];
    match sym {
        LatticeSymmetry::Generic => notes.push("only +-1 preserve the lattice: no C3, C4, C6 rotations and no A4".into()),
        LatticeSymmetry::Square => notes.push("square class: C4 rotation admitted; C3, C6 and A4 need the hexagonal class".into()),
        LatticeSymmetry::Hexagonal => notes.push("hexagonal class: C3, C6 and A4 admitted; C4 needs the square class".into()),
    }
    Ok(Outcome::Pass(json!({
        "lattice": lattice_value(&l),
        "symmetry": symmetry_name(sym),
        "embeddings": entries,
        "notes": notes,
    })))
}

fn classification_value(k: &Classification) -> Value {
    json!({
        "kind": k.kind.name(),
        "branch_count": k.branch_count,
        "tau_class": k.tau_class.map(|t| json!({ "tau_reduced": cx(t.tau_reduced), "transform": t.transform })),
        "j_invariant": k.j_invariant.map(cx),
        "tau_caveat": k.tau_caveat,
        "provenance": {
            "label": k.provenance.label,
            "translation_order": k.provenance.translation_order,
            "quotient": lattice_value(&k.provenance.quotient),
        },
    })
}

pub fn classify_cmd(cfg: &Common) -> CmdResult {
    let emb = cfg.embedding()?;
    let r = cross_validate(&emb, cfg.char_j).map_err(|e| e.to_string())?;
    if let Some(e) = &r.error {
        return Err(e.clone());
    }
    let mut checks = Map::new();
    for e in &r.entries {
        checks.insert(e.name.into(), json!({ "value": e.value, "limit": e.limit, "passed": e.passed }));
    }
    let mut v = classification_value(&r.classification);
    v["cross_validation"] = json!({
        "passed": r.passed(),
        "abelianization_dim": r.abelianization_dim,
        "checks": checks,
    });
    Ok(if r.passed() { Outcome::Pass(v) } else { Outcome::Fail(v) })
}

pub fn constants_cmd(cfg: &Common) -> CmdResult {
    let l = cfg.lattice()?;
    let w = Weierstrass::with_config(&l, SeriesConfig { max_terms: cfg.trunc, ..SeriesConfig::default() });
    let inv = w.invariants();
    let mut v = json!({
        "lattice": lattice_value(&l),
        "g2": cx(inv.g2),
        "g3": cx(inv.g3),
        "e1": cx(inv.e1),
        "e2": cx(inv.e2),
        "e3": cx(inv.e3),
        "discriminant": cx(inv.discriminant),
        "j": cx(inv.j),
        "trunc": cfg.trunc,
    });
    let emb = cfg.embedding()?;
    match emb.kind() {
        GroupKind::C2xC2Translation | GroupKind::A4 => {
            let k = c2c2_constants(&l);
            v["c2xc2"] = json!({
                "alpha1": cx(k.alpha1), "alpha2": cx(k.alpha2),
                "beta1": cx(k.beta1), "beta2": cx(k.beta2),
                "A1": cx(k.a1), "B1": cx(k.b1),
                "sqrt_alpha2_beta2": cx(k.sqrt_a2b2),
                "alpha1_beta1": cx(k.alpha1 * k.beta1),
                "p0_square_coefficient": cx(k.p0_square_coefficient()),
            });
        }
        GroupKind::CnTranslation | GroupKind::Dn if emb.param() >= 2 => {
            let shift = emb.shift().expect("translation shift");
            let fit = GroupEmbedding::cn_translation(&l, shift)
                .and_then(|t| PFamily::new(&t))
                .and_then(|f| fit_lambda_mu(&f, cfg.char_j, cfg.char_j, cfg.seed));
            v["lambda_mu"] = match fit {
                Ok(lm) => json!({ "j": cfg.char_j, "k": cfg.char_j, "lambda": cx(lm.lambda), "mu": cx(lm.mu), "residual": lm.residual }),
                Err(e) => json!({ "j": cfg.char_j, "error": e.to_string() }),
            };
        }
        _ => {}
    }
    Ok(Outcome::Pass(v))
}

pub fn eval_cmd(a: &EvalArgs) -> CmdResult {
    let cfg = &a.common;
    let emb = cfg.embedding()?;
    let g = build(&emb, cfg.char_j)?;
    let l = *emb.lattice();
    let z = c(a.z_re, a.z_im);
    let near = g.poles().iter().map(|&p| torus_distance(z, p, &l)).fold(f64::INFINITY, f64::min);
    if near < POLE_GUARD * l.min_period() {
        return Err(format!("z = {} + {}i is within {near:e} of a pole", a.z_re, a.z_im));
    }
    let [h, e, f] = g.eval(z);
    let p = g.p_at(z);
    let br = e * f - f * e - h * p;
    let mut v = json!({
        "z": cx(z),
        "label": emb.label(),
        "H": m2(&h),
        "E": m2(&e),
        "F": m2(&f),
        "p": cx(p),
        "p_fit": cx(g.p_fit_at(z)),
        "traces": [cx(h.trace()), cx(e.trace()), cx(f.trace())],
        "ef_minus_hp": frob(&br) / frob(&h).max(1.0) / p.norm().max(1.0),
        "ring": g.ring().describe(),
    });
    match emb.kind() {
        GroupKind::CnTranslation | GroupKind::Dn if emb.param() >= 2 => {
            let ph = standard_phi(&emb, cfg.char_j, toralia::normalform::PHI_SEED).map_err(|e| e.to_string())?;
            let m = ph.matrix(z);
            v["Phi"] = json!({ "matrix": m2(&m), "det": cx(det2(&m)) });
        }
        GroupKind::C2xC2Translation | GroupKind::A4 => {
            let m = psi(&emb).map_err(|e| e.to_string())?.matrix(z);
            v["Psi"] = json!({ "matrix": dmat(&m), "det": cx(m.determinant()) });
        }
        _ => {}
    }
    Ok(Outcome::Pass(v))
}

pub fn verify_cmd(a: &VerifyArgs) -> CmdResult {
    let cfg = &a.common;
    let emb = cfg.embedding()?;
    let base = build(&emb, cfg.char_j)?;
    let g = match a.perturb {
        Some(eps) => base.with_perturbed_e(c(eps, 0.0)),
        None => base.clone(),
    };
    let lim = |d: f64| cfg.tol.unwrap_or(d);
    let (n, seed) = (cfg.samples, cfg.seed);
    let mut checks = Vec::new();

    let bp = branch_points(&emb).count;
    let kind = AlgebraKind::from_branch_count(bp).map_err(|e| e.to_string())?;
    checks.push(Check::below("branch_count_vs_closed_form", bp.abs_diff(expected_branch_count(&emb)) as f64, EXACT));
    checks.push(Check::below("kind_vs_group", (kind != AlgebraKind::expected_for(emb.kind(), emb.param())) as u8 as f64, EXACT));
    let dim = abelianization_dim(&g).map(|d| d.abs_diff(bp) as f64).unwrap_or(f64::INFINITY);
    checks.push(Check::below("abelianization_dim_vs_branch_count", dim, EXACT));

    let br = verify_brackets(&g, n, seed);
    checks.push(Check::below("bracket_he", br.he, lim(BRACKET_TOL)));
    checks.push(Check::below("bracket_hf", br.hf, lim(BRACKET_TOL)));
    checks.push(Check::below("bracket_ef", br.ef, lim(BRACKET_TOL)));
    checks.push(Check::below("trace", br.trace, lim(TRACE_TOL)));
    checks.push(Check::below("invariance", invariance_residual(&g, n.div_ceil(2), seed), lim(INVARIANCE_TOL)));
    checks.push(Check::below("structure_fit", g.structure().fit_residual, lim(FIT_TOL)));
    checks.push(Check::below("structure_agreement", structure_agreement(&g, n, seed), lim(FIT_TOL)));
    if let Ok(k) = classify(&emb) {
        if let Some(j0) = k.j_invariant {
            let jr = Weierstrass::new(g.ring().lattice()).j_invariant();
            checks.push(Check::below("j_consistency", scaled_diff(jr, j0), lim(J_TOL)));
        }
    }
    if let Some(r) = intertwiner_report(&emb, cfg.char_j, n, seed).map_err(|e| e.to_string())? {
        checks.push(Check::below(format!("{}_det", r.name), r.det_defect, lim(INTERTWINER_TOL)));
        checks.push(Check::below(format!("{}_equivariance", r.name), r.equivariance, lim(INTERTWINER_TOL)));
        if let Some(h) = r.h_column {
            checks.push(Check::below("Psi_h_column", h, lim(INTERTWINER_TOL)));
        }
        if let (Some(ws), true) = (r.wrong_sign, emb.param() >= 3 || emb.kind() == GroupKind::Dn) {
            checks.push(Check::above("control_wrong_sign_Phi", ws, CONTROL_FLOOR));
        }
    }
    let bad_e = base.with_perturbed_e(c(CONTROL_EPS, 0.0));
    let be = verify_brackets(&bad_e, n, seed);
    checks.push(Check::above("control_perturbed_e_brackets", be.he.max(be.ef), CONTROL_FLOOR));
    if emb.order() > 1 {
        checks.push(Check::above("control_perturbed_e_invariance", invariance_residual(&bad_e, n.div_ceil(2), seed), CONTROL_FLOOR));
    }
    let bf = verify_brackets(&base.with_scaled_f(c(1.0 + CONTROL_EPS, 0.0)), n, seed);
    checks.push(Check::above("control_scaled_f", bf.ef, CONTROL_FLOOR));

    let passed = checks.iter().all(Check::passed);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let v = json!({
        "label": emb.label(),
        "char_j": cfg.char_j,
        "samples": n,
        "seed": seed,
        "perturb": a.perturb,
        "checks": checks_value(&checks),
        "failed": failed,
        "passed": passed,
    });
    Ok(if passed { Outcome::Pass(v) } else { Outcome::Fail(v) })
}
