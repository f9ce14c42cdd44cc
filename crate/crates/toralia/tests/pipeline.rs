//! End-to-end checks: catalog, normal form, classification.

use proptest::prelude::*;
use toralia::classify::{classify, cross_validate, AlgebraKind};
use toralia::lattice::{Lattice, TorsionPoint};
use toralia::numeric::{c, scaled_diff};
use toralia::torusgroup::{branch_points, catalog, GroupEmbedding, GroupKind, DEFAULT_ORDERS};

fn three_lattices() -> [Lattice; 3] {
    [Lattice::square(), Lattice::hexagonal(), Lattice::new(c(0.31, 1.07)).unwrap()]
}

/// Written out independently of the library's own mapping.
fn table_kind(kind: GroupKind, param: u32) -> AlgebraKind {
    use AlgebraKind::*;
    match (kind, param) {
        (GroupKind::CnTranslation, _) => CurrentAlgebra,
        (GroupKind::ClRotation, 2) => SFamily,
        (GroupKind::ClRotation, 3 | 4 | 6) => Onsager,
        (GroupKind::C2xC2Translation, _) => CurrentAlgebra,
        (GroupKind::Dn, _) => SFamily,
        (GroupKind::A4, _) => Onsager,
        other => panic!("not a catalog case: {other:?}"),
    }
}

#[test]
fn every_catalog_case_cross_validates() {
    for l in three_lattices() {
        for emb in catalog(&l, &DEFAULT_ORDERS) {
            let r = cross_validate(&emb, 1).unwrap();
            assert!(r.passed(), "{} on {:?}: {:?} {:?}", emb.label(), l.tau(), r.entries, r.error);
            assert_eq!(r.classification.kind, table_kind(emb.kind(), emb.param()));
            assert_eq!(r.abelianization_dim, Some(r.classification.branch_count));
        }
    }
}

#[test]
fn other_characters_cross_validate() {
    let l = Lattice::new(c(-0.2, 1.3)).unwrap();
    for (alpha, j) in [((1, 2, 5), 2), ((0, 1, 7), 3), ((1, 1, 3), 2)] {
        let a = TorsionPoint::new(alpha.0, alpha.1, alpha.2).unwrap();
        for emb in [GroupEmbedding::cn_translation(&l, a).unwrap(), GroupEmbedding::dihedral(&l, a).unwrap()] {
            let r = cross_validate(&emb, j).unwrap();
            assert!(r.passed(), "{} j={j}: {:?} {:?}", emb.label(), r.entries, r.error);
        }
    }
}

#[test]
fn distinct_kinds_for_the_two_order_four_groups() {
    for l in three_lattices() {
        let d2 = classify(&GroupEmbedding::dihedral(&l, TorsionPoint::new(1, 0, 2).unwrap()).unwrap()).unwrap();
        let v4 = classify(&GroupEmbedding::c2xc2(&l).unwrap()).unwrap();
        assert_eq!((d2.kind, v4.kind), (AlgebraKind::SFamily, AlgebraKind::CurrentAlgebra));
    }
}

fn tau_strategy() -> impl Strategy<Value = Lattice> {
    (-0.5f64..0.5, 0.9f64..2.0).prop_map(|(re, im)| Lattice::new(c(re, im)).unwrap())
}

fn alpha_strategy() -> impl Strategy<Value = TorsionPoint> {
    (1i64..=8).prop_flat_map(|n| (0..n, 0..n, Just(n))).prop_filter_map("nonzero", |(a, b, n)| {
        TorsionPoint::new(a, b, n).ok().filter(|p| !p.is_zero())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn branch_counts_stay_in_the_table(l in tau_strategy(), alpha in alpha_strategy()) {
        for emb in [GroupEmbedding::cn_translation(&l, alpha).unwrap(), GroupEmbedding::dihedral(&l, alpha).unwrap()] {
            let k = classify(&emb).unwrap();
            prop_assert!([0, 2, 3].contains(&k.branch_count));
            prop_assert_eq!(k.branch_count, branch_points(&emb).count);
            prop_assert_eq!(k.kind, table_kind(emb.kind(), emb.param()));
        }
        for emb in catalog(&l, &DEFAULT_ORDERS) {
            prop_assert!(classify(&emb).is_ok());
        }
    }

    #[test]
    fn homothetic_lattices_classify_alike(
        l in tau_strategy(),
        r in 0.2f64..3.0,
        arg in -3.1f64..3.1,
    ) {
        let alpha = c(r * arg.cos(), r * arg.sin());
        let m = Lattice::with_scale(alpha, l.tau()).unwrap();
        for (a, b) in catalog(&l, &[2, 3, 4]).iter().zip(catalog(&m, &[2, 3, 4]).iter()) {
            let (ka, kb) = (classify(a).unwrap(), classify(b).unwrap());
            prop_assert_eq!(ka.kind, kb.kind);
            if let (Some(x), Some(y)) = (ka.j_invariant, kb.j_invariant) {
                prop_assert!(scaled_diff(x, y) < 1e-7);
            } else {
                prop_assert_eq!(ka.j_invariant.is_none(), kb.j_invariant.is_none());
            }
        }
    }
}
