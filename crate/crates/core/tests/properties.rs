mod common;

use common::*;
use omlab_core::greechie::{
    contexts_from_rays, diagram_to_gdl, lattice_to_dot, lattice_to_json, parse_greechie, paste_to_lattice,
    ContextHypergraph, GreechieDiagram, RaySet,
};
use omlab_core::lattice::{central_decomposition, find_isomorphism, product, FiniteOrtholattice, LatticeTable};
use omlab_core::modal::{canonical_box, verify_modal_axioms, ModalAlgebra};
use omlab_core::valuation::{
    enumerate_blocks, find_global_valuation, parity_certificate, search_assignments, SearchLimits, SearchMode,
};
use omlab_core::Error;
use proptest::prelude::*;

fn factors() -> Vec<FiniteOrtholattice> {
    ["boolean-2.json", "boolean-4.json", "mo2.json", "mo3.gdl", "two-triangles.gdl"].map(lattice).to_vec()
}

fn random_product() -> impl Strategy<Value = FiniteOrtholattice> {
    prop::collection::vec(0usize..5, 1..=2).prop_map(|picks| {
        let fs = factors();
        let chosen: Vec<&FiniteOrtholattice> = picks.iter().map(|&i| &fs[i]).collect();
        product(&chosen)
    })
}

/// Random diagrams of 3-atom blocks on up to 9 atoms; blocks that would
/// break the diagram invariants are dropped.
fn random_diagram() -> impl Strategy<Value = GreechieDiagram> {
    prop::collection::vec(prop::sample::subsequence((0..9).collect::<Vec<usize>>(), 3), 1..6).prop_map(|blocks| {
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for b in blocks {
            if kept.iter().all(|k| k.iter().filter(|a| b.contains(a)).count() <= 1) {
                kept.push(b);
            }
        }
        GreechieDiagram::new(kept.iter().map(|b| b.iter().map(|a| format!("a{a}")))).unwrap()
    })
}

fn small_ray() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 3).prop_filter("non-zero", |v| v.iter().any(|&x| x != 0))
}

fn ray_set(rays: &[Vec<i64>], scale: Option<(usize, i64, i64)>) -> Option<RaySet> {
    let named = rays
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let coords = v
                .iter()
                .map(|&x| match scale {
                    Some((k, p, q)) if k == i => (x as i128 * p as i128, q as i128),
                    _ => (x as i128, 1),
                })
                .collect();
            (format!("r{i}"), coords)
        })
        .collect();
    RaySet::new(3, named).ok()
}

fn random_hypergraph() -> impl Strategy<Value = ContextHypergraph> {
    prop::collection::vec(prop::sample::subsequence((0..7).collect::<Vec<usize>>(), 1..4), 1..7).prop_filter_map(
        "distinct contexts",
        |cs| ContextHypergraph::from_named(cs.iter().map(|c| c.iter().map(|o| format!("o{o}")).collect::<Vec<_>>())).ok(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip_is_identity(l in random_product()) {
        let json = lattice_to_json(&l).unwrap();
        let back = FiniteOrtholattice::new(&LatticeTable::from_json(&json).unwrap().to_raw().unwrap()).unwrap();
        prop_assert_eq!(&back, &l);
        prop_assert_eq!(lattice_to_dot(&back), lattice_to_dot(&l));
    }

    #[test]
    fn canonical_box_satisfies_modal_axioms(l in random_product()) {
        let boxes = canonical_box(&l).unwrap();
        prop_assert!(verify_modal_axioms(&l, &boxes, 4).unwrap().passed());
        let m = ModalAlgebra::canonical(l.clone()).unwrap();
        let center = l.central_elements();
        for a in l.elements() {
            let up = center.iter().copied().filter(|&z| l.leq(a, z)).min_by_key(|&z| l.elements().filter(|&y| l.leq(y, z)).count()).unwrap();
            prop_assert_eq!(m.possibility(a), up);
            prop_assert_eq!(m.possibility(a), l.ortho(m.necessity(l.ortho(a))));
            prop_assert!(center.iter().all(|&z| !l.leq(a, z) || l.leq(up, z)));
            prop_assert!(center.iter().all(|&z| !l.leq(z, a) || l.leq(z, m.necessity(a))));
        }
    }

    #[test]
    fn central_decomposition_reassembles(l in random_product()) {
        let d = central_decomposition(&l).unwrap();
        for f in &d.factors {
            prop_assert_eq!(f.central_elements().len(), 2);
        }
        prop_assert!(find_isomorphism(&d.product, &l).is_some());
    }

    #[test]
    fn pasting_is_validated_and_recovers_blocks(d in random_diagram()) {
        match paste_to_lattice(&d) {
            Ok(l) => {
                prop_assert_eq!(enumerate_blocks(&l).unwrap().len(), d.blocks().len());
                let v = find_global_valuation(&l, SearchMode::Count, SearchLimits::default()).unwrap();
                let k = search_assignments(&d.to_hypergraph(), SearchMode::Count, SearchLimits::default()).unwrap();
                prop_assert_eq!(v.count, k.count);
            }
            Err(Error::NotOml(report)) => prop_assert!(!report.failures.is_empty()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
        prop_assert_eq!(parse_greechie(&diagram_to_gdl(&d)).unwrap(), d);
    }

    #[test]
    fn contexts_are_invariant_under_scaling(
        rays in prop::collection::vec(small_ray(), 2..12),
        k in 0usize..12,
        p in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 5]),
        q in prop::sample::select(vec![1i64, 2, 3, 7]),
    ) {
        let plain = ray_set(&rays, None);
        prop_assume!(plain.is_some());
        let plain = plain.unwrap();
        let scaled = ray_set(&rays, Some((k % rays.len(), p, q))).unwrap();
        prop_assert_eq!(contexts_from_rays(&plain).unwrap(), contexts_from_rays(&scaled).unwrap());
    }

    #[test]
    fn parity_certificate_never_contradicts_search(h in random_hypergraph()) {
        let r = search_assignments(&h, SearchMode::Count, SearchLimits::default()).unwrap();
        if parity_certificate(&h).is_some() {
            prop_assert_eq!(r.count, 0);
        }
        prop_assert!(r.exhausted);
    }
}
