use coxwall::classification::{
    classify, classify_system, diagram_automorphisms, gram_definiteness, is_group, is_rigid, nerve,
    order_of_finite, Definiteness, SpecialSubset, TypeTag,
};
use coxwall::coxeter::{enumerate_group, presets, CoxeterMatrix, CoxeterSystem, Label};
use proptest::prelude::*;

const LABELS: [Label; 6] =
    [Label::Finite(2), Label::Finite(3), Label::Finite(4), Label::Finite(5), Label::Finite(6), Label::Infinity];

fn matrix(rank: usize, picks: &[usize]) -> CoxeterMatrix {
    let mut k = 0;
    let mut upper = vec![vec![Label::Finite(1); rank]; rank];
    for i in 0..rank {
        for j in i + 1..rank {
            upper[i][j] = LABELS[picks[k]];
            upper[j][i] = LABELS[picks[k]];
            k += 1;
        }
    }
    CoxeterMatrix::new(upper).unwrap()
}

fn random_matrix(max_rank: usize) -> impl Strategy<Value = CoxeterMatrix> {
    (2..=max_rank).prop_flat_map(|r| {
        prop::collection::vec(0..LABELS.len(), r * (r - 1) / 2).prop_map(move |p| matrix(r, &p))
    })
}

fn component_names(sys: &CoxeterSystem) -> (TypeTag, Vec<String>) {
    let t = classify_system(sys);
    let mut names: Vec<String> = t.components.iter().map(|c| c.name.clone().unwrap_or_default()).collect();
    names.sort();
    (t.tag, names)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classify_ignores_relabeling(
        (m, perm) in random_matrix(6).prop_flat_map(|m| {
            let r = m.rank();
            (Just(m), Just((0..r).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let a = CoxeterSystem::new(m.clone()).unwrap();
        let b = CoxeterSystem::new(m.permuted(&perm)).unwrap();
        prop_assert_eq!(component_names(&a), component_names(&b));
    }

    #[test]
    fn classification_matches_gram_oracle(m in random_matrix(3)) {
        let sys = CoxeterSystem::new(m).unwrap();
        let tag = classify_system(&sys).tag;
        let gram = gram_definiteness(&sys).unwrap();
        let expected = match tag {
            TypeTag::Finite => Definiteness::PositiveDefinite,
            TypeTag::Affine => Definiteness::Degenerate,
            TypeTag::Indefinite => Definiteness::Indefinite,
        };
        prop_assert_eq!(gram, expected);
    }

    #[test]
    fn finite_orders_match_bfs(m in random_matrix(4)) {
        let sys = CoxeterSystem::new(m).unwrap();
        let whole = SpecialSubset::whole(&sys);
        if let Ok(order) = order_of_finite(&whole) {
            if order <= 1200 {
                prop_assert_eq!(enumerate_group(&sys, 2000).unwrap().len() as u128, order);
            }
        } else {
            prop_assert!(!classify(&whole).is_finite());
        }
    }

    #[test]
    fn nerve_is_a_complex(m in random_matrix(6)) {
        let sys = CoxeterSystem::new(m).unwrap();
        let n = nerve(&sys);
        for &f in n.faces() {
            prop_assert!(classify(&SpecialSubset::from_mask(&sys, f)).is_finite());
            for s in 0..sys.rank() {
                prop_assert!(n.contains(f & !(1 << s)));
            }
        }
        for f in n.maximal_faces() {
            for s in (0..sys.rank()).filter(|s| f >> s & 1 == 0) {
                prop_assert!(!classify(&SpecialSubset::from_mask(&sys, f | 1 << s)).is_finite());
            }
        }
        let finite_count = (0..1u64 << sys.rank())
            .filter(|&t| classify(&SpecialSubset::from_mask(&sys, t)).is_finite())
            .count();
        prop_assert_eq!(n.faces().len(), finite_count);
    }

    #[test]
    fn rigidity_witness_replays(m in random_matrix(6)) {
        let sys = CoxeterSystem::new(m).unwrap();
        let r = is_rigid(&sys);
        prop_assert_eq!(r.rigid, r.witness.is_none());
        if let Some(w) = r.witness {
            prop_assert!(w.verify(&sys));
        }
        let autos = diagram_automorphisms(&sys).unwrap();
        prop_assert!(is_group(&autos));
        prop_assert!(autos.iter().all(|a| a.is_valid_for(&sys)));
    }
}

#[test]
fn gram_oracle_on_catalog_subsets() {
    for sys in [presets::a3(), presets::b3(), presets::h3(), presets::affine_a2(), presets::bourdon_k33(), presets::h3_bar()] {
        for t in 0..1u64 << sys.rank() {
            if t.count_ones() > 3 {
                continue;
            }
            let sub = SpecialSubset::from_mask(&sys, t);
            let tag = classify(&sub).tag;
            let restricted = CoxeterSystem::new(sub.matrix().clone()).unwrap();
            let gram = gram_definiteness(&restricted).unwrap();
            assert_eq!(tag == TypeTag::Finite, gram == Definiteness::PositiveDefinite, "{t:b}");
            assert_eq!(tag == TypeTag::Affine, gram == Definiteness::Degenerate, "{t:b}");
        }
    }
}
