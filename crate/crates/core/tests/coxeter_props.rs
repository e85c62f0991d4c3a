use coxwall::coxeter::{enumerate_ball, enumerate_skeleton, presets, CoxeterSystem};
use proptest::prelude::*;

fn systems() -> Vec<CoxeterSystem> {
    vec![
        presets::a2(),
        presets::b2(),
        presets::dihedral(5),
        presets::a3(),
        presets::b3(),
        presets::h3(),
        presets::affine_a2(),
        presets::infinite_dihedral(),
        presets::w4_c5(),
        presets::bourdon_k33(),
        presets::h3_bar(),
    ]
}

fn system_and_words() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (0..systems().len()).prop_flat_map(|k| {
        let r = systems()[k].rank();
        (Just(k), prop::collection::vec(0..r, 0..12), prop::collection::vec(0..r, 0..12))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_form_is_multiplicative((k, u, v) in system_and_words()) {
        let sys = &systems()[k];
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        let lhs = sys.element(&uv).unwrap();
        let rhs = sys.multiply(&sys.element(&u).unwrap(), &sys.element(&v).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn inverse_cancels((k, u, _v) in system_and_words()) {
        let sys = &systems()[k];
        let e = sys.element(&u).unwrap();
        let inv = sys.invert(&e).unwrap();
        prop_assert!(sys.multiply(&e, &inv).unwrap().is_identity());
        prop_assert_eq!(inv.length(), e.length());
        let rev: Vec<usize> = u.iter().rev().copied().collect();
        prop_assert_eq!(sys.element(&rev).unwrap(), inv);
    }

    #[test]
    fn normal_word_is_reduced_and_lex_least((k, u, _v) in system_and_words()) {
        let sys = &systems()[k];
        let e = sys.element(&u).unwrap();
        let w = e.word_indices();
        prop_assert!(sys.is_reduced(&w).unwrap());
        prop_assert_eq!(sys.element(&w).unwrap(), e.clone());
        // The first letter is the least left descent.
        if let Some(&first) = w.first() {
            prop_assert_eq!(sys.left_descents(&e).unwrap().first().copied(), Some(first));
        }
    }

    #[test]
    fn word_parity((k, u, _v) in system_and_words()) {
        let sys = &systems()[k];
        let e = sys.element(&u).unwrap();
        prop_assert_eq!(e.length() % 2, u.len() % 2);
        prop_assert!(e.length() <= u.len());
    }
}

#[test]
fn generator_changes_length_by_one() {
    for sys in systems() {
        let ball = enumerate_ball(&sys, 4).unwrap();
        for w in ball.elements() {
            for s in 0..sys.rank() {
                let sw = sys.multiply(&sys.generator(s), w).unwrap();
                let ws = sys.multiply_generator(w, s).unwrap();
                assert_eq!(sw.length().abs_diff(w.length()), 1);
                assert_eq!(ws.length().abs_diff(w.length()), 1);
            }
        }
    }
}

#[test]
fn generators_are_involutions() {
    for sys in systems() {
        let id = sys.identity();
        assert!(id.matrix().iter().zip(id.inverse_matrix()).all(|(a, b)| a == b));
        for s in 0..sys.rank() {
            let g = sys.generator(s);
            assert!(sys.multiply(&g, &g).unwrap().is_identity());
            assert_eq!(g.matrix(), g.inverse_matrix());
        }
    }
}

#[test]
fn reduced_iff_bfs_distance() {
    for sys in systems().into_iter().filter(|s| s.rank() <= 4) {
        let ball = enumerate_ball(&sys, 6).unwrap();
        let mut level = vec![0; ball.len()];
        for k in 0..=6 {
            for i in ball.level(k) {
                level[i] = k;
            }
        }
        let rank = sys.rank();
        for len in 0..=6u32 {
            for code in 0..rank.pow(len) {
                let word: Vec<usize> = (0..len).map(|i| code / rank.pow(i) % rank).collect();
                let end = word.iter().try_fold(0, |i, &s| ball.neighbor(i, s)).unwrap();
                assert_eq!(sys.is_reduced(&word).unwrap(), level[end] == word.len(), "{word:?}");
            }
        }
    }
}

#[test]
fn skeleton_matches_ball() {
    for sys in systems() {
        let ball = enumerate_ball(&sys, 4).unwrap();
        let sk = enumerate_skeleton(&sys, 4, 1 << 20).unwrap();
        assert_eq!(sk.len(), ball.len());
        for i in 0..ball.len() {
            assert_eq!(sk.word(i), ball.element(i).word());
            for s in 0..sys.rank() {
                assert_eq!(sk.neighbor(i, s), ball.neighbor(i, s));
            }
        }
    }
}

#[test]
fn json_round_trip() {
    for sys in systems() {
        let text = serde_json::to_string(&sys.to_file()).unwrap();
        let back = CoxeterSystem::from_json(&text).unwrap();
        assert_eq!(back.matrix(), sys.matrix());
        assert_eq!(back.names(), sys.names());
    }
}
