use hdv_core::behavior::{encode_window, prefix_query, SequenceModel};
use hdv_core::vector::TIEBREAK_NAME;
use hdv_core::{Accumulator, Codebook, CodebookKind, Hypervector, Seed};
use proptest::prelude::*;

fn vector(dim: usize) -> impl Strategy<Value = Hypervector> {
    prop::collection::vec(prop::bool::ANY, dim).prop_map(|bits| {
        Hypervector::from_components(bits.into_iter().map(|b| if b { 1 } else { -1 }).collect()).unwrap()
    })
}

fn triple(dim: usize) -> impl Strategy<Value = (Hypervector, Hypervector, Hypervector)> {
    (vector(dim), vector(dim), vector(dim))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn binding_algebra((a, b, c) in triple(97)) {
        prop_assert!(a.bind(&a).unwrap().is_identity());
        prop_assert_eq!(a.bind(&b).unwrap(), b.bind(&a).unwrap());
        prop_assert_eq!(a.bind(&b).unwrap().bind(&c).unwrap(), a.bind(&b.bind(&c).unwrap()).unwrap());
        prop_assert_eq!(a.bind(&b).unwrap().bind(&b).unwrap(), a.clone());
        prop_assert_eq!(
            a.bind(&c).unwrap().similarity(&b.bind(&c).unwrap()).unwrap(),
            a.similarity(&b).unwrap()
        );
    }

    #[test]
    fn permutation_laws((a, b, _) in triple(61), j in -200i64..200, k in -200i64..200) {
        prop_assert_eq!(a.permute(j).permute(k), a.permute(j + k));
        prop_assert_eq!(a.bind(&b).unwrap().permute(k), a.permute(k).bind(&b.permute(k)).unwrap());
        // Definition: result[(i + k) mod D] = a[i].
        let d = a.dim() as i64;
        let p = a.permute(k);
        for i in 0..a.dim() {
            prop_assert_eq!(p.components()[((i as i64 + k).rem_euclid(d)) as usize], a.components()[i]);
        }
    }

    #[test]
    fn accumulator_invariants(vs in prop::collection::vec(vector(33), 1..12)) {
        let mut acc = Accumulator::new(33).unwrap();
        for v in &vs {
            acc.add(v).unwrap();
            let count = acc.count() as i64;
            for &s in acc.sums() {
                prop_assert!(i64::from(s).abs() <= count);
                prop_assert_eq!((i64::from(s) - count).rem_euclid(2), 0);
            }
        }
        // Order of accumulation does not matter.
        let mut rev = Accumulator::new(33).unwrap();
        for v in vs.iter().rev() {
            rev.add(v).unwrap();
        }
        prop_assert_eq!(rev.sums(), acc.sums());
        prop_assert_eq!(rev.normalize(Seed(1)).unwrap(), acc.normalize(Seed(1)).unwrap());
    }

    #[test]
    fn binding_distributes_over_sums(vs in prop::collection::vec(vector(40), 1..10), key in vector(40)) {
        let mut plain = Accumulator::new(40).unwrap();
        let mut bound = Accumulator::new(40).unwrap();
        for v in &vs {
            plain.add(v).unwrap();
            bound.add(&v.bind(&key).unwrap()).unwrap();
        }
        prop_assert_eq!(plain.bind(&key).unwrap(), bound);
    }

    #[test]
    fn permutation_distributes_over_bundling(
        vs in prop::collection::vec(vector(50), 1..6).prop_map(|mut v| { if v.len() % 2 == 0 { v.pop(); } v }),
        k in -60i64..60,
    ) {
        let seed = Seed(9);
        let mut plain = Accumulator::new(50).unwrap();
        let mut rotated = Accumulator::new(50).unwrap();
        for v in &vs {
            plain.add(v).unwrap();
            rotated.add(&v.permute(k)).unwrap();
        }
        prop_assert_eq!(rotated.normalize(seed).unwrap(), plain.normalize(seed).unwrap().permute(k));
    }

    #[test]
    fn permutation_distributes_with_ties(vs in prop::collection::vec(vector(24), 2..7), k in -30i64..30) {
        let tie = Hypervector::generate(TIEBREAK_NAME, Seed(2), 24).unwrap();
        let mut plain = Accumulator::new(24).unwrap();
        let mut rotated = Accumulator::new(24).unwrap();
        for v in &vs {
            plain.add(v).unwrap();
            rotated.add(&v.permute(k)).unwrap();
        }
        prop_assert_eq!(
            rotated.normalize_with_tiebreak(&tie.permute(k)).unwrap(),
            plain.normalize_with_tiebreak(&tie).unwrap().permute(k)
        );
    }

    #[test]
    fn unbinding_identity_on_raw_sums(
        windows in prop::collection::vec(prop::collection::vec(0usize..6, 3), 1..8),
        prefix in prop::collection::vec(0usize..6, 2),
    ) {
        let names: Vec<String> = (0..6).map(|i| format!("act{i}")).collect();
        let cb = Codebook::with_names(CodebookKind::Action, Seed(3), 128, &names).unwrap();
        let q = prefix_query(&prefix.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>(), &cb).unwrap();
        let mut model = SequenceModel::new(3, cb.clone()).unwrap();
        let mut bound = Accumulator::new(128).unwrap();
        for w in &windows {
            let w: Vec<&str> = w.iter().map(|&i| names[i].as_str()).collect();
            let enc = encode_window(&w, &cb).unwrap();
            model.add_encoded(&enc).unwrap();
            bound.add(&q.bind(&enc).unwrap()).unwrap();
        }
        prop_assert_eq!(model.behavior().bind(&q).unwrap(), bound);
    }

    #[test]
    fn capacity_one_is_exact(w in prop::collection::vec(0usize..30, 3), seed in any::<u64>()) {
        let names: Vec<String> = w.iter().map(|i| format!("action-{i}")).collect();
        let cb = Codebook::new(CodebookKind::Action, Seed(seed), 2048).unwrap();
        let mut model = SequenceModel::new(3, cb).unwrap();
        model.train_session(&names).unwrap();
        let r = model.predict(&names[..2], 0.09).unwrap();
        prop_assert_eq!(r.name, names[2].clone());
        prop_assert_eq!(r.score, 1.0);
    }

    #[test]
    fn cleanup_returns_every_member_exactly(seed in any::<u64>()) {
        let names: Vec<String> = (0..12).map(|i| format!("sym{i}")).collect();
        let cb = Codebook::with_names(CodebookKind::ContextFiller, Seed(seed), 1024, &names).unwrap();
        for (name, v) in cb.iter() {
            let r = cb.cleanup(v, 0.125).unwrap();
            prop_assert_eq!(r.name.as_str(), name);
            prop_assert_eq!(r.score, 1.0);
            prop_assert!(r.score >= r.runner_up_score);
        }
    }
}

#[test]
fn session_boundary_removes_only_spanning_windows() {
    let cb = Codebook::new(CodebookKind::Action, Seed(5), 1024).unwrap();
    let actions = ["a", "b", "c", "d", "e", "f"];
    let mut whole = SequenceModel::new(3, cb.clone()).unwrap();
    whole.train_session(&actions).unwrap();
    let mut split = SequenceModel::new(3, cb).unwrap();
    split.train_session(&actions[..3]).unwrap();
    split.train_session(&actions[3..]).unwrap();
    // Boundary between c and d removes (b,c,d) and (c,d,e).
    assert_eq!(whole.windows_trained(), 4);
    assert_eq!(split.windows_trained(), 2);
    let mut removed = Accumulator::new(1024).unwrap();
    for w in [["b", "c", "d"], ["c", "d", "e"]] {
        removed.add(&encode_window(&w, whole.codebook()).unwrap()).unwrap();
    }
    let mut rebuilt = split.behavior().clone();
    rebuilt.merge(&removed).unwrap();
    assert_eq!(rebuilt.sums(), whole.behavior().sums());
}

#[test]
fn relabeling_with_fixed_seed_preserves_scores() {
    // Vectors depend only on (name, seed, D), not on registration order.
    let train = |cb: Codebook| {
        let mut m = SequenceModel::new(3, cb).unwrap();
        m.train_session(&["x", "y", "z", "x", "w", "z"]).unwrap();
        m.predict(&["x", "y"], 0.04).unwrap()
    };
    let a = train(Codebook::new(CodebookKind::Action, Seed(77), 4096).unwrap());
    let b = train(Codebook::with_names(CodebookKind::Action, Seed(77), 4096, ["w", "z", "y", "x"]).unwrap());
    assert_eq!(a.name, b.name);
    assert_eq!(a.score.to_bits(), b.score.to_bits());
}
