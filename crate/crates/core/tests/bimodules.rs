use opkit::bimodules::*;
use opkit::functor::{check_multifunctor, is_equivalence, Multifunctor};
use opkit::multicat::builtin;
use opkit::multicat::{FiniteCollection, Signature};
use opkit::trees::circle_product;
use opkit::{Multicategory, OpId};
use proptest::prelude::*;

fn trees_fixture() -> serde_json::Value {
    serde_json::from_str(include_str!("fixtures/trees.json")).unwrap()
}

fn counts_of(v: &serde_json::Value, cap: usize) -> Vec<usize> {
    (0..=cap).map(|a| v[a.to_string()].as_u64().unwrap() as usize).collect()
}

fn x() -> Vec<String> {
    vec!["x".into()]
}

/// Unary generators `u_0..u_{k-1}` and `b` free orbits of binary ones.
fn generators(unary: usize, binary: usize) -> FiniteCollection {
    let mut k = FiniteCollection::new(x(), true);
    for i in 0..unary {
        k.add_op(format!("u{i}"), Signature::new(vec![0], 0));
    }
    for i in 0..binary {
        let a = k.add_op(format!("b{i}"), Signature::new(vec![0, 0], 0));
        let b = k.add_op(format!("b{i}'"), Signature::new(vec![0, 0], 0));
        k.set_action(a, &[1, 0], b);
        k.set_action(b, &[1, 0], a);
    }
    k.complete_actions().unwrap();
    k
}

#[test]
fn regular_bimodules_pass() {
    for p in [builtin::associative(3, false), builtin::associative(3, true), builtin::commutative(3, true), builtin::trivial()] {
        let rep = check_bimodule(&Bimodule::regular(&p), &p, &p).unwrap();
        assert!(rep.passed(), "{}: {:?}", p.name(), rep.first());
        assert!(rep.checked > 0);
    }
}

#[test]
fn symmetric_sequences_are_bimodules_over_the_unit() {
    let i = builtin::trivial();
    for coll in [builtin::associative(3, true).collection(), generators(2, 1)] {
        let b = Bimodule::symmetric_sequence(coll, &i).unwrap();
        assert!(check_bimodule(&b, &i, &i).unwrap().passed());
    }
    assert!(Bimodule::trivial_left(RightModule::regular(&builtin::associative(2, false)), &builtin::associative(2, false)).is_err());
}

#[test]
fn seeded_compatibility_violation_is_reported() {
    let p = builtin::associative(3, false);
    let mut b = Bimodule::regular(&p);
    let w12 = p.op_by_name(&builtin::word_name(&[0, 1])).unwrap();
    let w21 = p.op_by_name(&builtin::word_name(&[1, 0])).unwrap();
    let id = p.unit_of(0).unwrap().index();
    b.left.insert((w12, vec![id, id]), w21.index());
    let rep = check_bimodule(&b, &p, &p).unwrap();
    assert!(!rep.passed());
    assert!(rep.violations.iter().any(|v| v.law == "compatibility"), "{:?}", rep.violations);

    let mut m = RightModule::regular(&p);
    m.right.remove(&(w12.index(), 0, w12));
    assert!(matches!(check_right_module(&m, &p), Err(opkit::Error::Structural(_))));
}

#[test]
fn free_modules_pass() {
    let q = builtin::associative(3, false);
    for (u, b) in [(1, 0), (2, 0), (0, 1), (1, 1)] {
        let m = RightModule::free(&generators(u, b), &q, x(), 3).unwrap();
        assert!(check_right_module(&m, &q).unwrap().passed(), "{u} {b}");
    }
    // Nullary inner operations would let roots outgrow the cap, so the right
    // side is non-unital.
    let p = builtin::associative(3, true);
    let f = free_bimodule(&p, &q, 3).unwrap();
    assert!(check_bimodule(&f, &p, &q).unwrap().passed());
}

#[test]
fn endomorphisms_of_the_regular_module() {
    for q in [builtin::associative(3, false), builtin::associative(3, true), builtin::commutative(3, true), builtin::commutative(3, false)] {
        let m = RightModule::regular(&q);
        let end = end_right_module(&m, &q, 3, 3, 1_000_000).unwrap();
        assert_eq!(end.multicategory.op_count(), q.op_count(), "{}", q.name());
        let f = regular_map(&q, &end).expect("every operation acts by left composition");
        assert!(check_multifunctor(&q, &end.multicategory, &f).passed());
        assert!(is_equivalence(&q, &end.multicategory, &f).is_equivalence());
    }
}

#[test]
fn endomorphisms_of_the_zero_module() {
    let q = builtin::associative(3, true);
    let end = end_right_module(&RightModule::zero(&q, x()), &q, 3, 3, 1000).unwrap();
    // One empty map per signature of positive arity, none out of the unit of the tensor.
    for sig in builtin::all_signatures(1, 3) {
        assert_eq!(end.multicategory.ops_of(&sig).len(), usize::from(sig.arity() > 0), "{sig:?}");
    }
}

#[test]
fn unary_endomorphisms_match_brute_force() {
    let q = builtin::associative(2, false);
    for (u, b) in [(2, 0), (1, 1), (3, 0)] {
        let m = RightModule::free(&generators(u, b), &q, x(), 2).unwrap();
        let end = end_right_module(&m, &q, 1, 2, 1_000_000).unwrap();
        let choices: Vec<Vec<usize>> = (0..m.len()).map(|a| (0..m.len()).filter(|&v| m.signature(v) == m.signature(a)).collect()).collect();
        let mut idx = vec![0; m.len()];
        let mut count = 0;
        'all: loop {
            let f: Vec<usize> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            count += is_right_module_hom(&m, &m, &q, &f) as usize;
            for j in (0..idx.len()).rev() {
                idx[j] += 1;
                if idx[j] < choices[j].len() {
                    continue 'all;
                }
                idx[j] = 0;
            }
            break;
        }
        assert_eq!(end.multicategory.ops_of(&Signature::new(vec![0], 0)).len(), count, "{u} {b}");
        if b == 0 {
            assert_eq!(count, u.pow(u as u32));
        }
    }
}

#[test]
fn pointed_and_quasi_free() {
    let q = builtin::associative(3, false);
    let i = builtin::trivial();

    let reg = Bimodule::regular(&q);
    let a = analyze_pointed(&reg, &q, &q, 3, 1_000_000).unwrap();
    assert!(a.pointed && a.map_from_free && a.quasi_free, "{a:?}");
    assert_eq!(a.basepoint, Some(vec![q.unit_of(0).unwrap().index()]));

    let binary = Bimodule::trivial_left(RightModule::free(&generators(0, 1), &q, x(), 3).unwrap(), &i).unwrap();
    let a = analyze_pointed(&binary, &i, &q, 3, 1_000_000).unwrap();
    assert!(!a.pointed && !a.map_from_free && !a.quasi_free);

    let two = Bimodule::trivial_left(RightModule::free(&generators(2, 0), &q, x(), 3).unwrap(), &i).unwrap();
    let a = analyze_pointed(&two, &i, &q, 3, 1_000_000).unwrap();
    assert!(a.pointed && a.map_from_free && !a.quasi_free);
    assert_eq!(a.witness.as_deref(), Some("(x;x)"));

    let one = Bimodule::trivial_left(RightModule::free(&generators(1, 0), &q, x(), 3).unwrap(), &i).unwrap();
    let a = analyze_pointed(&one, &i, &q, 3, 1_000_000).unwrap();
    assert!(a.pointed && a.quasi_free, "{a:?}");
}

#[test]
fn bar_level_counts_match_fixtures() {
    let fx = trees_fixture();
    let a = builtin::associative(2, false);
    let ac = a.collection();
    let counts = bar_level_counts(&ac, &a, &ac, 3, 3).unwrap();
    for (n, c) in counts.iter().enumerate() {
        assert_eq!(c, &counts_of(&fx["bar_as2"][n], 3), "level {n}");
    }
    let i = builtin::trivial();
    let ic = i.collection();
    let counts = bar_level_counts(&ic, &i, &ic, 3, 3).unwrap();
    for (n, c) in counts.iter().enumerate() {
        assert_eq!(c, &counts_of(&fx["bar_unit"][n], 3), "level {n}");
    }

    // The simplicial levels agree with the composition products where faces exist.
    let reg = Bimodule::regular(&a);
    let bar = bar_complex(&reg, &a, &reg, 3, 2).unwrap();
    let expected = bar_level_counts(&ac, &a, &ac, 3, 2).unwrap();
    for n in 0..=3 {
        let mut by_arity = vec![0; 3];
        for t in 0..bar.levels[n].len() {
            by_arity[bar.arity(n, t)] += 1;
        }
        assert_eq!(by_arity, expected[n]);
    }
    // Past the cap of `P` some faces leave the truncation.
    assert!(matches!(bar_complex(&reg, &a, &reg, 1, 3), Err(opkit::Error::Precondition(_))));
}

#[test]
fn bar_complexes_are_simplicial() {
    let i = builtin::trivial();
    let ri = Bimodule::regular(&i);
    let cases: Vec<(Multicategory, usize, usize)> =
        vec![(builtin::associative(2, false), 3, 2), (builtin::associative(3, false), 2, 3), (builtin::commutative(3, false), 2, 3)];
    let bar = bar_complex(&ri, &i, &ri, 3, 1).unwrap();
    assert!(bar.simplicial.check_identities().passed());
    assert!(bar.levels.iter().all(|l| l.len() == 1));
    for (p, n_max, cap) in cases {
        let r = Bimodule::regular(&p);
        let bar = bar_complex(&r, &p, &r, n_max, cap).unwrap();
        let rep = bar.simplicial.check_identities();
        assert!(rep.passed() && rep.checked > 0, "{}: {:?}", p.name(), rep.first());
        // Level 0 is the composition product of the two ends.
        assert_eq!(bar.levels[0].len(), circle_product(&p.collection(), &p.collection(), cap).unwrap().len());
    }
}

#[test]
fn two_sided_bar_with_distinct_ends() {
    let q = builtin::associative(3, false);
    let i = builtin::trivial();
    let x_end = Bimodule::trivial_left(RightModule::free(&generators(1, 1), &q, x(), 3).unwrap(), &i).unwrap();
    let y_end = Bimodule::regular(&q);
    let bar = bar_complex(&x_end, &q, &y_end, 2, 3).unwrap();
    assert!(bar.simplicial.check_identities().passed());
    // K ∘ Q ∘_Q Q = K ∘ Q.
    assert_eq!(bar.classes, x_end.module.len());
}

#[test]
fn hochschild_resolution() {
    for p in [builtin::associative(3, false), builtin::commutative(3, false)] {
        let h = hochschild(&p, 2, 3).unwrap();
        let l0 = circle_product(&p.collection(), &p.collection(), 3).unwrap();
        assert_eq!(h.bar.levels[0].len(), l0.len());
        // The augmentation identifies exactly the coequalizer classes with `P`.
        assert_eq!(h.bar.classes, p.op_count());
        let eta: Vec<OpId> = (0..h.bar.levels[0].len()).map(|e| h.augment(e).unwrap()).collect();
        for e in 0..eta.len() {
            for f in 0..eta.len() {
                assert_eq!(eta[e] == eta[f], h.bar.augmentation[e] == h.bar.augmentation[f]);
            }
        }
        let s = &h.bar.simplicial;
        for e in 0..h.bar.levels[1].len() {
            assert_eq!(eta[s.face(1, 0, e)], eta[s.face(1, 1, e)]);
        }
        for n in 0..=2 {
            assert!(h.basepoint_is_bimodule_map(n), "{} level {n}", p.name());
        }
    }
}

#[test]
fn restriction_of_modules() {
    let q = builtin::associative(3, false);
    let i = builtin::trivial();
    let m = RightModule::free(&generators(2, 0), &q, x(), 3).unwrap();
    let id = Multifunctor::identity(&q);
    let same = restrict_module(&m, &q, &q, &id).unwrap();
    assert_eq!(same.len(), m.len());
    assert!(check_right_module(&same, &q).unwrap().passed());

    let unit = Multifunctor { objects: vec![0], ops: vec![q.unit_of(0).unwrap()] };
    let down = restrict_module(&m, &q, &i, &unit).unwrap();
    assert!(check_right_module(&down, &i).unwrap().passed());

    // Swapping the generators is a map of modules, before and after restriction.
    let w1 = builtin::word_name(&[0]);
    let u0 = m.coll.op_named(&format!("u0({w1}[1])")).unwrap();
    let u1 = m.coll.op_named(&format!("u1({w1}[1])")).unwrap();
    let swap: Vec<usize> = (0..m.len())
        .map(|e| {
            let name = m.name_of(e).replace("u0", "#").replace("u1", "u0").replace('#', "u1");
            m.coll.op_named(&name).unwrap()
        })
        .collect();
    assert_eq!(swap[u0], u1);
    assert!(is_right_module_hom(&m, &m, &q, &swap));
    assert!(is_right_module_hom(&down, &down, &i, &swap));
    let mut broken = swap.clone();
    broken[u0] = u0;
    assert!(!is_right_module_hom(&m, &m, &q, &broken));

    let bad = Multifunctor { objects: vec![0], ops: vec![q.op_ids().last().unwrap()] };
    assert!(restrict_module(&m, &q, &i, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn free_modules_satisfy_the_laws(u in 0usize..3, b in 0usize..2, cap in 1usize..4) {
        let q = builtin::associative(3, false);
        let m = RightModule::free(&generators(u, b), &q, x(), cap).unwrap();
        prop_assert!(check_right_module(&m, &q).unwrap().passed());
        let i = builtin::trivial();
        let bm = Bimodule::trivial_left(m, &i).unwrap();
        prop_assert!(check_bimodule(&bm, &i, &q).unwrap().passed());
    }
}

#[test]
fn pointedness_detectors_agree() {
    let q = builtin::associative(2, false);
    let i = builtin::trivial();
    let mut cases = vec![(Bimodule::regular(&q), q.clone())];
    for (u, b) in [(0, 1), (1, 0), (2, 0), (1, 1), (0, 0)] {
        cases.push((Bimodule::trivial_left(RightModule::free(&generators(u, b), &q, x(), 2).unwrap(), &i).unwrap(), i.clone()));
    }
    for (m, p) in &cases {
        let a = analyze_pointed(m, p, &q, 2, 1_000_000).unwrap();
        assert_eq!(a.pointed, a.map_from_free, "{}", m.module.name);
    }
}

#[test]
fn restriction_to_the_unit_forgets_the_action() {
    let q = builtin::associative(3, true);
    let i = builtin::trivial();
    let unit = Multifunctor { objects: vec![0], ops: vec![q.unit_of(0).unwrap()] };
    let down = restrict_module(&RightModule::regular(&q), &q, &i, &unit).unwrap();
    let seq = Bimodule::symmetric_sequence(q.collection(), &i).unwrap();
    assert_eq!(down.len(), q.op_count());
    assert_eq!(down.right, seq.module.right);
    for e in 0..down.len() {
        assert_eq!(down.name_of(e), q.op_name(OpId(e as u32)));
    }
}

#[test]
fn hochschild_truncations_to_level_three() {
    for (p, cap) in [(builtin::trivial(), 1), (builtin::associative(2, false), 2)] {
        let h = hochschild(&p, 3, cap).unwrap();
        assert!(h.bar.simplicial.check_identities().passed());
        let s = &h.bar.simplicial;
        for e in 0..h.bar.levels[0].len() {
            // `η` after `d_0 s_0` is the composition map `P ∘ P → P`.
            assert_eq!(h.augment(s.face(1, 0, s.degeneracy(0, 0, e))), h.augment(e));
            assert!(h.augment(e).is_some());
        }
        assert!((0..=3).all(|n| h.basepoint_is_bimodule_map(n)));
    }
}
