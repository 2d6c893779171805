use opkit::multicat::builtin;
use opkit::multicat::laws::check_multicategory_laws;
use opkit::perm;
use opkit::trees::circle::{canonical_elem, unit_collection};
use opkit::trees::{circle_product, CircleElem, free_multicategory, op_compose, op_hom_set, OpOperad, OpOperation};
use opkit::{FiniteCollection, Multicat, Signature};
use proptest::prelude::*;

fn fixture() -> serde_json::Value {
    serde_json::from_str(include_str!("fixtures/trees.json")).unwrap()
}

#[test]
fn op_hom_set_sizes_match_oracle() {
    let f = fixture();
    let table = f["op"].as_object().unwrap();
    for k in 0..=3usize {
        let mut vals = vec![0; k];
        loop {
            for n in 0..=4 {
                let key = format!("{};{}", vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","), n);
                let want = table.get(&key).map_or(0, |v| v.as_u64().unwrap() as usize);
                let got = op_hom_set(&vals, n, 1 << 20).unwrap();
                assert_eq!(got.len(), want, "{key}");
                for op in &got {
                    assert_eq!(OpOperation::parse(&op.to_string()).unwrap(), *op);
                }
            }
            if !opkit::multicat::builtin::next_tuple(&mut vals, 4) {
                break;
            }
        }
    }
}

#[test]
fn op_hom_set_cap_reports_partial_count() {
    match op_hom_set(&[2, 2], 3, 10) {
        Err(opkit::Error::Cap { partial, .. }) => assert_eq!(partial, 10),
        other => panic!("{other:?}"),
    }
}

#[test]
fn op_corollas_form_the_opposite_group() {
    for n in 0..=4 {
        let hom = op_hom_set(&[n], n, 1 << 20).unwrap();
        assert_eq!(hom.len(), perm::factorial(n));
        let mut images: Vec<OpOperation> = perm::all(n).iter().map(|t| OpOperation::corolla(t)).collect();
        images.sort();
        assert_eq!(images, hom);
        for tau in perm::all(n) {
            for rho in perm::all(n) {
                let got = OpOperation::corolla(&tau).compose(0, &OpOperation::corolla(&rho)).unwrap();
                assert_eq!(got, OpOperation::corolla(&perm::compose(&rho, &tau)));
            }
        }
    }
}

#[test]
fn truncated_op_passes_laws() {
    let m = OpOperad::new(3, 3).materialize().unwrap();
    assert!(!m.is_partial());
    let r = check_multicategory_laws(&m).unwrap();
    assert!(r.passed(), "{:?}", r.first());
}

fn arb_op(max_leaves: usize) -> impl Strategy<Value = OpOperation> {
    let sigs: Vec<Signature> = OpOperad::new(max_leaves, 2).support();
    (0..sigs.len(), any::<prop::sample::Index>()).prop_map(move |(i, pick)| {
        let s = &sigs[i];
        let ops = op_hom_set(&s.inputs, s.output, 1 << 16).unwrap();
        ops[pick.index(ops.len())].clone()
    })
}

/// Operations with `n` leaves, at most two vertices and colors at most 2.
fn with_output(n: usize) -> Vec<OpOperation> {
    OpOperad::new(2, 2).support().iter().filter(|s| s.output == n).flat_map(|s| op_hom_set(&s.inputs, s.output, 1 << 16).unwrap()).collect()
}

fn pick(n: usize) -> impl Strategy<Value = OpOperation> {
    let ops = with_output(n);
    (0..ops.len()).prop_map(move |i| ops[i].clone())
}

fn composable_triple() -> impl Strategy<Value = (OpOperation, usize, OpOperation, usize, OpOperation)> {
    arb_op(2)
        .prop_filter("needs a vertex", |p| !p.valences.is_empty())
        .prop_flat_map(|p| {
            let k = p.valences.len();
            (Just(p), 0..k)
        })
        .prop_flat_map(|(p, i)| {
            let q = pick(p.valences[i]).prop_filter("needs a vertex", |q| !q.valences.is_empty());
            (Just(p), Just(i), q)
        })
        .prop_flat_map(|(p, i, q)| {
            let k = q.valences.len();
            (Just(p), Just(i), Just(q), 0..k)
        })
        .prop_flat_map(|(p, i, q, j)| {
            let r = pick(q.valences[j]);
            (Just(p), Just(i), Just(q), Just(j), r)
        })
}

proptest! {
    #[test]
    fn op_compose_unital(p in arb_op(3)) {
        let units: Vec<OpOperation> = p.valences.iter().map(|&v| OpOperation::corolla(&perm::identity(v))).collect();
        prop_assert_eq!(op_compose(&p, &units).unwrap(), p.clone());
        prop_assert_eq!(OpOperation::corolla(&perm::identity(p.leaves)).compose(0, &p).unwrap(), p);
    }

    #[test]
    fn op_compose_associative((p, i, q, j, r) in composable_triple()) {
        let lhs = p.compose(i, &q).unwrap().compose(i + j, &r).unwrap();
        let rhs = p.compose(i, &q.compose(j, &r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn op_action_is_contravariant(p in arb_op(3), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let k = p.valences.len();
        let all = perm::all(k);
        let s = &all[a.index(all.len())];
        let t = &all[b.index(all.len())];
        prop_assert_eq!(p.act(s).act(t), p.act(&perm::compose(s, t)));
    }
}

#[test]
fn free_on_nothing_has_only_units() {
    let g = FiniteCollection::new(vec!["x".into(), "y".into()], true);
    let f = free_multicategory(&g, true, 3, 3).unwrap();
    assert_eq!(f.multicategory.op_count(), 2);
    assert!(f.complete);
}

#[test]
fn free_counts_match_planar_and_labeled_enumeration() {
    let mut g = FiniteCollection::new(vec!["x".into()], false);
    g.add_op("m", Signature::new(vec![0, 0], 0));
    let x = |n| Signature::new(vec![0; n], 0);
    let planar = free_multicategory(&g, false, 4, 4).unwrap();
    // Catalan numbers.
    for (n, c) in [(1, 1), (2, 1), (3, 2), (4, 5)] {
        assert_eq!(planar.multicategory.ops_of(&x(n)).len(), c);
    }
    let sym = free_multicategory(&g, true, 4, 4).unwrap();
    // n! times Catalan: magma words in distinct letters.
    for (n, c) in [(1, 1), (2, 2), (3, 12), (4, 120)] {
        assert_eq!(sym.multicategory.ops_of(&x(n)).len(), c);
    }
    for m in [&planar.multicategory, &sym.multicategory] {
        assert!(check_multicategory_laws(m).unwrap().passed());
    }
    // A vertex cap below what arity 3 needs leaves the table partial.
    let cut = free_multicategory(&g, false, 3, 1).unwrap();
    assert!(!cut.complete);
}

#[test]
fn free_with_commutative_generator() {
    let mut g = FiniteCollection::new(vec!["x".into()], true);
    let c = g.add_op("c", Signature::new(vec![0, 0], 0));
    g.set_action(c, &[1, 0], c);
    let f = free_multicategory(&g, true, 3, 3).unwrap();
    assert_eq!(f.multicategory.ops_of(&Signature::new(vec![0; 3], 0)).len(), 3);
    assert!(check_multicategory_laws(&f.multicategory).unwrap().passed());
}

fn counts_match(c: &opkit::trees::CircleProduct, want: &serde_json::Value) {
    let got = c.counts(3);
    for n in 0..=3 {
        assert_eq!(got[n] as u64, want[n.to_string()].as_u64().unwrap(), "arity {n}");
    }
}

#[test]
fn circle_products_match_oracle() {
    let f = fixture();
    let as2 = builtin::associative(2, false).collection();
    let com2 = builtin::commutative(2, false).collection();
    let unit = unit_collection(vec!["x".into()], true);
    counts_match(&circle_product(&as2, &as2, 3).unwrap(), &f["as2_circle_as2"]);
    counts_match(&circle_product(&com2, &com2, 3).unwrap(), &f["com2_circle_com2"]);
    counts_match(&circle_product(&unit, &as2, 3).unwrap(), &f["unit_circle_as2"]);
    let ii = circle_product(&unit, &unit, 3).unwrap();
    assert_eq!(ii.len(), 1);
}

#[test]
fn unit_collection_is_a_two_sided_unit_up_to_explicit_bijection() {
    let a = builtin::associative(3, true);
    let ac = a.collection();
    let unit = unit_collection(vec!["x".into()], true);
    let left = circle_product(&unit, &ac, 3).unwrap();
    let right = circle_product(&ac, &unit, 3).unwrap();
    for o in a.op_ids() {
        let n = a.arity(o);
        let l = CircleElem { root: 0, blocks: vec![(0..n).collect()], inners: vec![o.index()] };
        let r = canonical_elem(&ac, &CircleElem { root: o.index(), blocks: (0..n).map(|i| vec![i]).collect(), inners: vec![0; n] });
        let li = left.find(&l).unwrap();
        let ri = right.find(&r).unwrap();
        assert_eq!(&left.collection.ops[li].1, a.signature(o));
        for g in perm::adjacent_transpositions(n) {
            let t = a.act(&o, &g).unwrap().index();
            let lt = left.collection.action(li, &g).unwrap();
            assert_eq!(left.elems[lt], CircleElem { root: 0, blocks: vec![(0..n).collect()], inners: vec![t] });
            let rt = right.collection.action(ri, &g).unwrap();
            assert_eq!(right.elems[rt], canonical_elem(&ac, &CircleElem { root: t, blocks: (0..n).map(|i| vec![i]).collect(), inners: vec![0; n] }));
        }
    }
    assert_eq!(left.len(), a.op_count());
    assert_eq!(right.len(), a.op_count());
}
