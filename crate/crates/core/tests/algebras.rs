use opkit::algebras::free::{free_algebra, free_forgetful_check};
use opkit::algebras::strings::{arrow_action_matches, pn_algebras_as_strings};
use opkit::algebras::{
    carrier_maps, end_of_map, enumerate_algebras, enumerate_over_map, is_homomorphism, EndMulticategory,
    EndOfMapMulticategory, ObjectFamily,
};
use opkit::multicat::builtin;
use opkit::multicat::laws::check_multicategory_laws;
use opkit::{Multicat, Signature};

/// Brute-force count of (commutative) monoid structures on `0..k` from
/// multiplication tables and unit choices.
fn monoid_census(k: usize, commutative: bool) -> usize {
    let cells = k * k;
    let mut count = 0;
    let mut table = vec![0usize; cells];
    loop {
        let mul = |a: usize, b: usize| table[a * k + b];
        let assoc = (0..k).all(|a| (0..k).all(|b| (0..k).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c)))));
        let comm = !commutative || (0..k).all(|a| (0..k).all(|b| mul(a, b) == mul(b, a)));
        if assoc && comm {
            count += (0..k).filter(|&e| (0..k).all(|a| mul(e, a) == a && mul(a, e) == a)).count();
        }
        let mut i = cells;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < k {
                break;
            }
            table[i] = 0;
        }
    }
}

fn census_fixture() -> serde_json::Value {
    serde_json::from_str(include_str!("fixtures/census.json")).unwrap()
}

#[test]
fn algebra_census_matches_table_search() {
    let fixture = census_fixture();
    for k in [2usize, 3] {
        let fam = ObjectFamily::single(k);
        let com = enumerate_algebras(&builtin::commutative(3, true), &fam, 10_000_000).unwrap();
        let asc = enumerate_algebras(&builtin::associative(3, true), &fam, 10_000_000).unwrap();
        assert_eq!(com.len(), monoid_census(k, true));
        assert_eq!(asc.len(), monoid_census(k, false));
        assert_eq!(com.len() as u64, fixture["commutative_monoids"][k.to_string()].as_u64().unwrap());
        assert_eq!(asc.len() as u64, fixture["monoids"][k.to_string()].as_u64().unwrap());
    }
}

#[test]
fn end_cardinality_formula() {
    let fam = ObjectFamily::new(vec!["x".into(), "y".into()], vec![2, 1]);
    let e = EndMulticategory::new(fam.clone(), Some(2));
    for sig in builtin::all_signatures(2, 2) {
        let listed = e.operations(&sig).unwrap().len() as u128;
        let domain = fam.domain(&sig.inputs).len() as u32;
        assert_eq!(listed, (fam.sizes[sig.output] as u128).pow(domain));
        assert_eq!(Some(listed), e.cardinality(&sig));
    }
}

#[test]
fn end_of_map_membership_and_projections() {
    let a = ObjectFamily::single(2);
    let f = vec![vec![1, 1]];
    let e = EndOfMapMulticategory::new(a.clone(), a.clone(), f.clone(), 2).unwrap();
    let end = EndMulticategory::new(a.clone(), Some(2));
    let sig = Signature::new(vec![0, 0], 0);
    // With f constant at 1, (φ, ψ) is related iff ψ(1, 1) = 1.
    for phi in end.operations(&sig).unwrap() {
        for psi in end.operations(&sig).unwrap() {
            assert_eq!(e.related(&phi, &psi), end.eval(&psi, &[1, 1]) == 1);
        }
    }
    let m = end_of_map(&a, &a, &f, 2, 1 << 16).unwrap();
    assert!(check_multicategory_laws(&m.multicategory).unwrap().passed());
    let id = end_of_map(&a, &a, &[vec![0, 1]], 2, 1 << 16).unwrap();
    // Identity map: End(f) ≅ End(A) through either projection.
    assert_eq!(id.multicategory.op_count(), 2 + 4 + 16);
    assert_eq!(id.to_a.ops, id.to_b.ops);
}

#[test]
fn homomorphism_criterion_and_end_of_map_algebras() {
    let p = builtin::associative(3, true);
    let fam = ObjectFamily::single(2);
    let algs = enumerate_algebras(&p, &fam, 1_000_000).unwrap();
    let mut total = 0;
    for f in carrier_maps(&fam, &fam) {
        let e = EndOfMapMulticategory::new(fam.clone(), fam.clone(), f.clone(), 3).unwrap();
        let pairs = enumerate_over_map(&p, &e, 1_000_000).unwrap();
        for (a, b) in &pairs {
            assert!(is_homomorphism(&p, &fam, a, &fam, b, &f));
        }
        let direct = algs.iter().flat_map(|a| algs.iter().map(move |b| (a, b))).filter(|(a, b)| is_homomorphism(&p, &fam, a, &fam, b, &f)).count();
        assert_eq!(pairs.len(), direct);
        total += direct;
    }
    assert_eq!(total as u64, census_fixture()["monoid_homs_2_2"].as_u64().unwrap());
}

#[test]
fn free_algebra_monad_and_adjunction() {
    for p in [builtin::trivial(), builtin::commutative(3, true), builtin::associative(3, true)] {
        let fam = ObjectFamily::single(2);
        let free = free_algebra(&p, &fam, 3).unwrap();
        let laws = free.check_monad_laws(&p);
        assert!(laws.passed(), "{}: {:?}", p.name(), laws.first());
        for b in enumerate_algebras(&p, &fam, 1_000_000).unwrap() {
            let r = free_forgetful_check(&p, &free, &fam, &b, 1 << 20).unwrap();
            assert!(r.bijective, "{}", p.name());
            assert_eq!(r.algebra_maps, r.carrier_maps);
        }
    }
    // Levels of the free commutative algebra are multisets.
    let free = free_algebra(&builtin::commutative(3, true), &ObjectFamily::single(2), 3).unwrap();
    let mut by_arity = [0; 4];
    for (op, _) in &free.level1.elems[0] {
        by_arity[builtin::commutative(3, true).arity(*op)] += 1;
    }
    assert_eq!(by_arity, [1, 2, 3, 4]);
}

#[test]
fn operads_round_trip_through_op_algebras() {
    use opkit::algebras::op_algebra::{op_algebra_to_operad, operad_to_op_algebra};
    for p in [builtin::trivial(), builtin::commutative(3, true), builtin::associative(3, true)] {
        let a = operad_to_op_algebra(&p, 3).unwrap();
        let laws = a.check();
        assert!(laws.passed(), "{}: {:?}", p.name(), laws.first());
        let (back, report) = op_algebra_to_operad(&a, p.name()).unwrap();
        assert!(report.passed());
        assert!(back.same_tables(&p), "{}", p.name());
    }
}

#[test]
fn seeded_associativity_violation_is_reported() {
    use opkit::algebras::op_algebra::{op_algebra_to_operad, operad_to_op_algebra, with_action_value};
    use opkit::trees::OpOperation;
    let p = builtin::associative(3, true);
    let a = operad_to_op_algebra(&p, 2).unwrap();
    // x ∘_1 y for x = w12, y = w12 in As(2): the composite w123 is replaced by w213.
    let t = OpOperation::parse("v1[v2[1,2],3]").unwrap();
    let x = a.names[2].iter().position(|n| n == "w12").unwrap();
    let good = a.act(&t, &[x, x]).unwrap();
    assert_eq!(a.names[3][good], "w123");
    let bad = a.names[3].iter().position(|n| n == "w213").unwrap();
    let seeded = with_action_value(&a, &t, &[x, x], bad).unwrap();
    assert!(!seeded.check().passed());
    let (_, report) = op_algebra_to_operad(&seeded, "bad").unwrap();
    let v = report.first().expect("violation");
    assert!(!v.witness.is_empty());
}

#[test]
fn arrow_algebras_are_strings_of_homomorphisms() {
    let fx = census_fixture();
    let cases = [
        (builtin::trivial(), vec![2, 2], "functions_2_2"),
        (builtin::associative(3, true), vec![2, 2], "monoid_homs_2_2"),
        (builtin::commutative(3, true), vec![2, 2], "commutative_monoid_homs_2_2"),
        (builtin::trivial(), vec![2, 2, 2], "function_strings_2_2_2"),
        (builtin::associative(3, true), vec![2, 2, 2], "monoid_hom_strings_2_2_2"),
    ];
    for (p, sizes, key) in cases {
        let r = pn_algebras_as_strings(&p, &sizes, 1_000_000).unwrap();
        let want = fx[key].as_u64().unwrap() as usize;
        assert_eq!((r.arrow_algebras, r.strings), (want, want), "{key}");
        assert!(r.bijective, "{key}");
    }
    let p = builtin::associative(3, true);
    let arrow = opkit::presents::arrow_multicategory(&p, 1).unwrap();
    let fam = ObjectFamily::new(vec!["0".into(), "1".into()], vec![2, 2]);
    for a in enumerate_algebras(&arrow, &fam, 1_000_000).unwrap() {
        assert!(arrow_action_matches(&p, &[2, 2], &a).unwrap());
    }
}

#[test]
fn end_module_cardinalities_and_compatibility() {
    use opkit::algebras::end_module;
    use opkit::bimodules::check_bimodule;
    for (sa, sb) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let (a, b) = (ObjectFamily::single(sa), ObjectFamily::single(sb));
        let em = end_module(&a, &b, 2, 1 << 20).unwrap();
        for n in 0..=2u32 {
            let got = em.functions.iter().filter(|f| f.sig.arity() == n as usize).count();
            assert_eq!(got, sb.pow(sa.pow(n) as u32), "|A|={sa} |B|={sb} n={n}");
        }
        let rep = check_bimodule(&em.bimodule, &em.left, &em.right).unwrap();
        assert!(rep.passed() && rep.checked > 0, "{:?}", rep.first());
    }
    let a = ObjectFamily::new(vec!["x".into(), "y".into()], vec![2, 1]);
    let em = end_module(&a, &a, 2, 1 << 20).unwrap();
    let end = opkit::algebras::end_multicategory(&a, 2, 1 << 20).unwrap();
    assert_eq!(em.functions.len(), end.op_count());
    let mut ours: Vec<(Signature, String)> = em.functions.iter().map(|f| (f.sig.clone(), f.label())).collect();
    let mut theirs: Vec<(Signature, String)> = end.op_ids().map(|o| (end.signature(o).clone(), end.op_name(o).to_string())).collect();
    ours.sort();
    theirs.sort();
    assert_eq!(ours, theirs);
    assert!(check_bimodule(&em.bimodule, &em.left, &em.right).unwrap().passed());
}
