use opkit::algebras::{EndMulticategory, Function, ObjectFamily};
use opkit::functor::Multifunctor;
use opkit::homcalc::*;
use opkit::multicat::builtin::{self, Terminal};
use opkit::multicat::laws::check_multicategory_laws;
use opkit::presents::{arrow_multicategory, Caps};
use opkit::search::find_isomorphism;
use opkit::{Multicat, Multicategory, Signature};
use std::time::Instant;

fn end2() -> EndMulticategory {
    EndMulticategory::new(ObjectFamily::single(2), None)
}

fn census_fixture() -> serde_json::Value {
    serde_json::from_str(include_str!("fixtures/census.json")).unwrap()
}

/// Every component family `F_1..F_k ⇒ G` between the given functors.
fn families<Q: Multicat>(p: &Multicategory, q: &Q, funs: &[Multifunctor<Q::Op>], k: usize) -> Vec<KNat<Q::Op>> {
    let mut out = Vec::new();
    let n = funs.len();
    let mut idx = vec![0; k + 1];
    loop {
        let sources: Vec<_> = idx[..k].iter().map(|&i| funs[i].clone()).collect();
        let target = funs[idx[k]].clone();
        let per_color: Vec<Vec<Q::Op>> = (0..p.colors().len())
            .map(|a| q.operations(&Signature::new(sources.iter().map(|f| f.objects[a]).collect(), target.objects[a])).unwrap())
            .collect();
        let mut t = vec![0; per_color.len()];
        'fam: loop {
            let components = t.iter().zip(&per_color).map(|(&i, c)| c[i].clone()).collect();
            out.push(KNat { sources: sources.clone(), target: target.clone(), components });
            for j in (0..t.len()).rev() {
                t[j] += 1;
                if t[j] < per_color[j].len() {
                    continue 'fam;
                }
                t[j] = 0;
            }
            break;
        }
        if !builtin::next_tuple(&mut idx, n) {
            return out;
        }
    }
}

#[test]
fn identity_functor_passes_and_is_natural() {
    let a = builtin::associative(3, true);
    let id = Multifunctor::identity(&a);
    assert!(check_multifunctor(&a, &a, &id).passed());
    let xi = KNat { sources: vec![id.clone()], target: id, components: vec![a.unit_of(0).unwrap()] };
    assert!(is_k_natural(&a, &a, &xi).unwrap().natural);
}

#[test]
fn every_family_into_com_is_natural() {
    let p = builtin::associative(2, false);
    let t = Terminal { colors: vec!["x".into()] };
    let funs = enumerate_multifunctors(&p, &t, 1000).unwrap();
    assert_eq!(funs.len(), 1);
    for k in 0..=3 {
        for xi in families(&p, &t, &funs, k) {
            let v = is_k_natural(&p, &t, &xi).unwrap();
            assert!(v.natural && v.skipped == 0);
        }
    }
}

#[test]
fn seeded_square_fails_with_witness() {
    // The category 0 → 1 into two-element sets, with the arrow sent to the
    // identity; swapping only at the target breaks the square at the arrow.
    let arrow = arrow_multicategory(&builtin::trivial(), 1).unwrap();
    let fam = ObjectFamily::new(vec!["y".into(), "z".into()], vec![2, 2]);
    let end = EndMulticategory::new(fam, None);
    let f = Multifunctor {
        objects: vec![0, 1],
        ops: arrow.op_ids().map(|o| Function { sig: arrow.signature(o).clone(), table: vec![0, 1] }).collect(),
    };
    assert!(check_multifunctor(&arrow, &end, &f).passed());
    let swap = |c| Function { sig: Signature::new(vec![c], c), table: vec![1, 0] };
    let bad = KNat { sources: vec![f.clone()], target: f.clone(), components: vec![end.unit(0), swap(1)] };
    let v = is_k_natural(&arrow, &end, &bad).unwrap();
    let w = v.witness.expect("a failing square");
    assert!(!v.natural);
    assert_eq!(arrow.signature(w), &Signature::new(vec![0], 1));
    let gens: Vec<_> = arrow.op_ids().collect();
    assert!(!naturality_on_generators(&arrow, &end, &bad, &gens).unwrap().natural);
    let good = KNat { sources: vec![f.clone()], target: f, components: vec![swap(0), swap(1)] };
    assert!(is_k_natural(&arrow, &end, &good).unwrap().natural);

    let mut wrong = good.clone();
    wrong.components[0] = Function { sig: Signature::new(vec![0, 0], 0), table: vec![0; 4] };
    assert!(is_k_natural(&arrow, &end, &wrong).is_err());
}

#[test]
fn generators_decide_naturality() {
    let p = builtin::associative(3, false);
    let q = end2();
    let funs = enumerate_multifunctors(&p, &q, 100_000).unwrap();
    let w12 = p.op_by_name(&builtin::word_name(&[0, 1])).unwrap();
    let all: Vec<_> = p.op_ids().collect();
    let (mut natural, mut total) = (0, 0);
    for k in 1..=2 {
        for xi in families(&p, &q, &funs, k) {
            let full = is_k_natural(&p, &q, &xi).unwrap();
            let on_gens = naturality_on_generators(&p, &q, &xi, &[w12]).unwrap();
            assert_eq!(full.natural, on_gens.natural);
            assert_eq!(full.natural, naturality_on_generators(&p, &q, &xi, &all).unwrap().natural);
            natural += full.natural as usize;
            total += 1;
        }
    }
    assert!(natural > 0 && natural < total);

    // With a unit the nullary operation is not a composite of binary ones.
    let u = builtin::associative(3, true);
    let binaries: Vec<_> = u.op_ids().filter(|&o| u.arity(o) == 2).collect();
    let id = Multifunctor::identity(&u);
    let xi = KNat { sources: vec![id.clone()], target: id, components: vec![u.unit_of(0).unwrap()] };
    assert!(matches!(naturality_on_generators(&u, &u, &xi, &binaries), Err(opkit::Error::Precondition(_))));
}

#[test]
fn multifunctors_into_end_are_monoids() {
    let census = census_fixture();
    let p = builtin::associative(3, true);
    let n = enumerate_multifunctors(&p, &end2(), 1_000_000).unwrap().len();
    assert_eq!(n as u64, census["monoids"]["2"].as_u64().unwrap());
    assert_eq!(enumerate_multifunctors(&builtin::trivial(), &end2(), 100).unwrap().len(), 1);
}

#[test]
fn hom_out_of_unit_is_the_target() {
    let i = builtin::trivial();
    let arrow = arrow_multicategory(&builtin::associative(2, false), 1).unwrap();
    for q in [builtin::associative(3, true), builtin::commutative(3, true), arrow] {
        let cap = q.op_ids().map(|o| q.arity(o)).max().unwrap();
        let hom = internal_hom(&i, &q, cap, 1_000_000).unwrap();
        assert_eq!(hom.objects.len(), q.colors().len());
        // The exhibited iso: object `F` goes to `F(x)`, `ξ` to its one component.
        let objects: Vec<_> = hom.objects.iter().map(|f| f.objects[0]).collect();
        let ops = hom.ops.iter().map(|xi| xi.components[0]).collect();
        let iso = Multifunctor { objects, ops };
        assert!(check_multifunctor(&hom.multicategory, &q, &iso).passed(), "{}", q.name());
        assert_eq!(hom.multicategory.op_count(), q.op_count());
        assert!(find_isomorphism(&hom.multicategory, &q, 1_000_000).unwrap().is_some());
    }
}

#[test]
fn hom_into_terminal_is_commutative() {
    let t = Terminal { colors: vec!["x".into()] };
    for p in [builtin::associative(2, false), builtin::commutative(3, true), builtin::associative(3, true)] {
        let hom = internal_hom(&p, &t, 3, 1_000_000).unwrap();
        assert_eq!(hom.objects.len(), 1);
        assert!(find_isomorphism(&hom.multicategory, &builtin::commutative(3, true), 1_000_000).unwrap().is_some());
    }
}

#[test]
fn hom_objects_and_laws() {
    let p = builtin::commutative(2, false);
    let q = builtin::associative(4, false);
    let hom = internal_hom(&p, &q, 2, 1_000_000).unwrap();
    assert_eq!(hom.objects.len(), enumerate_multifunctors(&p, &q, 1000).unwrap().len());
    assert!(check_multicategory_laws(&hom.multicategory).unwrap().passed());
    let hom = internal_hom(&builtin::associative(2, false), &end2(), 2, 1_000_000).unwrap();
    assert!(check_multicategory_laws(&hom.multicategory).unwrap().passed());
    assert!(internal_hom(&builtin::associative(3, true), &end2(), 2, 3).is_err());
}

#[test]
fn tensor_hom_adjunction() {
    let start = Instant::now();
    let i = builtin::trivial();
    let c = builtin::commutative(2, false);
    let a = builtin::associative(2, false);
    let r = end2();
    let caps = Caps::new(4, 3);
    let both_units = adjunction_check(&i, &i, &r, Caps::new(1, 1), 1_000_000).unwrap();
    assert!(both_units.report.bijective);
    assert_eq!(both_units.report.left, 1);
    for (p, q) in [(&i, &c), (&c, &i), (&c, &c), (&a, &c)] {
        let adj = adjunction_check(p, q, &r, caps, 10_000_000).unwrap();
        let rep = &adj.report;
        assert!(rep.round_trip_left && rep.round_trip_right && rep.bijective, "{} ⊗ {}: {rep:?}", p.name(), q.name());
        assert_eq!(rep.left, rep.right);
        assert_eq!(rep.pairing.len(), rep.left);
    }
    assert!(start.elapsed().as_secs() < 300);
}

#[test]
fn adjunction_refuses_unsettled_tensor() {
    let c = builtin::commutative(2, false);
    assert!(matches!(adjunction_check(&c, &c, &end2(), Caps::new(4, 1), 1000), Err(opkit::Error::Precondition(_))));
}

#[test]
fn adjunction_is_natural_in_target() {
    let c = builtin::commutative(2, false);
    let a = builtin::associative(2, false);
    let r = builtin::associative(4, false);
    let r2 = builtin::commutative(4, false);
    let h = enumerate_multifunctors(&r, &r2, 1000).unwrap().remove(0);
    for (p, q) in [(&c, &c), (&a, &c)] {
        assert!(naturality_in_target(p, q, &r, &r2, &h, Caps::new(4, 3), 1_000_000).unwrap());
    }
}
