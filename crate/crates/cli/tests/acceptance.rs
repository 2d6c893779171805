//! One line per acceptance criterion. Exits non-zero if any fails.

use opkit::algebras::free::{free_algebra, free_forgetful_check};
use opkit::algebras::op_algebra::{op_algebra_to_operad, operad_to_op_algebra};
use opkit::algebras::strings::pn_algebras_as_strings;
use opkit::algebras::{end_multicategory, enumerate_algebras, AlgebraStructure, EndMulticategory, ObjectFamily};
use opkit::bimodules::{bar_complex, hochschild, Bimodule};
use opkit::functor::{check_multifunctor, is_equivalence, Multifunctor};
use opkit::homcalc::{adjunction_check, is_k_natural, naturality_on_generators, KNat};
use opkit::multicat::builtin;
use opkit::presents::{bv_tensor, Caps};
use opkit::search::{enumerate_multifunctors, find_isomorphism};
use opkit::simplicial::TruncatedSimplicialSet;
use opkit::trees::{op_compose, op_hom_set, OpOperation};
use opkit::{perm, Multicat, Multicategory, OpId, Signature};
use opkit_cli::elaborate::Env;
use opkit_cli::syntax;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn census() -> serde_json::Value {
    serde_json::from_str(include_str!("../../core/tests/fixtures/census.json")).unwrap()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Every fixture, each after the ones it refers to.
const FIXTURES: &[&str] = &["i.opk", "as2.opk", "as3.opk", "com3.opk", "op3.opk", "mon.opk", "equiv.opk", "maps.opk", "max.opk", "line.opk"];

fn fixture_files() -> Vec<PathBuf> {
    let mut on_disk: Vec<String> = std::fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|p| p.ends_with(".opk"))
        .collect();
    on_disk.sort();
    let mut listed: Vec<String> = FIXTURES.iter().map(|s| s.to_string()).collect();
    listed.sort();
    assert_eq!(on_disk, listed, "fixture list is out of date");
    FIXTURES.iter().map(|f| fixtures().join(f)).collect()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:.1?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn op_group_law() -> Verdict {
    let start = Instant::now();
    let mut entries = 0;
    for n in 0..=4 {
        let perms = perm::all(n);
        let mut hom = op_hom_set(&[n], n, 1 << 20).map_err(|e| e.to_string())?;
        hom.sort();
        let mut images: Vec<OpOperation> = perms.iter().map(|t| OpOperation::corolla(t)).collect();
        images.sort();
        images.dedup();
        ensure!(images.len() == perm::factorial(n), "τ ↦ (t_{n}, τ) is not injective");
        ensure!(images == hom, "Op({n};{n}) has {} elements, corollas give {}", hom.len(), images.len());
        for tau in &perms {
            for rho in &perms {
                let got = op_compose(&OpOperation::corolla(tau), &[OpOperation::corolla(rho)]).map_err(|e| e.to_string())?;
                let want = OpOperation::corolla(&perm::compose(rho, tau));
                ensure!(got == want, "n={n}: (t,{tau:?})∘(t,{rho:?}) ≠ (t,{rho:?}·{tau:?})");
                entries += 1;
            }
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("{entries} products for n ≤ 4 match the opposite group"))
}

fn op_algebra_round_trip() -> Verdict {
    let start = Instant::now();
    let mut names = Vec::new();
    for p in [builtin::trivial(), builtin::commutative(3, true), builtin::associative(3, true)] {
        let a = operad_to_op_algebra(&p, 3).map_err(|e| e.to_string())?;
        let laws = a.check();
        ensure!(laws.passed(), "{}: Op-algebra laws: {:?}", p.name(), laws.first());
        let (back, report) = op_algebra_to_operad(&a, p.name()).map_err(|e| e.to_string())?;
        ensure!(report.passed(), "{}: {:?}", p.name(), report.first());
        ensure!(back.same_tables(&p), "{}: tables differ after the round trip", p.name());
        names.push(p.name().to_string());
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("exact tables for {}", names.join(", ")))
}

fn is_bijection(p: &Multicategory, q: &Multicategory, f: &Multifunctor) -> bool {
    let mut ops: Vec<OpId> = f.ops.clone();
    ops.sort();
    ops.dedup();
    let mut objs = f.objects.clone();
    objs.sort();
    objs.dedup();
    check_multifunctor(p, q, f).passed() && ops.len() == q.op_count() && objs.len() == q.colors().len()
}

fn bv_unit_law() -> Verdict {
    let i = builtin::trivial();
    let mut names = Vec::new();
    for (p, caps) in [
        (builtin::commutative(3, true), Caps::new(3, 3)),
        (builtin::associative(3, true), Caps::new(3, 3)),
        (builtin::associative(2, false), Caps::new(2, 2)),
        (builtin::trivial(), Caps::new(1, 1)),
    ] {
        let start = Instant::now();
        for (side, t) in [("I⊗P", bv_tensor(&i, &p, caps)), ("P⊗I", bv_tensor(&p, &i, caps))] {
            let t = t.map_err(|e| e.to_string())?;
            let r = &t.saturated.report;
            ensure!(r.stabilized && r.complete, "{side} for {} did not stabilize", p.name());
            let m = &t.saturated.multicategory;
            let f = find_isomorphism(m, &p, 1_000_000).map_err(|e| e.to_string())?;
            let f = f.ok_or_else(|| format!("{side} for {} is not isomorphic to it", p.name()))?;
            ensure!(is_bijection(m, &p, &f), "{side} for {}: the isomorphism found is not one", p.name());
        }
        within(Duration::from_secs(60), start)?;
        names.push(p.name().to_string());
    }
    Ok(format!("explicit isomorphisms on both sides for {}", names.join(", ")))
}

/// Pairs of a P-algebra and a Q-algebra on the same set whose operations
/// commute with each other, which is what an algebra over P ⊗ Q amounts to.
fn interchanging_pairs(p: &Multicategory, q: &Multicategory, size: usize) -> Result<usize, String> {
    let fam = ObjectFamily::single(size);
    let end = EndMulticategory::new(fam.clone(), None);
    let pa = enumerate_algebras(p, &fam, 10_000_000).map_err(|e| e.to_string())?;
    let qa = enumerate_algebras(q, &fam, 10_000_000).map_err(|e| e.to_string())?;
    let commute = |a: &AlgebraStructure, b: &AlgebraStructure| {
        p.op_ids().all(|x| {
            q.op_ids().all(|y| {
                let (n, m) = (p.arity(x), q.arity(y));
                let cells = ObjectFamily::single(size).domain(&vec![0; n * m]);
                cells.iter().all(|c| {
                    let rows: Vec<usize> = (0..n).map(|i| end.eval(b.action(y), &c[i * m..(i + 1) * m])).collect();
                    let cols: Vec<usize> = (0..m).map(|j| end.eval(a.action(x), &(0..n).map(|i| c[i * m + j]).collect::<Vec<_>>())).collect();
                    end.eval(a.action(x), &rows) == end.eval(b.action(y), &cols)
                })
            })
        })
    };
    Ok(pa.iter().map(|a| qa.iter().filter(|b| commute(a, b)).count()).sum())
}

fn tensor_hom_adjunction() -> Verdict {
    let start = Instant::now();
    let (i, c, a) = (builtin::trivial(), builtin::commutative(2, false), builtin::associative(2, false));
    let r = EndMulticategory::new(ObjectFamily::single(2), None);
    let mut counts = Vec::new();
    for (p, q) in [(&i, &c), (&c, &i), (&c, &c), (&a, &c)] {
        let adj = adjunction_check(p, q, &r, Caps::new(4, 3), 10_000_000).map_err(|e| e.to_string())?;
        let rep = &adj.report;
        let label = format!("{}⊗{}", p.name(), q.name());
        ensure!(rep.round_trip_left && rep.round_trip_right && rep.bijective, "{label}: {rep:?}");
        ensure!(rep.pairing.len() == rep.left && rep.left == rep.right, "{label}: {} vs {}", rep.left, rep.right);
        let left = enumerate_multifunctors(&adj.tensor.saturated.multicategory, &r, 10_000_000).map_err(|e| e.to_string())?.len();
        let right = enumerate_multifunctors(p, &adj.hom.multicategory, 10_000_000).map_err(|e| e.to_string())?.len();
        let pairs = interchanging_pairs(p, q, 2)?;
        ensure!(left == rep.left && right == rep.right && pairs == rep.left, "{label}: report {} / {}, enumeration {left} / {right}, interchanging pairs {pairs}", rep.left, rep.right);
        counts.push(format!("{label}:{}", rep.left));
    }
    within(Duration::from_secs(300), start)?;
    Ok(format!("bijective into End(2) with counts {}", counts.join(" ")))
}

/// Every family of components between the given functors.
fn families<Q: Multicat>(p: &Multicategory, q: &Q, funs: &[Multifunctor<Q::Op>], k: usize) -> Vec<KNat<Q::Op>> {
    let mut out = Vec::new();
    let mut idx = vec![0; k + 1];
    loop {
        let sources: Vec<_> = idx[..k].iter().map(|&i| funs[i].clone()).collect();
        let target = funs[idx[k]].clone();
        let per_color: Vec<Vec<Q::Op>> = (0..p.colors().len())
            .map(|a| q.operations(&Signature::new(sources.iter().map(|f| f.objects[a]).collect(), target.objects[a])).unwrap())
            .collect();
        let mut t = vec![0; per_color.len()];
        if per_color.iter().all(|c| !c.is_empty()) {
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
        }
        if !builtin::next_tuple(&mut idx, funs.len()) {
            return out;
        }
    }
}

fn naturality_on_generating_sets() -> Verdict {
    let start = Instant::now();
    let q = EndMulticategory::new(ObjectFamily::single(2), None);
    let named = |p: &Multicategory, names: &[&str]| names.iter().map(|n| p.op_by_name(n).unwrap()).collect::<Vec<_>>();
    let as3 = builtin::associative(3, false);
    let com3 = builtin::commutative(3, false);
    let as2 = builtin::associative(2, false);
    let i = builtin::trivial();
    let cases = [
        (&as3, named(&as3, &[&builtin::word_name(&[0, 1])])),
        (&com3, named(&com3, &["c2"])),
        (&as2, named(&as2, &[&builtin::word_name(&[0, 1])])),
        (&i, vec![]),
    ];
    let (mut total, mut natural) = (0, 0);
    for (p, gens) in &cases {
        let funs = enumerate_multifunctors(p, &q, 1_000_000).map_err(|e| e.to_string())?;
        for k in 0..=2 {
            for xi in families(p, &q, &funs, k) {
                let full = is_k_natural(p, &q, &xi).map_err(|e| e.to_string())?;
                let on_gens = naturality_on_generators(p, &q, &xi, gens).map_err(|e| format!("{}: {e}", p.name()))?;
                ensure!(full.natural == on_gens.natural, "{}: verdicts differ on a {k}-ary family", p.name());
                total += 1;
                natural += full.natural as usize;
            }
        }
    }
    ensure!(natural > 0 && natural < total, "degenerate sample: {natural} of {total} natural");
    within(Duration::from_secs(120), start)?;
    Ok(format!("{total} candidates on {} instances agree ({natural} natural)", cases.len()))
}

fn algebra_census() -> Verdict {
    let fx = census();
    let mut seen = Vec::new();
    for k in [2usize, 3] {
        let fam = ObjectFamily::single(k);
        for (p, key) in [(builtin::commutative(3, true), "commutative_monoids"), (builtin::associative(3, true), "monoids")] {
            let got = enumerate_algebras(&p, &fam, 10_000_000).map_err(|e| e.to_string())?.len() as u64;
            let want = fx[key][k.to_string()].as_u64().unwrap();
            ensure!(got == want, "{} on {k} elements: {got}, oracle {want}", p.name());
            seen.push(format!("{}/{k}={got}", p.name()));
        }
    }
    Ok(seen.join(" "))
}

fn end_cardinalities() -> Verdict {
    let mut checked = 0;
    let mut listed = 0;
    for a in 0..=3usize {
        for b in 0..=3usize {
            let fam = ObjectFamily::new(vec!["x".into(), "y".into()], vec![a, b]);
            let e = EndMulticategory::new(fam.clone(), Some(3));
            for sig in builtin::all_signatures(2, 3) {
                let domain = fam.domain(&sig.inputs).len() as u32;
                let want = (fam.sizes[sig.output] as u128).pow(domain);
                ensure!(e.cardinality(&sig) == Some(want), "{a},{b} {sig:?}: {:?} vs {want}", e.cardinality(&sig));
                if want <= 1 << 16 {
                    let mut ops = e.operations(&sig).map_err(|e| e.to_string())?;
                    let n = ops.len();
                    ops.sort();
                    ops.dedup();
                    ensure!(ops.len() == n && n as u128 == want, "{a},{b} {sig:?}: {n} listed, {want} expected");
                    listed += 1;
                }
                checked += 1;
            }
        }
    }
    for k in 1..=2 {
        let m = end_multicategory(&ObjectFamily::single(k), 3, 10_000_000).map_err(|e| e.to_string())?;
        for sig in builtin::all_signatures(1, 3) {
            let want = k.pow(k.pow(sig.arity() as u32) as u32);
            ensure!(m.ops_of(&sig).len() == want, "End({k}) {sig:?}: {} tabulated", m.ops_of(&sig).len());
        }
    }
    Ok(format!("{checked} signatures, {listed} enumerated, End(1) and End(2) tabulated to arity 3"))
}

fn strings_correspondence() -> Verdict {
    let fx = census();
    let mut seen = Vec::new();
    for (p, sizes, key) in [
        (builtin::trivial(), vec![2, 2], "functions_2_2"),
        (builtin::associative(3, true), vec![2, 2], "monoid_homs_2_2"),
        (builtin::commutative(3, true), vec![2, 2], "commutative_monoid_homs_2_2"),
        (builtin::trivial(), vec![2, 2, 2], "function_strings_2_2_2"),
        (builtin::associative(3, true), vec![2, 2, 2], "monoid_hom_strings_2_2_2"),
    ] {
        let r = pn_algebras_as_strings(&p, &sizes, 1_000_000).map_err(|e| e.to_string())?;
        let want = fx[key].as_u64().unwrap() as usize;
        ensure!(r.bijective, "{key}: restriction is not a bijection");
        ensure!(r.arrow_algebras == want && r.strings == want, "{key}: {} algebras, {} strings, oracle {want}", r.arrow_algebras, r.strings);
        seen.push(format!("{}^{}={want}", p.name(), sizes.len() - 1));
    }
    Ok(seen.join(" "))
}

/// Counts instances of each of the five identity families, checking them.
fn simplicial_families(s: &TruncatedSimplicialSet) -> Result<[usize; 5], String> {
    let mut n = [0; 5];
    let top = s.top();
    for k in 0..=top {
        for x in 0..s.level_size(k) {
            if k >= 2 {
                for j in 1..=k {
                    for i in 0..j {
                        ensure!(s.face(k - 1, i, s.face(k, j, x)) == s.face(k - 1, j - 1, s.face(k, i, x)), "d_i d_j at level {k}");
                        n[0] += 1;
                    }
                }
            }
            if k < top {
                for j in 0..=k {
                    let y = s.degeneracy(k, j, x);
                    for i in 0..=k + 1 {
                        let lhs = s.face(k + 1, i, y);
                        if i < j {
                            ensure!(lhs == s.degeneracy(k - 1, j - 1, s.face(k, i, x)), "d_i s_j, i < j, at level {k}");
                            n[1] += 1;
                        } else if i == j || i == j + 1 {
                            ensure!(lhs == x, "d_j s_j at level {k}");
                            n[2] += 1;
                        } else {
                            ensure!(lhs == s.degeneracy(k - 1, j, s.face(k, i - 1, x)), "d_i s_j, i > j+1, at level {k}");
                            n[3] += 1;
                        }
                    }
                }
            }
            if k + 2 <= top {
                for j in 0..=k {
                    for i in 0..=j {
                        ensure!(s.degeneracy(k + 1, i, s.degeneracy(k, j, x)) == s.degeneracy(k + 1, j + 1, s.degeneracy(k, i, x)), "s_i s_j at level {k}");
                        n[4] += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

fn simplicial_identities() -> Verdict {
    let start = Instant::now();
    let mut total = [0; 5];
    for (p, cap) in [(builtin::trivial(), 1), (builtin::associative(2, false), 2)] {
        let r = Bimodule::regular(&p);
        let bar = bar_complex(&r, &p, &r, 3, cap).map_err(|e| e.to_string())?;
        let h = hochschild(&p, 3, cap).map_err(|e| e.to_string())?;
        for (what, s) in [("bar", &bar.simplicial), ("Hochschild", &h.bar.simplicial)] {
            ensure!(s.top() == 3, "{what} of {} stops at level {}", p.name(), s.top());
            let rep = s.check_identities();
            ensure!(rep.passed(), "{what} of {}: {:?}", p.name(), rep.first());
            let n = simplicial_families(s).map_err(|e| format!("{what} of {}: {e}", p.name()))?;
            for (t, c) in total.iter_mut().zip(n) {
                *t += c;
            }
        }
    }
    ensure!(total.iter().all(|&c| c > 0), "some family was never exercised: {total:?}");
    within(Duration::from_secs(60), start)?;
    Ok(format!("instances per family {total:?} for I and As2nu"))
}

fn free_forgetful() -> Verdict {
    let mut instances = 0;
    for p in [builtin::trivial(), builtin::commutative(3, true), builtin::associative(3, true)] {
        for (sa, sb) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let (fa, fb) = (ObjectFamily::single(sa), ObjectFamily::single(sb));
            let free = free_algebra(&p, &fa, 3).map_err(|e| e.to_string())?;
            let laws = free.check_monad_laws(&p);
            ensure!(laws.passed() && laws.checked > 0, "{}: monad laws {:?}", p.name(), laws.first());
            for b in enumerate_algebras(&p, &fb, 1_000_000).map_err(|e| e.to_string())? {
                let r = free_forgetful_check(&p, &free, &fb, &b, 1 << 20).map_err(|e| e.to_string())?;
                let maps = sb.pow(sa as u32);
                ensure!(r.bijective && r.algebra_maps == maps && r.carrier_maps == maps, "{} {sa}→{sb}: {r:?}", p.name());
                instances += 1;
            }
        }
    }
    Ok(format!("{instances} targets over I, Com3, As3"))
}

fn fixture_env() -> Result<Env, String> {
    let mut env = Env::default();
    for path in fixture_files() {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let doc = syntax::parse(&text).map_err(|d| format!("{}: {}", path.display(), d[0]))?;
        env.elaborate(&doc, &path.display().to_string()).map_err(|d| format!("{}", d[0]))?;
    }
    Ok(env)
}

fn equivalence_checker() -> Verdict {
    let env = fixture_env()?;
    let mut cases = Vec::new();
    for (name, def) in &env.multicategories {
        cases.push((format!("id {name}"), def.multicategory.clone(), def.multicategory.clone(), Multifunctor::identity(&def.multicategory), true));
    }
    for (name, f) in &env.functors {
        let want = match name.as_str() {
            "Skeleton" | "Collapse" => true,
            "Corner" | "Fold" | "Symmetrize" | "Unit" => false,
            other => return Err(format!("functor {other} has no expected verdict")),
        };
        let p = env.multicategory(&f.source).unwrap().clone();
        let q = env.multicategory(&f.target).unwrap().clone();
        cases.push((name.clone(), p, q, f.functor.clone(), want));
    }
    let (mut pos, mut neg) = (0, 0);
    for (label, p, q, f, want) in &cases {
        let r = is_equivalence(p, q, f);
        ensure!(r.is_equivalence() == *want, "{label}: verdict {} expected {want}: {r:?}", r.is_equivalence());
        if *want {
            ensure!(r.iso_witnesses.len() == q.colors().len(), "{label}: {} witnesses for {} colors", r.iso_witnesses.len(), q.colors().len());
            pos += 1;
        } else {
            let witnessed = (!r.faithful() && !r.not_faithful.is_empty())
                || (!r.fully_faithful() && !(r.not_faithful.is_empty() && r.not_full.is_empty()))
                || (!r.essentially_surjective() && !r.not_essentially_surjective.is_empty());
            ensure!(witnessed, "{label}: rejected without a witness");
            neg += 1;
        }
    }
    ensure!(pos >= 3 && neg >= 3, "fixture suite too small: {pos} positive, {neg} negative");
    Ok(format!("{pos} positives and {neg} witnessed negatives, all as expected"))
}

fn opkit(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_opkit")).args(args).current_dir(fixtures()).output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "opkit {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr));
    Ok(out.stdout)
}

fn cli_round_trip() -> Verdict {
    let files = fixture_files();
    for path in &files {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let doc = syntax::parse(&text).map_err(|d| format!("{}: {}", path.display(), d[0]))?;
        ensure!(syntax::print(&doc) == text, "{} does not print back to itself", path.display());
    }
    let names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    let mut runs: Vec<Vec<String>> = vec![std::iter::once("check".to_string()).chain(names.iter().cloned()).collect()];
    for b in ["trivial", "com3", "as3", "as2nu", "op2v3"] {
        for format in ["json", "dsl"] {
            runs.push(["export", "--builtin", b, "--format", format].map(String::from).to_vec());
        }
    }
    for block in ["Mon", "Max", "Line", "Symmetrize", "Iso"] {
        runs.push(["export", "--block", block].map(String::from).into_iter().chain(names.iter().cloned()).collect());
    }
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (a, b) = (opkit(&args)?, opkit(&args)?);
        ensure!(a == b, "opkit {} differs between runs", args.join(" "));
    }
    Ok(format!("{} fixtures print back byte for byte, {} commands repeat byte for byte", files.len(), runs.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("Op group law", op_group_law),
        ("Op-algebra round trip", op_algebra_round_trip),
        ("BV unit law", bv_unit_law),
        ("tensor-hom adjunction", tensor_hom_adjunction),
        ("naturality on generators", naturality_on_generating_sets),
        ("algebra census", algebra_census),
        ("End cardinalities", end_cardinalities),
        ("P1/Pn correspondence", strings_correspondence),
        ("simplicial identities", simplicial_identities),
        ("free/forgetful adjunction", free_forgetful),
        ("equivalence checker", equivalence_checker),
        ("CLI round trip and determinism", cli_round_trip),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name} ({t:.2?}): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({t:.2?}): {why}", n + 1)
            }
        }
    }
    println!("acceptance: {} of {} criteria failed", failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
