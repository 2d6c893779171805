//! The subcommands. Each reads documents, runs one family of operations and
//! returns a JSON artifact together with a verdict.

use crate::ast::{BlockKind, Document};
use crate::diag::Diagnostic;
use crate::elaborate::Env;
use crate::{emit, syntax};
use clap::{Args, Parser, Subcommand, ValueEnum};
use opkit::algebras::op_algebra::{op_algebra_to_operad, operad_to_op_algebra};
use opkit::algebras::strings::pn_algebras_as_strings;
use opkit::algebras::{
    carrier_maps, end_module, end_multicategory, enumerate_algebras, is_homomorphism, max_arity, EndMulticategory, ObjectFamily,
};
use opkit::algebras::free::{free_algebra, free_forgetful_check};
use opkit::bimodules::{analyze_pointed, bar_complex, check_bimodule, end_right_module, free_bimodule, hochschild, regular_map, Bimodule};
use opkit::category::{nerve, underlying_category};
use opkit::functor::is_equivalence;
use opkit::homcalc::{adjunction_check, internal_hom, naturality_in_target};
use opkit::multicat::builtin::{self, all_signatures};
use opkit::presents::{bv_tensor, coproduct, pushout, saturate, Caps, Presentation};
use opkit::search::find_isomorphism;
use opkit::trees::{circle_product, free_multicategory, op_compose, OpOperad, OpOperation};
use opkit::{json, Error, FiniteCollection, Multicategory, OpId};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "opkit", version, about = "Finite colored operads: laws, composition, tensor products, algebras and bar complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Input documents; `.opk` is appended when the path has no extension
    /// and does not exist as given.
    pub files: Vec<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub cap_arity: usize,
    #[arg(long, default_value_t = 4)]
    pub cap_vertices: usize,
    /// Maximum number of candidates any enumeration may visit.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
    /// Write the JSON artifact here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps::new(self.cap_arity, self.cap_vertices)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and elaborate documents, running every law check.
    Check(Common),
    /// Compose operations of a multicategory, trees of Op, or collections.
    Compose {
        #[command(flatten)]
        common: Common,
        /// The multicategory (default: the last one read).
        #[arg(long = "in")]
        within: Option<String>,
        #[arg(long)]
        outer: Option<String>,
        #[arg(long, num_args = 1..)]
        inner: Vec<String>,
        /// 1-based slot for a partial composite.
        #[arg(long)]
        slot: Option<usize>,
        /// Circle product of two collections or multicategories.
        #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"])]
        circle: Vec<String>,
        /// Grafting of Op trees: the outer tree followed by one per vertex.
        #[arg(long, num_args = 1..)]
        tree: Vec<String>,
    },
    /// Free multicategories, free algebras and free bimodules.
    Free {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        collection: Option<String>,
        /// Treat the collection as generating a symmetric multicategory.
        #[arg(long)]
        symmetric: bool,
        /// Free algebra over this multicategory.
        #[arg(long)]
        algebra_over: Option<String>,
        /// Carrier sizes, one per color.
        #[arg(long, value_delimiter = ',')]
        carrier: Vec<usize>,
        /// An algebra block to compare maps out of the free algebra with.
        #[arg(long)]
        target: Option<String>,
        /// Free bimodule P ∘ Q.
        #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"])]
        bimodule: Vec<String>,
    },
    /// Saturate presentations, coproducts and pushouts within the caps.
    Saturate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"])]
        coproduct: Vec<String>,
        /// Two multifunctors out of the same multicategory.
        #[arg(long, num_args = 2, value_names = ["F", "G"])]
        pushout: Vec<String>,
    },
    /// Boardman-Vogt tensor product of two multicategories.
    Tensor {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        /// Look for an isomorphism between the tensor and this multicategory.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Internal hom: multifunctors and k-natural transformations.
    Hom {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
    /// Check the tensor-hom bijection on maps P ⊗ Q → R.
    Adjunction {
        #[command(flatten)]
        common: Common,
        #[arg(long = "left")]
        p: Option<String>,
        #[arg(long = "right")]
        q: Option<String>,
        #[arg(long = "target")]
        r: Option<String>,
        /// A multifunctor R → R' along which naturality is checked.
        #[arg(long)]
        along: Option<String>,
    },
    /// Enumerate algebras, strings of homomorphisms and Op-algebra round trips.
    Algebras {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        over: Option<String>,
        /// Carrier sizes, one per color (or per level with --strings).
        #[arg(long, value_delimiter = ',')]
        carrier: Vec<usize>,
        /// Compare Pⁿ-algebras with strings of homomorphisms.
        #[arg(long)]
        strings: bool,
        /// Round trip through algebras over Op.
        #[arg(long)]
        op_roundtrip: bool,
        /// Count homomorphisms between two algebra blocks.
        #[arg(long, num_args = 2, value_names = ["SOURCE", "TARGET"])]
        homs: Vec<String>,
    },
    /// Endomorphism multicategories and modules.
    End {
        #[command(flatten)]
        common: Common,
        /// Carrier sizes of A.
        #[arg(long, value_delimiter = ',')]
        carrier: Vec<usize>,
        /// Carrier sizes of B for the End(A)-End(B) module.
        #[arg(long, value_delimiter = ',')]
        module: Vec<usize>,
        /// Analyze this bimodule: pointedness and quasi-freeness.
        #[arg(long)]
        pointed: Option<String>,
        /// End_Q(M) of the right module underlying this bimodule.
        #[arg(long)]
        right_module: Option<String>,
        /// Also tabulate End(A) and check its laws.
        #[arg(long)]
        materialize: bool,
    },
    /// Truncated two-sided bar complex B(X, P, Y).
    Bar {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        over: Option<String>,
        /// Bimodule block, or `regular`.
        #[arg(long, default_value = "regular")]
        left: String,
        #[arg(long, default_value = "regular")]
        right: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Truncated Hochschild complex B(P, P, P) with its augmentation.
    Hochschild {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        over: Option<String>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Decide whether a multifunctor is an equivalence, or find an isomorphism.
    Equiv {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        functor: Option<String>,
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        iso: Vec<String>,
    },
    /// Nerve of the underlying category of a multicategory.
    Nerve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        of: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Export blocks (or a built-in multicategory) as JSON or as a document.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        block: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// trivial, com<N>, com<N>nu, as<N>, as<N>nu or op<C>v<V>.
        #[arg(long)]
        builtin: Option<String>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dsl,
}

/// Which core operations each subcommand reaches.
pub const COMMANDS: &[(&str, &[&str])] = &[
    ("check", &["check_multicategory_laws", "check_multifunctor", "AlgebraStructure::check", "check_bimodule", "saturate_presentation_block"]),
    ("compose", &["compose_checked", "compose_all", "circle_product", "op_compose"]),
    ("free", &["free_multicategory", "free_algebra", "FreeAlgebra::check_monad_laws", "free_forgetful_check", "free_bimodule"]),
    ("saturate", &["saturate", "coproduct", "pushout"]),
    ("tensor", &["bv_tensor"]),
    ("hom", &["internal_hom", "enumerate_multifunctors"]),
    ("adjunction", &["adjunction_check", "naturality_in_target"]),
    ("algebras", &["enumerate_algebras", "pn_algebras_as_strings", "operad_to_op_algebra", "op_algebra_to_operad", "is_homomorphism"]),
    ("end", &["end_multicategory", "EndMulticategory::cardinality", "end_module", "analyze_pointed", "end_right_module", "regular_map"]),
    ("bar", &["bar_complex", "TruncatedSimplicialSet::check_identities"]),
    ("hochschild", &["hochschild", "Hochschild::basepoint_is_bimodule_map"]),
    ("equiv", &["is_equivalence", "find_isomorphism"]),
    ("nerve", &["underlying_category", "nerve"]),
    ("export", &["json::multicategory", "json::algebra", "json::multifunctor", "builtin"]),
];

/// Why a command did not produce an artifact.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Documents(Vec<Diagnostic>),
    /// Inputs failed their law checks.
    Laws(Vec<Diagnostic>),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// The artifact and whether every check it reports passed.
pub struct Outcome {
    pub artifact: Value,
    pub ok: bool,
    /// Diagnostics to report alongside the artifact.
    pub notes: Vec<Diagnostic>,
}

type Run = Result<Outcome, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn resolve_path(p: &Path) -> PathBuf {
    if !p.exists() && p.extension().is_none() {
        let with = p.with_extension("opk");
        if with.exists() {
            return with;
        }
    }
    p.to_path_buf()
}

pub fn read_document(path: &Path) -> Result<(String, Document), Failure> {
    let path = resolve_path(path);
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read {shown}: {e}")))?;
    let doc = syntax::parse(&text).map_err(|ds| Failure::Documents(ds.into_iter().map(|d| d.in_file(&shown)).collect()))?;
    Ok((shown, doc))
}

fn load(common: &Common) -> Result<Env, Failure> {
    let mut env = Env { default_caps: Some(common.caps()), ..Env::default() };
    let mut seen = Vec::new();
    for f in &common.files {
        let key = std::fs::canonicalize(resolve_path(f)).unwrap_or_else(|_| f.clone());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let (shown, doc) = read_document(f)?;
        env.elaborate(&doc, &shown).map_err(Failure::Documents)?;
    }
    Ok(env)
}

/// Loads documents whose blocks must all pass their laws.
fn load_lawful(common: &Common) -> Result<Env, Failure> {
    let env = load(common)?;
    let failures = env.law_failures();
    if failures.is_empty() {
        Ok(env)
    } else {
        Err(Failure::Laws(failures))
    }
}

fn nth_of(env: &Env, kind: BlockKind, n: usize) -> Option<String> {
    env.order.iter().filter(|(k, _)| *k == kind).nth(n).map(|(_, name)| name.clone())
}

fn last_of(env: &Env, kind: BlockKind) -> Option<String> {
    env.order.iter().rev().find(|(k, _)| *k == kind).map(|(_, name)| name.clone())
}

fn multicat<'a>(env: &'a Env, name: &str) -> Result<&'a Multicategory, Failure> {
    env.multicategory(name).ok_or_else(|| usage(format!("no multicategory named `{name}`")))
}

fn pick<'a>(env: &'a Env, name: &Option<String>, n: usize) -> Result<&'a Multicategory, Failure> {
    match name {
        Some(name) => multicat(env, name),
        None => {
            let name = nth_of(env, BlockKind::Multicategory, n).ok_or_else(|| usage(format!("expected at least {} multicategories", n + 1)))?;
            multicat(env, &name)
        }
    }
}

fn op_in(m: &Multicategory, name: &str) -> Result<OpId, Failure> {
    emit::find_op(m, name).ok_or_else(|| usage(format!("`{}` has no operation `{name}`", m.name())))
}

fn family(m: &Multicategory, sizes: &[usize]) -> Result<ObjectFamily, Failure> {
    match sizes.len() {
        0 => Err(usage("missing --carrier")),
        1 => Ok(ObjectFamily::new(m.colors().to_vec(), vec![sizes[0]; m.colors().len()])),
        n if n == m.colors().len() => Ok(ObjectFamily::new(m.colors().to_vec(), sizes.to_vec())),
        n => Err(usage(format!("{n} carrier sizes for {} colors", m.colors().len()))),
    }
}

fn bimodule_of<'a>(env: &'a Env, name: &str) -> Result<(&'a Bimodule, &'a Multicategory, &'a Multicategory), Failure> {
    let b = env.bimodules.get(name).ok_or_else(|| usage(format!("no bimodule named `{name}`")))?;
    Ok((&b.bimodule, multicat(env, &b.left)?, multicat(env, &b.right)?))
}

fn collection_json(c: &FiniteCollection) -> Value {
    let ops: Vec<Value> = c
        .ops
        .iter()
        .map(|(n, s)| json!({"name": n, "inputs": s.inputs.iter().map(|&i| c.colors[i].clone()).collect::<Vec<_>>(), "output": c.colors[s.output]}))
        .collect();
    json!({"colors": c.colors, "symmetric": c.symmetric, "arity_cap": c.arity_cap, "operations": ops})
}

fn signature_counts(m: &Multicategory) -> Map<String, Value> {
    m.support().iter().map(|s| (s.display(m.colors()), json!(m.ops_of(s).len()))).collect()
}

fn done(kind: &str, body: Value, ok: bool) -> Run {
    Ok(Outcome { artifact: json::document(kind, body), ok, notes: Vec::new() })
}

pub fn execute(cmd: &Command) -> Run {
    match cmd {
        Command::Check(common) => check(common),
        Command::Compose { common, within, outer, inner, slot, circle, tree } => compose(common, within, outer, inner, *slot, circle, tree),
        Command::Free { common, collection, symmetric, algebra_over, carrier, target, bimodule } => {
            free(common, collection, *symmetric, algebra_over, carrier, target, bimodule)
        }
        Command::Saturate { common, presentation, coproduct, pushout } => saturate_cmd(common, presentation, coproduct, pushout),
        Command::Tensor { common, left, right, compare } => tensor(common, left, right, compare),
        Command::Hom { common, source, target } => hom(common, source, target),
        Command::Adjunction { common, p, q, r, along } => adjunction(common, p, q, r, along),
        Command::Algebras { common, over, carrier, strings, op_roundtrip, homs } => algebras(common, over, carrier, *strings, *op_roundtrip, homs),
        Command::End { common, carrier, module, pointed, right_module, materialize } => end(common, carrier, module, pointed, right_module, *materialize),
        Command::Bar { common, over, left, right, levels } => bar(common, over, left, right, *levels),
        Command::Hochschild { common, over, levels } => hochschild_cmd(common, over, *levels),
        Command::Equiv { common, functor, iso } => equiv(common, functor, iso),
        Command::Nerve { common, of, depth } => nerve_cmd(common, of, *depth),
        Command::Export { common, block, format, builtin } => export(common, block, *format, builtin),
    }
}

fn check(common: &Common) -> Run {
    let env = load(common)?;
    let mut blocks = Vec::new();
    for r in &env.reports {
        let mut v = json::law_report(&r.laws);
        v["kind"] = json!(r.kind.keyword());
        v["name"] = json!(r.name);
        v["file"] = json!(r.file);
        if let Some(s) = env.multicategories.get(&r.name).and_then(|d| d.saturation.as_ref()) {
            v["saturation"] = json::saturation(s);
        }
        if let Some(m) = env.multicategory(&r.name) {
            v["operations"] = json!(signature_counts(m));
        }
        blocks.push(v);
    }
    let ok = env.reports.iter().all(|r| r.laws.passed());
    let mut out = done("check", json!({"blocks": blocks, "passed": ok}), ok)?;
    out.notes = env.law_failures();
    Ok(out)
}

fn compose(common: &Common, within: &Option<String>, outer: &Option<String>, inner: &[String], slot: Option<usize>, circle: &[String], tree: &[String]) -> Run {
    if !tree.is_empty() {
        let parse = |t: &String| OpOperation::parse(t).map_err(|e| usage(format!("bad tree `{t}`: {e}")));
        let outer = parse(&tree[0])?;
        let inners = tree[1..].iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let r = op_compose(&outer, &inners)?;
        let sig = r.signature();
        return done("compose", json!({"result": r.to_string(), "inputs": sig.inputs, "output": sig.output}), true);
    }
    let env = load_lawful(common)?;
    if !circle.is_empty() {
        let get = |n: &String| -> Result<FiniteCollection, Failure> {
            match (env.collections.get(n), env.multicategory(n)) {
                (Some(c), _) => Ok(c.clone()),
                (None, Some(m)) => Ok(m.collection()),
                _ => Err(usage(format!("no collection or multicategory named `{n}`"))),
            }
        };
        let cp = circle_product(&get(&circle[0])?, &get(&circle[1])?, common.cap_arity)?;
        let mut labels: Vec<String> = cp.collection.ops.iter().map(|(n, _)| n.clone()).collect();
        labels.sort();
        return done("compose", json!({"elements": cp.len(), "counts_by_arity": cp.counts(common.cap_arity), "labels": labels, "collection": collection_json(&cp.collection)}), true);
    }
    let m = match within {
        Some(n) => multicat(&env, n)?,
        None => multicat(&env, &last_of(&env, BlockKind::Multicategory).ok_or_else(|| usage("no multicategory given"))?)?,
    };
    let outer = op_in(m, outer.as_deref().ok_or_else(|| usage("missing --outer"))?)?;
    let inners = inner.iter().map(|n| op_in(m, n)).collect::<Result<Vec<_>, _>>()?;
    let r = match slot {
        Some(0) => return Err(usage("slots are numbered from 1")),
        Some(s) => {
            let [q] = inners.as_slice() else { return Err(usage("--slot takes exactly one --inner")) };
            m.compose_checked(outer, s - 1, *q)?
        }
        None => m.compose_all(outer, &inners)?,
    };
    done("compose", json!({"multicategory": m.name(), "result": m.op_name(r), "signature": m.signature(r).display(m.colors())}), true)
}

#[allow(clippy::too_many_arguments)]
fn free(common: &Common, collection: &Option<String>, symmetric: bool, algebra_over: &Option<String>, carrier: &[usize], target: &Option<String>, bimodule: &[String]) -> Run {
    let env = load_lawful(common)?;
    if let Some(c) = collection {
        let coll = env.collections.get(c).ok_or_else(|| usage(format!("no collection named `{c}`")))?;
        let f = free_multicategory(coll, symmetric || coll.symmetric, common.cap_arity, common.cap_vertices)?;
        let mut m = f.multicategory;
        m.set_name(format!("Free({c})"));
        let laws = opkit::multicat::laws::check_multicategory_laws(&m)?;
        return done(
            "free",
            json!({"complete": f.complete, "operations": signature_counts(&m), "laws": json::law_report(&laws), "multicategory": json::multicategory(&m)}),
            laws.passed(),
        );
    }
    if let Some(p) = algebra_over {
        let p = multicat(&env, p)?;
        let fam = family(p, carrier)?;
        let fa = free_algebra(p, &fam, common.cap_arity)?;
        let monad = fa.check_monad_laws(p);
        let mut body = json!({
            "carrier": fam.sizes,
            "free_sizes": (0..fam.colors.len()).map(|c| fa.level1.elems[c].len()).collect::<Vec<_>>(),
            "monad_laws": json::law_report(&monad),
        });
        let mut ok = monad.passed();
        if let Some(t) = target {
            let b = env.algebras.get(t).ok_or_else(|| usage(format!("no algebra named `{t}`")))?;
            let r = free_forgetful_check(p, &fa, &b.family, &b.structure, common.budget)?;
            ok &= r.bijective;
            body["free_forgetful"] = json!({"algebra_maps": r.algebra_maps, "carrier_maps": r.carrier_maps, "bijective": r.bijective});
        }
        return done("free", body, ok);
    }
    if let [l, r] = bimodule {
        let (p, q) = (multicat(&env, l)?, multicat(&env, r)?);
        let b = free_bimodule(p, q, common.cap_arity)?;
        let laws = check_bimodule(&b, p, q)?;
        let mut names: Vec<&str> = (0..b.module.len()).map(|i| b.module.name_of(i)).collect();
        names.sort();
        return done("free", json!({"elements": names, "laws": json::law_report(&laws)}), laws.passed());
    }
    Err(usage("free needs --collection, --algebra-over or --bimodule"))
}

fn saturation_outcome(pres: &Presentation, caps: Caps) -> Result<Value, Failure> {
    let s = saturate(pres, caps)?;
    let mut m = s.multicategory;
    m.set_name(pres.name.clone());
    let laws = opkit::multicat::laws::check_multicategory_laws(&m)?;
    Ok(json!({"name": pres.name, "report": json::saturation(&s.report), "laws": json::law_report(&laws), "multicategory": json::multicategory(&m)}))
}

fn saturate_cmd(common: &Common, presentation: &Option<String>, coproduct_of: &[String], pushout_of: &[String]) -> Run {
    let env = load_lawful(common)?;
    let caps = common.caps();
    let mut results = Vec::new();
    if let [l, r] = coproduct_of {
        results.push(saturation_outcome(&coproduct(multicat(&env, l)?, multicat(&env, r)?)?, caps)?);
    } else if let [f, g] = pushout_of {
        let get = |n: &String| env.functors.get(n).ok_or_else(|| usage(format!("no multifunctor named `{n}`")));
        let (f, g) = (get(f)?, get(g)?);
        if f.source != g.source {
            return Err(usage("the two multifunctors must share their source"));
        }
        let pres = pushout(multicat(&env, &f.source)?, multicat(&env, &f.target)?, &f.functor, multicat(&env, &g.target)?, &g.functor)?;
        results.push(saturation_outcome(&pres, caps)?);
    } else {
        for (name, def) in &env.multicategories {
            if presentation.as_ref().is_none_or(|p| p == name) {
                if let Some(pres) = &def.presentation {
                    results.push(saturation_outcome(pres, caps)?);
                }
            }
        }
        if results.is_empty() {
            return Err(usage("no presentation to saturate"));
        }
    }
    let ok = results.iter().all(|r| r["laws"]["passed"] == json!(true));
    done("saturate", json!({"results": results}), ok)
}

fn tensor(common: &Common, left: &Option<String>, right: &Option<String>, compare: &Option<String>) -> Run {
    let env = load_lawful(common)?;
    let (p, q) = (pick(&env, left, 0)?, pick(&env, right, 1)?);
    let t = bv_tensor(p, q, common.caps())?;
    let mut m = t.saturated.multicategory.clone();
    m.set_name(format!("{}⊗{}", p.name(), q.name()));
    let r = &t.saturated.report;
    let mut body = json!({
        "left": p.name(),
        "right": q.name(),
        "stabilized": r.stabilized,
        "complete": r.complete,
        "report": json::saturation(r),
        "operations": signature_counts(&m),
        "multicategory": json::multicategory(&m),
    });
    let mut ok = true;
    if let Some(c) = compare {
        let target = multicat(&env, c)?;
        let iso = find_isomorphism(&m, target, common.budget)?;
        body["isomorphic_to"] = json!({"name": c, "isomorphic": iso.is_some()});
        if let Some(f) = &iso {
            let names = emit::op_names(target);
            let ops: BTreeMap<String, &str> = m.op_ids().map(|o| (m.op_name(o).to_string(), names[f.image(o).index()].as_str())).collect();
            body["isomorphic_to"]["objects"] = json!(f.objects.iter().map(|&c| &target.colors()[c]).collect::<Vec<_>>());
            body["isomorphic_to"]["operations"] = json!(ops);
        }
        ok = iso.is_some();
    }
    done("tensor", body, ok)
}

fn hom(common: &Common, source: &Option<String>, target: &Option<String>) -> Run {
    let env = load_lawful(common)?;
    let (p, q) = (pick(&env, source, 0)?, pick(&env, target, 1)?);
    let h = internal_hom(p, q, common.cap_arity, common.budget)?;
    let laws = opkit::multicat::laws::check_multicategory_laws(&h.multicategory)?;
    done(
        "hom",
        json!({
            "source": p.name(),
            "target": q.name(),
            "multifunctors": h.objects.len(),
            "operations": signature_counts(&h.multicategory),
            "laws": json::law_report(&laws),
            "multicategory": json::multicategory(&h.multicategory),
        }),
        laws.passed(),
    )
}

fn adjunction(common: &Common, p: &Option<String>, q: &Option<String>, r: &Option<String>, along: &Option<String>) -> Run {
    let env = load_lawful(common)?;
    let (pm, qm, rm) = (pick(&env, p, 0)?, pick(&env, q, 1)?, pick(&env, r, 2)?);
    let need = max_arity(pm) * max_arity(qm);
    if common.cap_arity < need {
        return Err(usage(format!("--cap-arity must be at least {need} to hold the interchange relations of {} ⊗ {}", pm.name(), qm.name())));
    }
    let a = adjunction_check(pm, qm, rm, common.caps(), common.budget)?;
    let mut body = json::adjunction(&a.report);
    body["stabilized"] = json!(a.tensor.saturated.report.stabilized);
    let mut ok = a.report.bijective && a.report.round_trip_left && a.report.round_trip_right;
    if let Some(h) = along {
        let f = env.functors.get(h).ok_or_else(|| usage(format!("no multifunctor named `{h}`")))?;
        if f.source != rm.name() {
            return Err(usage(format!("`{h}` does not start at `{}`", rm.name())));
        }
        let nat = naturality_in_target(pm, qm, rm, multicat(&env, &f.target)?, &f.functor, common.caps(), common.budget)?;
        body["natural_in_target"] = json!(nat);
        ok &= nat;
    }
    Ok(Outcome { artifact: body, ok, notes: Vec::new() })
}

fn algebras(common: &Common, over: &Option<String>, carrier: &[usize], strings: bool, op_roundtrip: bool, homs: &[String]) -> Run {
    let env = load_lawful(common)?;
    if let [a, b] = homs {
        let get = |n: &String| env.algebras.get(n).ok_or_else(|| usage(format!("no algebra named `{n}`")));
        let (a, b) = (get(a)?, get(b)?);
        if a.over != b.over {
            return Err(usage("the algebras live over different multicategories"));
        }
        let p = multicat(&env, &a.over)?;
        let maps = carrier_maps(&a.family, &b.family);
        let homs: Vec<&Vec<Vec<usize>>> = maps.iter().filter(|f| is_homomorphism(p, &a.family, &a.structure, &b.family, &b.structure, f)).collect();
        return done("algebras", json!({"carrier_maps": maps.len(), "homomorphisms": homs}), true);
    }
    let p = pick(&env, over, 0)?;
    if strings {
        let r = pn_algebras_as_strings(p, carrier, common.budget)?;
        return done("algebras", json!({"levels": carrier, "arrow_algebras": r.arrow_algebras, "strings": r.strings, "bijective": r.bijective}), r.bijective);
    }
    if op_roundtrip {
        let a = operad_to_op_algebra(p, common.cap_vertices)?;
        let (back, laws) = op_algebra_to_operad(&a, p.name())?;
        let same = back.same_tables(p);
        return done(
            "algebras",
            json!({"op_algebra_laws": json::law_report(&a.check()), "laws": json::law_report(&laws), "round_trip": same}),
            same && laws.passed(),
        );
    }
    let fam = family(p, carrier)?;
    let all = enumerate_algebras(p, &fam, common.budget)?;
    let tables: Vec<Value> = all.iter().map(|a| json::algebra(p, a)).collect();
    done("algebras", json!({"over": p.name(), "carrier": fam.sizes, "count": all.len(), "algebras": tables}), true)
}

fn end(common: &Common, carrier: &[usize], module: &[usize], pointed: &Option<String>, right_module: &Option<String>, materialize: bool) -> Run {
    let env = load_lawful(common)?;
    if let Some(b) = pointed {
        let (m, p, q) = bimodule_of(&env, b)?;
        let a = analyze_pointed(m, p, q, common.cap_arity, common.budget)?;
        return done(
            "end",
            json!({"bimodule": b, "pointed": a.pointed, "basepoint": a.basepoint, "map_from_free": a.map_from_free, "quasi_free": a.quasi_free, "witness": a.witness}),
            true,
        );
    }
    if let Some(b) = right_module {
        let (m, _, q) = bimodule_of(&env, b)?;
        let e = end_right_module(&m.module, q, common.cap_arity, common.cap_arity, common.budget)?;
        let reg = regular_map(q, &e).is_some();
        return done("end", json!({"module": b, "operations": signature_counts(&e.multicategory), "regular_map": reg}), true);
    }
    let colors: Vec<String> = match env.order.iter().find(|(k, _)| *k == BlockKind::Colors) {
        Some((_, n)) => env.colors[n].clone(),
        None => (0..carrier.len().max(1)).map(|i| format!("c{i}")).collect(),
    };
    let fam_of = |sizes: &[usize]| -> Result<ObjectFamily, Failure> {
        match sizes.len() {
            0 => Err(usage("missing --carrier")),
            1 => Ok(ObjectFamily::new(colors.clone(), vec![sizes[0]; colors.len()])),
            n if n == colors.len() => Ok(ObjectFamily::new(colors.clone(), sizes.to_vec())),
            n => Err(usage(format!("{n} carrier sizes for {} colors", colors.len()))),
        }
    };
    let a = fam_of(carrier)?;
    if !module.is_empty() {
        let b = fam_of(module)?;
        let e = end_module(&a, &b, common.cap_arity, common.budget)?;
        let laws = check_bimodule(&e.bimodule, &e.left, &e.right)?;
        let mut counts = Map::new();
        for f in &e.functions {
            let k = f.sig.display(&colors);
            let n = counts.get(&k).and_then(Value::as_u64).unwrap_or(0);
            counts.insert(k, json!(n + 1));
        }
        return done("end", json!({"carrier": a.sizes, "target": b.sizes, "elements": counts, "laws": json::law_report(&laws)}), laws.passed());
    }
    let lazy = EndMulticategory::new(a.clone(), Some(common.cap_arity));
    let mut card = Map::new();
    for s in all_signatures(colors.len(), common.cap_arity) {
        let n = lazy.cardinality(&s).map_or(Value::Null, |n| json!(n.to_string()));
        card.insert(s.display(&colors), n);
    }
    let mut body = json!({"carrier": a.sizes, "cardinalities": card});
    let mut ok = true;
    if materialize {
        let m = end_multicategory(&a, common.cap_arity, common.budget)?;
        let laws = opkit::multicat::laws::check_multicategory_laws(&m)?;
        ok = laws.passed();
        body["materialized"] = json!({"operations": signature_counts(&m), "laws": json::law_report(&laws)});
    }
    done("end", body, ok)
}

fn regular_or(env: &Env, name: &str, p: &Multicategory) -> Result<Bimodule, Failure> {
    if name == "regular" {
        return Ok(Bimodule::regular(p));
    }
    let (b, l, r) = bimodule_of(env, name)?;
    if l.name() != p.name() && r.name() != p.name() {
        return Err(usage(format!("`{name}` is not a module over `{}`", p.name())));
    }
    Ok(b.clone())
}

fn bar(common: &Common, over: &Option<String>, left: &str, right: &str, levels: usize) -> Run {
    let env = load_lawful(common)?;
    let p = pick(&env, over, 0)?;
    let (x, y) = (regular_or(&env, left, p)?, regular_or(&env, right, p)?);
    let b = bar_complex(&x, p, &y, levels, common.cap_arity)?;
    let ids = b.simplicial.check_identities();
    let mut body = json::bar(&b);
    body["identities"] = json::law_report(&ids);
    body["over"] = json!(p.name());
    Ok(Outcome { artifact: body, ok: ids.passed(), notes: Vec::new() })
}

fn hochschild_cmd(common: &Common, over: &Option<String>, levels: usize) -> Run {
    let env = load_lawful(common)?;
    let p = pick(&env, over, 0)?;
    let h = hochschild(p, levels, common.cap_arity)?;
    let ids = h.bar.simplicial.check_identities();
    let basepoints: Vec<bool> = (0..=levels).map(|n| h.basepoint_is_bimodule_map(n)).collect();
    let augmented: Vec<Option<String>> = (0..h.bar.levels[0].len()).map(|e| h.augment(e).map(|o| p.op_name(o).to_string())).collect();
    let mut body = json::bar(&h.bar);
    body["identities"] = json::law_report(&ids);
    body["basepoints_are_bimodule_maps"] = json!(basepoints);
    body["augmentation_to"] = json!(augmented);
    body["over"] = json!(p.name());
    let ok = ids.passed() && basepoints.iter().all(|&b| b);
    Ok(Outcome { artifact: json::document("hochschild", body), ok, notes: Vec::new() })
}

fn equiv(common: &Common, functor: &Option<String>, iso: &[String]) -> Run {
    let env = load_lawful(common)?;
    if let [p, q] = iso {
        let (pm, qm) = (multicat(&env, p)?, multicat(&env, q)?);
        let f = find_isomorphism(pm, qm, common.budget)?;
        let map = f.map(|f| emit::op_names(pm).into_iter().zip(f.ops.iter().map(|&o| qm.op_name(o).to_string())).collect::<Vec<_>>());
        let found = map.is_some();
        return done("equiv", json!({"source": p, "target": q, "isomorphism": map}), found);
    }
    let name = match functor {
        Some(f) => f.clone(),
        None => last_of(&env, BlockKind::Multifunctor).ok_or_else(|| usage("no multifunctor given"))?,
    };
    let f = env.functors.get(&name).ok_or_else(|| usage(format!("no multifunctor named `{name}`")))?;
    let r = is_equivalence(multicat(&env, &f.source)?, multicat(&env, &f.target)?, &f.functor);
    let mut body = json::equivalence(&r);
    body["functor"] = json!(name);
    Ok(Outcome { artifact: body, ok: r.is_equivalence(), notes: Vec::new() })
}

fn nerve_cmd(common: &Common, of: &Option<String>, depth: usize) -> Run {
    let env = load_lawful(common)?;
    let p = pick(&env, of, 0)?;
    let c = underlying_category(p);
    let laws = c.check_laws();
    let n = nerve(&c, depth);
    let ids = n.check_identities();
    let sizes: Vec<usize> = (0..=n.top()).map(|k| n.level_size(k)).collect();
    let ok = laws.passed() && ids.passed();
    done(
        "nerve",
        json!({"of": p.name(), "category": json::category(&c), "category_laws": json::law_report(&laws), "level_sizes": sizes, "nerve": json::simplicial(&n), "identities": json::law_report(&ids)}),
        ok,
    )
}

/// Parses names such as `as3`, `com2nu` and `op3v3`.
pub fn builtin(name: &str) -> Option<Multicategory> {
    let digits = |s: &str| s.parse::<usize>().ok();
    let (body, unital) = match name.strip_suffix("nu") {
        Some(b) => (b, false),
        None => (name, true),
    };
    let mut m = if name == "trivial" || name == "i" {
        builtin::trivial()
    } else if let Some(n) = body.strip_prefix("com") {
        builtin::commutative(digits(n)?, unital)
    } else if let Some(n) = body.strip_prefix("as") {
        builtin::associative(digits(n)?, unital)
    } else {
        let rest = name.strip_prefix("op")?;
        let (c, v) = rest.split_once('v')?;
        OpOperad::new(digits(c)?, digits(v)?).materialize().ok()?
    };
    let pretty = match name {
        "trivial" | "i" => "I".to_string(),
        _ => {
            let mut cs = name.chars();
            cs.next().map(|c| c.to_ascii_uppercase().to_string() + cs.as_str()).unwrap_or_default()
        }
    };
    m.set_name(pretty);
    Some(m)
}

fn export(common: &Common, block: &Option<String>, format: Format, builtin_name: &Option<String>) -> Run {
    if let Some(b) = builtin_name {
        let m = builtin(b).ok_or_else(|| usage(format!("unknown built-in `{b}`")))?;
        return Ok(match format {
            Format::Json => Outcome { artifact: json::multicategory(&m), ok: true, notes: Vec::new() },
            Format::Dsl => Outcome { artifact: Value::String(syntax::print(&emit::multicategory(&m))), ok: true, notes: Vec::new() },
        });
    }
    let env = load(common)?;
    let wanted = |n: &str| block.as_deref().is_none_or(|b| b == n);
    if let Some(b) = block {
        if env.kind_of(b).is_none() {
            return Err(usage(format!("no block named `{b}`")));
        }
    }
    if format == Format::Dsl {
        let mut doc = Document::default();
        for (kind, name) in &env.order {
            if !wanted(name) {
                continue;
            }
            match kind {
                BlockKind::Colors => doc.blocks.push(emit::colors_block(name, &env.colors[name])),
                BlockKind::Multicategory => doc.blocks.push(emit::multicategory_block(multicat(&env, name)?, &env.multicategories[name].colors)),
                BlockKind::Algebra => {
                    let a = &env.algebras[name];
                    doc.blocks.push(emit::algebra(name, multicat(&env, &a.over)?, &a.family, &a.structure));
                }
                BlockKind::Bimodule => {
                    let (b, p, q) = bimodule_of(&env, name)?;
                    doc.blocks.push(emit::bimodule(name, b, p, q));
                }
                BlockKind::Collection | BlockKind::Multifunctor => {}
            }
        }
        return Ok(Outcome { artifact: Value::String(syntax::print(&doc)), ok: true, notes: Vec::new() });
    }
    let mut blocks = Map::new();
    for (kind, name) in &env.order {
        if !wanted(name) {
            continue;
        }
        let v = match kind {
            BlockKind::Colors => json!({"colors": env.colors[name]}),
            BlockKind::Collection => collection_json(&env.collections[name]),
            BlockKind::Multicategory => json::multicategory(multicat(&env, name)?),
            BlockKind::Multifunctor => {
                let f = &env.functors[name];
                json::multifunctor(multicat(&env, &f.source)?, multicat(&env, &f.target)?, &f.functor)
            }
            BlockKind::Algebra => {
                let a = &env.algebras[name];
                let mut v = json::algebra(multicat(&env, &a.over)?, &a.structure);
                v["over"] = json!(a.over);
                v["carrier"] = json!(a.family.sizes);
                v
            }
            BlockKind::Bimodule => {
                let (b, p, q) = bimodule_of(&env, name)?;
                let mut elements: Vec<Value> = (0..b.module.len())
                    .map(|i| json!([b.module.name_of(i), b.module.signature(i).display(q.colors())]))
                    .collect();
                elements.sort_by_key(|v| v.to_string());
                json!({"left": p.name(), "right": q.name(), "elements": elements, "right_entries": b.module.right.len(), "left_entries": b.left.len()})
            }
        };
        let mut v = v;
        v["kind"] = json!(kind.keyword());
        blocks.insert(name.clone(), v);
    }
    done("export", json!({"blocks": blocks}), true)
}
