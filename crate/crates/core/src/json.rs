//! Deterministic JSON export. Objects have sorted keys and every list is
//! emitted in a fixed order, so identical inputs give byte-identical output.

use crate::algebras::AlgebraStructure;
use crate::bimodules::BarComplex;
use crate::category::FiniteCategory;
use crate::functor::{EquivalenceReport, Multifunctor};
use crate::homcalc::AdjunctionReport;
use crate::multicat::laws::LawReport;
use crate::multicat::{Multicategory, Signature};
use crate::perm;
use crate::presents::SaturationReport;
use crate::simplicial::TruncatedSimplicialSet;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Wraps a body with its `schema` tag.
pub fn document(kind: &str, body: Value) -> Value {
    let mut v = body;
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(format!("opkit.{kind}.v{SCHEMA_VERSION}")));
    }
    v
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn signature(sig: &Signature, colors: &[String]) -> Value {
    json!({
        "inputs": sig.inputs.iter().map(|&c| colors[c].clone()).collect::<Vec<_>>(),
        "output": colors[sig.output],
    })
}

pub fn multicategory(m: &Multicategory) -> Value {
    let colors = m.colors();
    let ops: Vec<Value> = m
        .op_ids()
        .map(|o| {
            let mut v = signature(m.signature(o), colors);
            v["name"] = json!(m.op_name(o));
            v
        })
        .collect();
    let units: serde_json::Map<String, Value> =
        (0..colors.len()).filter_map(|c| m.unit_of(c).map(|u| (colors[c].clone(), json!(u.index())))).collect();
    let mut comps: Vec<[usize; 4]> = m.compositions().map(|(p, i, q, r)| [p.index(), i, q.index(), r.index()]).collect();
    comps.sort();
    let mut actions = Vec::new();
    if m.symmetric() {
        for o in m.op_ids() {
            for t in perm::adjacent_transpositions(m.arity(o)) {
                if let Some(r) = m.action(o, &t) {
                    actions.push(json!([o.index(), t, r.index()]));
                }
            }
        }
    }
    document(
        "multicategory",
        json!({
            "name": m.name(),
            "colors": colors,
            "symmetric": m.symmetric(),
            "arity_cap": m.arity_cap,
            "partial": m.is_partial(),
            "operations": ops,
            "units": units,
            "compositions": comps,
            "actions": actions,
        }),
    )
}

pub fn category(c: &FiniteCategory) -> Value {
    let mut comp: Vec<[usize; 3]> = c.composition.iter().map(|(&(g, f), &r)| [g, f, r]).collect();
    comp.sort();
    document(
        "category",
        json!({
            "objects": c.objects,
            "morphisms": c.morphisms.iter().map(|f| json!({"name": f.name, "source": f.source, "target": f.target})).collect::<Vec<_>>(),
            "identities": c.identities,
            "composition": comp,
        }),
    )
}

pub fn simplicial(s: &TruncatedSimplicialSet) -> Value {
    document("simplicial", json!({ "levels": s.labels, "faces": s.faces, "degeneracies": s.degeneracies }))
}

pub fn law_report(r: &LawReport) -> Value {
    document(
        "laws",
        json!({
            "passed": r.passed(),
            "checked": r.checked,
            "skipped": r.skipped,
            "violations": r.violations.iter().map(|v| json!({"law": v.law, "witness": v.witness})).collect::<Vec<_>>(),
        }),
    )
}

pub fn saturation(r: &SaturationReport) -> Value {
    json!({
        "caps": {"max_arity": r.caps.max_arity, "max_vertices": r.caps.max_vertices},
        "terms": r.terms,
        "classes": r.classes,
        "class_counts": r.class_counts,
        "stabilized": r.stabilized,
        "complete": r.complete,
    })
}

pub fn equivalence(r: &EquivalenceReport) -> Value {
    document(
        "equivalence",
        json!({
            "equivalence": r.is_equivalence(),
            "not_faithful": r.not_faithful,
            "not_full": r.not_full,
            "not_essentially_surjective": r.not_essentially_surjective,
            "iso_witnesses": r.iso_witnesses,
        }),
    )
}

pub fn adjunction(r: &AdjunctionReport) -> Value {
    document(
        "adjunction",
        json!({
            "tensor_ops": r.tensor_ops,
            "left": r.left,
            "right": r.right,
            "round_trip_left": r.round_trip_left,
            "round_trip_right": r.round_trip_right,
            "bijective": r.bijective,
            "pairing": r.pairing,
        }),
    )
}

/// A multifunctor between table multicategories, by names.
pub fn multifunctor(p: &Multicategory, q: &Multicategory, f: &Multifunctor) -> Value {
    let objects: serde_json::Map<String, Value> = f.objects.iter().enumerate().map(|(a, &b)| (p.colors()[a].clone(), json!(q.colors()[b]))).collect();
    let ops: Vec<Value> = p.op_ids().map(|o| json!([p.op_name(o), q.op_name(*f.image(o))])).collect();
    json!({ "source": p.name(), "target": q.name(), "objects": objects, "operations": ops })
}

pub fn algebra(p: &Multicategory, a: &AlgebraStructure) -> Value {
    let tables: Vec<Value> = a
        .action_tables(p)
        .into_iter()
        .map(|(name, sig, table)| {
            let mut v = signature(&sig, p.colors());
            v["name"] = json!(name);
            v["table"] = json!(table);
            v
        })
        .collect();
    json!({ "actions": tables })
}

pub fn bar(b: &BarComplex) -> Value {
    let mut v = simplicial(&b.simplicial);
    v["augmentation"] = json!(b.augmentation);
    v["classes"] = json!(b.classes);
    document("bar", v)
}
