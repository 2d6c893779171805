//! Documents describing values of the core library, so that anything
//! computed can be written back out in the input format.

use crate::ast::*;
use opkit::algebras::{AlgebraStructure, ObjectFamily};
use opkit::bimodules::Bimodule;
use opkit::{perm, Multicat, Multicategory, OpId};
use std::collections::HashMap;

fn entry(kind: EntryKind) -> Entry {
    Entry { kind, span: Span::default() }
}

fn block(kind: BlockKind, name: &str, header: Header, entries: Vec<Entry>) -> Block {
    Block { kind, name: Name::new(name), header, entries, span: Span::default() }
}

pub fn colors_block(name: &str, colors: &[String]) -> Block {
    block(BlockKind::Colors, name, Header::Colors, colors.iter().map(|c| entry(EntryKind::Color(Name::new(c.clone())))).collect())
}

/// Operation names made unique by suffixing the index where they clash.
pub fn op_names(m: &Multicategory) -> Vec<String> {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for o in m.op_ids() {
        *count.entry(m.op_name(o)).or_default() += 1;
    }
    m.op_ids().map(|o| if count[m.op_name(o)] > 1 { format!("{}@{}", m.op_name(o), o.index()) } else { m.op_name(o).to_string() }).collect()
}

/// Inverse of [`op_names`].
pub fn find_op(m: &Multicategory, name: &str) -> Option<OpId> {
    m.op_by_name(name).or_else(|| {
        let (base, i) = name.rsplit_once('@')?;
        let o = OpId(i.parse().ok()?);
        (o.index() < m.op_count() && m.op_name(o) == base).then_some(o)
    })
}

/// A colors block followed by the full table of `m`.
pub fn multicategory(m: &Multicategory) -> Document {
    let colors_name = format!("{}_colors", m.name());
    Document { blocks: vec![colors_block(&colors_name, m.colors()), multicategory_block(m, &colors_name)] }
}

/// The full table of `m`, colored by the named colors block.
pub fn multicategory_block(m: &Multicategory, colors_name: &str) -> Block {
    let names = op_names(m);
    let n = |o: OpId| Name::new(names[o.index()].clone());
    let c = |i: usize| Name::new(m.colors()[i].clone());
    let mut entries = Vec::new();
    for o in m.op_ids() {
        let s = m.signature(o);
        entries.push(entry(EntryKind::Op { keyword: OpKeyword::Op, name: n(o), inputs: s.inputs.iter().map(|&i| c(i)).collect(), output: c(s.output) }));
    }
    for col in 0..m.colors().len() {
        if let Some(u) = m.unit_of(col) {
            entries.push(entry(EntryKind::Unit { color: c(col), op: n(u) }));
        }
    }
    let mut comps: Vec<_> = m.compositions().collect();
    comps.sort();
    for (p, slot, q, r) in comps {
        entries.push(entry(EntryKind::Comp { outer: n(p), slot, inner: n(q), result: n(r) }));
    }
    if m.symmetric() {
        for o in m.op_ids() {
            for t in perm::adjacent_transpositions(m.arity(o)) {
                if let Some(r) = m.action(o, &t) {
                    entries.push(entry(EntryKind::Act { op: n(o), perm: t, result: n(r) }));
                }
            }
        }
    }
    let options = Options { symmetric: m.symmetric(), cap: m.arity_cap(), partial: m.is_partial() };
    block(BlockKind::Multicategory, m.name(), Header::Multicategory { over: Name::new(colors_name), options }, entries)
}

pub fn algebra(name: &str, p: &Multicategory, family: &ObjectFamily, a: &AlgebraStructure) -> Block {
    let names = op_names(p);
    let mut entries: Vec<Entry> = family
        .colors
        .iter()
        .zip(&family.sizes)
        .map(|(c, &size)| entry(EntryKind::Carrier { color: Name::new(c.clone()), size }))
        .collect();
    for o in p.op_ids() {
        let table = a.action(o).table.iter().map(|&v| v as usize).collect();
        entries.push(entry(EntryKind::Action { op: Name::new(names[o.index()].clone()), table }));
    }
    block(BlockKind::Algebra, name, Header::Algebra { over: Name::new(p.name()) }, entries)
}

pub fn bimodule(name: &str, b: &Bimodule, p: &Multicategory, q: &Multicategory) -> Block {
    let m = &b.module;
    let elem = |i: usize| Name::new(m.name_of(i).to_string());
    let (pn, qn) = (op_names(p), op_names(q));
    let mut entries = Vec::new();
    for i in 0..m.len() {
        let s = m.signature(i);
        entries.push(entry(EntryKind::Op {
            keyword: OpKeyword::Element,
            name: elem(i),
            inputs: s.inputs.iter().map(|&c| Name::new(q.colors()[c].clone())).collect(),
            output: Name::new(p.colors()[s.output].clone()),
        }));
    }
    if m.coll.symmetric {
        for i in 0..m.len() {
            for t in perm::adjacent_transpositions(m.arity(i)) {
                if let Some(r) = m.act(i, &t) {
                    entries.push(entry(EntryKind::Act { op: elem(i), perm: t, result: elem(r) }));
                }
            }
        }
    }
    let mut right: Vec<_> = m.right.iter().map(|(&(x, i, g), &r)| (x, i, g, r)).collect();
    right.sort();
    for (x, slot, g, r) in right {
        entries.push(entry(EntryKind::Right { elem: elem(x), slot, op: Name::new(qn[g.index()].clone()), result: elem(r) }));
    }
    let mut left: Vec<_> = b.left.iter().collect();
    left.sort();
    for ((phi, ms), &r) in left {
        entries.push(entry(EntryKind::Left { op: Name::new(pn[phi.index()].clone()), elems: ms.iter().map(|&x| elem(x)).collect(), result: elem(r) }));
    }
    let options = Options { symmetric: false, cap: m.coll.arity_cap, partial: false };
    block(BlockKind::Bimodule, name, Header::Bimodule { left: Name::new(p.name()), right: Name::new(q.name()), options }, entries)
}
