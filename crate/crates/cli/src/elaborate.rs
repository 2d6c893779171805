//! Turns parsed blocks into values of the core library, running the law
//! checks of each.

use crate::ast::*;
use crate::diag::{code, Diagnostic};
use opkit::algebras::{AlgebraStructure, ObjectFamily};
use opkit::bimodules::{check_bimodule, Bimodule, RightModule};
use opkit::functor::{check_multifunctor, Multifunctor};
use opkit::multicat::laws::{check_multicategory_laws, LawReport};
use opkit::presents::{saturate, Caps, Presentation, SaturationReport};
use opkit::{ColorId, Error, FiniteCollection, Multicat, Multicategory, MulticategoryBuilder, OpId, Signature};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone)]
pub struct MulticategoryDef {
    /// The colors block it is colored by.
    pub colors: String,
    pub multicategory: Multicategory,
    pub presentation: Option<Presentation>,
    pub saturation: Option<SaturationReport>,
}

#[derive(Debug, Clone)]
pub struct FunctorDef {
    pub source: String,
    pub target: String,
    pub functor: Multifunctor,
}

#[derive(Debug, Clone)]
pub struct AlgebraDef {
    pub over: String,
    pub family: ObjectFamily,
    pub structure: AlgebraStructure,
}

#[derive(Debug, Clone)]
pub struct BimoduleDef {
    pub left: String,
    pub right: String,
    pub bimodule: Bimodule,
}

/// Outcome of the law check run on one block.
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub kind: BlockKind,
    pub name: String,
    pub file: String,
    pub span: Span,
    pub laws: LawReport,
}

/// Everything defined by the documents read so far. Block names are unique
/// across all of them.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub colors: BTreeMap<String, Vec<String>>,
    pub collections: BTreeMap<String, FiniteCollection>,
    pub multicategories: BTreeMap<String, MulticategoryDef>,
    pub functors: BTreeMap<String, FunctorDef>,
    pub algebras: BTreeMap<String, AlgebraDef>,
    pub bimodules: BTreeMap<String, BimoduleDef>,
    /// Blocks in the order they were read.
    pub order: Vec<(BlockKind, String)>,
    pub reports: Vec<BlockReport>,
    /// Caps for presentations without a `saturate` entry.
    pub default_caps: Option<Caps>,
}

type Elab<T> = Result<T, Diagnostic>;

fn structural(e: Error, span: Span) -> Diagnostic {
    let c = match e {
        Error::ColorMismatch { .. } | Error::SlotOutOfRange { .. } | Error::Domain(_) => code::SIGNATURE,
        _ => code::STRUCTURAL,
    };
    Diagnostic::at(c, e.to_string(), span)
}

impl Env {
    pub fn kind_of(&self, name: &str) -> Option<BlockKind> {
        self.order.iter().find(|(_, n)| n == name).map(|(k, _)| *k)
    }

    fn lookup<'a, T>(&self, map: &'a BTreeMap<String, T>, n: &Name, want: BlockKind) -> Elab<&'a T> {
        map.get(&n.text).ok_or_else(|| match self.kind_of(&n.text) {
            Some(k) => Diagnostic::at(code::WRONG_KIND, format!("`{}` is a {} block, expected a {} block", n.text, k.keyword(), want.keyword()), n.span),
            None => Diagnostic::at(code::UNKNOWN_BLOCK_REF, format!("no {} block named `{}`", want.keyword(), n.text), n.span),
        })
    }

    pub fn multicategory(&self, name: &str) -> Option<&Multicategory> {
        self.multicategories.get(name).map(|d| &d.multicategory)
    }

    /// Law failures recorded so far, as diagnostics.
    pub fn law_failures(&self) -> Vec<Diagnostic> {
        self.reports
            .iter()
            .flat_map(|r| {
                r.laws.violations.iter().map(move |v| {
                    Diagnostic::at(code::LAW, format!("{} `{}` violates {}: {}", r.kind.keyword(), r.name, v.law, v.witness), r.span).in_file(&r.file)
                })
            })
            .collect()
    }

    /// Adds the blocks of one document. Resolution and structural errors
    /// abort; law violations are recorded in [`Env::reports`].
    pub fn elaborate(&mut self, doc: &Document, file: &str) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        for b in &doc.blocks {
            if let Some(k) = self.kind_of(&b.name.text) {
                diags.push(Diagnostic::at(code::DUPLICATE, format!("`{}` is already defined as a {} block", b.name.text, k.keyword()), b.name.span));
                continue;
            }
            let laws = match self.block(b) {
                Ok(laws) => laws,
                Err(d) => {
                    diags.push(d);
                    continue;
                }
            };
            self.order.push((b.kind, b.name.text.clone()));
            if let Some(laws) = laws {
                self.reports.push(BlockReport { kind: b.kind, name: b.name.text.clone(), file: file.to_string(), span: b.span, laws });
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags.into_iter().map(|d| d.in_file(file)).collect())
        }
    }

    fn block(&mut self, b: &Block) -> Elab<Option<LawReport>> {
        let name = b.name.text.clone();
        match &b.header {
            Header::Colors => {
                let mut colors: Vec<String> = Vec::new();
                for e in &b.entries {
                    if let EntryKind::Color(c) = &e.kind {
                        if colors.contains(&c.text) {
                            return Err(Diagnostic::at(code::DUPLICATE, format!("color `{}` declared twice", c.text), c.span));
                        }
                        colors.push(c.text.clone());
                    }
                }
                self.colors.insert(name, colors);
                Ok(None)
            }
            Header::Collection { over, options } => {
                let colors = self.lookup(&self.colors, over, BlockKind::Colors)?.clone();
                let coll = collection(&colors, options.symmetric, options.cap, &b.entries, b.span)?;
                self.collections.insert(name, coll);
                Ok(None)
            }
            Header::Multicategory { over, options } => {
                let colors = self.lookup(&self.colors, over, BlockKind::Colors)?.clone();
                let mut def = if b.is_presentation() { self.presentation(b, colors, options)? } else { table(b, colors, options)? };
                def.colors = over.text.clone();
                let laws = check_multicategory_laws(&def.multicategory).map_err(|e| structural(e, b.span))?;
                self.multicategories.insert(name, def);
                Ok(Some(laws))
            }
            Header::Multifunctor { source, target } => {
                let p = &self.lookup(&self.multicategories, source, BlockKind::Multicategory)?.multicategory;
                let q = &self.lookup(&self.multicategories, target, BlockKind::Multicategory)?.multicategory;
                let functor = functor(p, q, &b.entries, b.span)?;
                let laws = check_multifunctor(p, q, &functor);
                self.functors.insert(name, FunctorDef { source: source.text.clone(), target: target.text.clone(), functor });
                Ok(Some(laws))
            }
            Header::Algebra { over } => {
                let p = &self.lookup(&self.multicategories, over, BlockKind::Multicategory)?.multicategory;
                let (family, structure) = algebra(p, &b.entries, b.span)?;
                let laws = structure.check(p, &family);
                self.algebras.insert(name, AlgebraDef { over: over.text.clone(), family, structure });
                Ok(Some(laws))
            }
            Header::Bimodule { left, right, options } => {
                let p = &self.lookup(&self.multicategories, left, BlockKind::Multicategory)?.multicategory;
                let q = &self.lookup(&self.multicategories, right, BlockKind::Multicategory)?.multicategory;
                let bimodule = bimodule(&name, p, q, options, &b.entries, b.span)?;
                let laws = check_bimodule(&bimodule, p, q).map_err(|e| structural(e, b.span))?;
                self.bimodules.insert(name, BimoduleDef { left: left.text.clone(), right: right.text.clone(), bimodule });
                Ok(Some(laws))
            }
        }
    }

    fn presentation(&self, b: &Block, colors: Vec<String>, options: &Options) -> Elab<MulticategoryDef> {
        let has_actions = b.entries.iter().any(|e| matches!(e.kind, EntryKind::Act { .. }));
        let gens = collection(&colors, has_actions, None, &b.entries, b.span)?;
        let mut pres = Presentation::new(b.name.text.clone(), gens, options.symmetric).map_err(|e| structural(e, b.span))?;
        let mut caps = self.default_caps.unwrap_or(Caps::new(3, 4));
        if let Some(c) = options.cap {
            caps.max_arity = c;
        }
        for e in &b.entries {
            match &e.kind {
                EntryKind::Relation { lhs, rhs, color } => {
                    color_id(&colors, color)?;
                    pres.parse_relation(&lhs.text, &rhs.text, &color.text).map_err(|err| Diagnostic::at(code::SIGNATURE, err.to_string(), e.span))?;
                }
                EntryKind::Saturate { arity, vertices } => caps = Caps::new(*arity, *vertices),
                _ => {}
            }
        }
        let s = saturate(&pres, caps).map_err(|e| structural(e, b.span))?;
        let mut m = s.multicategory;
        m.set_name(b.name.text.clone());
        Ok(MulticategoryDef { colors: String::new(), multicategory: m, presentation: Some(pres), saturation: Some(s.report) })
    }
}

fn color_id(colors: &[String], n: &Name) -> Elab<ColorId> {
    colors.iter().position(|c| c == &n.text).ok_or_else(|| Diagnostic::at(code::UNKNOWN_COLOR, format!("unknown color `{}`", n.text), n.span))
}

fn signature(colors: &[String], inputs: &[Name], output: &Name) -> Elab<Signature> {
    let ins = inputs.iter().map(|c| color_id(colors, c)).collect::<Elab<Vec<_>>>()?;
    Ok(Signature::new(ins, color_id(colors, output)?))
}

/// Names declared by the `op`-like entries of a block, which must be unique.
fn declared(entries: &[Entry]) -> Elab<HashMap<&str, usize>> {
    let mut names = HashMap::new();
    for e in entries {
        if let EntryKind::Op { name, .. } = &e.kind {
            if names.insert(name.text.as_str(), names.len()).is_some() {
                return Err(Diagnostic::at(code::DUPLICATE, format!("`{}` declared twice", name.text), name.span));
            }
        }
    }
    Ok(names)
}

fn resolve(names: &HashMap<&str, usize>, n: &Name) -> Elab<usize> {
    names.get(n.text.as_str()).copied().ok_or_else(|| Diagnostic::at(code::UNKNOWN_OP, format!("unknown operation `{}`", n.text), n.span))
}

fn perm_ok(perm: &[usize], arity: usize, span: Span) -> Elab<()> {
    if perm.len() == arity && opkit::perm::is_permutation(perm) {
        Ok(())
    } else {
        Err(Diagnostic::at(code::SIGNATURE, format!("{perm:?} is not a permutation of {arity} inputs"), span))
    }
}

fn collection(colors: &[String], symmetric: bool, cap: Option<usize>, entries: &[Entry], span: Span) -> Elab<FiniteCollection> {
    let names = declared(entries)?;
    let mut coll = FiniteCollection::new(colors.to_vec(), symmetric);
    coll.arity_cap = cap;
    for e in entries {
        if let EntryKind::Op { name, inputs, output, .. } = &e.kind {
            coll.add_op(name.text.clone(), signature(colors, inputs, output)?);
        }
    }
    for e in entries {
        if let EntryKind::Act { op, perm, result } = &e.kind {
            let (o, r) = (resolve(&names, op)?, resolve(&names, result)?);
            perm_ok(perm, coll.ops[o].1.arity(), e.span)?;
            if !symmetric {
                return Err(Diagnostic::at(code::STRUCTURAL, "actions declared on a non-symmetric collection", e.span));
            }
            coll.set_action(o, perm, r);
        }
    }
    coll.complete_actions().map_err(|e| structural(e, span))?;
    Ok(coll)
}

fn table(b: &Block, colors: Vec<String>, options: &Options) -> Elab<MulticategoryDef> {
    let names = declared(&b.entries)?;
    let mut builder = MulticategoryBuilder::new(b.name.text.clone(), colors.clone(), options.symmetric).arity_cap(options.cap);
    builder.set_partial(options.partial);
    let op = |n: &Name| resolve(&names, n).map(|i| OpId(i as u32));
    for e in &b.entries {
        if let EntryKind::Op { name, inputs, output, .. } = &e.kind {
            builder.add_op(name.text.clone(), signature(&colors, inputs, output)?).map_err(|err| structural(err, e.span))?;
        }
    }
    for e in &b.entries {
        let r = match &e.kind {
            EntryKind::Unit { color, op: u } => builder.set_unit(color_id(&colors, color)?, op(u)?),
            EntryKind::Comp { outer, slot, inner, result } => builder.set_comp(op(outer)?, *slot, op(inner)?, op(result)?),
            EntryKind::Act { op: o, perm, result } => {
                let o = op(o)?;
                perm_ok(perm, builder.signature(o).arity(), e.span)?;
                builder.set_action(o, perm, op(result)?)
            }
            _ => Ok(()),
        };
        r.map_err(|err| structural(err, e.span))?;
    }
    let m = builder.build().map_err(|e| structural(e, b.span))?;
    Ok(MulticategoryDef { colors: String::new(), multicategory: m, presentation: None, saturation: None })
}

fn op_of(m: &Multicategory, n: &Name) -> Elab<OpId> {
    crate::emit::find_op(m, &n.text).ok_or_else(|| Diagnostic::at(code::UNKNOWN_OP, format!("`{}` has no operation `{}`", m.name(), n.text), n.span))
}

fn functor(p: &Multicategory, q: &Multicategory, entries: &[Entry], span: Span) -> Elab<Multifunctor> {
    let mut objects = vec![None; p.colors().len()];
    let mut ops = vec![None; p.op_count()];
    for e in entries {
        match &e.kind {
            EntryKind::Object { from, to } => objects[color_id(p.colors(), from)?] = Some(color_id(q.colors(), to)?),
            EntryKind::Map { from, to } => ops[op_of(p, from)?.index()] = Some(op_of(q, to)?),
            _ => {}
        }
    }
    let objects = objects
        .iter()
        .enumerate()
        .map(|(c, o)| o.ok_or_else(|| Diagnostic::at(code::STRUCTURAL, format!("no image for color `{}`", p.colors()[c]), span)))
        .collect::<Elab<Vec<_>>>()?;
    let ops = ops
        .iter()
        .enumerate()
        .map(|(o, x)| x.ok_or_else(|| Diagnostic::at(code::STRUCTURAL, format!("no image for operation `{}`", p.op_name(OpId(o as u32))), span)))
        .collect::<Elab<Vec<_>>>()?;
    Ok(Multifunctor { objects, ops })
}

fn algebra(p: &Multicategory, entries: &[Entry], span: Span) -> Elab<(ObjectFamily, AlgebraStructure)> {
    let mut sizes = vec![None; p.colors().len()];
    let mut tables = Vec::new();
    for e in entries {
        match &e.kind {
            EntryKind::Carrier { color, size } => sizes[color_id(p.colors(), color)?] = Some(*size),
            EntryKind::Action { op, table } => {
                let o = op_of(p, op)?;
                tables.push((p.op_name(o).to_string(), p.signature(o).clone(), table.iter().map(|&v| v as u32).collect()));
            }
            _ => {}
        }
    }
    let sizes = sizes
        .iter()
        .enumerate()
        .map(|(c, s)| s.ok_or_else(|| Diagnostic::at(code::STRUCTURAL, format!("no carrier for color `{}`", p.colors()[c]), span)))
        .collect::<Elab<Vec<_>>>()?;
    let family = ObjectFamily::new(p.colors().to_vec(), sizes);
    let structure = AlgebraStructure::from_action_tables(p, &tables).map_err(|e| structural(e, span))?;
    Ok((family, structure))
}

fn bimodule(name: &str, p: &Multicategory, q: &Multicategory, options: &Options, entries: &[Entry], span: Span) -> Elab<Bimodule> {
    if p.colors() != q.colors() {
        return Err(Diagnostic::at(code::SIGNATURE, format!("`{}` and `{}` have different colors", p.name(), q.name()), span));
    }
    let mut coll = collection(q.colors(), q.symmetric(), None, entries, span)?;
    coll.arity_cap = options.cap.or(q.arity_cap());
    let names = declared(entries)?;
    let mut right = HashMap::new();
    let mut left = HashMap::new();
    for e in entries {
        match &e.kind {
            EntryKind::Right { elem, slot, op, result } => {
                let m = resolve(&names, elem)?;
                if *slot >= coll.ops[m].1.arity() {
                    return Err(Diagnostic::at(code::SIGNATURE, format!("slot {} out of range for `{}`", slot + 1, elem.text), e.span));
                }
                right.insert((m, *slot, op_of(q, op)?), resolve(&names, result)?);
            }
            EntryKind::Left { op, elems, result } => {
                let ms = elems.iter().map(|m| resolve(&names, m)).collect::<Elab<Vec<_>>>()?;
                left.insert((op_of(p, op)?, ms), resolve(&names, result)?);
            }
            _ => {}
        }
    }
    let module = RightModule { name: name.to_string(), coll, out_colors: p.colors().to_vec(), right };
    Ok(Bimodule { module, left })
}
