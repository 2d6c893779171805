//! Table-backed colored operads (multicategories) enriched in finite sets.

mod builder;
pub mod builtin;
mod collection;
pub mod laws;
pub mod scalars;

pub use builder::MulticategoryBuilder;
pub use collection::{FiniteCollection, OrbitData, Signature};

use crate::error::{Error, Result};
use crate::perm;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

pub type ColorId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub u32);

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Read access shared by table multicategories and lazily computed ones
/// (endomorphism multicategories, whose operation sets are too big to tabulate).
pub trait Multicat: Sync {
    type Op: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn color_count(&self) -> usize;
    fn color_name(&self, c: ColorId) -> String;
    fn is_symmetric(&self) -> bool;
    /// Largest arity carried, if truncated.
    fn arity_cap(&self) -> Option<usize>;
    fn signature_of(&self, op: &Self::Op) -> Signature;
    /// All operations of a signature. Errors when the set is too large to list.
    fn operations(&self, sig: &Signature) -> Result<Vec<Self::Op>>;
    /// `p ∘_slot q`; `None` when the composite is not available (outside the
    /// truncation or missing from a partial table).
    fn compose(&self, p: &Self::Op, slot: usize, q: &Self::Op) -> Option<Self::Op>;
    /// `p·σ`; `None` for non-symmetric multicategories.
    fn act(&self, p: &Self::Op, sigma: &[usize]) -> Option<Self::Op>;
    fn unit(&self, c: ColorId) -> Self::Op;
    fn op_label(&self, op: &Self::Op) -> String;

    fn arity_allowed(&self, n: usize) -> bool {
        self.arity_cap().is_none_or(|cap| n <= cap)
    }

    /// Full composition `γ(p; q_1, .., q_n)`. Slots are filled in order of
    /// increasing inner arity so intermediate arities never exceed
    /// `max(arity(p), arity(result))`.
    fn compose_full(&self, p: &Self::Op, inners: &[Self::Op]) -> Option<Self::Op> {
        let n = inners.len();
        debug_assert_eq!(self.signature_of(p).arity(), n);
        let arities: Vec<usize> = inners.iter().map(|q| self.signature_of(q).arity()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| (arities[j], std::cmp::Reverse(j)));
        let mut pos: Vec<usize> = (0..n).collect();
        let mut cur = p.clone();
        for &j in &order {
            cur = self.compose(&cur, pos[j], &inners[j])?;
            let a = arities[j];
            for other in 0..n {
                if pos[other] > pos[j] {
                    pos[other] = pos[other] + a - 1;
                }
            }
        }
        Some(cur)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct OpData {
    pub name: String,
    pub sig: usize,
}

/// A finite multicategory given by explicit tables.
///
/// Operations are opaque identifiers; compositions are stored in `∘_i` form
/// and the symmetric action is stored completely (one entry per permutation,
/// indexed by lexicographic rank).
#[derive(Debug, Clone)]
pub struct Multicategory {
    pub(crate) name: String,
    pub(crate) colors: Vec<String>,
    pub(crate) symmetric: bool,
    pub(crate) arity_cap: Option<usize>,
    pub(crate) partial: bool,
    pub(crate) sigs: Vec<Signature>,
    pub(crate) sig_index: HashMap<Signature, usize>,
    pub(crate) sig_ops: Vec<Vec<OpId>>,
    pub(crate) by_output: Vec<Vec<OpId>>,
    pub(crate) ops: Vec<OpData>,
    pub(crate) op_index: HashMap<(usize, String), OpId>,
    pub(crate) units: Vec<Option<OpId>>,
    pub(crate) comp: HashMap<(OpId, u16, OpId), OpId>,
    pub(crate) actions: Vec<Vec<OpId>>,
}

impl Multicategory {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_id(&self, name: &str) -> Option<ColorId> {
        self.colors.iter().position(|c| c == name)
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// True when some composite inside the arity cap is missing.
    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    pub fn op_ids(&self) -> impl Iterator<Item = OpId> + '_ {
        (0..self.ops.len() as u32).map(OpId)
    }

    pub fn op_name(&self, op: OpId) -> &str {
        &self.ops[op.index()].name
    }

    pub fn signature(&self, op: OpId) -> &Signature {
        &self.sigs[self.ops[op.index()].sig]
    }

    pub fn arity(&self, op: OpId) -> usize {
        self.signature(op).arity()
    }

    /// Signatures with a nonempty operation set, in declaration order.
    pub fn support(&self) -> &[Signature] {
        &self.sigs
    }

    pub fn ops_of(&self, sig: &Signature) -> &[OpId] {
        match self.sig_index.get(sig) {
            Some(&i) => &self.sig_ops[i],
            None => &[],
        }
    }

    pub fn ops_of_output(&self, c: ColorId) -> &[OpId] {
        &self.by_output[c]
    }

    pub fn find_op(&self, sig: &Signature, name: &str) -> Option<OpId> {
        let s = *self.sig_index.get(sig)?;
        self.op_index.get(&(s, name.to_string())).copied()
    }

    /// Looks an operation up by name; names are unique within a signature, and
    /// this returns the first match across signatures.
    pub fn op_by_name(&self, name: &str) -> Option<OpId> {
        self.op_ids().find(|&o| self.op_name(o) == name)
    }

    pub fn unit_of(&self, c: ColorId) -> Option<OpId> {
        self.units[c]
    }

    pub fn is_unit(&self, op: OpId) -> bool {
        let sig = self.signature(op);
        sig.arity() == 1 && self.units[sig.output] == Some(op)
    }

    pub fn compositions(&self) -> impl Iterator<Item = (OpId, usize, OpId, OpId)> + '_ {
        self.comp.iter().map(|(&(p, i, q), &r)| (p, i as usize, q, r))
    }

    pub fn composition_count(&self) -> usize {
        self.comp.len()
    }

    pub fn lookup(&self, p: OpId, slot: usize, q: OpId) -> Option<OpId> {
        self.comp.get(&(p, slot as u16, q)).copied()
    }

    pub fn action(&self, p: OpId, sigma: &[usize]) -> Option<OpId> {
        if !self.symmetric {
            return None;
        }
        self.actions[p.index()].get(perm::rank(sigma)).copied()
    }

    /// Whether `p ∘_slot q` must be present for the table to be total.
    pub fn composite_required(&self, p: OpId, q: OpId) -> bool {
        let n = self.arity(p) + self.arity(q) - 1;
        !self.partial && self.arity_cap.is_none_or(|c| n <= c)
    }

    /// `p ∘_slot q` with full error reporting.
    pub fn compose_checked(&self, p: OpId, slot: usize, q: OpId) -> Result<OpId> {
        let sp = self.signature(p);
        if slot >= sp.arity() {
            return Err(Error::SlotOutOfRange {
                op: self.op_name(p).to_string(),
                slot,
                arity: sp.arity(),
            });
        }
        let sq = self.signature(q);
        if sq.output != sp.inputs[slot] {
            return Err(Error::ColorMismatch {
                outer: self.op_name(p).to_string(),
                slot,
                inner: self.op_name(q).to_string(),
                expected: self.colors[sp.inputs[slot]].clone(),
                found: self.colors[sq.output].clone(),
            });
        }
        match self.lookup(p, slot, q) {
            Some(r) => Ok(r),
            None if self.composite_required(p, q) => Err(Error::Structural(format!(
                "missing composition entry {} ∘{} {}",
                self.op_name(p),
                slot + 1,
                self.op_name(q)
            ))),
            None => Err(Error::Truncated {
                outer: self.op_name(p).to_string(),
                inner: self.op_name(q).to_string(),
            }),
        }
    }

    /// Full composition `γ(p; q_1..q_n)` by iterated `∘_i` with index shifting.
    pub fn compose_all(&self, p: OpId, inners: &[OpId]) -> Result<OpId> {
        if inners.len() != self.arity(p) {
            return Err(Error::SlotOutOfRange {
                op: self.op_name(p).to_string(),
                slot: inners.len(),
                arity: self.arity(p),
            });
        }
        for (i, &q) in inners.iter().enumerate() {
            if self.signature(q).output != self.signature(p).inputs[i] {
                return self.compose_checked(p, i, q);
            }
        }
        Multicat::compose_full(self, &p, inners).ok_or_else(|| Error::Truncated {
            outer: self.op_name(p).to_string(),
            inner: inners.iter().map(|&q| self.op_name(q)).collect::<Vec<_>>().join(","),
        })
    }

    /// The underlying collection: colors, operation sets and actions.
    pub fn collection(&self) -> FiniteCollection {
        let mut c = FiniteCollection::new(self.colors.clone(), self.symmetric);
        c.arity_cap = self.arity_cap;
        for o in self.op_ids() {
            c.add_op(self.op_name(o), self.signature(o).clone());
        }
        if self.symmetric {
            for o in self.op_ids() {
                for (r, &t) in self.actions[o.index()].iter().enumerate() {
                    let sigma = perm::unrank(self.arity(o), r);
                    c.set_action(o.index(), &sigma, t.index());
                }
            }
        }
        c
    }

    /// Two tables are equal when they have the same colors, signatures,
    /// operation names and structure maps.
    pub fn same_tables(&self, other: &Multicategory) -> bool {
        if self.colors != other.colors
            || self.symmetric != other.symmetric
            || self.ops.len() != other.ops.len()
        {
            return false;
        }
        let map: Option<Vec<OpId>> = self
            .op_ids()
            .map(|o| other.find_op(self.signature(o), self.op_name(o)))
            .collect();
        let Some(map) = map else { return false };
        let m = |o: OpId| map[o.index()];
        if self.units.iter().map(|u| u.map(m)).ne(other.units.iter().copied()) {
            return false;
        }
        if self.comp.len() != other.comp.len() {
            return false;
        }
        for (&(p, i, q), &r) in &self.comp {
            if other.comp.get(&(m(p), i, m(q))) != Some(&m(r)) {
                return false;
            }
        }
        if self.symmetric {
            for o in self.op_ids() {
                let a: Vec<OpId> = self.actions[o.index()].iter().map(|&t| m(t)).collect();
                if a != other.actions[m(o).index()] {
                    return false;
                }
            }
        }
        true
    }
}

impl Multicat for Multicategory {
    type Op = OpId;

    fn color_count(&self) -> usize {
        self.colors.len()
    }

    fn color_name(&self, c: ColorId) -> String {
        self.colors[c].clone()
    }

    fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    fn arity_cap(&self) -> Option<usize> {
        self.arity_cap
    }

    fn signature_of(&self, op: &OpId) -> Signature {
        self.signature(*op).clone()
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<OpId>> {
        Ok(self.ops_of(sig).to_vec())
    }

    fn compose(&self, p: &OpId, slot: usize, q: &OpId) -> Option<OpId> {
        self.lookup(*p, slot, *q)
    }

    fn act(&self, p: &OpId, sigma: &[usize]) -> Option<OpId> {
        self.action(*p, sigma)
    }

    fn unit(&self, c: ColorId) -> OpId {
        self.units[c].expect("every color has a unit")
    }

    fn op_label(&self, op: &OpId) -> String {
        self.op_name(*op).to_string()
    }
}
