//! Algebras over multicategories in finite sets.

pub mod end;
pub mod free;
pub mod module;
pub mod op_algebra;
pub mod strings;

pub use end::{end_multicategory, EndMulticategory, Function, ObjectFamily};
pub use module::{end_module, EndBimodule};

use crate::error::{Error, Result};
use crate::functor::{check_multifunctor, Multifunctor};
use crate::multicat::builtin::{all_signatures, materialize_with_ops};
use crate::multicat::laws::LawReport;
use crate::multicat::{ColorId, Multicat, Multicategory, Signature};
use crate::search::{search, SearchOptions};

/// Largest arity carrying an operation of `p`.
pub fn max_arity(p: &Multicategory) -> usize {
    p.support().iter().map(|s| s.arity()).max().unwrap_or(1).max(1)
}

/// `End(A)` with the cap needed to receive algebra structures of `p`.
pub fn end_for(p: &Multicategory, family: &ObjectFamily) -> EndMulticategory {
    EndMulticategory::new(family.clone(), Some(p.arity_cap().unwrap_or(max_arity(p)).max(max_arity(p))))
}

/// A `P`-algebra: a carrier family and a multifunctor `P → End(A)` that is
/// the identity on colors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraStructure {
    pub functor: Multifunctor<Function>,
}

impl AlgebraStructure {
    pub fn action(&self, op: crate::multicat::OpId) -> &Function {
        self.functor.image(op)
    }

    /// The action maps as `(operation name, signature, value table)`.
    pub fn action_tables(&self, p: &Multicategory) -> Vec<(String, Signature, Vec<u32>)> {
        p.op_ids()
            .map(|o| (p.op_name(o).to_string(), p.signature(o).clone(), self.action(o).table.clone()))
            .collect()
    }

    /// Rebuilds the structure from action tables; the tables must list every
    /// operation of `p`.
    pub fn from_action_tables(p: &Multicategory, tables: &[(String, Signature, Vec<u32>)]) -> Result<Self> {
        let mut ops = Vec::with_capacity(p.op_count());
        for o in p.op_ids() {
            let sig = p.signature(o);
            let t = tables
                .iter()
                .find(|(n, s, _)| n == p.op_name(o) && s == sig)
                .ok_or_else(|| Error::Structural(format!("no action table for `{}`", p.op_name(o))))?;
            ops.push(Function { sig: sig.clone(), table: t.2.clone() });
        }
        Ok(AlgebraStructure { functor: Multifunctor { objects: (0..p.colors().len()).collect(), ops } })
    }

    pub fn check(&self, p: &Multicategory, family: &ObjectFamily) -> LawReport {
        let mut rep = LawReport::default();
        if self.functor.objects.iter().enumerate().any(|(i, &c)| i != c) {
            rep.fail("object map", "algebra structures fix colors".into());
            return rep;
        }
        for o in p.op_ids() {
            let f = self.action(o);
            if f.table.len() != family.domain_size(&f.sig.inputs)
                || f.table.iter().any(|&v| v as usize >= family.sizes[f.sig.output])
            {
                rep.fail("carrier", format!("action table of `{}` does not fit the carriers", p.op_name(o)));
            }
        }
        if !rep.passed() {
            return rep;
        }
        rep.merge(check_multifunctor(p, &end_for(p, family), &self.functor));
        rep
    }
}

/// Every `P`-algebra structure on the family.
pub fn enumerate_algebras(p: &Multicategory, family: &ObjectFamily, budget: usize) -> Result<Vec<AlgebraStructure>> {
    if family.colors.len() != p.colors().len() {
        return Err(Error::Domain(format!("{} carriers for {} colors", family.colors.len(), p.colors().len())));
    }
    let end = end_for(p, family);
    let objects: Vec<ColorId> = (0..p.colors().len()).collect();
    let fs = search(p, &end, SearchOptions { objects: Some(objects), budget, ..Default::default() })?;
    Ok(fs.into_iter().map(|functor| AlgebraStructure { functor }).collect())
}

/// Whether the carrier maps `f[x]: A(x) → B(x)` commute with all actions.
pub fn is_homomorphism(p: &Multicategory, a_fam: &ObjectFamily, a: &AlgebraStructure, b_fam: &ObjectFamily, b: &AlgebraStructure, f: &[Vec<usize>]) -> bool {
    let ea = end_for(p, a_fam);
    let eb = end_for(p, b_fam);
    p.op_ids().all(|o| {
        let sig = p.signature(o);
        a_fam.domain(&sig.inputs).iter().all(|t| {
            let lhs = f[sig.output][ea.eval(a.action(o), t)];
            let ft: Vec<usize> = t.iter().zip(&sig.inputs).map(|(&x, &c)| f[c][x]).collect();
            lhs == eb.eval(b.action(o), &ft)
        })
    })
}

/// All carrier maps `A → B`, color by color.
pub fn carrier_maps(a: &ObjectFamily, b: &ObjectFamily) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for c in 0..a.colors.len() {
        let maps = end::all_tables(a.sizes[c], b.sizes[c], usize::MAX).unwrap_or_default();
        let mut next = Vec::new();
        for prefix in &out {
            for m in &maps {
                let mut v = prefix.clone();
                v.push(m.iter().map(|&x| x as usize).collect::<Vec<usize>>());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// `End(f)` for `f: A → B`: pairs `(φ, ψ)` with `f∘φ = ψ∘f^n`.
#[derive(Debug, Clone)]
pub struct EndOfMapMulticategory {
    pub a: EndMulticategory,
    pub b: EndMulticategory,
    pub f: Vec<Vec<usize>>,
}

impl EndOfMapMulticategory {
    pub fn new(a: ObjectFamily, b: ObjectFamily, f: Vec<Vec<usize>>, cap: usize) -> Result<Self> {
        if a.colors.len() != b.colors.len() || f.len() != a.colors.len() {
            return Err(Error::Domain("carrier families and map do not share colors".into()));
        }
        for c in 0..f.len() {
            if f[c].len() != a.sizes[c] || f[c].iter().any(|&v| v >= b.sizes[c]) {
                return Err(Error::Domain(format!("map on `{}` is not a function A → B", a.colors[c])));
            }
        }
        Ok(EndOfMapMulticategory { a: EndMulticategory::new(a, Some(cap)), b: EndMulticategory::new(b, Some(cap)), f })
    }

    /// The defining equation `f∘φ = ψ∘f^n`.
    pub fn related(&self, phi: &Function, psi: &Function) -> bool {
        let sig = &phi.sig;
        self.a.family.domain(&sig.inputs).iter().all(|t| {
            let ft: Vec<usize> = t.iter().zip(&sig.inputs).map(|(&x, &c)| self.f[c][x]).collect();
            self.f[sig.output][self.a.eval(phi, t)] == self.b.eval(psi, &ft)
        })
    }
}

impl Multicat for EndOfMapMulticategory {
    type Op = (Function, Function);

    fn color_count(&self) -> usize {
        self.a.color_count()
    }

    fn color_name(&self, c: ColorId) -> String {
        self.a.color_name(c)
    }

    fn is_symmetric(&self) -> bool {
        true
    }

    fn arity_cap(&self) -> Option<usize> {
        self.a.cap
    }

    fn signature_of(&self, op: &Self::Op) -> Signature {
        op.0.sig.clone()
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<Self::Op>> {
        let phis = self.a.operations(sig)?;
        let psis = self.b.operations(sig)?;
        let mut out = Vec::new();
        for phi in &phis {
            for psi in &psis {
                if self.related(phi, psi) {
                    out.push((phi.clone(), psi.clone()));
                }
            }
        }
        Ok(out)
    }

    fn compose(&self, p: &Self::Op, slot: usize, q: &Self::Op) -> Option<Self::Op> {
        Some((self.a.compose(&p.0, slot, &q.0)?, self.b.compose(&p.1, slot, &q.1)?))
    }

    fn act(&self, p: &Self::Op, sigma: &[usize]) -> Option<Self::Op> {
        Some((self.a.act(&p.0, sigma)?, self.b.act(&p.1, sigma)?))
    }

    fn unit(&self, c: ColorId) -> Self::Op {
        (self.a.unit(c), self.b.unit(c))
    }

    fn op_label(&self, op: &Self::Op) -> String {
        format!("{}|{}", op.0.label(), op.1.label())
    }
}

/// `End(f)` tabulated, with its two projections.
#[derive(Debug, Clone)]
pub struct EndOfMap {
    pub multicategory: Multicategory,
    pub to_a: Multifunctor<Function>,
    pub to_b: Multifunctor<Function>,
}

pub fn end_of_map(a: &ObjectFamily, b: &ObjectFamily, f: &[Vec<usize>], cap: usize, limit: usize) -> Result<EndOfMap> {
    let e = EndOfMapMulticategory::new(a.clone(), b.clone(), f.to_vec(), cap)?;
    let support = all_signatures(a.colors.len(), cap);
    let (m, ops) = materialize_with_ops(&e, "End(f)", &support, limit)?;
    let objects: Vec<ColorId> = (0..a.colors.len()).collect();
    let to_a = Multifunctor { objects: objects.clone(), ops: ops.iter().map(|o| o.0.clone()).collect() };
    let to_b = Multifunctor { objects, ops: ops.into_iter().map(|o| o.1).collect() };
    Ok(EndOfMap { multicategory: m, to_a, to_b })
}

/// Multifunctors `P → End(f)` fixing colors, split into the induced pair of
/// algebra structures.
pub fn enumerate_over_map(p: &Multicategory, e: &EndOfMapMulticategory, budget: usize) -> Result<Vec<(AlgebraStructure, AlgebraStructure)>> {
    let objects: Vec<ColorId> = (0..p.colors().len()).collect();
    let fs = search(p, e, SearchOptions { objects: Some(objects.clone()), budget, ..Default::default() })?;
    Ok(fs
        .into_iter()
        .map(|f| {
            let a = Multifunctor { objects: objects.clone(), ops: f.ops.iter().map(|o| o.0.clone()).collect() };
            let b = Multifunctor { objects: objects.clone(), ops: f.ops.into_iter().map(|o| o.1).collect() };
            (AlgebraStructure { functor: a }, AlgebraStructure { functor: b })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::builtin;

    #[test]
    fn unit_multicategory_has_one_structure() {
        let fs = enumerate_algebras(&builtin::trivial(), &ObjectFamily::single(3), 100).unwrap();
        assert_eq!(fs.len(), 1);
    }

    #[test]
    fn tables_round_trip() {
        let p = builtin::commutative(3, true);
        let fam = ObjectFamily::single(2);
        for a in enumerate_algebras(&p, &fam, 100_000).unwrap() {
            let t = a.action_tables(&p);
            let b = AlgebraStructure::from_action_tables(&p, &t).unwrap();
            assert_eq!(a, b);
            assert!(b.check(&p, &fam).passed());
        }
    }
}
