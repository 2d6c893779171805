//! Coproduct, Boardman–Vogt tensor, pushout and arrow multicategories.

use super::{saturate, Caps, Presentation, Saturated};
use crate::error::{Error, Result};
use crate::functor::Multifunctor;
use crate::multicat::builtin::{materialize, next_tuple};
use crate::multicat::{ColorId, FiniteCollection, Multicat, Multicategory, OpId, Signature};
use crate::perm;
use crate::trees::{Generators, Term};
use std::collections::HashMap;

fn require_complete(m: &Multicategory) -> Result<()> {
    if m.is_partial() {
        return Err(Error::Precondition(format!("`{}` has a partial composition table", m.name())));
    }
    Ok(())
}

/// `φ` as a term: a bare leaf for units, a one-vertex tree otherwise.
fn op_term(gens: &Generators, gen: Option<usize>, color: ColorId) -> Term {
    match gen {
        Some(g) => gens.corolla(g),
        None => Term::Leaf(0, color),
    }
}

/// Adds one generator per non-unit operation of `m`, with colors sent
/// through `color`, and its symmetric action. Returns the generator of each
/// operation (`None` for units).
fn add_copy(coll: &mut FiniteCollection, m: &Multicategory, color: &dyn Fn(ColorId) -> ColorId, name: &dyn Fn(OpId) -> String) -> Vec<Option<usize>> {
    let ids: Vec<Option<usize>> = m
        .op_ids()
        .map(|o| {
            if m.is_unit(o) {
                return None;
            }
            let s = m.signature(o);
            Some(coll.add_op(name(o), Signature::new(s.inputs.iter().map(|&c| color(c)).collect(), color(s.output))))
        })
        .collect();
    if coll.symmetric {
        for o in m.op_ids() {
            let Some(g) = ids[o.index()] else { continue };
            for t in perm::adjacent_transpositions(m.arity(o)) {
                let r = m.action(o, &t).expect("complete action table");
                coll.set_action(g, &t, ids[r.index()].expect("units are fixed by the action"));
            }
        }
    }
    ids
}

/// The relations `φ ∘_i ψ = χ` of a copy made by [`add_copy`].
fn composition_relations(pres: &mut Presentation, m: &Multicategory, ids: &[Option<usize>], color: &dyn Fn(ColorId) -> ColorId) -> Result<()> {
    let mut entries: Vec<_> = m.compositions().collect();
    entries.sort();
    for (a, i, b, r) in entries {
        let (Some(ga), Some(gb)) = (ids[a.index()], ids[b.index()]) else { continue };
        let gens = &pres.gens;
        let lhs = gens.graft(&gens.corolla(ga), i, &gens.corolla(gb));
        let rhs = op_term(gens, ids[r.index()], color(m.signature(r).output));
        pres.add_relation(lhs, rhs)?;
    }
    Ok(())
}

/// Where the generators of a two-variable presentation live; the color
/// `(a, b)` has index `a·|obj Q| + b`.
#[derive(Debug, Clone, Default)]
pub struct Bilinear {
    /// `φ⊗b` for each operation `φ` of `P` and color `b` of `Q`.
    pub left: HashMap<(OpId, ColorId), usize>,
    /// `a⊗ψ`.
    pub right: HashMap<(ColorId, OpId), usize>,
}

fn check_pair(p: &Multicategory, q: &Multicategory) -> Result<()> {
    require_complete(p)?;
    require_complete(q)?;
    if p.symmetric() != q.symmetric() {
        return Err(Error::Precondition("one factor is symmetric and the other is not".into()));
    }
    Ok(())
}

fn bilinear_presentation(p: &Multicategory, q: &Multicategory) -> Result<(Presentation, Bilinear)> {
    check_pair(p, q)?;
    let nq = q.colors().len();
    let colors: Vec<String> = p.colors().iter().flat_map(|a| q.colors().iter().map(move |b| format!("{a}.{b}"))).collect();
    let mut coll = FiniteCollection::new(colors, p.symmetric());
    let mut left = HashMap::new();
    let mut right = HashMap::new();
    let mut left_ids = Vec::new();
    for b in 0..nq {
        let ids = add_copy(&mut coll, p, &|a| a * nq + b, &|o| format!("{}⊗{}", p.op_name(o), q.colors()[b]));
        for o in p.op_ids() {
            if let Some(g) = ids[o.index()] {
                left.insert((o, b), g);
            }
        }
        left_ids.push(ids);
    }
    let mut right_ids = Vec::new();
    for a in 0..p.colors().len() {
        let ids = add_copy(&mut coll, q, &|b| a * nq + b, &|o| format!("{}⊗{}", p.colors()[a], q.op_name(o)));
        for o in q.op_ids() {
            if let Some(g) = ids[o.index()] {
                right.insert((a, o), g);
            }
        }
        right_ids.push(ids);
    }
    let name = format!("{}+{}", p.name(), q.name());
    let mut pres = Presentation::new(name, coll, p.symmetric())?;
    for (b, ids) in left_ids.iter().enumerate() {
        composition_relations(&mut pres, p, ids, &|a| a * nq + b)?;
    }
    for (a, ids) in right_ids.iter().enumerate() {
        composition_relations(&mut pres, q, ids, &|b| a * nq + b)?;
    }
    Ok((pres, Bilinear { left, right }))
}

/// `P + Q`: colors are pairs, and every `P`-operation at a fixed `Q`-color
/// (and vice versa) is a generator, subject to the composition relations of
/// each variable separately.
pub fn coproduct(p: &Multicategory, q: &Multicategory) -> Result<Presentation> {
    Ok(bilinear_presentation(p, q)?.0)
}

fn interchange(p: &Multicategory, q: &Multicategory, bl: &Bilinear, gens: &Generators) -> Vec<(Term, Term)> {
    let nq = q.colors().len();
    let mut out = Vec::new();
    for phi in p.op_ids().filter(|&o| !p.is_unit(o)) {
        let sp = p.signature(phi);
        let m = sp.arity();
        for psi in q.op_ids().filter(|&o| !q.is_unit(o)) {
            let sq = q.signature(psi);
            let n = sq.arity();
            let leaf = |i: usize, j: usize| Term::Leaf(i * n + j, sp.inputs[i] * nq + sq.inputs[j]);
            let lhs = Term::Node(
                bl.left[&(phi, sq.output)],
                (0..m).map(|i| Term::Node(bl.right[&(sp.inputs[i], psi)], (0..n).map(|j| leaf(i, j)).collect())).collect(),
            );
            let rhs = Term::Node(
                bl.right[&(sp.output, psi)],
                (0..n).map(|j| Term::Node(bl.left[&(phi, sq.inputs[j])], (0..m).map(|i| leaf(i, j)).collect())).collect(),
            );
            out.push((gens.canonical(&lhs), gens.canonical(&rhs)));
        }
    }
    out
}

/// The two composites around the bilinearity square of every pair of
/// non-unit operations `φ ∈ P`, `ψ ∈ Q`, as terms over the generators of
/// [`coproduct`]`(P, Q)`. Leaf `i·n + j` carries the color `(a_i, b_j)`.
pub fn interchange_relations(p: &Multicategory, q: &Multicategory) -> Result<(Presentation, Vec<(Term, Term)>)> {
    let (pres, bl) = bilinear_presentation(p, q)?;
    let rels = interchange(p, q, &bl, &pres.gens);
    Ok((pres, rels))
}

/// `P ⊗ Q` evaluated within caps.
#[derive(Debug, Clone)]
pub struct BvTensor {
    pub presentation: Presentation,
    pub saturated: Saturated,
    pub generators: Bilinear,
}

/// The coproduct presentation with the interchange relations, saturated.
pub fn bv_tensor(p: &Multicategory, q: &Multicategory, caps: Caps) -> Result<BvTensor> {
    let (mut pres, generators) = bilinear_presentation(p, q)?;
    pres.name = format!("{}⊗{}", p.name(), q.name());
    for (l, r) in interchange(p, q, &generators, &pres.gens) {
        pres.add_relation(l, r)?;
    }
    let saturated = saturate(&pres, caps)?;
    Ok(BvTensor { presentation: pres, saturated, generators })
}

/// The pushout of `B ← A → C`, presented by the generators of `B` and `C`,
/// the composition relations of both and `f(α) = g(α)` for every operation
/// `α` of `A`.
pub fn pushout(a: &Multicategory, b: &Multicategory, f: &Multifunctor, c: &Multicategory, g: &Multifunctor) -> Result<Presentation> {
    for m in [a, b, c] {
        require_complete(m)?;
    }
    if a.symmetric() != b.symmetric() || a.symmetric() != c.symmetric() {
        return Err(Error::Precondition("the span mixes symmetric and non-symmetric multicategories".into()));
    }
    for (h, t) in [(f, b), (g, c)] {
        let rep = crate::functor::check_multifunctor(a, t, h);
        if let Some(v) = rep.first() {
            return Err(Error::Precondition(format!("leg into `{}` is not a multifunctor: {} ({})", t.name(), v.law, v.witness)));
        }
    }
    let nb = b.colors().len();
    let total = nb + c.colors().len();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in 0..a.colors().len() {
        let (u, v) = (find(&mut parent, f.objects[x]), find(&mut parent, nb + g.objects[x]));
        parent[u.max(v)] = u.min(v);
    }
    let roots: Vec<usize> = (0..total).map(|x| find(&mut parent, x)).collect();
    let mut class_ids: Vec<usize> = roots.clone();
    class_ids.sort();
    class_ids.dedup();
    let color_of: Vec<ColorId> = roots.iter().map(|r| class_ids.binary_search(r).unwrap()).collect();
    let raw = |x: usize| if x < nb { b.colors()[x].clone() } else { format!("{}'", c.colors()[x - nb]) };
    let mut names: Vec<String> = class_ids.iter().map(|&r| raw(r)).collect();
    for (i, n) in names.clone().iter().enumerate() {
        if names[..i].contains(n) {
            names[i] = format!("{n}#{i}");
        }
    }
    let mut coll = FiniteCollection::new(names, a.symmetric());
    let b_ids = add_copy(&mut coll, b, &|x| color_of[x], &|o| b.op_name(o).to_string());
    let c_ids = add_copy(&mut coll, c, &|x| color_of[nb + x], &|o| format!("{}'", c.op_name(o)));
    let mut pres = Presentation::new(format!("{}⊔{}", b.name(), c.name()), coll, a.symmetric())?;
    composition_relations(&mut pres, b, &b_ids, &|x| color_of[x])?;
    composition_relations(&mut pres, c, &c_ids, &|x| color_of[nb + x])?;
    for o in a.op_ids() {
        let (fo, go) = (f.ops[o.index()], g.ops[o.index()]);
        let l = op_term(&pres.gens, b_ids[fo.index()], color_of[b.signature(fo).output]);
        let r = op_term(&pres.gens, c_ids[go.index()], color_of[nb + c.signature(go).output]);
        pres.add_relation(l, r)?;
    }
    Ok(pres)
}

/// `P` copied onto the colors `0..n`: an operation of arity `k` for every
/// signature `(x_1..x_k; x)` with `max(x_i) ≤ x`.
struct Arrow<'a> {
    p: &'a Multicategory,
    n: usize,
}

impl Multicat for Arrow<'_> {
    type Op = (OpId, Signature);

    fn color_count(&self) -> usize {
        self.n + 1
    }

    fn color_name(&self, c: ColorId) -> String {
        c.to_string()
    }

    fn is_symmetric(&self) -> bool {
        self.p.symmetric()
    }

    fn arity_cap(&self) -> Option<usize> {
        Multicat::arity_cap(self.p)
    }

    fn signature_of(&self, op: &Self::Op) -> Signature {
        op.1.clone()
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<Self::Op>> {
        if sig.inputs.iter().any(|&x| x > sig.output) {
            return Ok(Vec::new());
        }
        let s = Signature::new(vec![0; sig.arity()], 0);
        Ok(self.p.ops_of(&s).iter().map(|&o| (o, sig.clone())).collect())
    }

    fn compose(&self, a: &Self::Op, slot: usize, b: &Self::Op) -> Option<Self::Op> {
        Some((self.p.lookup(a.0, slot, b.0)?, a.1.graft(slot, &b.1)))
    }

    fn act(&self, a: &Self::Op, sigma: &[usize]) -> Option<Self::Op> {
        Some((self.p.action(a.0, sigma)?, a.1.permuted(sigma)))
    }

    fn unit(&self, c: ColorId) -> Self::Op {
        (self.p.unit_of(0).unwrap(), Signature::new(vec![c], c))
    }

    fn op_label(&self, op: &Self::Op) -> String {
        self.p.op_name(op.0).to_string()
    }
}

/// `Pⁿ` for a single-colored `P`; `P⁰ = P`.
pub fn arrow_multicategory(p: &Multicategory, n: usize) -> Result<Multicategory> {
    if p.colors().len() != 1 {
        return Err(Error::Domain(format!("arrow multicategories need one color, `{}` has {}", p.name(), p.colors().len())));
    }
    require_complete(p)?;
    if n == 0 {
        return Ok(p.clone());
    }
    let arities: Vec<usize> = {
        let mut v: Vec<usize> = p.support().iter().map(|s| s.arity()).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut support = Vec::new();
    for &k in &arities {
        let mut t = vec![0; k];
        loop {
            let lo = t.iter().copied().max().unwrap_or(0);
            for x in lo..=n {
                support.push(Signature::new(t.clone(), x));
            }
            if !next_tuple(&mut t, n + 1) {
                break;
            }
        }
    }
    materialize(&Arrow { p, n }, &format!("{}^{n}", p.name()), &support, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::builtin;

    #[test]
    fn arrow_signatures() {
        let p = builtin::associative(2, true);
        let p1 = arrow_multicategory(&p, 1).unwrap();
        assert!(p1.ops_of(&Signature::new(vec![1], 0)).is_empty());
        assert_eq!(p1.ops_of(&Signature::new(vec![0], 1)).len(), 1);
        assert_eq!(p1.ops_of(&Signature::new(vec![0, 1], 1)).len(), 2);
        assert!(arrow_multicategory(&p, 0).unwrap().same_tables(&p));
    }

    #[test]
    fn interchange_sides_share_signatures() {
        let c = builtin::commutative(2, false);
        let (pres, rels) = interchange_relations(&c, &c).unwrap();
        assert_eq!(rels.len(), 1);
        for (l, r) in &rels {
            assert_eq!(pres.gens.signature(l), pres.gens.signature(r));
            assert_eq!(l.arity(), 4);
        }
    }
}
