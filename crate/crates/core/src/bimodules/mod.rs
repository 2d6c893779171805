//! Right modules and bimodules over finite multicategories, their
//! endomorphism multicategories, bar complexes and the Hochschild resolution.
//!
//! A right `Q`-module has its inputs colored by `Q` and its outputs by a
//! separate color list. Its action is stored in `∘_i` form; the left action
//! of a bimodule is stored in full form `γ(φ; m_1, .., m_n)`.

mod bar;
mod endo;

pub use bar::{bar_complex, bar_level_counts, hochschild, BarComplex, Hochschild, Layered};
pub use endo::{analyze_pointed, end_right_module, free_bimodule, regular_map, EndModule, PointedAnalysis, TensorElem};

use crate::error::{Error, Result};
use crate::functor::Multifunctor;
use crate::multicat::laws::LawReport;
use crate::multicat::{FiniteCollection, Multicategory, OpId, Signature};
use crate::perm;
use crate::trees::circle::canonical_elem;
use crate::trees::circle_product;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct RightModule {
    pub name: String,
    /// Input colors are those of the acting multicategory; each signature's
    /// output indexes `out_colors`.
    pub coll: FiniteCollection,
    pub out_colors: Vec<String>,
    /// `m ∘_i q`.
    pub right: HashMap<(usize, usize, OpId), usize>,
}

impl RightModule {
    pub fn len(&self) -> usize {
        self.coll.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coll.ops.is_empty()
    }

    pub fn signature(&self, m: usize) -> &Signature {
        &self.coll.ops[m].1
    }

    pub fn arity(&self, m: usize) -> usize {
        self.coll.ops[m].1.arity()
    }

    pub fn name_of(&self, m: usize) -> &str {
        &self.coll.ops[m].0
    }

    pub fn compose(&self, m: usize, i: usize, q: OpId) -> Option<usize> {
        self.right.get(&(m, i, q)).copied()
    }

    /// `m·σ`; the identity is always available.
    pub fn act(&self, m: usize, sigma: &[usize]) -> Option<usize> {
        if perm::is_identity(sigma) {
            return Some(m);
        }
        self.coll.action(m, sigma)
    }

    /// Elements with the given output color, in index order.
    pub fn with_output(&self, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&m| self.signature(m).output == c).collect()
    }

    fn within_cap(&self, n: usize) -> bool {
        self.coll.arity_cap.is_none_or(|c| n <= c)
    }

    /// `Q` acting on itself from the right.
    pub fn regular(q: &Multicategory) -> Self {
        let mut right = HashMap::new();
        for (a, i, b, r) in q.compositions() {
            right.insert((a.index(), i, b), r.index());
        }
        RightModule { name: q.name().to_string(), coll: q.collection(), out_colors: q.colors().to_vec(), right }
    }

    /// The zero module over `q` with the given output colors.
    pub fn zero(q: &Multicategory, out_colors: Vec<String>) -> Self {
        let mut coll = FiniteCollection::new(q.colors().to_vec(), q.symmetric());
        coll.arity_cap = q.arity_cap;
        RightModule { name: "0".into(), coll, out_colors, right: HashMap::new() }
    }

    /// The free right module `K ∘ Q` up to `max_arity`; `K` has inputs colored
    /// like `Q` and outputs indexing `out_colors`.
    pub fn free(k: &FiniteCollection, q: &Multicategory, out_colors: Vec<String>, max_arity: usize) -> Result<Self> {
        let qc = q.collection();
        let cp = circle_product(k, &qc, max_arity)?;
        let mut right = HashMap::new();
        for (x, e) in cp.elems.iter().enumerate() {
            let mut label_block = Vec::new();
            for (j, b) in e.blocks.iter().enumerate() {
                for (r, &l) in b.iter().enumerate() {
                    label_block.push((l, j, r));
                }
            }
            label_block.sort();
            for &(l, j, r) in &label_block {
                let color = qc.ops[e.inners[j]].1.inputs[r];
                for &g in q.ops_of_output(color) {
                    let Some(inner) = q.lookup(OpId(e.inners[j] as u32), r, g) else { continue };
                    let a = q.arity(g);
                    let shift = |v: usize| if v > l { v + a - 1 } else { v };
                    let blocks: Vec<Vec<usize>> = e
                        .blocks
                        .iter()
                        .enumerate()
                        .map(|(bj, b)| {
                            if bj == j {
                                b.iter().flat_map(|&v| if v == l { (l..l + a).collect::<Vec<_>>() } else { vec![shift(v)] }).collect()
                            } else {
                                b.iter().map(|&v| shift(v)).collect()
                            }
                        })
                        .collect();
                    let mut inners = e.inners.clone();
                    inners[j] = inner.index();
                    let c = canonical_elem(k, &crate::trees::CircleElem { root: e.root, blocks, inners });
                    if let Some(y) = cp.find(&c) {
                        right.insert((x, l, g), y);
                    }
                }
            }
        }
        let mut coll = cp.collection;
        coll.arity_cap = Some(max_arity);
        Ok(RightModule { name: format!("{}∘{}", k_name(k), q.name()), coll, out_colors, right })
    }
}

fn k_name(k: &FiniteCollection) -> String {
    let names: Vec<&str> = k.ops.iter().map(|(n, _)| n.as_str()).collect();
    format!("K[{}]", names.join(","))
}

/// A `P`-`Q`-bimodule: a right `Q`-module whose output colors are those of
/// `P`, with a left `P`-action.
#[derive(Debug, Clone)]
pub struct Bimodule {
    pub module: RightModule,
    /// `γ(φ; m_1, .., m_n)`.
    pub left: HashMap<(OpId, Vec<usize>), usize>,
}

impl Bimodule {
    pub fn left_act(&self, phi: OpId, ms: &[usize]) -> Option<usize> {
        self.left.get(&(phi, ms.to_vec())).copied()
    }

    /// `P` over itself on both sides.
    pub fn regular(p: &Multicategory) -> Self {
        let module = RightModule::regular(p);
        let mut left = HashMap::new();
        for phi in p.op_ids() {
            let sig = p.signature(phi);
            for ms in tuples(&module, &sig.inputs, p.arity_cap) {
                let ops: Vec<OpId> = ms.iter().map(|&m| OpId(m as u32)).collect();
                if let Ok(r) = p.compose_all(phi, &ops) {
                    left.insert((phi, ms), r.index());
                }
            }
        }
        Bimodule { module, left }
    }

    /// A right module with the trivial left action of a multicategory made
    /// of units only.
    pub fn trivial_left(module: RightModule, p: &Multicategory) -> Result<Self> {
        if p.op_ids().any(|o| !p.is_unit(o)) || p.colors() != module.out_colors.as_slice() {
            return Err(Error::Precondition(format!("`{}` must consist of units on the output colors of `{}`", p.name(), module.name)));
        }
        let mut left = HashMap::new();
        for m in 0..module.len() {
            left.insert((p.unit_of(module.signature(m).output).unwrap(), vec![m]), m);
        }
        Ok(Bimodule { module, left })
    }

    /// A collection as a bimodule over unit multicategories on both sides.
    pub fn symmetric_sequence(coll: FiniteCollection, unit: &Multicategory) -> Result<Self> {
        let mut right = HashMap::new();
        for m in 0..coll.ops.len() {
            for (i, &c) in coll.ops[m].1.inputs.iter().enumerate() {
                right.insert((m, i, unit.unit_of(c).ok_or_else(|| Error::Domain("unit missing".into()))?), m);
            }
        }
        let module = RightModule { name: "Σ".into(), out_colors: coll.colors.clone(), coll, right };
        Self::trivial_left(module, unit)
    }
}

/// Tuples of elements with the given output colors whose total arity is
/// within `cap`.
pub(crate) fn tuples(m: &RightModule, outputs: &[usize], cap: Option<usize>) -> Vec<Vec<usize>> {
    let mut out = vec![(Vec::new(), 0usize)];
    for &c in outputs {
        let opts = m.with_output(c);
        let mut next = Vec::new();
        for (t, a) in &out {
            for &x in &opts {
                let a2 = a + m.arity(x);
                if cap.is_none_or(|cap| a2 <= cap) {
                    let mut t2 = t.clone();
                    t2.push(x);
                    next.push((t2, a2));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

fn label(m: &RightModule, x: usize) -> String {
    m.name_of(x).to_string()
}

/// Unit, associativity and equivariance laws of a right action. A missing
/// composite inside the arity cap is a structural error.
pub fn check_right_module(m: &RightModule, q: &Multicategory) -> Result<LawReport> {
    if m.coll.colors != q.colors() {
        return Err(Error::Domain(format!("`{}` is not colored by `{}`", m.name, q.name())));
    }
    let mut rep = LawReport::default();
    let c = |x: usize, i: usize, g: OpId| -> Result<Option<usize>> {
        match m.compose(x, i, g) {
            Some(r) => Ok(Some(r)),
            None if m.within_cap(m.arity(x) + q.arity(g) - 1) => {
                Err(Error::Structural(format!("missing action entry {} ∘{} {}", label(m, x), i + 1, q.op_name(g))))
            }
            None => Ok(None),
        }
    };
    for x in 0..m.len() {
        let sx = m.signature(x).clone();
        let n = sx.arity();
        for i in 0..n {
            rep.checked += 1;
            match c(x, i, q.unit_of(sx.inputs[i]).unwrap())? {
                Some(r) if r == x => {}
                Some(_) => rep.fail("right unit", format!("{} ∘{} 1", label(m, x), i + 1)),
                None => rep.skipped += 1,
            }
            for &g in q.ops_of_output(sx.inputs[i]) {
                let Some(xg) = c(x, i, g)? else { continue };
                let a = q.arity(g);
                for j in 0..a {
                    for &h in q.ops_of_output(q.signature(g).inputs[j]) {
                        rep.checked += 1;
                        let lhs = c(xg, i + j, h)?;
                        let rhs = match q.lookup(g, j, h) {
                            Some(gh) => c(x, i, gh)?,
                            None => None,
                        };
                        match (lhs, rhs) {
                            (Some(u), Some(v)) if u != v => rep.fail("sequential associativity", format!("({} ∘{} {}) ∘{} {}", label(m, x), i + 1, q.op_name(g), i + j + 1, q.op_name(h))),
                            (Some(_), Some(_)) => {}
                            _ => rep.skipped += 1,
                        }
                    }
                }
                for k in i + 1..n {
                    for &h in q.ops_of_output(sx.inputs[k]) {
                        rep.checked += 1;
                        let lhs = c(xg, k + a - 1, h)?;
                        let rhs = match c(x, k, h)? {
                            Some(xh) => c(xh, i, g)?,
                            None => None,
                        };
                        match (lhs, rhs) {
                            (Some(u), Some(v)) if u != v => rep.fail("parallel associativity", format!("({} ∘{} {}) ∘{} {}", label(m, x), i + 1, q.op_name(g), k + a, q.op_name(h))),
                            (Some(_), Some(_)) => {}
                            _ => rep.skipped += 1,
                        }
                    }
                }
                if m.coll.symmetric {
                    for tau in perm::all(a) {
                        rep.checked += 1;
                        let lhs = c(x, i, q.action(g, &tau).unwrap())?;
                        let rhs = m.act(xg, &perm::embed(&tau, i, n - i - 1));
                        if lhs.is_some() && lhs != rhs {
                            rep.fail("inner equivariance", format!("{} ∘{} ({}·{:?})", label(m, x), i + 1, q.op_name(g), tau));
                        }
                    }
                }
            }
        }
        if m.coll.symmetric {
            for sigma in perm::all(n) {
                let xs = m.act(x, &sigma).ok_or_else(|| Error::Structural(format!("missing action on `{}`", label(m, x))))?;
                for k in 0..n {
                    let old = sigma[k];
                    for &g in q.ops_of_output(sx.inputs[old]) {
                        rep.checked += 1;
                        let mut sizes = vec![1; n];
                        sizes[old] = q.arity(g);
                        let lhs = c(xs, k, g)?;
                        let rhs = c(x, old, g)?.and_then(|r| m.act(r, &perm::block_permutation(&sigma, &sizes)));
                        match (lhs, rhs) {
                            (Some(u), Some(v)) if u != v => rep.fail("outer equivariance", format!("({}·{:?}) ∘{} {}", label(m, x), sigma, k + 1, q.op_name(g))),
                            (Some(_), Some(_)) => {}
                            _ => rep.skipped += 1,
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Right laws, left unit, associativity and equivariance, and the
/// compatibility `γ(φ; m)·θ = γ(φ; .., m_i·θ, ..)` wherever both sides exist.
pub fn check_bimodule(b: &Bimodule, p: &Multicategory, q: &Multicategory) -> Result<LawReport> {
    let m = &b.module;
    if m.out_colors != p.colors() {
        return Err(Error::Domain(format!("outputs of `{}` are not colored by `{}`", m.name, p.name())));
    }
    let mut rep = check_right_module(m, q)?;
    let cap = m.coll.arity_cap;
    let l = |phi: OpId, ms: &[usize]| -> Result<Option<usize>> {
        match b.left_act(phi, ms) {
            Some(r) => Ok(Some(r)),
            None if cap.is_none_or(|c| ms.iter().map(|&x| m.arity(x)).sum::<usize>() <= c) => Err(Error::Structural(format!(
                "missing left action entry {}({})",
                p.op_name(phi),
                ms.iter().map(|&x| label(m, x)).collect::<Vec<_>>().join(",")
            ))),
            None => Ok(None),
        }
    };
    let show = |phi: OpId, ms: &[usize]| format!("{}({})", p.op_name(phi), ms.iter().map(|&x| label(m, x)).collect::<Vec<_>>().join(","));

    for x in 0..m.len() {
        rep.checked += 1;
        match l(p.unit_of(m.signature(x).output).unwrap(), &[x])? {
            Some(r) if r == x => {}
            Some(_) => rep.fail("left unit", format!("1({})", label(m, x))),
            None => rep.skipped += 1,
        }
    }
    for phi in p.op_ids() {
        let sp = p.signature(phi).clone();
        let n = sp.arity();
        for ms in tuples(m, &sp.inputs, cap) {
            let Some(base) = l(phi, &ms)? else { continue };
            let sizes: Vec<usize> = ms.iter().map(|&x| m.arity(x)).collect();
            let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            }).collect();
            // Compatibility with the right action.
            for (i, &x) in ms.iter().enumerate() {
                for r in 0..sizes[i] {
                    for &g in q.ops_of_output(m.signature(x).inputs[r]) {
                        rep.checked += 1;
                        let lhs = m.compose(base, offsets[i] + r, g);
                        let rhs = match m.compose(x, r, g) {
                            Some(xg) => {
                                let mut ms2 = ms.clone();
                                ms2[i] = xg;
                                b.left_act(phi, &ms2)
                            }
                            None => None,
                        };
                        match (lhs, rhs) {
                            (Some(u), Some(v)) if u != v => rep.fail("compatibility", format!("{} ∘{} {}", show(phi, &ms), offsets[i] + r + 1, q.op_name(g))),
                            (Some(_), Some(_)) => {}
                            _ => rep.skipped += 1,
                        }
                    }
                }
            }
            if p.symmetric() {
                // γ(φ·σ; m∘σ) = γ(φ; m)·ρ and γ(φ; .., m_i·τ, ..) = γ(φ; m)·(id ⊕ τ ⊕ id).
                for sigma in perm::all(n) {
                    rep.checked += 1;
                    let lhs = l(p.action(phi, &sigma).unwrap(), &perm::permute(&ms, &sigma))?;
                    let rhs = m.act(base, &perm::block_permutation(&sigma, &sizes));
                    match (lhs, rhs) {
                        (Some(u), Some(v)) if u != v => rep.fail("left outer equivariance", format!("{} with {:?}", show(phi, &ms), sigma)),
                        (Some(_), Some(_)) => {}
                        _ => rep.skipped += 1,
                    }
                }
                let total: usize = sizes.iter().sum();
                for i in 0..n {
                    for tau in perm::all(sizes[i]) {
                        rep.checked += 1;
                        let Some(xt) = m.act(ms[i], &tau) else { continue };
                        let mut ms2 = ms.clone();
                        ms2[i] = xt;
                        let lhs = l(phi, &ms2)?;
                        let rhs = m.act(base, &perm::embed(&tau, offsets[i], total - offsets[i] - sizes[i]));
                        if lhs != rhs {
                            rep.fail("left inner equivariance", format!("{} with {:?} at {}", show(phi, &ms), tau, i + 1));
                        }
                    }
                }
            }
        }
    }
    // Associativity: γ(φ ∘_i ψ; m) = γ(φ; .., γ(ψ; m_i..), ..).
    for (phi, i, psi, comp) in p.compositions() {
        let a = p.arity(psi);
        for ms in tuples(m, &p.signature(comp).inputs.clone(), cap) {
            rep.checked += 1;
            let lhs = l(comp, &ms)?;
            let rhs = match l(psi, &ms[i..i + a])? {
                Some(inner) => {
                    let mut outer: Vec<usize> = ms[..i].to_vec();
                    outer.push(inner);
                    outer.extend_from_slice(&ms[i + a..]);
                    l(phi, &outer)?
                }
                None => None,
            };
            match (lhs, rhs) {
                (Some(u), Some(v)) if u != v => rep.fail("left associativity", format!("{} with {} ∘{} {}", show(comp, &ms), p.op_name(phi), i + 1, p.op_name(psi))),
                (Some(_), Some(_)) => {}
                _ => rep.skipped += 1,
            }
        }
    }
    Ok(rep)
}

/// Whether `f` (one image per element) is a map of right modules.
pub fn is_right_module_hom(m: &RightModule, n: &RightModule, q: &Multicategory, f: &[usize]) -> bool {
    if f.len() != m.len() {
        return false;
    }
    for x in 0..m.len() {
        if m.signature(x) != n.signature(f[x]) {
            return false;
        }
        for i in 0..m.arity(x) {
            for &g in q.ops_of_output(m.signature(x).inputs[i]) {
                if let Some(y) = m.compose(x, i, g) {
                    if n.compose(f[x], i, g) != Some(f[y]) {
                        return false;
                    }
                }
            }
        }
        if m.coll.symmetric {
            for t in perm::adjacent_transpositions(m.arity(x)) {
                if m.act(x, &t).map(|y| f[y]) != n.act(f[x], &t) {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `f` is a map of bimodules.
pub fn is_bimodule_hom(m: &Bimodule, n: &Bimodule, p: &Multicategory, q: &Multicategory, f: &[usize]) -> bool {
    is_right_module_hom(&m.module, &n.module, q, f)
        && m.left.iter().all(|((phi, ms), &r)| {
            let img: Vec<usize> = ms.iter().map(|&x| f[x]).collect();
            n.left_act(*phi, &img).is_none_or(|v| v == f[r])
        })
        && p.colors() == n.module.out_colors.as_slice()
}

/// `ψ^*N` for `ψ: R → S`: elements are pairs of an element of `N` and a
/// lift of its input colors along the object map of `ψ`.
pub fn restrict_module(n: &RightModule, s: &Multicategory, r: &Multicategory, psi: &Multifunctor) -> Result<RightModule> {
    let law = crate::functor::check_multifunctor(r, s, psi);
    if !law.passed() {
        return Err(Error::Precondition(format!("the map `{}` → `{}` is not a multifunctor", r.name(), s.name())));
    }
    if n.coll.colors != s.colors() {
        return Err(Error::Domain(format!("`{}` is not a module over `{}`", n.name, s.name())));
    }
    let nr = r.colors().len();
    let mut elems: Vec<(usize, Vec<usize>)> = Vec::new();
    for x in 0..n.len() {
        let sig = n.signature(x);
        let choices: Vec<Vec<usize>> = sig.inputs.iter().map(|&c| (0..nr).filter(|&a| psi.objects[a] == c).collect()).collect();
        let mut lifts = vec![Vec::new()];
        for ch in &choices {
            lifts = lifts.into_iter().flat_map(|l: Vec<usize>| ch.iter().map(move |&a| {
                let mut l = l.clone();
                l.push(a);
                l
            })).collect();
        }
        elems.extend(lifts.into_iter().map(|l| (x, l)));
    }
    let index: HashMap<(usize, Vec<usize>), usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut coll = FiniteCollection::new(r.colors().to_vec(), n.coll.symmetric && r.symmetric());
    coll.arity_cap = n.coll.arity_cap;
    for (x, l) in &elems {
        let name = if nr == 1 { n.name_of(*x).to_string() } else { format!("{}[{}]", n.name_of(*x), l.iter().map(|&a| r.colors()[a].as_str()).collect::<Vec<_>>().join(",")) };
        coll.add_op(name, Signature::new(l.clone(), n.signature(*x).output));
    }
    if coll.symmetric {
        for (i, (x, l)) in elems.iter().enumerate() {
            for t in perm::adjacent_transpositions(l.len()) {
                let y = n.act(*x, &t).ok_or_else(|| Error::Structural(format!("missing action on `{}`", n.name_of(*x))))?;
                coll.set_action(i, &t, index[&(y, perm::permute(l, &t))]);
            }
        }
        coll.complete_actions()?;
    }
    let mut right = HashMap::new();
    for (i, (x, l)) in elems.iter().enumerate() {
        for (slot, &a) in l.iter().enumerate() {
            for &g in r.ops_of_output(a) {
                if let Some(y) = n.compose(*x, slot, *psi.image(g)) {
                    let mut l2 = l[..slot].to_vec();
                    l2.extend_from_slice(&r.signature(g).inputs);
                    l2.extend_from_slice(&l[slot + 1..]);
                    if let Some(&j) = index.get(&(y, l2)) {
                        right.insert((i, slot, g), j);
                    }
                }
            }
        }
    }
    Ok(RightModule { name: format!("{}^*{}", r.name(), n.name), coll, out_colors: n.out_colors.clone(), right })
}
