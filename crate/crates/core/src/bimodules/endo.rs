//! The endomorphism multicategory `End_Q(M)` of a right `Q`-module: its
//! operations `(a_1..a_n; a)` are module maps `M_{a_1} ⊗ .. ⊗ M_{a_n} → M_a`,
//! where the tensor places the factors side by side on disjoint sets of
//! leaves and `Q` acts factorwise.

use super::{is_bimodule_hom, Bimodule, RightModule};
use crate::error::{Error, Result};
use crate::functor::{is_equivalence, Multifunctor};
use crate::multicat::builtin::{all_signatures, materialize_with_ops};
use crate::multicat::{ColorId, Multicat, Multicategory, OpId, Signature};
use crate::perm;
use std::collections::HashMap;

/// Factors with the leaf labels each one occupies (ascending).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElem {
    pub factors: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
}

impl TensorElem {
    fn arity(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    fn signature(&self, m: &RightModule, output: ColorId) -> Signature {
        let mut inputs = vec![0; self.arity()];
        for (b, &f) in self.blocks.iter().zip(&self.factors) {
            for (r, &l) in b.iter().enumerate() {
                inputs[l] = m.signature(f).inputs[r];
            }
        }
        Signature::new(inputs, output)
    }
}

#[derive(Debug, Clone, Default)]
struct Domain {
    elems: Vec<TensorElem>,
    index: HashMap<TensorElem, usize>,
}

/// Ordered placements of leaves `0..n` into blocks of the given sizes.
fn placements(sizes: &[usize], symmetric: bool) -> Vec<Vec<Vec<usize>>> {
    let n: usize = sizes.iter().sum();
    if !symmetric {
        let mut start = 0;
        return vec![sizes
            .iter()
            .map(|&s| {
                let b = (start..start + s).collect();
                start += s;
                b
            })
            .collect()];
    }
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    fn rec(l: usize, n: usize, sizes: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if l == n {
            out.push(blocks.clone());
            return;
        }
        for j in 0..sizes.len() {
            if blocks[j].len() < sizes[j] {
                blocks[j].push(l);
                rec(l + 1, n, sizes, blocks, out);
                blocks[j].pop();
            }
        }
    }
    rec(0, n, sizes, &mut blocks, &mut out);
    out
}

fn domain(m: &RightModule, outputs: &[ColorId], cap: usize) -> Domain {
    let mut tuples: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    for &c in outputs {
        let opts = m.with_output(c);
        tuples = tuples
            .into_iter()
            .flat_map(|(t, a)| {
                opts.iter()
                    .filter(move |&&x| a + m.arity(x) <= cap)
                    .map(|&x| {
                        let mut t2 = t.clone();
                        t2.push(x);
                        (t2, a + m.arity(x))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut elems = Vec::new();
    for (factors, _) in tuples {
        let sizes: Vec<usize> = factors.iter().map(|&x| m.arity(x)).collect();
        for blocks in placements(&sizes, m.coll.symmetric) {
            elems.push(TensorElem { factors: factors.clone(), blocks });
        }
    }
    elems.sort_by_key(|e| (e.arity(), e.clone()));
    let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Domain { elems, index }
}

/// `e·τ`: leaf `τ(k)` becomes leaf `k`.
fn act_tensor(m: &RightModule, e: &TensorElem, tau: &[usize]) -> Option<TensorElem> {
    let inv = perm::inverse(tau);
    let mut factors = Vec::with_capacity(e.factors.len());
    let mut blocks = Vec::with_capacity(e.blocks.len());
    for (b, &f) in e.blocks.iter().zip(&e.factors) {
        let moved: Vec<usize> = b.iter().map(|&l| inv[l]).collect();
        let mut order: Vec<usize> = (0..b.len()).collect();
        order.sort_by_key(|&r| moved[r]);
        blocks.push(order.iter().map(|&r| moved[r]).collect());
        factors.push(m.act(f, &order)?);
    }
    Some(TensorElem { factors, blocks })
}

/// `e ∘_l g` for a `Q`-operation `g` of arity `a`.
fn compose_tensor(m: &RightModule, e: &TensorElem, l: usize, g: OpId, a: usize) -> Option<TensorElem> {
    let (j, r) = e.blocks.iter().enumerate().find_map(|(j, b)| b.iter().position(|&v| v == l).map(|r| (j, r)))?;
    let shift = |v: usize| if v > l { v + a - 1 } else { v };
    let mut factors = e.factors.clone();
    factors[j] = m.compose(e.factors[j], r, g)?;
    let blocks = e
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
    Some(TensorElem { factors, blocks })
}

/// Assignments `x ↦ f(x)` consistent with unary constraints: `edges(x, v)`
/// lists the elements whose value is forced once `x ↦ v`, with the forced
/// value (`None` when it does not exist).
fn propagate_search(
    n: usize,
    candidates: &dyn Fn(usize) -> Vec<usize>,
    edges: &dyn Fn(usize, usize) -> Vec<(usize, Option<usize>)>,
    budget: usize,
) -> Result<Vec<Vec<usize>>> {
    fn assign(x: usize, v: usize, f: &mut [Option<usize>], edges: &dyn Fn(usize, usize) -> Vec<(usize, Option<usize>)>) -> bool {
        let mut stack = vec![(x, v)];
        f[x] = Some(v);
        while let Some((x, v)) = stack.pop() {
            for (y, w) in edges(x, v) {
                let Some(w) = w else { return false };
                match f[y] {
                    Some(u) if u != w => return false,
                    Some(_) => {}
                    None => {
                        f[y] = Some(w);
                        stack.push((y, w));
                    }
                }
            }
        }
        true
    }
    fn rec(
        f: Vec<Option<usize>>,
        candidates: &dyn Fn(usize) -> Vec<usize>,
        edges: &dyn Fn(usize, usize) -> Vec<(usize, Option<usize>)>,
        budget: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let Some(x) = f.iter().position(|v| v.is_none()) else {
            if out.len() == budget {
                return Err(Error::Budget { budget, partial: out.len() });
            }
            out.push(f.into_iter().map(|v| v.unwrap()).collect());
            return Ok(());
        };
        for v in candidates(x) {
            let mut g = f.clone();
            if assign(x, v, &mut g, edges) {
                rec(g, candidates, edges, budget, out)?;
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(vec![None; n], candidates, edges, budget, &mut out)?;
    Ok(out)
}

struct EndLazy<'a> {
    m: &'a RightModule,
    q: &'a Multicategory,
    op_cap: usize,
    domains: HashMap<Vec<ColorId>, Domain>,
    budget: usize,
}

impl EndLazy<'_> {
    fn homs(&self, sig: &Signature) -> Result<Vec<Vec<usize>>> {
        let d = &self.domains[&sig.inputs];
        let m = self.m;
        let candidates = |x: usize| -> Vec<usize> {
            let want = d.elems[x].signature(m, sig.output);
            (0..m.len()).filter(|&v| m.signature(v) == &want).collect()
        };
        let edges = |x: usize, v: usize| -> Vec<(usize, Option<usize>)> {
            let e = &d.elems[x];
            let mut out = Vec::new();
            if m.coll.symmetric {
                for t in perm::adjacent_transpositions(e.arity()) {
                    if let Some(y) = act_tensor(m, e, &t).and_then(|e2| d.index.get(&e2).copied()) {
                        out.push((y, m.act(v, &t)));
                    }
                }
            }
            let sig_e = e.signature(m, sig.output);
            for l in 0..e.arity() {
                for &g in self.q.ops_of_output(sig_e.inputs[l]) {
                    let a = self.q.arity(g);
                    if let Some(y) = compose_tensor(m, e, l, g, a).and_then(|e2| d.index.get(&e2).copied()) {
                        out.push((y, m.compose(v, l, g)));
                    }
                }
            }
            out
        };
        propagate_search(d.elems.len(), &candidates, &edges, self.budget)
    }

    fn value(&self, f: &(Signature, Vec<usize>), e: &TensorElem) -> Option<usize> {
        self.domains[&f.0.inputs].index.get(e).map(|&i| f.1[i])
    }
}

impl Multicat for EndLazy<'_> {
    type Op = (Signature, Vec<usize>);

    fn color_count(&self) -> usize {
        self.m.out_colors.len()
    }

    fn color_name(&self, c: ColorId) -> String {
        self.m.out_colors[c].clone()
    }

    fn is_symmetric(&self) -> bool {
        self.m.coll.symmetric
    }

    fn arity_cap(&self) -> Option<usize> {
        Some(self.op_cap)
    }

    fn signature_of(&self, op: &Self::Op) -> Signature {
        op.0.clone()
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<Self::Op>> {
        Ok(self.homs(sig)?.into_iter().map(|t| (sig.clone(), t)).collect())
    }

    fn compose(&self, f: &Self::Op, i: usize, g: &Self::Op) -> Option<Self::Op> {
        let k = g.0.arity();
        let sig = f.0.graft(i, &g.0);
        if sig.arity() > self.op_cap {
            return None;
        }
        let d = self.domains.get(&sig.inputs)?;
        let mut table = Vec::with_capacity(d.elems.len());
        for e in &d.elems {
            let mut union: Vec<usize> = e.blocks[i..i + k].iter().flatten().copied().collect();
            union.sort();
            let pos: HashMap<usize, usize> = union.iter().enumerate().map(|(p, &l)| (l, p)).collect();
            let inner = TensorElem { factors: e.factors[i..i + k].to_vec(), blocks: e.blocks[i..i + k].iter().map(|b| b.iter().map(|l| pos[l]).collect()).collect() };
            let v = self.value(g, &inner)?;
            let mut factors = e.factors[..i].to_vec();
            factors.push(v);
            factors.extend_from_slice(&e.factors[i + k..]);
            let mut blocks = e.blocks[..i].to_vec();
            blocks.push(union);
            blocks.extend_from_slice(&e.blocks[i + k..]);
            table.push(self.value(f, &TensorElem { factors, blocks })?);
        }
        Some((sig, table))
    }

    fn act(&self, f: &Self::Op, sigma: &[usize]) -> Option<Self::Op> {
        let sig = f.0.permuted(sigma);
        let inv = perm::inverse(sigma);
        let d = self.domains.get(&sig.inputs)?;
        let table = d
            .elems
            .iter()
            .map(|e| self.value(f, &TensorElem { factors: perm::permute(&e.factors, &inv), blocks: perm::permute(&e.blocks, &inv) }))
            .collect::<Option<Vec<_>>>()?;
        Some((sig, table))
    }

    fn unit(&self, c: ColorId) -> Self::Op {
        let d = &self.domains[&vec![c]];
        (Signature::new(vec![c], c), d.elems.iter().map(|e| e.factors[0]).collect())
    }

    fn op_label(&self, op: &Self::Op) -> String {
        let parts: Vec<&str> = op.1.iter().map(|&v| self.m.name_of(v)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// `End_Q(M)` with operations of arity at most `op_cap`, evaluated on tensor
/// elements with at most `elem_cap` leaves.
#[derive(Debug, Clone)]
pub struct EndModule {
    pub multicategory: Multicategory,
    /// Each operation as a table over the tensor elements of its inputs.
    pub ops: Vec<(Signature, Vec<usize>)>,
    index: HashMap<(Signature, Vec<usize>), OpId>,
    domains: HashMap<Vec<ColorId>, Domain>,
}

impl EndModule {
    pub fn find(&self, sig: &Signature, table: &[usize]) -> Option<OpId> {
        self.index.get(&(sig.clone(), table.to_vec())).copied()
    }

    /// The tensor elements an operation with these inputs is evaluated on.
    pub fn domain(&self, inputs: &[ColorId]) -> &[TensorElem] {
        self.domains.get(inputs).map_or(&[], |d| d.elems.as_slice())
    }
}

fn all_domains(m: &RightModule, op_cap: usize, elem_cap: usize) -> HashMap<Vec<ColorId>, Domain> {
    let mut domains = HashMap::new();
    for sig in all_signatures(m.out_colors.len(), op_cap) {
        domains.entry(sig.inputs.clone()).or_insert_with(|| domain(m, &sig.inputs, elem_cap));
    }
    domains
}

pub fn end_right_module(m: &RightModule, q: &Multicategory, op_cap: usize, elem_cap: usize, budget: usize) -> Result<EndModule> {
    if m.coll.colors != q.colors() {
        return Err(Error::Domain(format!("`{}` is not a module over `{}`", m.name, q.name())));
    }
    let domains = all_domains(m, op_cap, elem_cap);
    let lazy = EndLazy { m, q, op_cap, domains, budget };
    let support = all_signatures(m.out_colors.len(), op_cap);
    let (mut multicategory, ops) = materialize_with_ops(&lazy, "End", &support, budget)?;
    multicategory.set_name(format!("End_{}({})", q.name(), m.name));
    let index = ops.iter().cloned().enumerate().map(|(i, op)| (op, OpId(i as u32))).collect();
    Ok(EndModule { multicategory, ops, index, domains: lazy.domains })
}

/// Evaluates `γ(φ; m_1..m_n)` placed on the leaves of `e`, for `Q`-operations.
fn evaluate(q: &Multicategory, phi: OpId, e: &TensorElem) -> Option<OpId> {
    let ops: Vec<OpId> = e.factors.iter().map(|&f| OpId(f as u32)).collect();
    let planar = q.compose_full(&phi, &ops)?;
    let labels: Vec<usize> = e.blocks.iter().flatten().copied().collect();
    let sigma = perm::inverse(&labels);
    if perm::is_identity(&sigma) {
        Some(planar)
    } else {
        q.action(planar, &sigma)
    }
}

/// The map `Q → End_Q(Q)` sending `φ` to left composition with `φ`.
pub fn regular_map(q: &Multicategory, end: &EndModule) -> Option<Multifunctor> {
    let ops = q
        .op_ids()
        .map(|phi| {
            let sig = q.signature(phi);
            if sig.arity() > end.multicategory.arity_cap.unwrap_or(usize::MAX) {
                return None;
            }
            let table = end.domain(&sig.inputs).iter().map(|e| evaluate(q, phi, e).map(|o| o.index())).collect::<Option<Vec<_>>>()?;
            end.find(sig, &table)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Multifunctor { objects: (0..q.colors().len()).collect(), ops })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedAnalysis {
    /// Some family of unary elements `u_x ∈ M(x; x)` induces a bimodule map
    /// from `P ∘ Q`.
    pub pointed: bool,
    pub basepoint: Option<Vec<usize>>,
    /// Whether a bimodule map `P ∘ Q → M` was found by searching all right
    /// module maps out of `P ∘ Q`.
    pub map_from_free: bool,
    /// `q ↦ u·q` is a bijection `Q → M` in every signature, so that
    /// `Q → End_Q(M)` is an equivalence.
    pub quasi_free: bool,
    /// A signature on which `q ↦ u·q` fails to be bijective.
    pub witness: Option<String>,
}

/// The free bimodule `P ∘ Q` on the units, up to `max_arity`.
pub fn free_bimodule(p: &Multicategory, q: &Multicategory, max_arity: usize) -> Result<Bimodule> {
    let module = RightModule::free(&p.collection(), q, p.colors().to_vec(), max_arity)?;
    let cp = crate::trees::circle_product(&p.collection(), &q.collection(), max_arity)?;
    let pc = p.collection();
    let mut left = HashMap::new();
    for phi in p.op_ids() {
        for es in super::tuples(&module, &p.signature(phi).inputs, Some(max_arity)) {
            let roots: Vec<OpId> = es.iter().map(|&x| OpId(cp.elems[x].root as u32)).collect();
            let Some(root) = p.compose_full(&phi, &roots) else { continue };
            let mut blocks = Vec::new();
            let mut inners = Vec::new();
            let mut offset = 0;
            for &x in &es {
                let e = &cp.elems[x];
                blocks.extend(e.blocks.iter().map(|b| b.iter().map(|&l| l + offset).collect::<Vec<_>>()));
                inners.extend_from_slice(&e.inners);
                offset += module.arity(x);
            }
            let c = crate::trees::circle::canonical_elem(&pc, &crate::trees::CircleElem { root: root.index(), blocks, inners });
            if let Some(y) = cp.find(&c) {
                left.insert((phi, es), y);
            }
        }
    }
    Ok(Bimodule { module, left })
}

/// The map `P ∘ Q → M` induced by unary elements `u`: `φ(q_1..q_n) ↦ φ(u..)·(q_1..q_n)`.
fn induced(m: &Bimodule, p: &Multicategory, free: &Bimodule, cp: &crate::trees::CircleProduct, u: &[usize]) -> Option<Vec<usize>> {
    (0..free.module.len())
        .map(|x| {
            let e = &cp.elems[x];
            let root = OpId(e.root as u32);
            let us: Vec<usize> = p.signature(root).inputs.iter().map(|&c| u[c]).collect();
            let mut v = m.left_act(root, &us)?;
            for j in (0..e.inners.len()).rev() {
                v = m.module.compose(v, j, OpId(e.inners[j] as u32))?;
            }
            let labels: Vec<usize> = e.blocks.iter().flatten().copied().collect();
            m.module.act(v, &perm::inverse(&labels))
        })
        .collect()
}

/// Basepoints, maps from the free bimodule and the quasi-free condition,
/// for a bimodule over `P` and `Q` sharing their colors.
pub fn analyze_pointed(m: &Bimodule, p: &Multicategory, q: &Multicategory, max_arity: usize, budget: usize) -> Result<PointedAnalysis> {
    if p.colors() != q.colors() || m.module.out_colors != p.colors() {
        return Err(Error::Domain("pointedness is analyzed over multicategories sharing their colors".into()));
    }
    let free = free_bimodule(p, q, max_arity)?;
    let cp = crate::trees::circle_product(&p.collection(), &q.collection(), max_arity)?;
    let n = p.colors().len();
    let unary: Vec<Vec<usize>> = (0..n).map(|c| (0..m.module.len()).filter(|&x| m.module.signature(x) == &Signature::new(vec![c], c)).collect()).collect();

    let mut basepoints = Vec::new();
    let mut u = vec![0; n];
    let mut idx = vec![0; n];
    if unary.iter().all(|v| !v.is_empty()) {
        loop {
            for c in 0..n {
                u[c] = unary[c][idx[c]];
            }
            if let Some(f) = induced(m, p, &free, &cp, &u) {
                if is_bimodule_hom(&free, m, p, q, &f) {
                    basepoints.push(u.clone());
                }
            }
            let mut k = n;
            let more = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < unary[k].len() {
                    break true;
                }
                idx[k] = 0;
            };
            if !more {
                break;
            }
        }
    }

    // Independent detector: all right module maps out of `P ∘ Q`, filtered.
    let fm = &free.module;
    let mm = &m.module;
    let candidates = |x: usize| -> Vec<usize> { (0..mm.len()).filter(|&v| mm.signature(v) == fm.signature(x)).collect() };
    let edges = |x: usize, v: usize| -> Vec<(usize, Option<usize>)> {
        let mut out = Vec::new();
        if fm.coll.symmetric {
            for t in perm::adjacent_transpositions(fm.arity(x)) {
                out.push((fm.act(x, &t).unwrap(), mm.act(v, &t)));
            }
        }
        for ((y, i, g), &z) in fm.right.iter() {
            if *y == x {
                out.push((z, mm.compose(v, *i, *g)));
            }
        }
        out
    };
    let maps = propagate_search(fm.len(), &candidates, &edges, budget)?;
    let map_from_free = maps.iter().any(|f| is_bimodule_hom(&free, m, p, q, f));

    let mut quasi_free = false;
    let mut witness = None;
    if let Some(u) = basepoints.first() {
        let mut rho: HashMap<usize, usize> = HashMap::new();
        let mut counts: HashMap<Signature, (usize, usize)> = HashMap::new();
        for g in q.op_ids() {
            let sig = q.signature(g).clone();
            counts.entry(sig.clone()).or_default().0 += 1;
            if let Some(v) = mm.compose(u[sig.output], 0, g) {
                rho.insert(g.index(), v);
            }
        }
        for x in 0..mm.len() {
            counts.entry(mm.signature(x).clone()).or_default().1 += 1;
        }
        let mut images: Vec<usize> = rho.values().copied().collect();
        images.sort();
        images.dedup();
        let injective = images.len() == rho.len() && rho.len() == q.op_count();
        let mut bad: Vec<&Signature> = counts.iter().filter(|(_, (a, b))| a != b).map(|(s, _)| s).collect();
        bad.sort();
        quasi_free = injective && bad.is_empty();
        if let Some(s) = bad.first() {
            witness = Some(s.display(p.colors()));
        } else if !injective {
            witness = Some("the action on the basepoint is not injective".into());
        }
        if quasi_free {
            let end = end_right_module(mm, q, max_arity, max_arity, budget)?;
            let back: HashMap<usize, OpId> = rho.iter().map(|(&g, &v)| (v, OpId(g as u32))).collect();
            let ops = q
                .op_ids()
                .map(|phi| {
                    let sig = q.signature(phi);
                    let table = end
                        .domain(&sig.inputs)
                        .iter()
                        .map(|e| {
                            let pulled = TensorElem { factors: e.factors.iter().map(|v| back[v].index()).collect(), blocks: e.blocks.clone() };
                            evaluate(q, phi, &pulled).map(|o| rho[&o.index()])
                        })
                        .collect::<Option<Vec<_>>>()?;
                    end.find(sig, &table)
                })
                .collect::<Option<Vec<_>>>();
            quasi_free = match ops {
                Some(ops) => is_equivalence(q, &end.multicategory, &Multifunctor { objects: (0..n).collect(), ops }).is_equivalence(),
                None => false,
            };
        }
    }
    Ok(PointedAnalysis { pointed: !basepoints.is_empty(), basepoint: basepoints.first().cloned(), map_from_free, quasi_free, witness })
}
