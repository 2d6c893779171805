//! The multicategory `Op` whose colors are arities and whose operations
//! `Op(n_1..n_k; n)` are planar trees with numbered vertices (vertex `i` of
//! valence `n_i`) and numbered leaves. Numbered vertices leave no room for
//! nontrivial planar isomorphisms, so the labeled tree is its own canonical form.
//!
//! Text encoding: a vertex is `v<i>[..]` with its children in planar order,
//! a leaf is its number; both are 1-based. The bare edge is `1`.

use super::planar::PlanarTree;
use crate::error::{Error, Result};
use crate::multicat::builtin::materialize_with_ops;
use crate::multicat::{ColorId, Multicat, Multicategory, Signature};
use crate::perm::{self, Perm};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpTree {
    Leaf(usize),
    Vertex(usize, Vec<OpTree>),
}

impl OpTree {
    fn shape(&self) -> PlanarTree {
        match self {
            OpTree::Leaf(_) => PlanarTree::Leaf,
            OpTree::Vertex(_, cs) => PlanarTree::Vertex(cs.iter().map(|c| c.shape()).collect()),
        }
    }

    fn map(&self, leaf: &mut dyn FnMut(usize) -> OpTree, vertex: &dyn Fn(usize) -> usize) -> OpTree {
        match self {
            OpTree::Leaf(l) => leaf(*l),
            OpTree::Vertex(v, cs) => OpTree::Vertex(vertex(*v), cs.iter().map(|c| c.map(leaf, vertex)).collect()),
        }
    }

    fn find(&self, v: usize) -> Option<&[OpTree]> {
        match self {
            OpTree::Leaf(_) => None,
            OpTree::Vertex(w, cs) if *w == v => Some(cs),
            OpTree::Vertex(_, cs) => cs.iter().find_map(|c| c.find(v)),
        }
    }

    fn leaf_labels(&self, out: &mut Vec<usize>) {
        match self {
            OpTree::Leaf(l) => out.push(*l),
            OpTree::Vertex(_, cs) => cs.iter().for_each(|c| c.leaf_labels(out)),
        }
    }

    /// Replaces the vertex `v` by `s`, leaf `j` of `s` receiving child `j` of `v`.
    fn substitute(&self, v: usize, s: &OpTree, relabel: &dyn Fn(usize) -> usize, inner: &dyn Fn(usize) -> usize) -> OpTree {
        match self {
            OpTree::Leaf(l) => OpTree::Leaf(*l),
            OpTree::Vertex(w, cs) => {
                let kids: Vec<OpTree> = cs.iter().map(|c| c.substitute(v, s, relabel, inner)).collect();
                if *w == v {
                    s.map(&mut |j| kids[j].clone(), inner)
                } else {
                    OpTree::Vertex(relabel(*w), kids)
                }
            }
        }
    }
}

/// An operation of `Op`: the triple `(T, σ, τ)` as a tree whose vertices
/// carry `σ⁻¹` and whose leaves carry `τ⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpOperation {
    pub valences: Vec<usize>,
    pub leaves: usize,
    pub tree: OpTree,
}

impl OpOperation {
    /// `(t_n, τ)`: the corolla whose leaf `i` is the edge `τ(i)`.
    pub fn corolla(tau: &[usize]) -> Self {
        let inv = perm::inverse(tau);
        OpOperation { valences: vec![tau.len()], leaves: tau.len(), tree: OpTree::Vertex(0, inv.into_iter().map(OpTree::Leaf).collect()) }
    }

    /// The edge without vertices, in `Op(;1)`.
    pub fn edge() -> Self {
        OpOperation { valences: Vec::new(), leaves: 1, tree: OpTree::Leaf(0) }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.valences.clone(), self.leaves)
    }

    pub fn shape(&self) -> PlanarTree {
        self.tree.shape()
    }

    /// Leaf numbers in planar order.
    pub fn leaf_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.tree.leaf_labels(&mut out);
        out
    }

    /// Children of vertex `v`, in planar order.
    pub fn children(&self, v: usize) -> Option<&[OpTree]> {
        self.tree.find(v)
    }

    /// `self ∘_slot inner`: the vertex numbered `slot` is replaced by the tree of
    /// `inner`; vertices are renumbered blockwise.
    pub fn compose(&self, slot: usize, inner: &OpOperation) -> Result<OpOperation> {
        let k = self.valences.len();
        if slot >= k {
            return Err(Error::SlotOutOfRange { op: self.to_string(), slot, arity: k });
        }
        if self.valences[slot] != inner.leaves {
            return Err(Error::ColorMismatch {
                outer: self.to_string(),
                slot,
                inner: inner.to_string(),
                expected: self.valences[slot].to_string(),
                found: inner.leaves.to_string(),
            });
        }
        let m = inner.valences.len();
        let tree = self.tree.substitute(slot, &inner.tree, &|w| if w > slot { w + m - 1 } else { w }, &|w| w + slot);
        let mut valences = self.valences[..slot].to_vec();
        valences.extend_from_slice(&inner.valences);
        valences.extend_from_slice(&self.valences[slot + 1..]);
        Ok(OpOperation { valences, leaves: self.leaves, tree })
    }

    /// Renumbers vertices: vertex `σ(k)` becomes vertex `k`.
    pub fn act(&self, sigma: &[usize]) -> OpOperation {
        let inv = perm::inverse(sigma);
        OpOperation { valences: perm::permute(&self.valences, sigma), leaves: self.leaves, tree: self.tree.map(&mut OpTree::Leaf, &|v| inv[v]) }
    }

    pub fn parse(text: &str) -> Result<OpOperation> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_op(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Domain(format!("trailing input in `{text}`")));
        }
        let mut vals: Vec<Option<usize>> = Vec::new();
        collect_valences(&tree, &mut vals)?;
        let valences: Vec<usize> = vals.iter().map(|v| v.ok_or_else(|| Error::Domain(format!("vertex numbers in `{text}` are not 1..k")))).collect::<Result<_>>()?;
        let mut leaves = Vec::new();
        tree.leaf_labels(&mut leaves);
        if !perm::is_permutation(&leaves) {
            return Err(Error::Domain(format!("leaf numbers in `{text}` are not 1..n")));
        }
        Ok(OpOperation { valences, leaves: leaves.len(), tree })
    }
}

fn collect_valences(t: &OpTree, vals: &mut Vec<Option<usize>>) -> Result<()> {
    if let OpTree::Vertex(v, cs) = t {
        if vals.len() <= *v {
            vals.resize(*v + 1, None);
        }
        if vals[*v].replace(cs.len()).is_some() {
            return Err(Error::Domain(format!("vertex {} appears twice", v + 1)));
        }
        for c in cs {
            collect_valences(c, vals)?;
        }
    }
    Ok(())
}

fn parse_number(s: &[char], pos: &mut usize) -> Result<usize> {
    let start = *pos;
    while s.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
        *pos += 1;
    }
    let n: usize = s[start..*pos].iter().collect::<String>().parse().map_err(|_| Error::Domain(format!("expected a number at {start}")))?;
    n.checked_sub(1).ok_or_else(|| Error::Domain("numbers are 1-based".into()))
}

fn parse_op(s: &[char], pos: &mut usize) -> Result<OpTree> {
    if s.get(*pos) == Some(&'v') {
        *pos += 1;
        let v = parse_number(s, pos)?;
        if s.get(*pos) != Some(&'[') {
            return Err(Error::Domain(format!("expected `[` at {}", *pos)));
        }
        *pos += 1;
        let mut cs = Vec::new();
        if s.get(*pos) == Some(&']') {
            *pos += 1;
            return Ok(OpTree::Vertex(v, cs));
        }
        loop {
            cs.push(parse_op(s, pos)?);
            match s.get(*pos) {
                Some(',') => *pos += 1,
                Some(']') => {
                    *pos += 1;
                    return Ok(OpTree::Vertex(v, cs));
                }
                _ => return Err(Error::Domain(format!("expected `,` or `]` at {}", *pos))),
            }
        }
    }
    Ok(OpTree::Leaf(parse_number(s, pos)?))
}

impl fmt::Display for OpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpTree::Leaf(l) => write!(f, "{}", l + 1),
            OpTree::Vertex(v, cs) => {
                write!(f, "v{}[", v + 1)?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for OpOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tree.fmt(f)
    }
}

/// Full composition: vertex `i` of `outer` is replaced by `inners[i]`.
pub fn op_compose(outer: &OpOperation, inners: &[OpOperation]) -> Result<OpOperation> {
    if inners.len() != outer.valences.len() {
        return Err(Error::Domain(format!("{} inner operations for {} vertices", inners.len(), outer.valences.len())));
    }
    let mut cur = outer.clone();
    for (i, q) in inners.iter().enumerate().rev() {
        cur = cur.compose(i, q)?;
    }
    Ok(cur)
}

/// Vertex-numbered planar trees using exactly the vertices in `set`, leaves
/// unnumbered (all `0`).
fn shapes(valences: &[usize], set: u32, memo: &mut HashMap<u32, Vec<OpTree>>) -> Vec<OpTree> {
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    let mut out = Vec::new();
    for root in 0..valences.len() {
        if set & (1 << root) == 0 {
            continue;
        }
        let rest: Vec<usize> = (0..valences.len()).filter(|&v| v != root && set & (1 << v) != 0).collect();
        let slots = valences[root];
        if slots == 0 && !rest.is_empty() {
            continue;
        }
        // Assign each remaining vertex to a child slot.
        let mut assign = vec![0usize; rest.len()];
        loop {
            let mut masks = vec![0u32; slots];
            for (i, &v) in rest.iter().enumerate() {
                masks[assign[i]] |= 1 << v;
            }
            let mut options: Vec<Vec<OpTree>> = Vec::with_capacity(slots);
            for &m in &masks {
                options.push(if m == 0 { vec![OpTree::Leaf(0)] } else { shapes(valences, m, memo) });
            }
            let mut idx = vec![0usize; slots];
            if options.iter().all(|o| !o.is_empty()) {
                loop {
                    out.push(OpTree::Vertex(root, idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect()));
                    let mut k = slots;
                    let more = loop {
                        if k == 0 {
                            break false;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < options[k].len() {
                            break true;
                        }
                        idx[k] = 0;
                    };
                    if !more {
                        break;
                    }
                }
            }
            if !crate::multicat::builtin::next_tuple(&mut assign, slots) {
                break;
            }
        }
    }
    out.sort();
    memo.insert(set, out.clone());
    out
}

/// Every operation of `Op(valences; n)`, in sorted order. Fails once more than
/// `cap` operations have been produced.
pub fn op_hom_set(valences: &[usize], n: usize, cap: usize) -> Result<Vec<OpOperation>> {
    let k = valences.len();
    if k > 16 {
        return Err(Error::Domain("at most 16 vertices are supported".into()));
    }
    if k == 0 {
        return Ok(if n == 1 { vec![OpOperation::edge()] } else { Vec::new() });
    }
    let total: usize = valences.iter().sum();
    if total + 1 != n + k {
        return Ok(Vec::new());
    }
    let mut memo = HashMap::new();
    let trees = shapes(valences, (1u32 << k) - 1, &mut memo);
    let perms = perm::all(n);
    let mut out = Vec::new();
    for t in &trees {
        for p in &perms {
            if out.len() == cap {
                return Err(Error::Cap { what: format!("Op({valences:?}; {n}) has more than {cap} operations"), partial: out.len() });
            }
            let mut i = 0;
            let tree = t.map(
                &mut |_| {
                    i += 1;
                    OpTree::Leaf(p[i - 1])
                },
                &|v| v,
            );
            out.push(OpOperation { valences: valences.to_vec(), leaves: n, tree });
        }
    }
    out.sort();
    Ok(out)
}

/// `Op` restricted to colors `0..=max_color` and at most `max_vertices`
/// vertices (its arity cap).
#[derive(Debug, Clone)]
pub struct OpOperad {
    pub max_color: usize,
    pub max_vertices: usize,
    pub cap: usize,
}

impl OpOperad {
    pub fn new(max_color: usize, max_vertices: usize) -> Self {
        OpOperad { max_color, max_vertices, cap: 1 << 20 }
    }

    /// Signatures carrying operations.
    pub fn support(&self) -> Vec<Signature> {
        let mut out = Vec::new();
        if self.max_color >= 1 {
            out.push(Signature::new(Vec::new(), 1));
        }
        for k in 1..=self.max_vertices {
            let mut vals = vec![0; k];
            loop {
                let total: usize = vals.iter().sum();
                if total + 1 >= k && total + 1 - k <= self.max_color {
                    out.push(Signature::new(vals.clone(), total + 1 - k));
                }
                if !crate::multicat::builtin::next_tuple(&mut vals, self.max_color + 1) {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    pub fn materialize(&self) -> Result<Multicategory> {
        self.materialize_with_ops().map(|(m, _)| m)
    }

    /// The table together with the tree behind each `OpId`.
    pub fn materialize_with_ops(&self) -> Result<(Multicategory, Vec<OpOperation>)> {
        materialize_with_ops(self, &format!("Op{}v{}", self.max_color, self.max_vertices), &self.support(), usize::MAX)
    }
}

impl Multicat for OpOperad {
    type Op = OpOperation;

    fn color_count(&self) -> usize {
        self.max_color + 1
    }

    fn color_name(&self, c: ColorId) -> String {
        c.to_string()
    }

    fn is_symmetric(&self) -> bool {
        true
    }

    fn arity_cap(&self) -> Option<usize> {
        Some(self.max_vertices)
    }

    fn signature_of(&self, op: &OpOperation) -> Signature {
        op.signature()
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<OpOperation>> {
        if sig.arity() > self.max_vertices || sig.output > self.max_color || sig.inputs.iter().any(|&c| c > self.max_color) {
            return Ok(Vec::new());
        }
        op_hom_set(&sig.inputs, sig.output, self.cap)
    }

    fn compose(&self, p: &OpOperation, slot: usize, q: &OpOperation) -> Option<OpOperation> {
        if p.valences.len() + q.valences.len() - 1 > self.max_vertices {
            return None;
        }
        p.compose(slot, q).ok()
    }

    fn act(&self, p: &OpOperation, sigma: &[usize]) -> Option<OpOperation> {
        Some(p.act(sigma))
    }

    fn unit(&self, c: ColorId) -> OpOperation {
        OpOperation::corolla(&perm::identity(c))
    }

    fn op_label(&self, op: &OpOperation) -> String {
        op.to_string()
    }
}

/// `τ ↦ (t_n, τ)`.
pub fn corolla_embedding(n: usize) -> Vec<(Perm, OpOperation)> {
    perm::all(n).into_iter().map(|t| {
        let c = OpOperation::corolla(&t);
        (t, c)
    }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["1", "v1[]", "v2[v1[2,1],3]", "v1[v3[],v2[1]]"] {
            assert_eq!(OpOperation::parse(s).unwrap().to_string(), s);
        }
        assert!(OpOperation::parse("v1[1,1]").is_err());
        assert!(OpOperation::parse("v2[1]").is_err());
    }

    #[test]
    fn corolla_group_law_by_hand() {
        let tau = [1, 2, 0];
        let rho = [0, 2, 1];
        let lhs = OpOperation::corolla(&tau).compose(0, &OpOperation::corolla(&rho)).unwrap();
        assert_eq!(lhs, OpOperation::corolla(&perm::compose(&rho, &tau)));
    }

    #[test]
    fn two_vertex_substitution_by_hand() {
        // Outer: vertex 2 (binary) at the root, vertex 1 (binary) on its second input.
        let outer = OpOperation::parse("v2[3,v1[1,2]]").unwrap();
        let inner = OpOperation::parse("v1[2,v2[1,3]]").unwrap();
        assert_eq!(inner.valences, vec![2, 2]);
        let outer3 = OpOperation::parse("v2[4,v1[1,2,3]]").unwrap();
        let got = outer3.compose(0, &inner).unwrap();
        // Inner leaf j receives child j of the replaced vertex; inner vertices
        // become 1 and 2, the old vertex 2 becomes 3.
        assert_eq!(got.to_string(), "v3[4,v1[2,v2[1,3]]]");
        assert_eq!(got.valences, vec![2, 2, 2]);
        assert!(outer.compose(0, &inner).is_err());
    }
}
