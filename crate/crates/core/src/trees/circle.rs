//! The composition product `M ∘ N` of collections over a shared color set:
//! an `M`-operation at the root with `N`-operations on its inputs.
//!
//! An element is a root, a block of leaf numbers for every root input
//! (ascending within the block; input `r` of the inner operation is the
//! `r`-th leaf of its block) and the inner operations. Elements related by a
//! simultaneous permutation of root inputs, blocks and inner operations are
//! identified; the least one is kept.

use crate::error::{Error, Result};
use crate::multicat::builtin::next_tuple;
use crate::multicat::{ColorId, FiniteCollection, Signature};
use crate::perm;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircleElem {
    pub root: usize,
    pub blocks: Vec<Vec<usize>>,
    pub inners: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CircleProduct {
    pub collection: FiniteCollection,
    pub elems: Vec<CircleElem>,
    index: HashMap<CircleElem, usize>,
}

impl CircleProduct {
    pub fn find(&self, e: &CircleElem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Element counts by arity.
    pub fn counts(&self, max_arity: usize) -> Vec<usize> {
        let mut out = vec![0; max_arity + 1];
        for (_, s) in &self.collection.ops {
            out[s.arity()] += 1;
        }
        out
    }
}

/// Least representative under simultaneous permutation of root inputs.
pub fn canonical_elem(m: &FiniteCollection, e: &CircleElem) -> CircleElem {
    if !m.symmetric {
        return e.clone();
    }
    let k = e.blocks.len();
    perm::all(k)
        .into_iter()
        .map(|s| CircleElem { root: m.action(e.root, &s).unwrap(), blocks: perm::permute(&e.blocks, &s), inners: perm::permute(&e.inners, &s) })
        .min()
        .unwrap()
}

/// `e·τ`: leaf `τ(k)` becomes leaf `k`.
pub fn act_elem(m: &FiniteCollection, n: &FiniteCollection, e: &CircleElem, tau: &[usize]) -> CircleElem {
    let inv = perm::inverse(tau);
    let mut blocks = Vec::with_capacity(e.blocks.len());
    let mut inners = Vec::with_capacity(e.inners.len());
    for (b, &inner) in e.blocks.iter().zip(&e.inners) {
        let moved: Vec<usize> = b.iter().map(|&l| inv[l]).collect();
        let mut order: Vec<usize> = (0..b.len()).collect();
        order.sort_by_key(|&r| moved[r]);
        blocks.push(order.iter().map(|&r| moved[r]).collect());
        inners.push(n.action(inner, &order).unwrap());
    }
    canonical_elem(m, &CircleElem { root: e.root, blocks, inners })
}

fn signature(m: &FiniteCollection, n: &FiniteCollection, e: &CircleElem) -> Signature {
    let arity: usize = e.blocks.iter().map(|b| b.len()).sum();
    let mut inputs = vec![0; arity];
    for (b, &inner) in e.blocks.iter().zip(&e.inners) {
        for (r, &l) in b.iter().enumerate() {
            inputs[l] = n.ops[inner].1.inputs[r];
        }
    }
    Signature::new(inputs, m.ops[e.root].1.output)
}

pub fn elem_label(m: &FiniteCollection, n: &FiniteCollection, e: &CircleElem) -> String {
    let parts: Vec<String> = e
        .blocks
        .iter()
        .zip(&e.inners)
        .map(|(b, &i)| {
            let ls: Vec<String> = b.iter().map(|l| (l + 1).to_string()).collect();
            format!("{}[{}]", n.ops[i].0, ls.join(","))
        })
        .collect();
    format!("{}({})", m.ops[e.root].0, parts.join(","))
}

/// `M ∘ N` up to arity `max_arity`. Both collections must carry completed
/// actions when symmetric.
pub fn circle_product(m: &FiniteCollection, n: &FiniteCollection, max_arity: usize) -> Result<CircleProduct> {
    if m.colors != n.colors {
        return Err(Error::Domain("composition product of collections over different colors".into()));
    }
    if m.symmetric != n.symmetric {
        return Err(Error::Domain("cannot compose a symmetric and a non-symmetric collection".into()));
    }
    let symmetric = m.symmetric;
    let mut inner_by: HashMap<(usize, ColorId), Vec<usize>> = HashMap::new();
    for (i, (_, s)) in n.ops.iter().enumerate() {
        inner_by.entry((s.arity(), s.output)).or_default().push(i);
    }
    let has_nullary = n.ops.iter().any(|(_, s)| s.arity() == 0);
    let mut found: Vec<CircleElem> = Vec::new();
    for arity in 0..=max_arity {
        for (root, (_, rs)) in m.ops.iter().enumerate() {
            let k = rs.arity();
            if !has_nullary && k > arity {
                continue;
            }
            for blocks in partitions(arity, k, symmetric) {
                let options: Vec<&[usize]> = blocks
                    .iter()
                    .zip(&rs.inputs)
                    .map(|(b, &c)| inner_by.get(&(b.len(), c)).map_or(&[][..], |v| v.as_slice()))
                    .collect();
                if options.iter().any(|o| o.is_empty()) {
                    continue;
                }
                let mut idx = vec![0; k];
                loop {
                    let inners = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                    found.push(canonical_elem(m, &CircleElem { root, blocks: blocks.clone(), inners }));
                    let mut j = k;
                    let more = loop {
                        if j == 0 {
                            break false;
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < options[j].len() {
                            break true;
                        }
                        idx[j] = 0;
                    };
                    if !more {
                        break;
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| (signature(m, n, a), a).cmp(&(signature(m, n, b), b)));
    found.dedup();
    let mut coll = FiniteCollection::new(m.colors.clone(), symmetric);
    coll.arity_cap = Some(max_arity);
    let mut index = HashMap::new();
    for (i, e) in found.iter().enumerate() {
        coll.add_op(elem_label(m, n, e), signature(m, n, e));
        index.insert(e.clone(), i);
    }
    if symmetric {
        for (i, e) in found.iter().enumerate() {
            for g in perm::adjacent_transpositions(e.blocks.iter().map(|b| b.len()).sum()) {
                let t = act_elem(m, n, e, &g);
                coll.set_action(i, &g, index[&t]);
            }
        }
        coll.complete_actions()?;
    }
    Ok(CircleProduct { collection: coll, elems: found, index })
}

/// Distributions of the leaves `0..n` into `k` blocks: arbitrary for the
/// symmetric product, consecutive intervals otherwise.
fn partitions(n: usize, k: usize, symmetric: bool) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if symmetric {
        let mut assign = vec![0; n];
        loop {
            let mut blocks = vec![Vec::new(); k];
            for (l, &b) in assign.iter().enumerate() {
                blocks[b].push(l);
            }
            out.push(blocks);
            if !next_tuple(&mut assign, k) {
                break;
            }
        }
    } else {
        let mut sizes = vec![0; k];
        loop {
            if sizes.iter().sum::<usize>() == n {
                let mut start = 0;
                out.push(sizes.iter().map(|&s| {
                    let b: Vec<usize> = (start..start + s).collect();
                    start += s;
                    b
                }).collect());
            }
            if !next_tuple(&mut sizes, n + 1) {
                break;
            }
        }
    }
    out
}

/// The unit collection: one identity per color.
pub fn unit_collection(colors: Vec<String>, symmetric: bool) -> FiniteCollection {
    let mut c = FiniteCollection::new(colors.clone(), symmetric);
    for x in 0..colors.len() {
        let o = c.add_op("1", Signature::new(vec![x], x));
        if symmetric {
            c.set_action(o, &[0], o);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::builtin;

    #[test]
    fn unit_on_both_sides() {
        let a = builtin::associative(3, true).collection();
        let i = unit_collection(vec!["x".into()], true);
        for (l, r) in [(&i, &a), (&a, &i)] {
            let c = circle_product(l, r, 3).unwrap();
            assert_eq!(c.len(), a.ops.len());
        }
    }

    #[test]
    fn planar_blocks_are_intervals() {
        assert_eq!(partitions(2, 2, false).len(), 3);
        assert_eq!(partitions(2, 2, true).len(), 4);
    }
}
