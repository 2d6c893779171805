//! The free algebra monad `F_P(A)(x) = ⊔ P(x_1..x_n;x) × A(x_1) × .. × A(x_n) / Σ_n`,
//! truncated at an arity cap.

use super::{AlgebraStructure, EndMulticategory, ObjectFamily};
use crate::error::{Error, Result};
use crate::multicat::laws::LawReport;
use crate::multicat::{Multicategory, OpId};
use crate::perm;
use std::collections::HashMap;

/// An element `[p; y_1..y_n]`, stored as the least representative of its
/// orbit under simultaneous permutation.
pub type Element = (OpId, Vec<usize>);

/// `F_P(Y)` for a family `Y` of finite sets with element weights; only
/// elements whose total weight is at most the cap are kept.
#[derive(Debug, Clone)]
pub struct FreeLevel {
    pub elems: Vec<Vec<Element>>,
    pub weight: Vec<Vec<usize>>,
    index: Vec<HashMap<Element, usize>>,
}

impl FreeLevel {
    pub fn size(&self) -> usize {
        self.elems.iter().map(|e| e.len()).sum()
    }

    pub fn find(&self, color: usize, e: &Element) -> Option<usize> {
        self.index[color].get(e).copied()
    }
}

/// Least representative of `{(p·σ, y∘σ)}`.
pub fn canonical(p: &Multicategory, op: OpId, tuple: &[usize]) -> Element {
    let n = tuple.len();
    if !p.symmetric() {
        return (op, tuple.to_vec());
    }
    perm::all(n)
        .into_iter()
        .map(|s| (p.action(op, &s).unwrap(), perm::permute(tuple, &s)))
        .min()
        .unwrap()
}

/// Builds `F_P(Y)` where `base_weight[x][i]` is the weight of element `i` of `Y(x)`.
pub fn free_level(p: &Multicategory, base_weight: &[Vec<usize>], cap: usize) -> FreeLevel {
    let nc = p.colors().len();
    let mut elems: Vec<Vec<Element>> = vec![Vec::new(); nc];
    let mut weight = vec![Vec::new(); nc];
    let mut index: Vec<HashMap<Element, usize>> = vec![HashMap::new(); nc];
    let mut ops: Vec<OpId> = p.op_ids().filter(|&o| p.arity(o) <= cap).collect();
    ops.sort_by_key(|&o| (p.arity(o), o));
    for o in ops {
        let sig = p.signature(o);
        let mut tuple = Vec::with_capacity(sig.arity());
        extend(base_weight, cap, &sig.inputs, 0, &mut tuple, &mut |t, w| {
            let e = canonical(p, o, t);
            let out = sig.output;
            if !index[out].contains_key(&e) {
                index[out].insert(e.clone(), elems[out].len());
                elems[out].push(e);
                weight[out].push(w);
            }
        });
    }
    FreeLevel { elems, weight, index }
}

fn extend(
    base_weight: &[Vec<usize>],
    cap: usize,
    inputs: &[usize],
    w: usize,
    tuple: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize], usize),
) {
    if tuple.len() == inputs.len() {
        emit(tuple, w);
        return;
    }
    let c = inputs[tuple.len()];
    for (i, &wi) in base_weight[c].iter().enumerate() {
        if w + wi <= cap {
            tuple.push(i);
            extend(base_weight, cap, inputs, w + wi, tuple, emit);
            tuple.pop();
        }
    }
}

/// `μ: F(F(Y)) → F(Y)`, `None` where the composite leaves the truncation.
pub fn multiply(p: &Multicategory, outer: &FreeLevel, inner: &FreeLevel, result: &FreeLevel) -> Vec<Vec<Option<usize>>> {
    outer
        .elems
        .iter()
        .map(|es| {
            es.iter()
                .map(|(op, ys)| {
                    let sig = p.signature(*op);
                    let qs: Vec<OpId> = ys.iter().zip(&sig.inputs).map(|(&y, &c)| inner.elems[c][y].0).collect();
                    let r = p.compose_all(*op, &qs).ok()?;
                    let flat: Vec<usize> = ys.iter().zip(&sig.inputs).flat_map(|(&y, &c)| inner.elems[c][y].1.clone()).collect();
                    result.find(sig.output, &canonical(p, r, &flat))
                })
                .collect()
        })
        .collect()
}

/// `F_P(A)` with its unit and multiplication.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    pub family: ObjectFamily,
    pub cap: usize,
    /// `F(A)`.
    pub level1: FreeLevel,
    /// `F(F(A))`.
    pub level2: FreeLevel,
    /// `η: A → F(A)`.
    pub eta: Vec<Vec<usize>>,
    /// `μ: F(F(A)) → F(A)`.
    pub mu: Vec<Vec<Option<usize>>>,
}

pub fn free_algebra(p: &Multicategory, family: &ObjectFamily, cap: usize) -> Result<FreeAlgebra> {
    if family.colors.len() != p.colors().len() {
        return Err(Error::Domain(format!("{} carriers for {} colors", family.colors.len(), p.colors().len())));
    }
    let ones: Vec<Vec<usize>> = family.sizes.iter().map(|&s| vec![1; s]).collect();
    let level1 = free_level(p, &ones, cap);
    let level2 = free_level(p, &level1.weight, cap);
    let eta = (0..family.colors.len())
        .map(|c| {
            let u = p.unit_of(c).unwrap();
            (0..family.sizes[c]).map(|a| level1.find(c, &(u, vec![a])).unwrap()).collect()
        })
        .collect();
    let mu = multiply(p, &level2, &level1, &level1);
    Ok(FreeAlgebra { family: family.clone(), cap, level1, level2, eta, mu })
}

impl FreeAlgebra {
    /// `p` acting on elements of `F(A)`; `None` outside the truncation.
    pub fn act(&self, p: &Multicategory, op: OpId, args: &[usize]) -> Option<usize> {
        let sig = p.signature(op);
        let e = canonical(p, op, args);
        let i = self.level2.find(sig.output, &e)?;
        self.mu[sig.output][i]
    }

    /// Unit laws `μ∘Fη = id = μ∘ηF` and associativity `μ∘Fμ = μ∘μF`, elementwise.
    pub fn check_monad_laws(&self, p: &Multicategory) -> LawReport {
        let mut rep = LawReport::default();
        for c in 0..self.family.colors.len() {
            let u = p.unit_of(c).unwrap();
            for (x, (op, ys)) in self.level1.elems[c].iter().enumerate() {
                let sig = p.signature(*op);
                rep.checked += 2;
                let f_eta: Vec<usize> = ys.iter().zip(&sig.inputs).map(|(&a, &ci)| self.eta[ci][a]).collect();
                let lhs = self.level2.find(c, &canonical(p, *op, &f_eta)).and_then(|i| self.mu[c][i]);
                if lhs != Some(x) {
                    rep.fail("μ∘Fη = id", format!("element {x} of color {c}"));
                }
                let rhs = self.level2.find(c, &(u, vec![x])).and_then(|i| self.mu[c][i]);
                if rhs != Some(x) {
                    rep.fail("μ∘ηF = id", format!("element {x} of color {c}"));
                }
            }
        }
        let level3 = free_level(p, &self.level2.weight, self.cap);
        let mu_f = multiply(p, &level3, &self.level2, &self.level2);
        for c in 0..self.family.colors.len() {
            for (z, (op, ys)) in level3.elems[c].iter().enumerate() {
                let sig = p.signature(*op);
                rep.checked += 1;
                let inner: Option<Vec<usize>> = ys.iter().zip(&sig.inputs).map(|(&y, &ci)| self.mu[ci][y]).collect();
                let lhs = inner.and_then(|v| self.level2.find(c, &canonical(p, *op, &v))).and_then(|i| self.mu[c][i]);
                let rhs = mu_f[c][z].and_then(|i| self.mu[c][i]);
                match (lhs, rhs) {
                    (Some(a), Some(b)) if a != b => rep.fail("μ∘Fμ = μ∘μF", format!("element {z} of color {c}")),
                    (Some(_), Some(_)) => {}
                    _ => rep.skipped += 1,
                }
            }
        }
        rep
    }
}

/// Outcome of comparing algebra maps `F_P(A) → B` with carrier maps `A → B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeForgetfulReport {
    pub algebra_maps: usize,
    pub carrier_maps: usize,
    /// Restriction along `η` is injective and hits every carrier map.
    pub bijective: bool,
}

/// Enumerates all maps `F_P(A) → B` commuting with the actions wherever the
/// action on `F_P(A)` is defined, and compares them with carrier maps.
pub fn free_forgetful_check(p: &Multicategory, free: &FreeAlgebra, b_fam: &ObjectFamily, b: &AlgebraStructure, limit: usize) -> Result<FreeForgetfulReport> {
    let eb = EndMulticategory::new(b_fam.clone(), Some(free.cap.max(super::max_arity(p))));
    let nc = free.family.colors.len();
    let sizes: Vec<usize> = (0..nc).map(|c| free.level1.elems[c].len()).collect();
    let total: usize = sizes.iter().sum();
    let count = (0..nc).try_fold(1u128, |acc, c| acc.checked_mul((b_fam.sizes[c] as u128).checked_pow(sizes[c] as u32)?));
    if count.is_none_or(|c| c > limit as u128) {
        return Err(Error::Overflow(format!("too many maps out of a free algebra with {total} elements")));
    }
    // Each action instance: (op, argument elements, result element).
    let mut instances = Vec::new();
    for c in 0..nc {
        for (i, (op, ys)) in free.level2.elems[c].iter().enumerate() {
            if let Some(r) = free.mu[c][i] {
                let sig = p.signature(*op);
                let args: Vec<(usize, usize)> = ys.iter().zip(&sig.inputs).map(|(&y, &ci)| (ci, y)).collect();
                instances.push((*op, args, (c, r)));
            }
        }
    }
    let mut algebra_maps = Vec::new();
    if count == Some(0) {
        let carrier = super::carrier_maps(&free.family, b_fam);
        return Ok(FreeForgetfulReport { algebra_maps: 0, carrier_maps: carrier.len(), bijective: carrier.is_empty() });
    }
    let mut g: Vec<Vec<usize>> = sizes.iter().map(|&s| vec![0; s]).collect();
    loop {
        let ok = instances.iter().all(|(op, args, (c, r))| {
            let vals: Vec<usize> = args.iter().map(|&(ci, y)| g[ci][y]).collect();
            g[*c][*r] == eb.eval(b.action(*op), &vals)
        });
        if ok {
            algebra_maps.push(g.clone());
        }
        if !next_map(&mut g, b_fam) {
            break;
        }
    }
    let restricted: Vec<Vec<Vec<usize>>> = algebra_maps
        .iter()
        .map(|g| (0..nc).map(|c| free.eta[c].iter().map(|&x| g[c][x]).collect()).collect())
        .collect();
    let carrier = super::carrier_maps(&free.family, b_fam);
    let mut sorted = restricted.clone();
    sorted.sort();
    sorted.dedup();
    let mut all = carrier.clone();
    all.sort();
    let bijective = sorted.len() == restricted.len() && sorted == all;
    Ok(FreeForgetfulReport { algebra_maps: algebra_maps.len(), carrier_maps: carrier.len(), bijective })
}

fn next_map(g: &mut [Vec<usize>], b: &ObjectFamily) -> bool {
    for c in (0..g.len()).rev() {
        for i in (0..g[c].len()).rev() {
            g[c][i] += 1;
            if g[c][i] < b.sizes[c] {
                return true;
            }
            g[c][i] = 0;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::builtin;

    #[test]
    fn unit_multicategory_gives_carrier() {
        let f = free_algebra(&builtin::trivial(), &ObjectFamily::single(3), 3).unwrap();
        assert_eq!(f.level1.size(), 3);
        assert!(f.check_monad_laws(&builtin::trivial()).passed());
    }
}
