//! k-natural transformations, the internal Hom multicategory and the
//! tensor–hom adjunction.
//!
//! For multifunctors `F_1..F_k, G: P → Q` a k-ary transformation has
//! components `ξ_a ∈ Q(F_1 a, .., F_k a; G a)`. For `φ ∈ P(a_1..a_n; a)` the
//! square asks
//!
//! `ξ_a ∘ (F_1 φ, .., F_k φ) = (Gφ ∘ (ξ_{a_1}, .., ξ_{a_n}))·σ`
//!
//! where the left side lists inputs source by source and the right side
//! object by object, so `σ = transpose_blocks(k, n)` reorders `n` blocks of
//! `k` into `k` blocks of `n`.

mod adjunction;

pub use adjunction::{adjunction_check, naturality_in_target, Adjunction, AdjunctionReport};
pub use crate::functor::check_multifunctor;
pub use crate::search::enumerate_multifunctors;

use crate::error::{Error, Result};
use crate::functor::Multifunctor;
use crate::multicat::builtin::{materialize_with_ops, next_tuple};
use crate::multicat::{ColorId, Multicat, Multicategory, OpId, Signature};
use crate::perm;
use std::collections::{HashMap, HashSet};

/// A k-ary transformation `F_1, .., F_k ⇒ G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KNat<T = OpId> {
    pub sources: Vec<Multifunctor<T>>,
    pub target: Multifunctor<T>,
    /// One component per color of the source multicategory.
    pub components: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalityVerdict {
    pub natural: bool,
    pub checked: usize,
    /// Squares whose composites leave the truncation of the target.
    pub skipped: usize,
    /// The first operation whose square fails.
    pub witness: Option<OpId>,
}

fn check_components<Q: Multicat>(p: &Multicategory, q: &Q, xi: &KNat<Q::Op>) -> Result<()> {
    if xi.components.len() != p.colors().len() {
        return Err(Error::Structural(format!("{} components for {} colors", xi.components.len(), p.colors().len())));
    }
    for (a, comp) in xi.components.iter().enumerate() {
        let want = Signature::new(xi.sources.iter().map(|f| f.objects[a]).collect(), xi.target.objects[a]);
        let got = q.signature_of(comp);
        if got != want {
            return Err(Error::Structural(format!(
                "component at `{}` has signature {}, expected {}",
                p.colors()[a],
                got.display(&colors_of(q)),
                want.display(&colors_of(q))
            )));
        }
    }
    Ok(())
}

fn colors_of<Q: Multicat>(q: &Q) -> Vec<String> {
    (0..q.color_count()).map(|c| q.color_name(c)).collect()
}

/// The square of `ξ` at `φ`: `Some(true)` if it commutes, `None` if a
/// composite is unavailable.
pub fn square<Q: Multicat>(p: &Multicategory, q: &Q, xi: &KNat<Q::Op>, phi: OpId) -> Option<bool> {
    let sig = p.signature(phi);
    let (k, n) = (xi.sources.len(), sig.arity());
    let left_inner: Vec<Q::Op> = xi.sources.iter().map(|f| f.image(phi).clone()).collect();
    let left = q.compose_full(&xi.components[sig.output], &left_inner)?;
    let right_inner: Vec<Q::Op> = sig.inputs.iter().map(|&a| xi.components[a].clone()).collect();
    let right = q.compose_full(xi.target.image(phi), &right_inner)?;
    let sigma = perm::transpose_blocks(k, n);
    let right = if perm::is_identity(&sigma) { right } else { q.act(&right, &sigma)? };
    Some(left == right)
}

fn verdict_over<Q: Multicat>(p: &Multicategory, q: &Q, xi: &KNat<Q::Op>, ops: &[OpId]) -> Result<NaturalityVerdict> {
    check_components(p, q, xi)?;
    let mut v = NaturalityVerdict { natural: true, checked: 0, skipped: 0, witness: None };
    for &phi in ops {
        match square(p, q, xi, phi) {
            Some(true) => v.checked += 1,
            Some(false) => {
                v.checked += 1;
                v.natural = false;
                v.witness = Some(phi);
                break;
            }
            None => v.skipped += 1,
        }
    }
    Ok(v)
}

/// Checks the square for every operation of `P`.
pub fn is_k_natural<Q: Multicat>(p: &Multicategory, q: &Q, xi: &KNat<Q::Op>) -> Result<NaturalityVerdict> {
    let ops: Vec<OpId> = p.op_ids().collect();
    verdict_over(p, q, xi, &ops)
}

/// The smallest set of operations containing `gens` and the units and closed
/// under `∘_i` and the symmetric action.
pub fn generated_closure(p: &Multicategory, gens: &[OpId]) -> HashSet<OpId> {
    let mut have: HashSet<OpId> = gens.iter().copied().collect();
    have.extend((0..p.colors().len()).filter_map(|c| p.unit_of(c)));
    let mut entries: Vec<_> = p.compositions().collect();
    entries.sort();
    loop {
        let before = have.len();
        for &(a, _, b, r) in &entries {
            if have.contains(&a) && have.contains(&b) {
                have.insert(r);
            }
        }
        if p.symmetric() {
            for o in have.clone() {
                for t in perm::adjacent_transpositions(p.arity(o)) {
                    have.insert(p.action(o, &t).unwrap());
                }
            }
        }
        if have.len() == before {
            return have;
        }
    }
}

/// Checks squares only on `gens`, after verifying that they generate `P`.
pub fn naturality_on_generators<Q: Multicat>(p: &Multicategory, q: &Q, xi: &KNat<Q::Op>, gens: &[OpId]) -> Result<NaturalityVerdict> {
    let closure = generated_closure(p, gens);
    if closure.len() != p.op_count() {
        let mut missing: Vec<&str> = p.op_ids().filter(|o| !closure.contains(o)).map(|o| p.op_name(o)).collect();
        missing.sort();
        return Err(Error::Precondition(format!("the given operations do not generate `{}`; missing {}", p.name(), missing.join(", "))));
    }
    verdict_over(p, q, xi, gens)
}

/// `Hom(P, Q)`: multifunctors as colors and k-natural transformations as
/// k-ary operations, for `k` up to a cap.
#[derive(Debug, Clone)]
pub struct HomMulticategory<T = OpId> {
    pub multicategory: Multicategory,
    pub objects: Vec<Multifunctor<T>>,
    pub ops: Vec<KNat<T>>,
    index: HashMap<(Signature, Vec<T>), OpId>,
}

impl<T: Clone + Eq + std::hash::Hash> HomMulticategory<T> {
    pub fn object_index(&self, f: &Multifunctor<T>) -> Option<ColorId> {
        self.objects.iter().position(|g| g == f)
    }

    /// The operation with the given sources, target and components.
    pub fn find(&self, sources: &[ColorId], target: ColorId, components: &[T]) -> Option<OpId> {
        self.index.get(&(Signature::new(sources.to_vec(), target), components.to_vec())).copied()
    }
}

struct HomLazy<'a, Q: Multicat> {
    p: &'a Multicategory,
    q: &'a Q,
    objects: &'a [Multifunctor<Q::Op>],
    cap: usize,
}

impl<Q: Multicat> HomLazy<'_, Q> {
    fn knat(&self, sig: &Signature, components: Vec<Q::Op>) -> KNat<Q::Op> {
        KNat {
            sources: sig.inputs.iter().map(|&i| self.objects[i].clone()).collect(),
            target: self.objects[sig.output].clone(),
            components,
        }
    }
}

impl<Q: Multicat> Multicat for HomLazy<'_, Q> {
    type Op = (Signature, Vec<Q::Op>);

    fn color_count(&self) -> usize {
        self.objects.len()
    }

    fn color_name(&self, c: ColorId) -> String {
        format!("F{c}")
    }

    fn is_symmetric(&self) -> bool {
        self.q.is_symmetric()
    }

    fn arity_cap(&self) -> Option<usize> {
        Some(self.cap)
    }

    fn signature_of(&self, op: &Self::Op) -> Signature {
        op.0.clone()
    }

    /// Every component family with the right signatures, kept if natural.
    fn operations(&self, sig: &Signature) -> Result<Vec<Self::Op>> {
        let per_color: Vec<Vec<Q::Op>> = (0..self.p.colors().len())
            .map(|a| {
                let s = Signature::new(sig.inputs.iter().map(|&i| self.objects[i].objects[a]).collect(), self.objects[sig.output].objects[a]);
                self.q.operations(&s)
            })
            .collect::<Result<_>>()?;
        if per_color.iter().any(|c| c.is_empty()) {
            return Ok(Vec::new());
        }
        let radix: Vec<usize> = per_color.iter().map(|c| c.len()).collect();
        let mut families = Vec::new();
        let mut t = vec![0; radix.len()];
        loop {
            families.push(t.iter().zip(&per_color).map(|(&i, c)| c[i].clone()).collect::<Vec<_>>());
            let mut k = t.len();
            let more = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                t[k] += 1;
                if t[k] < radix[k] {
                    break true;
                }
                t[k] = 0;
            };
            if !more {
                break;
            }
        }
        let keep = crate::exec::map(&families, |comps| {
            let xi = self.knat(sig, comps.clone());
            verdict_over(self.p, self.q, &xi, &self.p.op_ids().collect::<Vec<_>>()).map(|v| v.natural && v.skipped == 0)
        });
        let mut out = Vec::new();
        for (comps, k) in families.into_iter().zip(keep) {
            if k? {
                out.push((sig.clone(), comps));
            }
        }
        Ok(out)
    }

    fn compose(&self, a: &Self::Op, slot: usize, b: &Self::Op) -> Option<Self::Op> {
        let comps = a.1.iter().zip(&b.1).map(|(x, y)| self.q.compose(x, slot, y)).collect::<Option<Vec<_>>>()?;
        Some((a.0.graft(slot, &b.0), comps))
    }

    fn act(&self, a: &Self::Op, sigma: &[usize]) -> Option<Self::Op> {
        let comps = a.1.iter().map(|x| self.q.act(x, sigma)).collect::<Option<Vec<_>>>()?;
        Some((a.0.permuted(sigma), comps))
    }

    fn unit(&self, c: ColorId) -> Self::Op {
        let f = &self.objects[c];
        (Signature::new(vec![c], c), f.objects.iter().map(|&x| self.q.unit(x)).collect())
    }

    fn op_label(&self, op: &Self::Op) -> String {
        let parts: Vec<String> = op.1.iter().map(|x| self.q.op_label(x)).collect();
        format!("<{}>", parts.join(","))
    }
}

/// `Hom(P, Q)` with transformations of arity at most `cap`. Squares that
/// leave the truncation of `Q` count as failures, so the target should be
/// uncapped or capped at least at `cap · max_arity(P)`.
pub fn internal_hom<Q: Multicat>(p: &Multicategory, q: &Q, cap: usize, budget: usize) -> Result<HomMulticategory<Q::Op>> {
    if p.is_partial() {
        return Err(Error::Precondition(format!("`{}` has a partial composition table", p.name())));
    }
    let objects = enumerate_multifunctors(p, q, budget)?;
    let lazy = HomLazy { p, q, objects: &objects, cap };
    let n = objects.len();
    let mut support = Vec::new();
    for k in 0..=cap {
        if n == 0 {
            break;
        }
        let mut t = vec![0; k];
        loop {
            for out in 0..n {
                support.push(Signature::new(t.clone(), out));
            }
            if !next_tuple(&mut t, n) {
                break;
            }
        }
    }
    let (mut multicategory, raw) = materialize_with_ops(&lazy, "Hom", &support, budget)?;
    multicategory.set_name(format!("Hom({}, {})", p.name(), (0..q.color_count()).map(|c| q.color_name(c)).collect::<Vec<_>>().join(",")));
    let index = raw.iter().enumerate().map(|(i, op)| (op.clone(), OpId(i as u32))).collect();
    let ops = raw.into_iter().map(|(sig, comps)| lazy.knat(&sig, comps)).collect();
    Ok(HomMulticategory { multicategory, objects, ops, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::builtin;

    #[test]
    fn block_shuffle_two_by_two() {
        // Inputs (F1a1, F1a2, F2a1, F2a2) against (F1a1, F2a1, F1a2, F2a2).
        assert_eq!(perm::transpose_blocks(2, 2), vec![0, 2, 1, 3]);
        assert_eq!(perm::transpose_blocks(2, 3), vec![0, 2, 4, 1, 3, 5]);
    }

    #[test]
    fn identity_transformation_is_natural() {
        let a = builtin::associative(3, true);
        let id = Multifunctor::identity(&a);
        let xi = KNat { sources: vec![id.clone()], target: id, components: vec![a.unit_of(0).unwrap()] };
        let v = is_k_natural(&a, &a, &xi).unwrap();
        assert!(v.natural && v.skipped == 0);
    }
}
