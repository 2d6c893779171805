//! `Multi(P ⊗ Q, R) ≅ Multi(P, Hom(Q, R))`, checked by enumerating both
//! sides and transporting maps across in each direction.

use super::{internal_hom, HomMulticategory, KNat};
use crate::error::{Error, Result};
use crate::functor::Multifunctor;
use crate::multicat::{ColorId, Multicat, Multicategory, OpId};
use crate::perm;
use crate::presents::{bv_tensor, BvTensor, Caps};
use crate::search::enumerate_multifunctors;
use crate::trees::Term;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub tensor_ops: usize,
    /// Maps `P ⊗ Q → R`.
    pub left: usize,
    /// Maps `P → Hom(Q, R)`.
    pub right: usize,
    /// `Ψ(Φ F) = F` for every left map.
    pub round_trip_left: bool,
    /// `Φ(Ψ G) = G` for every right map.
    pub round_trip_right: bool,
    pub bijective: bool,
    /// `(i, j)`: left map `i` corresponds to right map `j`.
    pub pairing: Vec<(usize, usize)>,
}

pub struct Adjunction<T> {
    pub report: AdjunctionReport,
    pub tensor: BvTensor,
    pub hom: HomMulticategory<T>,
    pub left: Vec<Multifunctor<T>>,
    pub right: Vec<Multifunctor>,
}

#[derive(Clone, Copy)]
enum Gen {
    Left(OpId, ColorId),
    Right(ColorId, OpId),
}

struct Transport<'a, R: Multicat> {
    p: &'a Multicategory,
    q: &'a Multicategory,
    r: &'a R,
    tensor: &'a BvTensor,
    hom: &'a HomMulticategory<R::Op>,
    gens: HashMap<usize, Gen>,
    /// The tensor operation of each generator.
    corolla: HashMap<usize, OpId>,
}

impl<'a, R: Multicat> Transport<'a, R> {
    fn new(p: &'a Multicategory, q: &'a Multicategory, r: &'a R, tensor: &'a BvTensor, hom: &'a HomMulticategory<R::Op>) -> Result<Self> {
        let mut gens = HashMap::new();
        for (&(o, b), &g) in &tensor.generators.left {
            gens.insert(g, Gen::Left(o, b));
        }
        for (&(a, o), &g) in &tensor.generators.right {
            gens.insert(g, Gen::Right(a, o));
        }
        let s = &tensor.saturated;
        let mut corolla = HashMap::new();
        for &g in gens.keys() {
            let op = s
                .class_of(&s.generators().corolla(g))
                .ok_or_else(|| Error::Precondition(format!("generator `{}` lies outside the caps", s.generators().name(g))))?;
            corolla.insert(g, op);
        }
        Ok(Transport { p, q, r, tensor, hom, gens, corolla })
    }

    fn nq(&self) -> usize {
        self.q.colors().len()
    }

    /// `F(a, -)` as a multifunctor `Q → R`.
    fn slice(&self, f: &Multifunctor<R::Op>, a: ColorId) -> Multifunctor<R::Op> {
        let nq = self.nq();
        let objects: Vec<ColorId> = (0..nq).map(|b| f.objects[a * nq + b]).collect();
        let ops = self
            .q
            .op_ids()
            .map(|psi| match self.tensor.generators.right.get(&(a, psi)) {
                Some(g) => f.image(self.corolla[g]).clone(),
                None => self.r.unit(objects[self.q.signature(psi).output]),
            })
            .collect();
        Multifunctor { objects, ops }
    }

    /// `Φ`: curry a map out of the tensor. `None` when some slice or
    /// transformation is missing from the Hom multicategory.
    fn curry(&self, f: &Multifunctor<R::Op>) -> Option<Multifunctor> {
        let objects: Vec<ColorId> = (0..self.p.colors().len()).map(|a| self.hom.object_index(&self.slice(f, a))).collect::<Option<_>>()?;
        let nq = self.nq();
        let mut ops = Vec::with_capacity(self.p.op_count());
        for phi in self.p.op_ids() {
            let sig = self.p.signature(phi);
            let comps: Vec<R::Op> = (0..nq)
                .map(|b| match self.tensor.generators.left.get(&(phi, b)) {
                    Some(g) => f.image(self.corolla[g]).clone(),
                    None => self.r.unit(f.objects[sig.output * nq + b]),
                })
                .collect();
            let sources: Vec<ColorId> = sig.inputs.iter().map(|&a| objects[a]).collect();
            ops.push(self.hom.find(&sources, objects[sig.output], &comps)?);
        }
        Some(Multifunctor { objects, ops })
    }

    fn eval(&self, g: &Multifunctor, objects: &[ColorId], t: &Term) -> Option<R::Op> {
        match t {
            Term::Leaf(_, c) => Some(self.r.unit(objects[*c])),
            Term::Node(v, children) => {
                let head = match self.gens[v] {
                    Gen::Left(phi, b) => self.hom.ops[g.image(phi).index()].components[b].clone(),
                    Gen::Right(a, psi) => self.hom.objects[g.objects[a]].image(psi).clone(),
                };
                let inner = children.iter().map(|c| self.eval(g, objects, c)).collect::<Option<Vec<_>>>()?;
                self.r.compose_full(&head, &inner)
            }
        }
    }

    /// `Ψ`: uncurry by evaluating a representative term of each class.
    fn uncurry(&self, g: &Multifunctor) -> Option<Multifunctor<R::Op>> {
        let nq = self.nq();
        let objects: Vec<ColorId> =
            (0..self.p.colors().len() * nq).map(|ab| self.hom.objects[g.objects[ab / nq]].objects[ab % nq]).collect();
        let mut ops = Vec::with_capacity(self.tensor.saturated.classes.len());
        for class in &self.tensor.saturated.classes {
            let t = &class[0];
            let planar = self.eval(g, &objects, t)?;
            let labels: Vec<usize> = t.leaves().iter().map(|&(l, _)| l).collect();
            let sigma = perm::inverse(&labels);
            ops.push(if perm::is_identity(&sigma) { planar } else { self.r.act(&planar, &sigma)? });
        }
        Some(Multifunctor { objects, ops })
    }
}

fn max_arity(p: &Multicategory) -> usize {
    p.op_ids().map(|o| p.arity(o)).max().unwrap_or(0)
}

/// Enumerates both sides of the adjunction for `P`, `Q`, `R` and checks that
/// currying and uncurrying are inverse bijections. The tensor must have
/// stabilized within `caps` with a complete table.
pub fn adjunction_check<R: Multicat>(p: &Multicategory, q: &Multicategory, r: &R, caps: Caps, budget: usize) -> Result<Adjunction<R::Op>> {
    let tensor = bv_tensor(p, q, caps)?;
    let rep = &tensor.saturated.report;
    if !rep.stabilized || !rep.complete {
        return Err(Error::Precondition(format!(
            "`{}` is not settled within {} inputs and {} vertices",
            tensor.presentation.name, caps.max_arity, caps.max_vertices
        )));
    }
    let left = enumerate_multifunctors(&tensor.saturated.multicategory, r, budget)?;
    let hom = internal_hom(q, r, max_arity(p), budget)?;
    let right = enumerate_multifunctors(p, &hom.multicategory, budget)?;

    let tr = Transport::new(p, q, r, &tensor, &hom)?;
    let right_index: HashMap<&Multifunctor, usize> = right.iter().enumerate().map(|(j, g)| (g, j)).collect();
    let mut pairing = Vec::new();
    let mut round_trip_left = true;
    for (i, f) in left.iter().enumerate() {
        match tr.curry(f) {
            Some(g) if tr.uncurry(&g).as_ref() == Some(f) => match right_index.get(&g) {
                Some(&j) => pairing.push((i, j)),
                None => round_trip_left = false,
            },
            _ => round_trip_left = false,
        }
    }
    let round_trip_right = right.iter().all(|g| tr.uncurry(g).and_then(|f| tr.curry(&f)).as_ref() == Some(g));
    let mut targets: Vec<usize> = pairing.iter().map(|&(_, j)| j).collect();
    targets.sort();
    targets.dedup();
    let bijective = round_trip_left && round_trip_right && left.len() == right.len() && targets.len() == right.len();
    let report = AdjunctionReport {
        tensor_ops: tensor.saturated.multicategory.op_count(),
        left: left.len(),
        right: right.len(),
        round_trip_left,
        round_trip_right,
        bijective,
        pairing,
    };
    Ok(Adjunction { report, tensor, hom, left, right })
}

/// Pushes a transformation forward along `h: R → R'`.
fn push_knat(h: &Multifunctor, xi: &KNat) -> KNat {
    KNat {
        sources: xi.sources.iter().map(|f| f.then(h)).collect(),
        target: xi.target.then(h),
        components: xi.components.iter().map(|&c| *h.image(c)).collect(),
    }
}

/// Checks that the bijection commutes with postcomposition by `h: R → R'`:
/// currying `h ∘ F` gives the pushforward of the curried `F`.
pub fn naturality_in_target(
    p: &Multicategory,
    q: &Multicategory,
    r: &Multicategory,
    r2: &Multicategory,
    h: &Multifunctor,
    caps: Caps,
    budget: usize,
) -> Result<bool> {
    let report = crate::functor::check_multifunctor(r, r2, h);
    if !report.passed() {
        return Err(Error::Precondition(format!("the map `{}` → `{}` is not a multifunctor", r.name(), r2.name())));
    }
    let a = adjunction_check(p, q, r, caps, budget)?;
    let b = adjunction_check(p, q, r2, caps, budget)?;
    let ta = Transport::new(p, q, r, &a.tensor, &a.hom)?;
    let tb = Transport::new(p, q, r2, &b.tensor, &b.hom)?;
    for f in &a.left {
        let Some(g) = ta.curry(f) else { return Ok(false) };
        let Some(g2) = tb.curry(&f.then(h)) else { return Ok(false) };
        let objects: Option<Vec<ColorId>> = g.objects.iter().map(|&o| b.hom.object_index(&a.hom.objects[o].then(h))).collect();
        let ops: Option<Vec<OpId>> = g
            .ops
            .iter()
            .map(|&o| {
                let xi = push_knat(h, &a.hom.ops[o.index()]);
                let sources: Option<Vec<ColorId>> = xi.sources.iter().map(|s| b.hom.object_index(s)).collect();
                b.hom.find(&sources?, b.hom.object_index(&xi.target)?, &xi.components)
            })
            .collect();
        if objects.zip(ops).map(|(objects, ops)| Multifunctor { objects, ops }) != Some(g2) {
            return Ok(false);
        }
    }
    Ok(true)
}
