//! The two-sided bar construction `B_n(X, P, Y) = X ∘ P^{∘n} ∘ Y` as a
//! truncated simplicial set, and the Hochschild complex `B(P, P, P)`.
//!
//! Level `n` consists of layered trees: an `X` element at the root, `n`
//! layers of `P` operations and `Y` elements at the bottom whose inputs are
//! the labeled leaves.

use super::{tuples, Bimodule};
use crate::error::{Error, Result};
use crate::exec;
use crate::multicat::{FiniteCollection, Multicat, Multicategory, OpId};
use crate::perm;
use crate::simplicial::TruncatedSimplicialSet;
use crate::trees::circle_product;
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layered {
    Node(usize, Vec<Layered>),
    Leaf(usize),
}

impl Layered {
    fn kids(&self) -> &[Layered] {
        match self {
            Layered::Node(_, k) => k,
            Layered::Leaf(_) => &[],
        }
    }

    fn value(&self) -> usize {
        match self {
            Layered::Node(v, _) | Layered::Leaf(v) => *v,
        }
    }

    fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            Layered::Leaf(l) => out.push(*l),
            Layered::Node(_, k) => k.iter().for_each(|c| c.leaves(out)),
        }
    }

    fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Layered {
        match self {
            Layered::Leaf(l) => Layered::Leaf(f(*l)),
            Layered::Node(v, k) => Layered::Node(*v, k.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    /// Numbers the leaves `0, 1, ..` in planar order.
    fn number(&self, next: &mut usize) -> Layered {
        match self {
            Layered::Leaf(_) => {
                *next += 1;
                Layered::Leaf(*next - 1)
            }
            Layered::Node(v, k) => Layered::Node(*v, k.iter().map(|c| c.number(next)).collect()),
        }
    }

    fn arity(&self) -> usize {
        let mut out = Vec::new();
        self.leaves(&mut out);
        out.len()
    }
}

#[derive(Debug, Clone)]
pub struct BarComplex {
    pub levels: Vec<Vec<Layered>>,
    pub simplicial: TruncatedSimplicialSet,
    /// Class of each level-0 element in the coequalizer of `d_0, d_1`.
    pub augmentation: Vec<usize>,
    pub classes: usize,
    index: Vec<HashMap<Layered, usize>>,
}

impl BarComplex {
    pub fn find(&self, n: usize, t: &Layered) -> Option<usize> {
        self.index.get(n)?.get(t).copied()
    }

    pub fn arity(&self, n: usize, x: usize) -> usize {
        self.levels[n][x].arity()
    }
}

struct Bar<'a> {
    x: &'a Bimodule,
    p: &'a Multicategory,
    y: &'a Bimodule,
}

impl Bar<'_> {
    fn symmetric(&self) -> bool {
        self.p.symmetric() && self.x.module.coll.symmetric && self.y.module.coll.symmetric
    }

    fn input_color(&self, layer: usize, n: usize, v: usize, r: usize) -> usize {
        if layer == 0 {
            self.x.module.signature(v).inputs[r]
        } else if layer == n + 1 {
            self.y.module.signature(v).inputs[r]
        } else {
            self.p.signature(OpId(v as u32)).inputs[r]
        }
    }

    fn act(&self, layer: usize, n: usize, v: usize, sigma: &[usize]) -> Option<usize> {
        if layer == 0 {
            self.x.module.act(v, sigma)
        } else if layer == n + 1 {
            self.y.module.act(v, sigma)
        } else if perm::is_identity(sigma) {
            Some(v)
        } else {
            self.p.action(OpId(v as u32), sigma).map(|o| o.index())
        }
    }

    fn canon(&self, t: &Layered, layer: usize, n: usize) -> Layered {
        let Layered::Node(v, kids) = t else { return t.clone() };
        let kids: Vec<Layered> = kids.iter().map(|c| self.canon(c, layer + 1, n)).collect();
        if !self.symmetric() {
            return Layered::Node(*v, kids);
        }
        perm::all(kids.len())
            .into_iter()
            .filter_map(|s| Some(Layered::Node(self.act(layer, n, *v, &s)?, perm::permute(&kids, &s))))
            .min()
            .unwrap_or(Layered::Node(*v, kids))
    }

    /// Unlabeled subtrees from `layer` down with output `color` and at most
    /// `budget` leaves.
    fn grow(&self, layer: usize, n: usize, color: usize, budget: usize) -> Vec<(Layered, usize)> {
        if layer == n + 1 {
            return self
                .y
                .module
                .with_output(color)
                .into_iter()
                .filter(|&v| self.y.module.arity(v) <= budget)
                .map(|v| {
                    let a = self.y.module.arity(v);
                    (Layered::Node(v, vec![Layered::Leaf(0); a]), a)
                })
                .collect();
        }
        let heads: Vec<usize> = if layer == 0 {
            (0..self.x.module.len()).collect()
        } else {
            self.p.ops_of_output(color).iter().map(|o| o.index()).collect()
        };
        let mut out = Vec::new();
        for v in heads {
            let k = if layer == 0 { self.x.module.arity(v) } else { self.p.arity(OpId(v as u32)) };
            let mut partial = vec![(Vec::new(), 0usize)];
            for r in 0..k {
                let c = self.input_color(layer, n, v, r);
                let mut next = Vec::new();
                for (kids, used) in &partial {
                    for (t, a) in self.grow(layer + 1, n, c, budget - used) {
                        let mut kids = kids.clone();
                        kids.push(t);
                        next.push((kids, used + a));
                    }
                }
                partial = next;
            }
            out.extend(partial.into_iter().map(|(kids, a)| (Layered::Node(v, kids), a)));
        }
        out
    }

    fn level(&self, n: usize, max_arity: usize) -> Vec<Layered> {
        let mut set = BTreeSet::new();
        for (t, k) in self.grow(0, n, 0, max_arity) {
            let planar = t.number(&mut 0);
            let labelings = if self.symmetric() { perm::all(k) } else { vec![perm::identity(k)] };
            for pi in labelings {
                set.insert(self.canon(&planar.relabel(&|l| pi[l]), 0, n));
            }
        }
        set.into_iter().collect()
    }

    /// `d_i` on a tree of level `n`; `None` when a composite is missing.
    fn face(&self, t: &Layered, layer: usize, i: usize, n: usize) -> Option<Layered> {
        let Layered::Node(v, kids) = t else { return Some(t.clone()) };
        if layer < i {
            let kids = kids.iter().map(|c| self.face(c, layer + 1, i, n)).collect::<Option<Vec<_>>>()?;
            return Some(Layered::Node(*v, kids));
        }
        let grand: Vec<Layered> = kids.iter().flat_map(|c| c.kids().to_vec()).collect();
        let vals: Vec<usize> = kids.iter().map(|c| c.value()).collect();
        let merged = if i == 0 {
            let mut cur = *v;
            for j in (0..vals.len()).rev() {
                cur = self.x.module.compose(cur, j, OpId(vals[j] as u32))?;
            }
            cur
        } else if i == n {
            self.y.left_act(OpId(*v as u32), &vals)?
        } else {
            let ops: Vec<OpId> = vals.iter().map(|&o| OpId(o as u32)).collect();
            self.p.compose_full(&OpId(*v as u32), &ops)?.index()
        };
        Some(Layered::Node(merged, grand))
    }

    fn degeneracy(&self, t: &Layered, layer: usize, j: usize, n: usize) -> Option<Layered> {
        let Layered::Node(v, kids) = t else { return Some(t.clone()) };
        let kids = if layer < j {
            kids.iter().map(|c| self.degeneracy(c, layer + 1, j, n)).collect::<Option<Vec<_>>>()?
        } else {
            kids.iter()
                .enumerate()
                .map(|(r, c)| Some(Layered::Node(self.p.unit_of(self.input_color(layer, n, *v, r))?.index(), vec![c.clone()])))
                .collect::<Option<Vec<_>>>()?
        };
        Some(Layered::Node(*v, kids))
    }

    fn show(&self, t: &Layered, layer: usize, n: usize) -> String {
        match t {
            Layered::Leaf(l) => (l + 1).to_string(),
            Layered::Node(v, kids) => {
                let name = if layer == 0 {
                    self.x.module.name_of(*v).to_string()
                } else if layer == n + 1 {
                    self.y.module.name_of(*v).to_string()
                } else {
                    self.p.op_name(OpId(*v as u32)).to_string()
                };
                if kids.is_empty() {
                    name
                } else {
                    let inner: Vec<String> = kids.iter().map(|c| self.show(c, layer + 1, n)).collect();
                    format!("{name}({})", inner.join(","))
                }
            }
        }
    }
}

fn check_colors(x: &Bimodule, p: &Multicategory, y: &Bimodule) -> Result<()> {
    if x.module.coll.colors != p.colors() || y.module.out_colors != p.colors() {
        return Err(Error::Domain(format!("`{}` and `{}` are not modules over `{}`", x.module.name, y.module.name, p.name())));
    }
    if x.module.coll.symmetric != p.symmetric() || y.module.coll.symmetric != p.symmetric() {
        return Err(Error::Domain("the bar construction needs matching symmetric flags".into()));
    }
    Ok(())
}

/// Levels `0..=n_max` with all face and degeneracy maps. Every face must be
/// defined within `max_arity`, so `P` and the actions must be closed under
/// composition up to that arity.
pub fn bar_complex(x: &Bimodule, p: &Multicategory, y: &Bimodule, n_max: usize, max_arity: usize) -> Result<BarComplex> {
    check_colors(x, p, y)?;
    let b = Bar { x, p, y };
    let levels: Vec<Vec<Layered>> = exec::map_range(n_max + 1, |n| b.level(n, max_arity));
    let index: Vec<HashMap<Layered, usize>> = levels.iter().map(|l| l.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()).collect();
    let labels: Vec<Vec<String>> = levels.iter().enumerate().map(|(n, l)| l.iter().map(|t| b.show(t, 0, n)).collect()).collect();

    let mut faces = vec![Vec::new()];
    for n in 1..=n_max {
        let mut fs = Vec::new();
        for i in 0..=n {
            let f = exec::map_range(levels[n].len(), |xi| {
                b.face(&levels[n][xi], 0, i, n)
                    .map(|u| b.canon(&u, 0, n - 1))
                    .and_then(|u| index[n - 1].get(&u).copied())
                    .ok_or_else(|| Error::Precondition(format!("d_{i} of `{}` is undefined within arity {max_arity}", labels[n][xi])))
            });
            fs.push(f.into_iter().collect::<Result<Vec<_>>>()?);
        }
        faces.push(fs);
    }

    let mut degeneracies = Vec::new();
    for n in 0..n_max {
        let mut ds = Vec::new();
        for j in 0..=n {
            let d = exec::map_range(levels[n].len(), |xi| {
                b.degeneracy(&levels[n][xi], 0, j, n)
                    .map(|u| b.canon(&u, 0, n + 1))
                    .and_then(|u| index[n + 1].get(&u).copied())
                    .ok_or_else(|| Error::Precondition(format!("s_{j} of `{}` needs units", labels[n][xi])))
            });
            ds.push(d.into_iter().collect::<Result<Vec<_>>>()?);
        }
        degeneracies.push(ds);
    }

    // Union-find for the coequalizer of d_0, d_1 on level 0.
    let m = levels[0].len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    if n_max >= 1 {
        for e in 0..levels[1].len() {
            let (a, c) = (root(&mut parent, faces[1][0][e]), root(&mut parent, faces[1][1][e]));
            if a != c {
                parent[a.max(c)] = a.min(c);
            }
        }
    }
    let mut class_of = HashMap::new();
    let augmentation: Vec<usize> = (0..m)
        .map(|a| {
            let r = root(&mut parent, a);
            let next = class_of.len();
            *class_of.entry(r).or_insert(next)
        })
        .collect();

    Ok(BarComplex {
        simplicial: TruncatedSimplicialSet { labels, faces, degeneracies },
        levels,
        augmentation,
        classes: class_of.len(),
        index,
    })
}

/// Element counts by arity of each level, computed as iterated composition
/// products without the simplicial maps.
pub fn bar_level_counts(x: &FiniteCollection, p: &Multicategory, y: &FiniteCollection, n_max: usize, max_arity: usize) -> Result<Vec<Vec<usize>>> {
    let pc = p.collection();
    let mut c = y.clone();
    let mut out = Vec::new();
    for n in 0..=n_max {
        if n > 0 {
            c = circle_product(&pc, &c, max_arity)?.collection;
        }
        out.push(circle_product(x, &c, max_arity)?.counts(max_arity));
    }
    Ok(out)
}

/// `B(P, P, P)` with its augmentation to `P`, basepoints and the bimodule
/// structure on each level.
pub struct Hochschild<'a> {
    pub p: &'a Multicategory,
    pub regular: Bimodule,
    pub bar: BarComplex,
}

/// The Hochschild complex of `P`: level `n` is `P^{∘(n+2)}`.
pub fn hochschild(p: &Multicategory, n_max: usize, max_arity: usize) -> Result<Hochschild<'_>> {
    let regular = Bimodule::regular(p);
    let bar = bar_complex(&regular, p, &regular, n_max, max_arity)?;
    Ok(Hochschild { p, regular, bar })
}

impl Hochschild<'_> {
    fn ctx(&self) -> Bar<'_> {
        Bar { x: &self.regular, p: self.p, y: &self.regular }
    }

    /// `γ(x; y_1, .., y_k)` relabeled by the leaves: the augmentation to `P`.
    pub fn augment(&self, e: usize) -> Option<OpId> {
        let t = &self.bar.levels[0][e];
        let Layered::Node(x, kids) = t else { return None };
        let ys: Vec<OpId> = kids.iter().map(|c| OpId(c.value() as u32)).collect();
        let planar = self.p.compose_full(&OpId(*x as u32), &ys)?;
        let mut labels = Vec::new();
        t.leaves(&mut labels);
        let sigma = perm::inverse(&labels);
        if perm::is_identity(&sigma) {
            Some(planar)
        } else {
            self.p.action(planar, &sigma)
        }
    }

    /// `s_0` applied `n` times to a level-0 element.
    pub fn basepoint(&self, n: usize, e: usize) -> usize {
        (0..n).fold(e, |x, k| self.bar.simplicial.degeneracy(k, 0, x))
    }

    /// `γ(φ; t_1, .., t_k)` on level `n`, merging into the root layer.
    pub fn left_act(&self, n: usize, phi: OpId, ts: &[usize]) -> Option<usize> {
        let trees: Vec<&Layered> = ts.iter().map(|&t| &self.bar.levels[n][t]).collect();
        let roots: Vec<usize> = trees.iter().map(|t| t.value()).collect();
        let root = self.regular.left_act(phi, &roots)?;
        let mut kids = Vec::new();
        let mut offset = 0;
        for t in &trees {
            let shift = offset;
            kids.extend(t.kids().iter().map(|c| c.relabel(&|l| l + shift)));
            offset += t.arity();
        }
        let b = self.ctx();
        self.bar.find(n, &b.canon(&Layered::Node(root, kids), 0, n))
    }

    /// `t ∘_l q` on level `n`, acting on the bottom vertex holding leaf `l`.
    pub fn right_act(&self, n: usize, t: usize, l: usize, q: OpId) -> Option<usize> {
        let a = self.p.arity(q);
        fn go(h: &Hochschild<'_>, t: &Layered, l: usize, q: OpId, a: usize) -> Option<Option<Layered>> {
            let Layered::Node(v, kids) = t else { return Some(None) };
            if let Some(r) = kids.iter().position(|c| *c == Layered::Leaf(l)) {
                let v2 = h.regular.module.compose(*v, r, q)?;
                let mut k2 = kids[..r].to_vec();
                k2.extend((l..l + a).map(Layered::Leaf));
                k2.extend_from_slice(&kids[r + 1..]);
                return Some(Some(Layered::Node(v2, k2)));
            }
            for (j, c) in kids.iter().enumerate() {
                if let Some(c2) = go(h, c, l, q, a)? {
                    let mut k2 = kids.clone();
                    k2[j] = c2;
                    return Some(Some(Layered::Node(*v, k2)));
                }
            }
            Some(None)
        }
        let tree = &self.bar.levels[n][t];
        let shifted = tree.relabel(&|v| if v > l { v + a - 1 } else { v });
        let grafted = go(self, &shifted, l, q, a)??;
        let b = self.ctx();
        self.bar.find(n, &b.canon(&grafted, 0, n))
    }

    /// Whether `b_n` commutes with both actions wherever they are defined.
    pub fn basepoint_is_bimodule_map(&self, n: usize) -> bool {
        let p = self.p;
        let level0 = &self.bar.levels[0];
        for e in 0..level0.len() {
            let k = self.bar.arity(0, e);
            for l in 0..k {
                for q in p.op_ids() {
                    if let Some(f) = self.right_act(0, e, l, q) {
                        if self.right_act(n, self.basepoint(n, e), l, q) != Some(self.basepoint(n, f)) {
                            return false;
                        }
                    }
                }
            }
        }
        let single = super::RightModule {
            name: String::new(),
            coll: level_collection(p, &self.bar.levels[0], &self.regular),
            out_colors: p.colors().to_vec(),
            right: HashMap::new(),
        };
        for phi in p.op_ids() {
            for es in tuples(&single, &p.signature(phi).inputs, Some(usize::MAX)) {
                if let Some(f) = self.left_act(0, phi, &es) {
                    let img: Vec<usize> = es.iter().map(|&e| self.basepoint(n, e)).collect();
                    if self.left_act(n, phi, &img) != Some(self.basepoint(n, f)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Level 0 as a collection, for enumerating tuples of its elements.
fn level_collection(p: &Multicategory, level: &[Layered], regular: &Bimodule) -> FiniteCollection {
    let mut coll = FiniteCollection::new(p.colors().to_vec(), false);
    for t in level {
        let out = regular.module.signature(t.value()).output;
        let mut leaves = Vec::new();
        t.leaves(&mut leaves);
        coll.add_op(String::new(), crate::multicat::Signature::new(vec![0; leaves.len()], out));
    }
    coll
}
