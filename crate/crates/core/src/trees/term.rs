//! Colored tree terms over a collection of generators, and the free
//! multicategory they span.
//!
//! A term is a planar tree whose vertices carry generators and whose leaves
//! carry input numbers. In the symmetric setting a vertex labeled `r·τ` with
//! children `c` is the same operation as `r` with children `c∘τ⁻¹`, so terms
//! are normalized bottom-up: every vertex carries an orbit representative and
//! its children are arranged minimally under the stabilizer of that
//! representative.
//!
//! Text encoding: `name(t1,..,tk)` for a vertex, `3` for the leaf numbered 3.

use crate::error::{Error, Result};
use crate::multicat::builtin::materialize_with_ops;
use crate::multicat::{ColorId, FiniteCollection, Multicat, Multicategory, OrbitData, Signature};
use crate::perm;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Leaf(usize, ColorId),
    Node(usize, Vec<Term>),
}

impl Term {
    pub fn vertices(&self) -> usize {
        match self {
            Term::Leaf(..) => 0,
            Term::Node(_, cs) => 1 + cs.iter().map(|c| c.vertices()).sum::<usize>(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Term::Leaf(..) => 1,
            Term::Node(_, cs) => cs.iter().map(|c| c.arity()).sum(),
        }
    }

    /// Leaf numbers and colors in planar order.
    pub fn leaves(&self) -> Vec<(usize, ColorId)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<(usize, ColorId)>) {
        match self {
            Term::Leaf(l, c) => out.push((*l, *c)),
            Term::Node(_, cs) => cs.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Renumbers leaves through `f`.
    pub fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Term {
        match self {
            Term::Leaf(l, c) => Term::Leaf(f(*l), *c),
            Term::Node(g, cs) => Term::Node(*g, cs.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    /// Replaces each leaf `l` by `f(l)`.
    pub fn substitute(&self, f: &dyn Fn(usize, ColorId) -> Term) -> Term {
        match self {
            Term::Leaf(l, c) => f(*l, *c),
            Term::Node(g, cs) => Term::Node(*g, cs.iter().map(|c| c.substitute(f)).collect()),
        }
    }

    /// Generators used, with multiplicity.
    pub fn generators(&self, out: &mut Vec<usize>) {
        if let Term::Node(g, cs) = self {
            out.push(*g);
            cs.iter().for_each(|c| c.generators(out));
        }
    }
}

/// A generating collection together with its orbit data.
#[derive(Debug, Clone)]
pub struct Generators {
    pub coll: FiniteCollection,
    /// Whether terms are taken up to the symmetric identifications.
    pub symmetric: bool,
    orbits: OrbitData,
}

impl Generators {
    /// Completes the action of `coll` if it is symmetric. For `symmetric` with a
    /// non-symmetric collection every generator spans a free orbit.
    pub fn new(mut coll: FiniteCollection, symmetric: bool) -> Result<Self> {
        coll.complete_actions()?;
        let orbits = if symmetric && coll.symmetric {
            coll.orbits()
        } else {
            let mut plain = coll.clone();
            plain.symmetric = false;
            plain.orbits()
        };
        Ok(Generators { coll, symmetric, orbits })
    }

    pub fn colors(&self) -> &[String] {
        &self.coll.colors
    }

    pub fn name(&self, g: usize) -> &str {
        &self.coll.ops[g].0
    }

    pub fn gen_signature(&self, g: usize) -> &Signature {
        &self.coll.ops[g].1
    }

    pub fn output(&self, t: &Term) -> ColorId {
        match t {
            Term::Leaf(_, c) => *c,
            Term::Node(g, _) => self.gen_signature(*g).output,
        }
    }

    pub fn signature(&self, t: &Term) -> Signature {
        let mut leaves = t.leaves();
        leaves.sort();
        Signature::new(leaves.into_iter().map(|(_, c)| c).collect(), self.output(t))
    }

    /// Checks colors at every edge and that leaves are numbered `0..n`.
    pub fn well_typed(&self, t: &Term) -> Result<()> {
        fn go(g: &Generators, t: &Term) -> Result<()> {
            if let Term::Node(x, cs) = t {
                let sig = g.gen_signature(*x);
                if cs.len() != sig.arity() {
                    return Err(Error::Domain(format!("`{}` has arity {} but {} children", g.name(*x), sig.arity(), cs.len())));
                }
                for (i, c) in cs.iter().enumerate() {
                    if g.output(c) != sig.inputs[i] {
                        return Err(Error::ColorMismatch {
                            outer: g.name(*x).to_string(),
                            slot: i,
                            inner: g.display(c),
                            expected: g.colors()[sig.inputs[i]].clone(),
                            found: g.colors()[g.output(c)].clone(),
                        });
                    }
                    go(g, c)?;
                }
            }
            Ok(())
        }
        go(self, t)?;
        let labels: Vec<usize> = t.leaves().into_iter().map(|(l, _)| l).collect();
        if !perm::is_permutation(&labels) {
            return Err(Error::Domain(format!("leaves of `{}` are not numbered 1..n", self.display(t))));
        }
        if !self.symmetric && labels.iter().enumerate().any(|(i, &l)| i != l) {
            return Err(Error::Domain(format!("leaves of the planar term `{}` are out of order", self.display(t))));
        }
        Ok(())
    }

    /// The normal form of `t`.
    pub fn canonical(&self, t: &Term) -> Term {
        match t {
            Term::Leaf(..) => t.clone(),
            Term::Node(g, cs) => {
                let kids: Vec<Term> = cs.iter().map(|c| self.canonical(c)).collect();
                if !self.symmetric {
                    return Term::Node(*g, kids);
                }
                let r = self.orbits.rep[*g];
                let tau = &self.orbits.to_rep[*g];
                let kids = perm::permute(&kids, &perm::inverse(tau));
                let best = self.orbits.stabilizer[&r].iter().map(|s| perm::permute(&kids, s)).min().unwrap();
                Term::Node(r, best)
            }
        }
    }

    /// `p ∘_slot q`, not normalized.
    pub fn graft(&self, p: &Term, slot: usize, q: &Term) -> Term {
        let m = q.arity();
        p.substitute(&|l, c| {
            if l == slot {
                q.relabel(&|x| x + slot)
            } else if l > slot {
                Term::Leaf(l + m - 1, c)
            } else {
                Term::Leaf(l, c)
            }
        })
    }

    /// `p·σ`: leaf `σ(k)` becomes leaf `k`.
    pub fn act(&self, p: &Term, sigma: &[usize]) -> Term {
        let inv = perm::inverse(sigma);
        self.canonical(&p.relabel(&|l| inv[l]))
    }

    pub fn display(&self, t: &Term) -> String {
        let mut s = String::new();
        self.write(t, &mut s);
        s
    }

    fn write(&self, t: &Term, s: &mut String) {
        match t {
            Term::Leaf(l, _) => {
                let _ = write!(s, "{}", l + 1);
            }
            Term::Node(g, cs) => {
                s.push_str(self.name(*g));
                s.push('(');
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    self.write(c, s);
                }
                s.push(')');
            }
        }
    }

    /// Parses a term; `output` gives the color of a bare leaf.
    pub fn parse(&self, text: &str, output: ColorId) -> Result<Term> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = self.parse_at(&chars, &mut pos, output)?;
        if pos != chars.len() {
            return Err(Error::Domain(format!("trailing input in term `{text}`")));
        }
        self.well_typed(&t)?;
        Ok(t)
    }

    fn parse_at(&self, s: &[char], pos: &mut usize, color: ColorId) -> Result<Term> {
        let start = *pos;
        while s.get(*pos).is_some_and(|&c| c != '(' && c != ',' && c != ')') {
            *pos += 1;
        }
        let name: String = s[start..*pos].iter().collect();
        if s.get(*pos) != Some(&'(') {
            let n: usize = name.parse().map_err(|_| Error::Domain(format!("`{name}` is neither a leaf number nor applied to arguments")))?;
            return n.checked_sub(1).map(|l| Term::Leaf(l, color)).ok_or_else(|| Error::Domain("leaf numbers are 1-based".into()));
        }
        let candidates: Vec<usize> = (0..self.coll.ops.len()).filter(|&g| self.coll.ops[g].0 == name && self.coll.ops[g].1.output == color).collect();
        let g = match candidates.as_slice() {
            [g] => *g,
            [] => return Err(Error::Domain(format!("no generator `{name}` with output {}", self.colors()[color]))),
            _ => return Err(Error::Domain(format!("generator name `{name}` is ambiguous"))),
        };
        *pos += 1;
        let inputs = self.gen_signature(g).inputs.clone();
        let mut cs = Vec::new();
        if s.get(*pos) == Some(&')') {
            *pos += 1;
        } else {
            loop {
                let c = inputs.get(cs.len()).copied().ok_or_else(|| Error::Domain(format!("too many arguments for `{name}`")))?;
                cs.push(self.parse_at(s, pos, c)?);
                match s.get(*pos) {
                    Some(',') => *pos += 1,
                    Some(')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(Error::Domain(format!("expected `,` or `)` at {}", *pos))),
                }
            }
        }
        Ok(Term::Node(g, cs))
    }

    /// Permutations fixing the orbit representative `g` (only the identity
    /// when terms are planar).
    pub fn stabilizer(&self, g: usize) -> &[perm::Perm] {
        &self.orbits.stabilizer[&g]
    }

    /// Whether `g` is the representative of its orbit.
    pub fn is_rep(&self, g: usize) -> bool {
        self.orbits.rep[g] == g
    }

    /// The generator `g` as a one-vertex term with leaves in order.
    pub fn corolla(&self, g: usize) -> Term {
        let sig = self.gen_signature(g);
        self.canonical(&Term::Node(g, sig.inputs.iter().enumerate().map(|(i, &c)| Term::Leaf(i, c)).collect()))
    }

    /// Generators allowed at vertices of normal forms.
    fn vertex_labels(&self) -> Vec<usize> {
        (0..self.coll.ops.len()).filter(|&g| !self.symmetric || self.orbits.rep[g] == g).collect()
    }

    /// Shapes (every leaf numbered 0) of output `c` with exactly `v` vertices
    /// and `l` leaves. In the symmetric setting the children of each vertex
    /// are arranged minimally under the stabilizer of its label, since every
    /// labeling of the other arrangements is reached from this one.
    fn shapes(&self, c: ColorId, v: usize, l: usize, memo: &mut HashMap<(ColorId, usize, usize), Vec<Term>>) -> Vec<Term> {
        if v == 0 {
            return if l == 1 { vec![Term::Leaf(0, c)] } else { Vec::new() };
        }
        if let Some(x) = memo.get(&(c, v, l)) {
            return x.clone();
        }
        let mut out = Vec::new();
        for g in self.vertex_labels() {
            let sig = self.gen_signature(g).clone();
            if sig.output != c {
                continue;
            }
            let k = sig.arity();
            if k == 0 {
                if v == 1 && l == 0 {
                    out.push(Term::Node(g, Vec::new()));
                }
                continue;
            }
            let mut kids = Vec::with_capacity(k);
            self.fill(&sig.inputs, v - 1, l, &mut kids, memo, &mut |kids| {
                let arranged = if self.symmetric {
                    self.orbits.stabilizer[&g].iter().map(|s| perm::permute(kids, s)).min().unwrap()
                } else {
                    kids.to_vec()
                };
                out.push(Term::Node(g, arranged));
            });
        }
        out.sort();
        out.dedup();
        memo.insert((c, v, l), out.clone());
        out
    }

    /// Chooses children for the remaining `inputs` using exactly `v`
    /// vertices and `l` leaves in total.
    fn fill(
        &self,
        inputs: &[ColorId],
        v: usize,
        l: usize,
        kids: &mut Vec<Term>,
        memo: &mut HashMap<(ColorId, usize, usize), Vec<Term>>,
        emit: &mut dyn FnMut(&[Term]),
    ) {
        let Some((&c, rest)) = inputs.split_first() else {
            if v == 0 && l == 0 {
                emit(kids);
            }
            return;
        };
        let (vs, ls) = if rest.is_empty() { (v..=v, l..=l) } else { (0..=v, 0..=l) };
        for vi in vs {
            for li in ls.clone() {
                for t in self.shapes(c, vi, li, memo) {
                    kids.push(t);
                    self.fill(rest, v - vi, l - li, kids, memo, emit);
                    kids.pop();
                }
            }
        }
    }

    /// Every normal form with at most `max_arity` leaves and `max_vertices`
    /// vertices, grouped by signature.
    pub fn enumerate(&self, max_arity: usize, max_vertices: usize) -> BTreeMap<Signature, Vec<Term>> {
        let mut memo = HashMap::new();
        let mut out: BTreeMap<Signature, Vec<Term>> = BTreeMap::new();
        for c in 0..self.colors().len() {
            for v in 0..=max_vertices {
                for l in 0..=max_arity {
                    for shape in self.shapes(c, v, l, &mut memo) {
                        let colors: Vec<ColorId> = shape.leaves().into_iter().map(|(_, c)| c).collect();
                        let labelings = if self.symmetric { perm::all(l) } else { vec![perm::identity(l)] };
                        for p in labelings {
                            let cell = std::cell::Cell::new(0usize);
                            let t = shape.substitute(&|_, col| {
                                let j = cell.get();
                                cell.set(j + 1);
                                Term::Leaf(p[j], col)
                            });
                            let t = self.canonical(&t);
                            out.entry(self.signature(&t)).or_default().push(t);
                        }
                        debug_assert_eq!(colors.len(), l);
                    }
                }
            }
        }
        for v in out.values_mut() {
            v.sort();
            v.dedup();
        }
        out
    }
}

/// The free multicategory on a generating collection, truncated at an arity
/// and a vertex cap, computed lazily from terms.
#[derive(Debug, Clone)]
pub struct FreeMulticategory {
    pub gens: Generators,
    pub max_arity: usize,
    pub max_vertices: usize,
    terms: BTreeMap<Signature, Vec<Term>>,
}

impl FreeMulticategory {
    pub fn new(gens: Generators, max_arity: usize, max_vertices: usize) -> Self {
        let terms = gens.enumerate(max_arity, max_vertices);
        FreeMulticategory { gens, max_arity, max_vertices, terms }
    }

    pub fn terms(&self) -> &BTreeMap<Signature, Vec<Term>> {
        &self.terms
    }
}

impl Multicat for FreeMulticategory {
    type Op = Term;

    fn color_count(&self) -> usize {
        self.gens.colors().len()
    }

    fn color_name(&self, c: ColorId) -> String {
        self.gens.colors()[c].clone()
    }

    fn is_symmetric(&self) -> bool {
        self.gens.symmetric
    }

    fn arity_cap(&self) -> Option<usize> {
        Some(self.max_arity)
    }

    fn signature_of(&self, op: &Term) -> Signature {
        self.gens.signature(op)
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<Term>> {
        Ok(self.terms.get(sig).cloned().unwrap_or_default())
    }

    fn compose(&self, p: &Term, slot: usize, q: &Term) -> Option<Term> {
        if p.vertices() + q.vertices() > self.max_vertices || p.arity() + q.arity() - 1 > self.max_arity {
            return None;
        }
        Some(self.gens.canonical(&self.gens.graft(p, slot, q)))
    }

    fn act(&self, p: &Term, sigma: &[usize]) -> Option<Term> {
        self.gens.symmetric.then(|| self.gens.act(p, sigma))
    }

    fn unit(&self, c: ColorId) -> Term {
        Term::Leaf(0, c)
    }

    fn op_label(&self, op: &Term) -> String {
        self.gens.display(op)
    }
}

/// A tabulated free multicategory; `complete` is false when some composite
/// within the arity cap needs more vertices than allowed.
#[derive(Debug, Clone)]
pub struct FreeResult {
    pub multicategory: Multicategory,
    pub terms: Vec<Term>,
    pub complete: bool,
}

pub fn free_multicategory(gens: &FiniteCollection, symmetric: bool, max_arity: usize, max_vertices: usize) -> Result<FreeResult> {
    if max_arity == 0 && max_vertices == 0 {
        return Err(Error::Domain("caps must be positive".into()));
    }
    let free = FreeMulticategory::new(Generators::new(gens.clone(), symmetric)?, max_arity, max_vertices);
    let mut support: Vec<Signature> = free.terms.keys().cloned().collect();
    support.sort();
    let (multicategory, terms) = materialize_with_ops(&free, "Free", &support, usize::MAX)?;
    let complete = !multicategory.is_partial();
    Ok(FreeResult { multicategory, terms, complete })
}
