//! Multicategories given by generators and relations, evaluated by bounded
//! congruence closure on tree terms.
//!
//! Terms with at most `max_arity` leaves and `max_vertices` vertices are
//! enumerated in normal form. Each relation `l = r` is applied at every
//! position of every term, with the leaves of `l` matched against arbitrary
//! subterms; the resulting one-step rewrites are merged in a union-find
//! structure. Because every rewrite preserves the signature, the arity cap
//! loses nothing; the vertex cap can, so the closure is recomputed with one
//! more vertex and the result is reported as stabilized only if no two terms
//! within the original caps get merged by the larger run.

mod constructions;

pub use constructions::{arrow_multicategory, bv_tensor, coproduct, interchange_relations, pushout, Bilinear, BvTensor};

use crate::error::{Error, Result};
use crate::exec;
use crate::multicat::builtin::materialize_with_ops;
use crate::multicat::{ColorId, FiniteCollection, Multicat, Multicategory, Signature};
use crate::perm;
use crate::trees::{Generators, Term};
use std::collections::{BTreeMap, HashMap};

/// Bounds for saturation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_arity: usize,
    pub max_vertices: usize,
}

impl Caps {
    pub fn new(max_arity: usize, max_vertices: usize) -> Self {
        Caps { max_arity, max_vertices }
    }
}

/// Generators and relations.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub name: String,
    pub gens: Generators,
    pub relations: Vec<(Term, Term)>,
}

impl Presentation {
    pub fn new(name: impl Into<String>, coll: FiniteCollection, symmetric: bool) -> Result<Self> {
        Ok(Presentation { name: name.into(), gens: Generators::new(coll, symmetric)?, relations: Vec::new() })
    }

    pub fn colors(&self) -> &[String] {
        self.gens.colors()
    }

    /// Adds `l = r`; both sides must be well-typed with the same signature.
    pub fn add_relation(&mut self, l: Term, r: Term) -> Result<()> {
        self.gens.well_typed(&l)?;
        self.gens.well_typed(&r)?;
        let (sl, sr) = (self.gens.signature(&l), self.gens.signature(&r));
        if sl != sr {
            let colors = self.colors();
            return Err(Error::Domain(format!(
                "relation {} = {} relates signatures {} and {}",
                self.gens.display(&l),
                self.gens.display(&r),
                sl.display(colors),
                sr.display(colors)
            )));
        }
        let (l, r) = (self.gens.canonical(&l), self.gens.canonical(&r));
        if l != r && !self.relations.iter().any(|(a, b)| (a == &l && b == &r) || (a == &r && b == &l)) {
            self.relations.push((l, r));
        }
        Ok(())
    }

    /// Adds a relation written in the term syntax; `output` names the color
    /// of a bare leaf.
    pub fn parse_relation(&mut self, l: &str, r: &str, output: &str) -> Result<()> {
        let c = self
            .colors()
            .iter()
            .position(|x| x == output)
            .ok_or_else(|| Error::Domain(format!("unknown color `{output}`")))?;
        let l = self.gens.parse(l, c)?;
        let r = self.gens.parse(r, c)?;
        self.add_relation(l, r)
    }
}

/// Outcome of a saturation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationReport {
    pub caps: Caps,
    pub terms: usize,
    pub classes: usize,
    /// Number of classes per signature, keyed by the displayed signature.
    pub class_counts: BTreeMap<String, usize>,
    /// No merges among terms within the caps appear when one more vertex is allowed.
    pub stabilized: bool,
    /// Every composite within the arity cap has a representative within the caps.
    pub complete: bool,
}

/// The quotient multicategory together with its classes of terms.
#[derive(Debug, Clone)]
pub struct Saturated {
    pub multicategory: Multicategory,
    /// Members of each class, least first; indexed like the operations.
    pub classes: Vec<Vec<Term>>,
    pub report: SaturationReport,
    gens: Generators,
    class_of: HashMap<Term, usize>,
}

impl Saturated {
    pub fn generators(&self) -> &Generators {
        &self.gens
    }

    /// The operation represented by a term, if it lies within the caps.
    pub fn class_of(&self, t: &Term) -> Option<crate::multicat::OpId> {
        self.class_of.get(&self.gens.canonical(t)).map(|&c| crate::multicat::OpId(c as u32))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Keeps the smaller index as root so representatives are the least terms.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// Bindings of pattern leaves to subterms.
type Binding = Vec<(usize, Term)>;

/// Every binding of the leaves of `pat` under which it equals `sub`.
fn matches(gens: &Generators, pat: &Term, sub: &Term) -> Vec<Binding> {
    // Pattern leaves bound to no leaf of `sub` need a nullary subterm, which
    // costs at least one vertex each.
    let missing = pat.arity().saturating_sub(sub.arity());
    if pat.vertices() + missing > sub.vertices() {
        return Vec::new();
    }
    match (pat, sub) {
        (Term::Leaf(v, c), _) => {
            if gens.output(sub) == *c {
                vec![vec![(*v, sub.clone())]]
            } else {
                Vec::new()
            }
        }
        (Term::Node(g, pc), Term::Node(h, sc)) if g == h => {
            let arrangements: Vec<perm::Perm> = if gens.symmetric {
                gens.stabilizer(*g).to_vec()
            } else {
                vec![perm::identity(pc.len())]
            };
            let mut table: HashMap<(usize, usize), Vec<Binding>> = HashMap::new();
            let mut out = Vec::new();
            for s in arrangements {
                // Pattern child s[j] sits over subject child j.
                let mut partial: Vec<Binding> = vec![Vec::new()];
                for (j, sj) in sc.iter().enumerate() {
                    let ms = table.entry((s[j], j)).or_insert_with(|| matches(gens, &pc[s[j]], sj));
                    if ms.is_empty() {
                        partial.clear();
                        break;
                    }
                    partial = partial
                        .iter()
                        .flat_map(|b| ms.iter().map(move |m| b.iter().chain(m).cloned().collect()))
                        .collect();
                }
                out.extend(partial);
            }
            for b in &mut out {
                b.sort();
            }
            out.sort();
            out.dedup();
            out
        }
        _ => Vec::new(),
    }
}

fn positions(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if let Term::Node(_, cs) = t {
        out.push(path.clone());
        for (i, c) in cs.iter().enumerate() {
            path.push(i);
            positions(c, path, out);
            path.pop();
        }
    }
}

fn subterm<'a>(t: &'a Term, path: &[usize]) -> &'a Term {
    match (t, path.split_first()) {
        (Term::Node(_, cs), Some((&i, rest))) => subterm(&cs[i], rest),
        _ => t,
    }
}

fn replace_at(t: &Term, path: &[usize], new: &Term) -> Term {
    match (t, path.split_first()) {
        (Term::Node(g, cs), Some((&i, rest))) => {
            let mut cs = cs.clone();
            cs[i] = replace_at(&cs[i], rest, new);
            Term::Node(*g, cs)
        }
        _ => new.clone(),
    }
}

/// A relation oriented so that its left side is not a bare leaf.
fn oriented(rels: &[(Term, Term)]) -> HashMap<usize, Vec<(Term, Term)>> {
    let mut by_root: HashMap<usize, Vec<(Term, Term)>> = HashMap::new();
    for (l, r) in rels {
        let (l, r) = if matches!(l, Term::Leaf(..)) { (r, l) } else { (l, r) };
        if let Term::Node(g, _) = l {
            by_root.entry(*g).or_default().push((l.clone(), r.clone()));
        }
    }
    by_root
}

struct Closure {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    uf: UnionFind,
}

fn close(p: &Presentation, caps: Caps) -> Closure {
    let gens = &p.gens;
    let mut terms: Vec<Term> = gens.enumerate(caps.max_arity, caps.max_vertices).into_values().flatten().collect();
    terms.sort_by(|a, b| (a.vertices(), a).cmp(&(b.vertices(), b)));
    let index: HashMap<Term, usize> = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let rules = oriented(&p.relations);
    let edges: Vec<(usize, usize)> = exec::map_range(terms.len(), |i| {
        let t = &terms[i];
        let mut out = Vec::new();
        let mut ps = Vec::new();
        positions(t, &mut Vec::new(), &mut ps);
        for path in ps {
            let s = subterm(t, &path);
            let Term::Node(g, _) = s else { continue };
            let Some(rs) = rules.get(g) else { continue };
            for (l, r) in rs {
                for b in matches(gens, l, s) {
                    let bind: HashMap<usize, &Term> = b.iter().map(|(v, x)| (*v, x)).collect();
                    let replacement = r.substitute(&|v, _| bind[&v].clone());
                    let u = gens.canonical(&replace_at(t, &path, &replacement));
                    if let Some(&j) = index.get(&u) {
                        if j != i {
                            out.push((i, j));
                        }
                    }
                }
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect();
    let mut uf = UnionFind::new(terms.len());
    for (a, b) in edges {
        uf.union(a, b);
    }
    Closure { terms, index, uf }
}

/// The quotient as a lazily composed multicategory whose operations are class roots.
struct Quotient<'a> {
    gens: &'a Generators,
    caps: Caps,
    terms: &'a [Term],
    index: &'a HashMap<Term, usize>,
    root: &'a [usize],
    members: &'a HashMap<usize, Vec<usize>>,
    by_sig: BTreeMap<Signature, Vec<usize>>,
}

impl Multicat for Quotient<'_> {
    type Op = usize;

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
        Some(self.caps.max_arity)
    }

    fn signature_of(&self, op: &usize) -> Signature {
        self.gens.signature(&self.terms[*op])
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<usize>> {
        Ok(self.by_sig.get(sig).cloned().unwrap_or_default())
    }

    /// Grafts members of the two classes, smallest first, until the result
    /// lies within the caps.
    fn compose(&self, p: &usize, slot: usize, q: &usize) -> Option<usize> {
        if self.terms[*p].arity() + self.terms[*q].arity() - 1 > self.caps.max_arity {
            return None;
        }
        for &a in &self.members[p] {
            for &b in &self.members[q] {
                let (ta, tb) = (&self.terms[a], &self.terms[b]);
                if ta.vertices() + tb.vertices() > self.caps.max_vertices {
                    continue;
                }
                let t = self.gens.canonical(&self.gens.graft(ta, slot, tb));
                if let Some(&i) = self.index.get(&t) {
                    return Some(self.root[i]);
                }
            }
        }
        None
    }

    fn act(&self, p: &usize, sigma: &[usize]) -> Option<usize> {
        if !self.gens.symmetric {
            return None;
        }
        let t = self.gens.act(&self.terms[*p], sigma);
        self.index.get(&t).map(|&i| self.root[i])
    }

    fn unit(&self, c: ColorId) -> usize {
        self.root[self.index[&Term::Leaf(0, c)]]
    }

    fn op_label(&self, op: &usize) -> String {
        self.gens.display(&self.terms[*op])
    }
}

/// Evaluates a presentation within the caps.
pub fn saturate(p: &Presentation, caps: Caps) -> Result<Saturated> {
    if caps.max_arity == 0 || caps.max_vertices == 0 {
        return Err(Error::Domain("saturation caps must be positive".into()));
    }
    let mut cl = close(p, caps);
    let n = cl.terms.len();
    let root: Vec<usize> = (0..n).map(|i| cl.uf.find(i)).collect();
    let classes_small = {
        let mut r = root.clone();
        r.sort();
        r.dedup();
        r.len()
    };
    let mut bigger = close(p, Caps::new(caps.max_arity, caps.max_vertices + 1));
    let mut seen: Vec<usize> = cl.terms.iter().map(|t| bigger.uf.find(bigger.index[t])).collect();
    seen.sort();
    seen.dedup();
    let stabilized = seen.len() == classes_small;

    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &r) in root.iter().enumerate() {
        members.entry(r).or_default().push(i);
    }
    let mut by_sig: BTreeMap<Signature, Vec<usize>> = BTreeMap::new();
    let mut roots: Vec<usize> = members.keys().copied().collect();
    roots.sort();
    for &r in &roots {
        by_sig.entry(p.gens.signature(&cl.terms[r])).or_default().push(r);
    }
    let q = Quotient { gens: &p.gens, caps, terms: &cl.terms, index: &cl.index, root: &root, members: &members, by_sig };
    let support: Vec<Signature> = q.by_sig.keys().cloned().collect();
    let (multicategory, ops) = materialize_with_ops(&q, &p.name, &support, usize::MAX)?;
    let colors = p.colors();
    let mut class_counts = BTreeMap::new();
    for (sig, v) in &q.by_sig {
        class_counts.insert(sig.display(colors), v.len());
    }
    let classes: Vec<Vec<Term>> = ops.iter().map(|r| members[r].iter().map(|&i| cl.terms[i].clone()).collect()).collect();
    let pos: HashMap<usize, usize> = ops.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let class_of: HashMap<Term, usize> = cl.terms.iter().enumerate().map(|(i, t)| (t.clone(), pos[&root[i]])).collect();
    let report = SaturationReport {
        caps,
        terms: n,
        classes: ops.len(),
        class_counts,
        stabilized,
        complete: !multicategory.is_partial(),
    };
    Ok(Saturated { multicategory, classes, report, gens: p.gens.clone(), class_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::laws::check_multicategory_laws;

    fn binary(symmetric: bool) -> Presentation {
        let mut c = FiniteCollection::new(vec!["x".into()], false);
        c.add_op("m", Signature::new(vec![0, 0], 0));
        Presentation::new("M", c, symmetric).unwrap()
    }

    #[test]
    fn associativity_leaves_one_class_per_arity() {
        let mut p = binary(false);
        p.parse_relation("m(m(1,2),3)", "m(1,m(2,3))", "x").unwrap();
        let s = saturate(&p, Caps::new(5, 4)).unwrap();
        for n in 1..=5 {
            let sig = Signature::new(vec![0; n], 0).display(p.colors());
            assert_eq!(s.report.class_counts[&sig], 1, "arity {n}");
        }
        assert!(s.report.stabilized);
        assert!(check_multicategory_laws(&s.multicategory).unwrap().passed());
    }

    #[test]
    fn mismatched_relation_is_refused() {
        let mut p = binary(false);
        assert!(p.parse_relation("m(1,2)", "1", "x").is_err());
    }

    #[test]
    fn matching_uses_stabilizers() {
        let mut c = FiniteCollection::new(vec!["x".into()], true);
        let m = c.add_op("m", Signature::new(vec![0, 0], 0));
        c.set_action(m, &[1, 0], m);
        let mut p = Presentation::new("C", c, true).unwrap();
        p.parse_relation("m(m(1,2),3)", "m(1,m(2,3))", "x").unwrap();
        let s = saturate(&p, Caps::new(3, 2)).unwrap();
        assert_eq!(s.report.class_counts["(x,x,x;x)"], 1);
    }
}
