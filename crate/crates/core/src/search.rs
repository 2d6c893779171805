//! Backtracking search for multifunctors out of a table multicategory.
//!
//! Units are fixed first; afterwards the unassigned operation of lowest arity
//! is branched on, and every assignment is pushed through the composition
//! table and the action generators of the source, so operations that are
//! composites or permutations of already assigned ones are never branched on.

use crate::error::{Error, Result};
use crate::exec;
use crate::functor::Multifunctor;
use crate::multicat::builtin::next_tuple;
use crate::multicat::{ColorId, Multicat, Multicategory, OpId};
use crate::perm::{self, Perm};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

/// Default bound on the number of candidate assignments tried.
pub const DEFAULT_BUDGET: usize = 1_000_000;

struct Plan {
    /// Composition entries `(a, i, b, r)` mentioning each operation as `a` or `b`.
    entries: Vec<Vec<(OpId, usize, OpId, OpId)>>,
    actions: Vec<Vec<(Perm, OpId)>>,
    order: Vec<OpId>,
}

impl Plan {
    fn new(p: &Multicategory) -> Plan {
        let mut entries = vec![Vec::new(); p.op_count()];
        let mut all: Vec<_> = p.compositions().collect();
        all.sort();
        for (a, i, b, r) in all {
            entries[a.index()].push((a, i, b, r));
            if a != b {
                entries[b.index()].push((a, i, b, r));
            }
        }
        let actions = p
            .op_ids()
            .map(|o| {
                if !p.symmetric() {
                    return Vec::new();
                }
                perm::adjacent_transpositions(p.arity(o)).into_iter().map(|g| {
                    let t = p.action(o, &g).unwrap();
                    (g, t)
                }).collect()
            })
            .collect();
        let mut order: Vec<OpId> = p.op_ids().collect();
        order.sort_by_key(|&o| (p.arity(o), o));
        Plan { entries, actions, order }
    }
}

struct Run<'a, Q: Multicat> {
    p: &'a Multicategory,
    q: &'a Q,
    plan: &'a Plan,
    objects: &'a [ColorId],
    budget: usize,
    spent: &'a AtomicUsize,
    stop: &'a AtomicBool,
    first_only: bool,
    accept: &'a (dyn Fn(&Multifunctor<Q::Op>) -> bool + Sync),
}

#[derive(Clone)]
struct State<T> {
    assign: Vec<Option<T>>,
    trail: Vec<usize>,
}

impl<T: Clone + Eq> State<T> {
    fn set(&mut self, o: OpId, v: T, queue: &mut Vec<OpId>) -> bool {
        match &self.assign[o.index()] {
            Some(w) => *w == v,
            None => {
                self.assign[o.index()] = Some(v);
                self.trail.push(o.index());
                queue.push(o);
                true
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let o = self.trail.pop().unwrap();
            self.assign[o] = None;
        }
    }
}

impl<Q: Multicat> Run<'_, Q> {
    fn propagate(&self, st: &mut State<Q::Op>, mut queue: Vec<OpId>) -> bool {
        while let Some(x) = queue.pop() {
            let vx = st.assign[x.index()].clone().unwrap();
            for (g, y) in &self.plan.actions[x.index()] {
                if let Some(v) = self.q.act(&vx, g) {
                    if !st.set(*y, v, &mut queue) {
                        return false;
                    }
                }
            }
            for &(a, i, b, r) in &self.plan.entries[x.index()] {
                let (Some(va), Some(vb)) = (&st.assign[a.index()], &st.assign[b.index()]) else { continue };
                if let Some(v) = self.q.compose(va, i, vb) {
                    if !st.set(r, v, &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn next_open(&self, st: &State<Q::Op>) -> Option<OpId> {
        self.plan.order.iter().copied().find(|o| st.assign[o.index()].is_none())
    }

    fn candidates(&self, o: OpId) -> Result<Vec<Q::Op>> {
        let sig = self.p.signature(o);
        let target = crate::multicat::Signature::new(sig.inputs.iter().map(|&c| self.objects[c]).collect(), self.objects[sig.output]);
        self.q.operations(&target)
    }

    fn charge(&self, found: usize) -> Result<()> {
        if self.spent.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::Budget { budget: self.budget, partial: found });
        }
        Ok(())
    }

    fn dfs(&self, st: &mut State<Q::Op>, out: &mut Vec<Multifunctor<Q::Op>>) -> Result<()> {
        if self.stop.load(Ordering::Relaxed) {
            return Ok(());
        }
        let Some(o) = self.next_open(st) else {
            let f = Multifunctor { objects: self.objects.to_vec(), ops: st.assign.iter().map(|v| v.clone().unwrap()).collect() };
            if (self.accept)(&f) {
                out.push(f);
                if self.first_only {
                    self.stop.store(true, Ordering::Relaxed);
                }
            }
            return Ok(());
        };
        for v in self.candidates(o)? {
            self.charge(out.len())?;
            let mark = st.trail.len();
            let mut queue = Vec::new();
            if st.set(o, v, &mut queue) && self.propagate(st, queue) {
                self.dfs(st, out)?;
            }
            st.undo(mark);
            if self.stop.load(Ordering::Relaxed) {
                break;
            }
        }
        Ok(())
    }

    fn solve(&self) -> Result<Vec<Multifunctor<Q::Op>>> {
        let mut st = State { assign: vec![None; self.p.op_count()], trail: Vec::new() };
        let mut queue = Vec::new();
        for c in 0..self.p.colors().len() {
            let u = self.p.unit_of(c).unwrap();
            if !st.set(u, self.q.unit(self.objects[c]), &mut queue) {
                return Ok(Vec::new());
            }
        }
        if !self.propagate(&mut st, queue) {
            return Ok(Vec::new());
        }
        let Some(o) = self.next_open(&st) else {
            let mut out = Vec::new();
            self.dfs(&mut st, &mut out)?;
            return Ok(out);
        };
        let cands = self.candidates(o)?;
        let branches = exec::map(&cands, |v| -> Result<Vec<Multifunctor<Q::Op>>> {
            let mut out = Vec::new();
            if self.stop.load(Ordering::Relaxed) {
                return Ok(out);
            }
            self.charge(0)?;
            let mut st = st.clone();
            let mut queue = Vec::new();
            if st.set(o, v.clone(), &mut queue) && self.propagate(&mut st, queue) {
                self.dfs(&mut st, &mut out)?;
            }
            Ok(out)
        });
        let mut out = Vec::new();
        for b in branches {
            match b {
                Ok(fs) => out.extend(fs),
                Err(Error::Budget { budget, .. }) => return Err(Error::Budget { budget, partial: out.len() }),
                Err(e) => return Err(e),
            }
        }
        if self.first_only {
            out.truncate(1);
        }
        Ok(out)
    }
}

pub type Accept<'a, T> = &'a (dyn Fn(&Multifunctor<T>) -> bool + Sync);

/// Options for [`search`].
pub struct SearchOptions<'a, T> {
    /// Fixed object map; all object maps are tried when `None`.
    pub objects: Option<Vec<ColorId>>,
    pub budget: usize,
    pub first_only: bool,
    pub accept: Option<Accept<'a, T>>,
}

impl<T> Default for SearchOptions<'_, T> {
    fn default() -> Self {
        SearchOptions { objects: None, budget: DEFAULT_BUDGET, first_only: false, accept: None }
    }
}

/// All multifunctors `P → Q` (subject to the options), in a deterministic
/// order: by object map, then by the candidate order of `Q`.
pub fn search<Q: Multicat>(p: &Multicategory, q: &Q, opts: SearchOptions<'_, Q::Op>) -> Result<Vec<Multifunctor<Q::Op>>> {
    let plan = Plan::new(p);
    let spent = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let always = |_: &Multifunctor<Q::Op>| true;
    let accept: &(dyn Fn(&Multifunctor<Q::Op>) -> bool + Sync) = match opts.accept {
        Some(a) => a,
        None => &always,
    };
    let maps: Vec<Vec<ColorId>> = match opts.objects {
        Some(m) => {
            if m.len() != p.colors().len() || m.iter().any(|&c| c >= q.color_count()) {
                return Err(Error::Domain("object map does not fit the source and target colors".into()));
            }
            vec![m]
        }
        None => {
            let mut maps = Vec::new();
            if q.color_count() > 0 || p.colors().is_empty() {
                let mut t = vec![0; p.colors().len()];
                loop {
                    maps.push(t.clone());
                    if !next_tuple(&mut t, q.color_count()) {
                        break;
                    }
                }
            }
            maps
        }
    };
    let mut out = Vec::new();
    for objects in &maps {
        let run = Run { p, q, plan: &plan, objects, budget: opts.budget, spent: &spent, stop: &stop, first_only: opts.first_only, accept };
        match run.solve() {
            Ok(fs) => out.extend(fs),
            Err(Error::Budget { budget, partial }) => return Err(Error::Budget { budget, partial: out.len() + partial }),
            Err(e) => return Err(e),
        }
        if opts.first_only && !out.is_empty() {
            out.truncate(1);
            break;
        }
    }
    Ok(out)
}

/// All multifunctors `P → Q`.
pub fn enumerate_multifunctors<Q: Multicat>(p: &Multicategory, q: &Q, budget: usize) -> Result<Vec<Multifunctor<Q::Op>>> {
    search(p, q, SearchOptions { budget, ..Default::default() })
}

/// An isomorphism `P → Q`: bijective on colors and on every operation set.
pub fn find_isomorphism(p: &Multicategory, q: &Multicategory, budget: usize) -> Result<Option<Multifunctor>> {
    if p.colors().len() != q.colors().len() || p.op_count() != q.op_count() {
        return Ok(None);
    }
    let bijective = |f: &Multifunctor| {
        let mut seen = vec![false; q.op_count()];
        f.ops.iter().all(|o| !std::mem::replace(&mut seen[o.index()], true))
    };
    for objects in perm::all(p.colors().len()) {
        let found = search(p, q, SearchOptions { objects: Some(objects), budget, first_only: true, accept: Some(&bijective) })?;
        if let Some(f) = found.into_iter().next() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::check_multifunctor;
    use crate::multicat::builtin;

    #[test]
    fn into_terminal_and_out_of_unit() {
        let a = builtin::associative(3, true);
        let c = builtin::commutative(3, true);
        let fs = enumerate_multifunctors(&a, &c, 1000).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(check_multifunctor(&a, &c, &fs[0]).passed());
        let fs = enumerate_multifunctors(&builtin::trivial(), &a, 1000).unwrap();
        assert_eq!(fs.len(), 1);
        // As -> As: the identity and the reversal of words.
        assert_eq!(enumerate_multifunctors(&a, &a, 1000).unwrap().len(), 2);
        assert!(find_isomorphism(&a, &a, 1000).unwrap().is_some());
        assert!(find_isomorphism(&a, &builtin::associative(3, false), 1000).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let a = builtin::associative(3, true);
        assert!(matches!(enumerate_multifunctors(&a, &a, 1), Err(Error::Budget { .. })));
    }
}
