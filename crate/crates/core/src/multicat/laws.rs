//! Exhaustive verification of the multicategory axioms on a finite table.

use super::{Multicategory, OpId};
use crate::error::{Error, Result};
use crate::exec;
use crate::perm;

/// One failed law instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    /// Number of law instances evaluated.
    pub checked: usize,
    /// Instances skipped because an intermediate composite lies outside the
    /// truncation.
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: LawReport) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
    }

    pub fn fail(&mut self, law: &'static str, witness: String) {
        self.violations.push(Violation { law, witness });
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

struct Ctx<'a> {
    m: &'a Multicategory,
}

impl Ctx<'_> {
    /// A composite, `None` when legitimately absent, error when required.
    fn c(&self, p: OpId, i: usize, q: OpId) -> Result<Option<OpId>> {
        match self.m.lookup(p, i, q) {
            Some(r) => Ok(Some(r)),
            None if self.m.composite_required(p, q) => Err(Error::Structural(format!(
                "missing composition entry {} ∘{} {} in signature {}",
                self.m.op_name(p),
                i + 1,
                self.m.op_name(q),
                self.m.signature(p).graft(i, self.m.signature(q)).display(&self.m.colors)
            ))),
            None => Ok(None),
        }
    }

    fn n(&self, p: OpId) -> String {
        format!("{}{}", self.m.op_name(p), self.m.signature(p).display(&self.m.colors))
    }

    fn act(&self, p: OpId, sigma: &[usize]) -> OpId {
        self.m.action(p, sigma).expect("complete action table")
    }

    /// Every instance with `p` as the outermost operation.
    fn check_outer(&self, p: OpId) -> Result<LawReport> {
        let m = self.m;
        let mut rep = LawReport::default();
        let sp = m.signature(p).clone();
        let n = sp.arity();

        // Units.
        rep.checked += 1;
        match self.c(m.units[sp.output].unwrap(), 0, p)? {
            Some(r) if r == p => {}
            Some(r) => rep.fail("left unit", format!("1 ∘1 {} = {}", self.n(p), self.n(r))),
            None => rep.skipped += 1,
        }
        for i in 0..n {
            rep.checked += 1;
            match self.c(p, i, m.units[sp.inputs[i]].unwrap())? {
                Some(r) if r == p => {}
                Some(r) => rep.fail("right unit", format!("{} ∘{} 1 = {}", self.n(p), i + 1, self.n(r))),
                None => rep.skipped += 1,
            }
        }

        // Actions: identity and functoriality against generators.
        if m.symmetric {
            rep.checked += 1;
            if self.act(p, &perm::identity(n)) != p {
                rep.fail("action identity", self.n(p));
            }
            for sigma in perm::all(n) {
                let ps = self.act(p, &sigma);
                for tau in perm::adjacent_transpositions(n) {
                    rep.checked += 1;
                    let lhs = self.act(ps, &tau);
                    let rhs = self.act(p, &perm::compose(&sigma, &tau));
                    if lhs != rhs {
                        rep.fail(
                            "action functoriality",
                            format!("({}·{:?})·{:?} ≠ {}·({:?}{:?})", self.n(p), sigma, tau, self.n(p), sigma, tau),
                        );
                    }
                }
            }
        }

        for i in 0..n {
            for &q in m.ops_of_output(sp.inputs[i]) {
                let Some(pq) = self.c(p, i, q)? else { continue };
                let mq = m.arity(q);

                // Sequential associativity.
                for j in 0..mq {
                    let cj = m.signature(q).inputs[j];
                    for &r in m.ops_of_output(cj) {
                        rep.checked += 1;
                        let lhs = self.c(pq, i + j, r)?;
                        let rhs = match self.c(q, j, r)? {
                            Some(qr) => self.c(p, i, qr)?,
                            None => None,
                        };
                        match (lhs, rhs) {
                            (Some(a), Some(b)) if a != b => rep.fail(
                                "sequential associativity",
                                format!("({} ∘{} {}) ∘{} {} ≠ {} ∘{} ({} ∘{} {})", self.n(p), i + 1, self.n(q), i + j + 1, self.n(r), self.n(p), i + 1, self.n(q), j + 1, self.n(r)),
                            ),
                            (Some(_), Some(_)) => {}
                            _ => rep.skipped += 1,
                        }
                    }
                }

                // Parallel associativity, for k > i.
                for k in i + 1..n {
                    for &r in m.ops_of_output(sp.inputs[k]) {
                        rep.checked += 1;
                        let lhs = self.c(pq, k + mq - 1, r)?;
                        let rhs = match self.c(p, k, r)? {
                            Some(pr) => self.c(pr, i, q)?,
                            None => None,
                        };
                        match (lhs, rhs) {
                            (Some(a), Some(b)) if a != b => rep.fail(
                                "parallel associativity",
                                format!("({} ∘{} {}) ∘{} {} ≠ ({} ∘{} {}) ∘{} {}", self.n(p), i + 1, self.n(q), k + mq, self.n(r), self.n(p), k + 1, self.n(r), i + 1, self.n(q)),
                            ),
                            (Some(_), Some(_)) => {}
                            _ => rep.skipped += 1,
                        }
                    }
                }

                if m.symmetric {
                    // Equivariance in the inner argument.
                    for tau in perm::all(mq) {
                        rep.checked += 1;
                        let lhs = self.c(p, i, self.act(q, &tau))?;
                        let rhs = self.act(pq, &perm::embed(&tau, i, n - i - 1));
                        match lhs {
                            Some(a) if a != rhs => rep.fail(
                                "inner equivariance",
                                format!("{} ∘{} ({}·{:?}) ≠ ({} ∘{} {})·{:?}", self.n(p), i + 1, self.n(q), tau, self.n(p), i + 1, self.n(q), tau),
                            ),
                            Some(_) => {}
                            None => rep.skipped += 1,
                        }
                    }
                }
            }
        }

        // Equivariance in the outer argument: (p·σ) ∘_k q = (p ∘_{σ(k)} q)·ρ.
        if m.symmetric {
            for sigma in perm::all(n) {
                let ps = self.act(p, &sigma);
                for k in 0..n {
                    let old = sigma[k];
                    for &q in m.ops_of_output(sp.inputs[old]) {
                        rep.checked += 1;
                        let mut sizes = vec![1; n];
                        sizes[old] = m.arity(q);
                        let lhs = self.c(ps, k, q)?;
                        let rhs = self.c(p, old, q)?.map(|r| self.act(r, &perm::block_permutation(&sigma, &sizes)));
                        match (lhs, rhs) {
                            (Some(a), Some(b)) if a != b => rep.fail(
                                "outer equivariance",
                                format!("({}·{:?}) ∘{} {} ≠ ({} ∘{} {})·ρ", self.n(p), sigma, k + 1, self.n(q), self.n(p), old + 1, self.n(q)),
                            ),
                            (Some(_), Some(_)) => {}
                            _ => rep.skipped += 1,
                        }
                    }
                }
            }
        }
        Ok(rep)
    }
}

/// Checks unit laws, sequential and parallel associativity, equivariance in
/// both arguments and functoriality of the action, over every instance in
/// the finite support. Instances whose intermediate composites fall outside
/// the arity cap (or are absent from a partial table) are counted as skipped.
pub fn check_multicategory_laws(m: &Multicategory) -> Result<LawReport> {
    for (c, u) in m.units.iter().enumerate() {
        if u.is_none() {
            return Err(Error::Structural(format!("missing unit for color `{}`", m.colors[c])));
        }
    }
    let ctx = Ctx { m };
    let ops: Vec<OpId> = m.op_ids().collect();
    let mut report = LawReport::default();
    for r in exec::map(&ops, |&p| ctx.check_outer(p)) {
        report.merge(r?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::builtin;

    #[test]
    fn builtins_pass() {
        for m in [
            builtin::trivial(),
            builtin::associative(3, true),
            builtin::associative(4, false),
            builtin::commutative(3, true),
        ] {
            let r = check_multicategory_laws(&m).unwrap();
            assert!(r.passed(), "{}: {:?}", m.name(), r.first());
            assert!(r.checked > 0);
        }
    }
}
