use super::ColorId;
use crate::error::{Error, Result};
use crate::perm::{self, Perm};
use std::collections::{HashMap, VecDeque};

/// An input list and an output color.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub inputs: Vec<ColorId>,
    pub output: ColorId,
}

impl Signature {
    pub fn new(inputs: Vec<ColorId>, output: ColorId) -> Self {
        Signature { inputs, output }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Signature of `p·σ` for `p` of this signature.
    pub fn permuted(&self, sigma: &[usize]) -> Signature {
        Signature::new(perm::permute(&self.inputs, sigma), self.output)
    }

    /// Signature of `p ∘_slot q`.
    pub fn graft(&self, slot: usize, inner: &Signature) -> Signature {
        let mut inputs = self.inputs[..slot].to_vec();
        inputs.extend_from_slice(&inner.inputs);
        inputs.extend_from_slice(&self.inputs[slot + 1..]);
        Signature::new(inputs, self.output)
    }

    pub fn display(&self, colors: &[String]) -> String {
        let ins: Vec<&str> = self.inputs.iter().map(|&c| colors[c].as_str()).collect();
        format!("({};{})", ins.join(","), colors[self.output])
    }
}

/// Operation sets indexed by signature, with (possibly partial) symmetric
/// action tables. Only finitely many signatures carry operations.
#[derive(Debug, Clone)]
pub struct FiniteCollection {
    pub colors: Vec<String>,
    pub symmetric: bool,
    pub arity_cap: Option<usize>,
    pub ops: Vec<(String, Signature)>,
    /// `actions[op][rank(σ)]`, filled in by [`FiniteCollection::complete_actions`].
    pub actions: Vec<Vec<Option<usize>>>,
}

/// Orbit data of a symmetric collection: `op = rep·sigma`.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub rep: Vec<usize>,
    pub to_rep: Vec<Perm>,
    /// For each representative, the permutations fixing it.
    pub stabilizer: HashMap<usize, Vec<Perm>>,
}

impl FiniteCollection {
    pub fn new(colors: Vec<String>, symmetric: bool) -> Self {
        FiniteCollection { colors, symmetric, arity_cap: None, ops: Vec::new(), actions: Vec::new() }
    }

    pub fn add_op(&mut self, name: impl Into<String>, sig: Signature) -> usize {
        let n = sig.arity();
        self.ops.push((name.into(), sig));
        self.actions.push(if self.symmetric { vec![None; perm::factorial(n)] } else { Vec::new() });
        self.ops.len() - 1
    }

    pub fn set_action(&mut self, op: usize, sigma: &[usize], target: usize) {
        self.actions[op][perm::rank(sigma)] = Some(target);
    }

    pub fn op_named(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|(n, _)| n == name)
    }

    pub fn ops_of(&self, sig: &Signature) -> Vec<usize> {
        (0..self.ops.len()).filter(|&o| &self.ops[o].1 == sig).collect()
    }

    /// Signatures with a nonempty operation set, sorted.
    pub fn support(&self) -> Vec<Signature> {
        let mut s: Vec<Signature> = self.ops.iter().map(|(_, s)| s.clone()).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn action(&self, op: usize, sigma: &[usize]) -> Option<usize> {
        if !self.symmetric {
            return None;
        }
        self.actions[op][perm::rank(sigma)]
    }

    /// Completes the action tables from whatever entries are present (at
    /// least the adjacent transpositions), checking `(p·σ)·τ = p·(στ)` and
    /// that each image lives in the permuted signature.
    pub fn complete_actions(&mut self) -> Result<()> {
        if !self.symmetric {
            return Ok(());
        }
        let given = self.actions.clone();
        for op in 0..self.ops.len() {
            let n = self.ops[op].1.arity();
            for gen in perm::adjacent_transpositions(n) {
                if given[op][perm::rank(&gen)].is_none() {
                    return Err(Error::Structural(format!(
                        "missing action of {:?} on `{}`",
                        gen.iter().map(|x| x + 1).collect::<Vec<_>>(),
                        self.ops[op].0
                    )));
                }
            }
        }
        for op in 0..self.ops.len() {
            let n = self.ops[op].1.arity();
            let gens = perm::adjacent_transpositions(n);
            let mut table: Vec<Option<usize>> = vec![None; perm::factorial(n)];
            table[perm::rank(&perm::identity(n))] = Some(op);
            let mut queue = VecDeque::from([perm::identity(n)]);
            while let Some(sigma) = queue.pop_front() {
                let q = table[perm::rank(&sigma)].unwrap();
                for tau in &gens {
                    let r = given[q][perm::rank(tau)].unwrap();
                    let st = perm::compose(&sigma, tau);
                    match table[perm::rank(&st)] {
                        Some(existing) if existing != r => {
                            return Err(Error::Structural(format!(
                                "action on `{}` is not functorial: two routes to permutation {:?} give `{}` and `{}`",
                                self.ops[op].0,
                                st.iter().map(|x| x + 1).collect::<Vec<_>>(),
                                self.ops[existing].0,
                                self.ops[r].0
                            )));
                        }
                        Some(_) => {}
                        None => {
                            table[perm::rank(&st)] = Some(r);
                            queue.push_back(st);
                        }
                    }
                }
            }
            for (rk, t) in table.iter().enumerate() {
                let sigma = perm::unrank(n, rk);
                let t = t.unwrap();
                if self.ops[t].1 != self.ops[op].1.permuted(&sigma) {
                    return Err(Error::Structural(format!(
                        "action sends `{}` to `{}` of the wrong signature",
                        self.ops[op].0, self.ops[t].0
                    )));
                }
                if let Some(prev) = given[op][rk] {
                    if prev != t {
                        return Err(Error::Structural(format!(
                            "declared action on `{}` disagrees with the generated group action",
                            self.ops[op].0
                        )));
                    }
                }
            }
            self.actions[op] = table;
        }
        Ok(())
    }

    /// Orbit representatives (smallest index in each orbit) and stabilizers.
    /// Requires completed actions.
    pub fn orbits(&self) -> OrbitData {
        let n_ops = self.ops.len();
        let mut rep = vec![usize::MAX; n_ops];
        let mut to_rep = vec![Vec::new(); n_ops];
        let mut stabilizer = HashMap::new();
        for op in 0..n_ops {
            if rep[op] != usize::MAX {
                continue;
            }
            let n = self.ops[op].1.arity();
            if !self.symmetric {
                rep[op] = op;
                to_rep[op] = perm::identity(n);
                stabilizer.insert(op, vec![perm::identity(n)]);
                continue;
            }
            let mut stab = Vec::new();
            for sigma in perm::all(n) {
                let t = self.actions[op][perm::rank(&sigma)].unwrap();
                if t == op {
                    stab.push(sigma.clone());
                }
                if rep[t] == usize::MAX {
                    rep[t] = op;
                    to_rep[t] = sigma;
                }
            }
            stabilizer.insert(op, stab);
        }
        OrbitData { rep, to_rep, stabilizer }
    }
}
