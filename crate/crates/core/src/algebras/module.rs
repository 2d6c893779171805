//! `End(A, B)`: functions `A(x_1) × .. × A(x_n) → B(x)` as an
//! `End(B)`-`End(A)`-bimodule, acting by substitution on either side.

use super::end::{all_tables, end_multicategory_with_ops, Function, ObjectFamily};
use crate::bimodules::{Bimodule, RightModule};
use crate::error::{Error, Result};
use crate::multicat::builtin::all_signatures;
use crate::multicat::{FiniteCollection, Multicategory, OpId, Signature};
use crate::perm;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct EndBimodule {
    pub bimodule: Bimodule,
    /// `End(B)`, acting on the left.
    pub left: Multicategory,
    /// `End(A)`, acting on the right.
    pub right: Multicategory,
    pub functions: Vec<Function>,
}

struct Evaluator<'a> {
    a: &'a ObjectFamily,
    b: &'a ObjectFamily,
}

impl Evaluator<'_> {
    fn eval(&self, f: &Function, family: &ObjectFamily, args: &[usize]) -> usize {
        f.table[family.index(&f.sig.inputs, args)] as usize
    }

    fn tabulate(&self, sig: Signature, mut f: impl FnMut(&[usize]) -> usize) -> Function {
        let table = self.a.domain(&sig.inputs).iter().map(|t| f(t) as u32).collect();
        Function { sig, table }
    }

    fn act(&self, h: &Function, sigma: &[usize]) -> Function {
        let mut z = vec![0; sigma.len()];
        self.tabulate(h.sig.permuted(sigma), |y| {
            for (k, &s) in sigma.iter().enumerate() {
                z[s] = y[k];
            }
            self.eval(h, self.a, &z)
        })
    }

    /// `h ∘_i g` for `g` in `End(A)`.
    fn right(&self, h: &Function, i: usize, g: &Function) -> Function {
        let m = g.sig.arity();
        let mut args = Vec::new();
        self.tabulate(h.sig.graft(i, &g.sig), |t| {
            args.clear();
            args.extend_from_slice(&t[..i]);
            args.push(self.eval(g, self.a, &t[i..i + m]));
            args.extend_from_slice(&t[i + m..]);
            self.eval(h, self.a, &args)
        })
    }

    /// `γ(ψ; h_1, .., h_k)` for `ψ` in `End(B)`.
    fn left(&self, psi: &Function, hs: &[&Function]) -> Function {
        let inputs: Vec<usize> = hs.iter().flat_map(|h| h.sig.inputs.clone()).collect();
        let mut outs = Vec::new();
        self.tabulate(Signature::new(inputs, psi.sig.output), |t| {
            outs.clear();
            let mut start = 0;
            for h in hs {
                let n = h.sig.arity();
                outs.push(self.eval(h, self.a, &t[start..start + n]));
                start += n;
            }
            self.eval(psi, self.b, &outs)
        })
    }
}

pub fn end_module(a: &ObjectFamily, b: &ObjectFamily, cap: usize, limit: usize) -> Result<EndBimodule> {
    if a.colors != b.colors {
        return Err(Error::Domain("carrier families do not share colors".into()));
    }
    let ev = Evaluator { a, b };
    let (left, ops_b) = end_multicategory_with_ops(b, cap, limit)?;
    let (right, ops_a) = end_multicategory_with_ops(a, cap, limit)?;

    let mut functions = Vec::new();
    for sig in all_signatures(a.colors.len(), cap) {
        for table in all_tables(a.domain_size(&sig.inputs), b.sizes[sig.output], limit)? {
            functions.push(Function { sig: sig.clone(), table });
        }
    }
    let index: HashMap<&Function, usize> = functions.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut coll = FiniteCollection::new(a.colors.clone(), true);
    coll.arity_cap = Some(cap);
    for f in &functions {
        coll.add_op(f.label(), f.sig.clone());
    }
    for (i, f) in functions.iter().enumerate() {
        for t in perm::adjacent_transpositions(f.sig.arity()) {
            coll.set_action(i, &t, index[&ev.act(f, &t)]);
        }
    }
    coll.complete_actions()?;

    let mut right_action = HashMap::new();
    for (x, h) in functions.iter().enumerate() {
        for i in 0..h.sig.arity() {
            for (go, g) in ops_a.iter().enumerate() {
                if g.sig.output == h.sig.inputs[i] && h.sig.arity() + g.sig.arity() - 1 <= cap {
                    right_action.insert((x, i, OpId(go as u32)), index[&ev.right(h, i, g)]);
                }
            }
        }
    }
    let module = RightModule { name: "End(A,B)".into(), coll, out_colors: b.colors.clone(), right: right_action };

    let mut left_action = HashMap::new();
    for (pi, psi) in ops_b.iter().enumerate() {
        for hs in crate::bimodules::tuples(&module, &psi.sig.inputs, Some(cap)) {
            let fs: Vec<&Function> = hs.iter().map(|&h| &functions[h]).collect();
            left_action.insert((OpId(pi as u32), hs), index[&ev.left(psi, &fs)]);
        }
    }
    Ok(EndBimodule { bimodule: Bimodule { module, left: left_action }, left, right, functions })
}
