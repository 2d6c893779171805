//! Small named multicategories and materialization of lazy ones.

use super::{ColorId, Multicat, Multicategory, MulticategoryBuilder, OpId, Signature};
use crate::error::{Error, Result};
use crate::perm;
use std::collections::HashMap;

/// The unit multicategory `I`: one color, only the identity.
pub fn trivial() -> Multicategory {
    let mut b = MulticategoryBuilder::new("I", vec!["x".into()], true).arity_cap(Some(1));
    let id = b.add_op("1", Signature::new(vec![0], 0)).unwrap();
    b.set_unit(0, id).unwrap();
    b.set_comp(id, 0, id, id).unwrap();
    b.set_action(id, &[0], id).unwrap();
    b.build().unwrap()
}

/// The terminal multicategory on `colors` (one operation per signature),
/// computed lazily and without truncation.
#[derive(Debug, Clone)]
pub struct Terminal {
    pub colors: Vec<String>,
}

impl Multicat for Terminal {
    type Op = Signature;

    fn color_count(&self) -> usize {
        self.colors.len()
    }

    fn color_name(&self, c: ColorId) -> String {
        self.colors[c].clone()
    }

    fn is_symmetric(&self) -> bool {
        true
    }

    fn arity_cap(&self) -> Option<usize> {
        None
    }

    fn signature_of(&self, op: &Signature) -> Signature {
        op.clone()
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<Signature>> {
        Ok(vec![sig.clone()])
    }

    fn compose(&self, p: &Signature, slot: usize, q: &Signature) -> Option<Signature> {
        Some(p.graft(slot, q))
    }

    fn act(&self, p: &Signature, sigma: &[usize]) -> Option<Signature> {
        Some(p.permuted(sigma))
    }

    fn unit(&self, c: ColorId) -> Signature {
        Signature::new(vec![c], c)
    }

    fn op_label(&self, op: &Signature) -> String {
        format!("c{}", op.arity())
    }
}

/// `Com` truncated at `cap`: one operation `c<n>` per arity. Without `unital`
/// there is no nullary operation.
pub fn commutative(cap: usize, unital: bool) -> Multicategory {
    let name = if unital { format!("Com{cap}") } else { format!("Com{cap}nu") };
    let mut b = MulticategoryBuilder::new(name, vec!["x".into()], true).arity_cap(Some(cap));
    let lo = if unital { 0 } else { 1 };
    let mut ops = HashMap::new();
    for n in lo..=cap {
        ops.insert(n, b.add_op(format!("c{n}"), Signature::new(vec![0; n], 0)).unwrap());
    }
    b.set_unit(0, ops[&1]).unwrap();
    for n in lo..=cap {
        for gen in perm::adjacent_transpositions(n) {
            b.set_action(ops[&n], &gen, ops[&n]).unwrap();
        }
        for k in lo..=cap {
            if n >= 1 && n + k - 1 <= cap {
                for i in 0..n {
                    b.set_comp(ops[&n], i, ops[&k], ops[&(n + k - 1)]).unwrap();
                }
            }
        }
    }
    b.build().unwrap()
}

/// Name of the associative operation `x_{w(0)}·..·x_{w(n-1)}`.
pub fn word_name(w: &[usize]) -> String {
    let digits: String = w.iter().map(|&a| char::from_digit(a as u32 + 1, 36).unwrap()).collect();
    format!("w{digits}")
}

/// Substitutes the word `v` for letter `slot` of `w`.
pub fn word_compose(w: &[usize], slot: usize, v: &[usize]) -> Vec<usize> {
    let m = v.len();
    let mut out = Vec::with_capacity(w.len() + m - 1);
    for &a in w {
        if a < slot {
            out.push(a);
        } else if a == slot {
            out.extend(v.iter().map(|&b| b + slot));
        } else {
            out.push(a + m - 1);
        }
    }
    out
}

/// `As` truncated at `cap`. The operations of arity `n` are the words using
/// each of the `n` inputs once; composition substitutes words.
pub fn associative(cap: usize, unital: bool) -> Multicategory {
    let name = if unital { format!("As{cap}") } else { format!("As{cap}nu") };
    let mut b = MulticategoryBuilder::new(name, vec!["x".into()], true).arity_cap(Some(cap));
    let lo = if unital { 0 } else { 1 };
    let mut ids: HashMap<Vec<usize>, OpId> = HashMap::new();
    let mut words = Vec::new();
    for n in lo..=cap {
        for w in perm::all(n) {
            let id = b.add_op(word_name(&w), Signature::new(vec![0; n], 0)).unwrap();
            ids.insert(w.clone(), id);
            words.push(w);
        }
    }
    b.set_unit(0, ids[&vec![0]]).unwrap();
    for w in &words {
        for gen in perm::adjacent_transpositions(w.len()) {
            let inv = perm::inverse(&gen);
            let moved: Vec<usize> = w.iter().map(|&a| inv[a]).collect();
            b.set_action(ids[w], &gen, ids[&moved]).unwrap();
        }
        for v in &words {
            if w.is_empty() || w.len() + v.len() - 1 > cap {
                continue;
            }
            for slot in 0..w.len() {
                let r = word_compose(w, slot, v);
                b.set_comp(ids[w], slot, ids[v], ids[&r]).unwrap();
            }
        }
    }
    b.build().unwrap()
}

/// All signatures over `colors` colors with arity at most `cap`, ordered by
/// arity and then lexicographically.
pub fn all_signatures(colors: usize, cap: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    for n in 0..=cap {
        let mut inputs = vec![0; n];
        loop {
            for c in 0..colors {
                out.push(Signature::new(inputs.clone(), c));
            }
            if !next_tuple(&mut inputs, colors) {
                break;
            }
        }
    }
    out
}

/// Advances a mixed-radix tuple (last entry fastest); false once exhausted.
pub fn next_tuple(t: &mut [usize], radix: usize) -> bool {
    for i in (0..t.len()).rev() {
        t[i] += 1;
        if t[i] < radix {
            return true;
        }
        t[i] = 0;
    }
    false
}

/// Tabulates a lazily computed multicategory over the given signatures.
/// Composites landing outside `support` are left out, and the result is
/// marked partial if any of them falls inside the arity cap.
pub fn materialize<M: Multicat>(m: &M, name: &str, support: &[Signature], limit: usize) -> Result<Multicategory> {
    materialize_with_ops(m, name, support, limit).map(|(t, _)| t)
}

/// As [`materialize`], also returning the lazy operation behind each `OpId`.
pub fn materialize_with_ops<M: Multicat>(
    m: &M,
    name: &str,
    support: &[Signature],
    limit: usize,
) -> Result<(Multicategory, Vec<M::Op>)> {
    let colors: Vec<String> = (0..m.color_count()).map(|c| m.color_name(c)).collect();
    let mut b = MulticategoryBuilder::new(name, colors, m.is_symmetric()).arity_cap(m.arity_cap());
    let mut ids: HashMap<M::Op, OpId> = HashMap::new();
    let mut by_sig: Vec<(Signature, Vec<M::Op>)> = Vec::new();
    let mut total = 0usize;
    for sig in support {
        let ops = m.operations(sig)?;
        total += ops.len();
        if total > limit {
            return Err(Error::Overflow(format!("materializing `{name}` needs more than {limit} operations")));
        }
        for op in &ops {
            let id = b.add_op(m.op_label(op), sig.clone())?;
            ids.insert(op.clone(), id);
        }
        by_sig.push((sig.clone(), ops));
    }
    for c in 0..m.color_count() {
        let u = m.unit(c);
        let id = *ids.get(&u).ok_or_else(|| Error::Structural(format!("unit of `{}` outside the support", m.color_name(c))))?;
        b.set_unit(c, id)?;
    }
    let listed: Vec<M::Op> = by_sig.iter().flat_map(|(_, ops)| ops.iter().cloned()).collect();
    let mut partial = false;
    for (sp, ps) in &by_sig {
        for (i, &ci) in sp.inputs.iter().enumerate() {
            for (sq, qs) in &by_sig {
                if sq.output != ci {
                    continue;
                }
                for p in ps {
                    for q in qs {
                        match m.compose(p, i, q).and_then(|r| ids.get(&r).copied()) {
                            Some(r) => b.set_comp(ids[p], i, ids[q], r)?,
                            None => partial |= m.arity_allowed(sp.arity() + sq.arity() - 1),
                        }
                    }
                }
            }
        }
        if m.is_symmetric() {
            for p in ps {
                for gen in perm::adjacent_transpositions(sp.arity()) {
                    let r = m
                        .act(p, &gen)
                        .and_then(|r| ids.get(&r).copied())
                        .ok_or_else(|| Error::Structural(format!("action on `{}` leaves the support", m.op_label(p))))?;
                    b.set_action(ids[p], &gen, r)?;
                }
            }
        }
    }
    b.set_partial(partial);
    Ok((b.build()?, listed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_substitution() {
        // (x2 x1) with (x2 x1) substituted for x1 gives x3 x2 x1.
        assert_eq!(word_compose(&[1, 0], 0, &[1, 0]), vec![2, 1, 0]);
        assert_eq!(word_compose(&[1, 0], 1, &[1, 0]), vec![2, 1, 0]);
        assert_eq!(word_compose(&[0, 1], 1, &[1, 0]), vec![0, 2, 1]);
        assert_eq!(word_compose(&[0, 1], 0, &[]), vec![0]);
    }

    #[test]
    fn sizes() {
        assert_eq!(associative(3, true).op_count(), 1 + 1 + 2 + 6);
        assert_eq!(commutative(3, false).op_count(), 3);
        assert_eq!(all_signatures(2, 2).len(), 2 + 4 + 8);
    }
}
