//! Restriction and (injective) extension along maps of object sets.

use super::{ColorId, Multicategory, MulticategoryBuilder, OpId, Signature};
use crate::error::{Error, Result};
use crate::perm;
use std::collections::HashMap;

/// `f*(M)`: colors `colors`, with `f*(M)(t_1..t_n;t) = M(f t_1..f t_n; f t)`.
pub fn restrict_objects(m: &Multicategory, colors: Vec<String>, f: &[ColorId]) -> Result<Multicategory> {
    if f.len() != colors.len() {
        return Err(Error::Domain(format!("object map has {} entries for {} colors", f.len(), colors.len())));
    }
    if let Some(&bad) = f.iter().find(|&&c| c >= m.colors.len()) {
        return Err(Error::Domain(format!("object map sends a color to index {bad}, outside the {} colors", m.colors.len())));
    }
    let mut pre: Vec<Vec<ColorId>> = vec![Vec::new(); m.colors.len()];
    for (t, &s) in f.iter().enumerate() {
        pre[s].push(t);
    }
    let name = format!("{}*", m.name);
    let mut b = MulticategoryBuilder::new(name, colors.clone(), m.symmetric).arity_cap(m.arity_cap);
    b.set_partial(m.partial);
    // (new signature, original op) -> new op
    let mut ids: HashMap<(Signature, OpId), OpId> = HashMap::new();
    let mut entries: Vec<(Signature, OpId, OpId)> = Vec::new();
    for (s_idx, sig) in m.sigs.iter().enumerate() {
        let choices: Vec<&Vec<ColorId>> = sig.inputs.iter().map(|&c| &pre[c]).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        for &out in &pre[sig.output] {
            let mut idx = vec![0; choices.len()];
            loop {
                let inputs: Vec<ColorId> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                let nsig = Signature::new(inputs, out);
                for &o in &m.sig_ops[s_idx] {
                    let id = b.add_op(m.op_name(o), nsig.clone())?;
                    ids.insert((nsig.clone(), o), id);
                    entries.push((nsig.clone(), o, id));
                }
                if !advance(&mut idx, &choices) {
                    break;
                }
            }
        }
    }
    for (t, &s) in f.iter().enumerate() {
        let u = m.units[s].unwrap();
        b.set_unit(t, ids[&(Signature::new(vec![t], t), u)])?;
    }
    let mut by_output: Vec<Vec<usize>> = vec![Vec::new(); colors.len()];
    for (k, (sig, _, _)) in entries.iter().enumerate() {
        by_output[sig.output].push(k);
    }
    for (sp, p, pid) in &entries {
        for (i, &ci) in sp.inputs.iter().enumerate() {
            for &k in &by_output[ci] {
                let (sq, q, qid) = &entries[k];
                if let Some(r) = m.lookup(*p, i, *q) {
                    b.set_comp(*pid, i, *qid, ids[&(sp.graft(i, sq), r)])?;
                }
            }
        }
        if m.symmetric {
            for gen in perm::adjacent_transpositions(sp.arity()) {
                let r = m.action(*p, &gen).unwrap();
                b.set_action(*pid, &gen, ids[&(sp.permuted(&gen), r)])?;
            }
        }
    }
    b.build()
}

fn advance(idx: &mut [usize], choices: &[&Vec<ColorId>]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < choices[i].len() {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// `α_*(M)` for injective `α`: operations of `M` are transported, colors
/// outside the image carry only their identity, and every other signature is
/// empty.
pub fn extend_objects_injective(m: &Multicategory, colors: Vec<String>, alpha: &[ColorId]) -> Result<Multicategory> {
    if alpha.len() != m.colors.len() {
        return Err(Error::Domain(format!("object map has {} entries for {} colors", alpha.len(), m.colors.len())));
    }
    let mut hit = vec![false; colors.len()];
    for &d in alpha {
        if d >= colors.len() {
            return Err(Error::Domain(format!("object map sends a color to index {d}, outside the {} colors", colors.len())));
        }
        if hit[d] {
            return Err(Error::Domain(format!("object map is not injective: two colors go to `{}`", colors[d])));
        }
        hit[d] = true;
    }
    let name = format!("{}!", m.name);
    let mut b = MulticategoryBuilder::new(name, colors.clone(), m.symmetric).arity_cap(m.arity_cap);
    b.set_partial(m.partial);
    let map_sig = |s: &Signature| Signature::new(s.inputs.iter().map(|&c| alpha[c]).collect(), alpha[s.output]);
    let mut ids = Vec::with_capacity(m.ops.len());
    for o in m.op_ids() {
        ids.push(b.add_op(m.op_name(o), map_sig(m.signature(o)))?);
    }
    for (c, &d) in alpha.iter().enumerate() {
        b.set_unit(d, ids[m.units[c].unwrap().index()])?;
    }
    for d in 0..colors.len() {
        if !hit[d] {
            let id = b.add_op("1", Signature::new(vec![d], d))?;
            b.set_unit(d, id)?;
            b.set_comp(id, 0, id, id)?;
            if m.symmetric {
                b.set_action(id, &[0], id)?;
            }
        }
    }
    for (p, i, q, r) in m.compositions() {
        b.set_comp(ids[p.index()], i, ids[q.index()], ids[r.index()])?;
    }
    if m.symmetric {
        for o in m.op_ids() {
            for gen in perm::adjacent_transpositions(m.arity(o)) {
                b.set_action(ids[o.index()], &gen, ids[m.action(o, &gen).unwrap().index()])?;
            }
        }
    }
    b.build()
}
