use super::{ColorId, FiniteCollection, Multicategory, OpData, OpId, Signature};
use crate::error::{Error, Result};
use crate::perm;
use std::collections::HashMap;

/// Incremental construction of a [`Multicategory`].
///
/// Actions may be given for generators only (adjacent transpositions); they
/// are completed to the full symmetric group by `build`.
#[derive(Debug, Clone)]
pub struct MulticategoryBuilder {
    name: String,
    collection: FiniteCollection,
    partial: bool,
    sig_index: HashMap<Signature, usize>,
    sigs: Vec<Signature>,
    op_index: HashMap<(usize, String), OpId>,
    units: Vec<Option<OpId>>,
    comp: HashMap<(OpId, u16, OpId), OpId>,
}

impl MulticategoryBuilder {
    pub fn new(name: impl Into<String>, colors: Vec<String>, symmetric: bool) -> Self {
        let n = colors.len();
        MulticategoryBuilder {
            name: name.into(),
            collection: FiniteCollection::new(colors, symmetric),
            partial: false,
            sig_index: HashMap::new(),
            sigs: Vec::new(),
            op_index: HashMap::new(),
            units: vec![None; n],
            comp: HashMap::new(),
        }
    }

    pub fn arity_cap(mut self, cap: Option<usize>) -> Self {
        self.collection.arity_cap = cap;
        self
    }

    pub fn set_arity_cap(&mut self, cap: Option<usize>) {
        self.collection.arity_cap = cap;
    }

    pub fn set_partial(&mut self, partial: bool) {
        self.partial = partial;
    }

    pub fn colors(&self) -> &[String] {
        &self.collection.colors
    }

    pub fn op_count(&self) -> usize {
        self.collection.ops.len()
    }

    pub fn signature(&self, op: OpId) -> &Signature {
        &self.collection.ops[op.index()].1
    }

    pub fn op_name(&self, op: OpId) -> &str {
        &self.collection.ops[op.index()].0
    }

    pub fn add_op(&mut self, name: impl Into<String>, sig: Signature) -> Result<OpId> {
        let name = name.into();
        if let Some(&c) = sig.inputs.iter().chain(std::iter::once(&sig.output)).find(|&&c| c >= self.collection.colors.len()) {
            return Err(Error::Structural(format!("operation `{name}` uses unknown color index {c}")));
        }
        let s = match self.sig_index.get(&sig) {
            Some(&s) => s,
            None => {
                self.sigs.push(sig.clone());
                self.sig_index.insert(sig.clone(), self.sigs.len() - 1);
                self.sigs.len() - 1
            }
        };
        if self.op_index.contains_key(&(s, name.clone())) {
            return Err(Error::Structural(format!(
                "duplicate operation `{name}` in signature {}",
                sig.display(&self.collection.colors)
            )));
        }
        let id = OpId(self.collection.add_op(name.clone(), sig) as u32);
        self.op_index.insert((s, name), id);
        Ok(id)
    }

    pub fn find_op(&self, sig: &Signature, name: &str) -> Option<OpId> {
        let s = *self.sig_index.get(sig)?;
        self.op_index.get(&(s, name.to_string())).copied()
    }

    pub fn set_unit(&mut self, color: ColorId, op: OpId) -> Result<()> {
        let sig = self.signature(op);
        if sig.inputs != [color] || sig.output != color {
            return Err(Error::Structural(format!(
                "unit `{}` for color `{}` has signature {}",
                self.op_name(op),
                self.collection.colors[color],
                sig.display(&self.collection.colors)
            )));
        }
        self.units[color] = Some(op);
        Ok(())
    }

    pub fn set_comp(&mut self, p: OpId, slot: usize, q: OpId, r: OpId) -> Result<()> {
        let sp = self.signature(p);
        let sq = self.signature(q);
        if slot >= sp.arity() {
            return Err(Error::SlotOutOfRange { op: self.op_name(p).into(), slot, arity: sp.arity() });
        }
        if sp.inputs[slot] != sq.output {
            let colors = &self.collection.colors;
            return Err(Error::ColorMismatch {
                outer: self.op_name(p).into(),
                slot,
                inner: self.op_name(q).into(),
                expected: colors[sp.inputs[slot]].clone(),
                found: colors[sq.output].clone(),
            });
        }
        let expected = sp.graft(slot, sq);
        if self.signature(r) != &expected {
            return Err(Error::Structural(format!(
                "composite {} ∘{} {} = {} has signature {}, expected {}",
                self.op_name(p),
                slot + 1,
                self.op_name(q),
                self.op_name(r),
                self.signature(r).display(&self.collection.colors),
                expected.display(&self.collection.colors)
            )));
        }
        self.comp.insert((p, slot as u16, q), r);
        Ok(())
    }

    pub fn set_action(&mut self, p: OpId, sigma: &[usize], r: OpId) -> Result<()> {
        if !self.collection.symmetric {
            return Err(Error::Structural("actions declared on a non-symmetric multicategory".into()));
        }
        if sigma.len() != self.signature(p).arity() || !perm::is_permutation(sigma) {
            return Err(Error::Structural(format!("bad permutation for `{}`", self.op_name(p))));
        }
        self.collection.set_action(p.index(), sigma, r.index());
        Ok(())
    }

    pub fn build(mut self) -> Result<Multicategory> {
        for (c, u) in self.units.iter().enumerate() {
            if u.is_none() {
                return Err(Error::Structural(format!("missing unit for color `{}`", self.collection.colors[c])));
            }
        }
        self.collection.complete_actions()?;
        let FiniteCollection { colors, symmetric, arity_cap, ops, actions } = self.collection;
        let sig_ops = {
            let mut v = vec![Vec::new(); self.sigs.len()];
            for (i, (_, s)) in ops.iter().enumerate() {
                v[self.sig_index[s]].push(OpId(i as u32));
            }
            v
        };
        let mut by_output = vec![Vec::new(); colors.len()];
        for (i, (_, s)) in ops.iter().enumerate() {
            by_output[s.output].push(OpId(i as u32));
        }
        let ops_data = ops
            .into_iter()
            .map(|(name, s)| {
                let sig = self.sig_index[&s];
                OpData { name, sig }
            })
            .collect();
        let actions = actions
            .into_iter()
            .map(|t| t.into_iter().map(|x| OpId(x.unwrap() as u32)).collect())
            .collect();
        Ok(Multicategory {
            name: self.name,
            colors,
            symmetric,
            arity_cap,
            partial: self.partial,
            sigs: self.sigs,
            sig_index: self.sig_index,
            sig_ops,
            by_output,
            ops: ops_data,
            op_index: self.op_index,
            units: self.units,
            comp: self.comp,
            actions,
        })
    }
}
