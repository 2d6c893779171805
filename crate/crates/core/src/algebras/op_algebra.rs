//! Single-colored operads as algebras over `Op`, and back.
//!
//! An operad `P` truncated at arity `N` gives the `Op≤N`-algebra with carriers
//! `A(n) = P(n)`: a numbered tree acts by placing its arguments at the
//! vertices, composing along the edges and numbering inputs as the leaves.

use super::{AlgebraStructure, EndMulticategory, Function, ObjectFamily};
use crate::error::{Error, Result};
use crate::functor::Multifunctor;
use crate::multicat::laws::{check_multicategory_laws, LawReport};
use crate::multicat::{Multicat, Multicategory, MulticategoryBuilder, OpId, Signature};
use crate::perm;
use crate::trees::{OpOperad, OpOperation, OpTree};

/// An `Op≤N`-algebra with named carrier elements.
#[derive(Debug, Clone)]
pub struct OpAlgebra {
    pub op: OpOperad,
    /// The tabulated `Op≤N` and the tree behind each of its operations.
    pub table: Multicategory,
    pub trees: Vec<OpOperation>,
    pub family: ObjectFamily,
    /// `names[n][i]`: the name of element `i` of `A(n)`.
    pub names: Vec<Vec<String>>,
    pub structure: AlgebraStructure,
    /// Name of the single color of the operad.
    pub color: String,
}

impl OpAlgebra {
    /// Action of the operation with the given tree.
    pub fn act(&self, tree: &OpOperation, args: &[usize]) -> Result<usize> {
        let id = self
            .table
            .find_op(&tree.signature(), &tree.to_string())
            .ok_or_else(|| Error::Domain(format!("`{tree}` is outside Op≤{}", self.op.max_color)))?;
        let e = EndMulticategory::new(self.family.clone(), None);
        Ok(e.eval(self.structure.action(id), args))
    }

    pub fn check(&self) -> LawReport {
        self.structure.check(&self.table, &self.family)
    }
}

fn evaluate(p: &Multicategory, t: &OpTree, args: &[OpId], labels: &mut Vec<usize>) -> Result<OpId> {
    match t {
        OpTree::Leaf(l) => {
            labels.push(*l);
            Ok(p.unit_of(0).unwrap())
        }
        OpTree::Vertex(v, cs) => {
            let inner = cs.iter().map(|c| evaluate(p, c, args, labels)).collect::<Result<Vec<_>>>()?;
            p.compose_all(args[*v], &inner)
        }
    }
}

/// `P` as an `Op≤N`-algebra, `N` the arity cap of `P`, with trees of at most
/// `max_vertices` vertices acting.
pub fn operad_to_op_algebra(p: &Multicategory, max_vertices: usize) -> Result<OpAlgebra> {
    if p.colors().len() != 1 {
        return Err(Error::Domain(format!("`{}` has {} colors; operads have one", p.name(), p.colors().len())));
    }
    if p.is_partial() {
        return Err(Error::Precondition(format!("`{}` is only partially tabulated", p.name())));
    }
    let n_max = p.arity_cap().unwrap_or_else(|| super::max_arity(p));
    let op = OpOperad::new(n_max, max_vertices);
    let (table, trees) = op.materialize_with_ops()?;
    let ops_of: Vec<Vec<OpId>> = (0..=n_max).map(|n| p.ops_of(&Signature::new(vec![0; n], 0)).to_vec()).collect();
    let family = ObjectFamily::new((0..=n_max).map(|n| n.to_string()).collect(), ops_of.iter().map(|v| v.len()).collect());
    let names = ops_of.iter().map(|v| v.iter().map(|&o| p.op_name(o).to_string()).collect()).collect();
    let end = EndMulticategory::new(family.clone(), None);
    let mut images = Vec::with_capacity(trees.len());
    for t in &trees {
        let sig = t.signature();
        let mut err = None;
        let f = end.function(sig.clone(), |xs| {
            let args: Vec<OpId> = xs.iter().zip(&sig.inputs).map(|(&x, &c)| ops_of[c][x]).collect();
            let mut labels = Vec::new();
            let r = evaluate(p, &t.tree, &args, &mut labels).and_then(|e| {
                p.action(e, &perm::inverse(&labels)).ok_or_else(|| Error::Structural("missing action".into()))
            });
            match r {
                Ok(r) => ops_of[sig.output].iter().position(|&o| o == r).unwrap(),
                Err(e) => {
                    err.get_or_insert(e);
                    0
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        images.push(f);
    }
    let structure = AlgebraStructure { functor: Multifunctor { objects: (0..=n_max).collect(), ops: images } };
    Ok(OpAlgebra { op, table, trees, family, names, structure, color: p.colors()[0].clone() })
}

/// Reads an operad off an `Op≤N`-algebra: `P(n) = A(n)`, the unit is the
/// image of the bare edge, `x ∘_i y` is the action of the two-vertex tree with
/// vertex 2 on input `i` of vertex 1, and `x·τ` is the action of `(t_n, τ)`.
/// The result is law-checked.
pub fn op_algebra_to_operad(a: &OpAlgebra, name: &str) -> Result<(Multicategory, LawReport)> {
    let n_max = a.op.max_color;
    let mut b = MulticategoryBuilder::new(name, vec![a.color.clone()], true).arity_cap(Some(n_max));
    let mut ids: Vec<Vec<OpId>> = Vec::new();
    for n in 0..=n_max {
        let row = (0..a.family.sizes[n]).map(|i| b.add_op(a.names[n][i].clone(), Signature::new(vec![0; n], 0))).collect::<Result<Vec<_>>>()?;
        ids.push(row);
    }
    if n_max < 1 {
        return Err(Error::Domain("Op≤0 has no unit".into()));
    }
    let unit = a.act(&OpOperation::edge(), &[])?;
    b.set_unit(0, ids[1][unit])?;
    for m in 0..=n_max {
        for k in 0..=n_max {
            if m == 0 || m + k - 1 > n_max {
                continue;
            }
            for i in 0..m {
                let mut kids: Vec<OpTree> = (0..i).map(OpTree::Leaf).collect();
                kids.push(OpTree::Vertex(1, (i..i + k).map(OpTree::Leaf).collect()));
                kids.extend((i + k..m + k - 1).map(OpTree::Leaf));
                let t = OpOperation { valences: vec![m, k], leaves: m + k - 1, tree: OpTree::Vertex(0, kids) };
                for x in 0..a.family.sizes[m] {
                    for y in 0..a.family.sizes[k] {
                        let r = a.act(&t, &[x, y])?;
                        b.set_comp(ids[m][x], i, ids[k][y], ids[m + k - 1][r])?;
                    }
                }
            }
        }
        for g in perm::adjacent_transpositions(m) {
            let c = OpOperation::corolla(&g);
            for x in 0..a.family.sizes[m] {
                b.set_action(ids[m][x], &g, ids[m][a.act(&c, &[x])?])?;
            }
        }
    }
    let p = b.build()?;
    let report = check_multicategory_laws(&p)?;
    Ok((p, report))
}

/// Replaces one value of an action table, for building inconsistent inputs.
pub fn with_action_value(a: &OpAlgebra, tree: &OpOperation, args: &[usize], value: usize) -> Result<OpAlgebra> {
    let id = a.table.find_op(&tree.signature(), &tree.to_string()).ok_or_else(|| Error::Domain(format!("no operation `{tree}`")))?;
    let mut out = a.clone();
    let f: &mut Function = &mut out.structure.functor.ops[id.index()];
    let pos = a.family.index(&tree.valences, args);
    f.table[pos] = value as u32;
    Ok(out)
}
