//! Algebras over the arrow multicategories `Pⁿ` compared with strings of
//! `P`-algebra homomorphisms `A_0 → A_1 → .. → A_n`.

use super::{carrier_maps, enumerate_algebras, is_homomorphism, AlgebraStructure, EndMulticategory, ObjectFamily};
use crate::error::{Error, Result};
use crate::multicat::{Multicategory, Signature};
use crate::presents::arrow_multicategory;
use std::collections::BTreeSet;

/// A string: algebra structures on each carrier and the connecting maps.
pub type HomString = (Vec<AlgebraStructure>, Vec<Vec<usize>>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringReport {
    /// Number of `Pⁿ`-algebra structures on the carriers.
    pub arrow_algebras: usize,
    /// Number of strings of homomorphisms.
    pub strings: usize,
    /// Restricting a `Pⁿ`-algebra to its colors and its unary operations
    /// `(i; i+1)` is injective and hits every string.
    pub bijective: bool,
}

/// The string underlying a `Pⁿ`-algebra.
fn restrict(p: &Multicategory, pn: &Multicategory, a: &AlgebraStructure, fams: &[ObjectFamily]) -> HomString {
    let n = fams.len() - 1;
    let algebras = (0..=n)
        .map(|i| {
            let ops = p
                .op_ids()
                .map(|o| {
                    let sig = Signature::new(vec![i; p.arity(o)], i);
                    let image = pn.find_op(&sig, p.op_name(o)).expect("arrow operation");
                    let f = a.action(image);
                    super::Function { sig: p.signature(o).clone(), table: f.table.clone() }
                })
                .collect();
            AlgebraStructure { functor: crate::functor::Multifunctor { objects: vec![0], ops } }
        })
        .collect();
    let unit = p.unit_of(0).unwrap();
    let maps = (0..n)
        .map(|i| {
            let o = pn.find_op(&Signature::new(vec![i], i + 1), p.op_name(unit)).expect("arrow unit");
            a.action(o).table.iter().map(|&v| v as usize).collect()
        })
        .collect();
    (algebras, maps)
}

/// Compares `Pⁿ`-algebras on carriers of the given sizes (`n + 1` of them)
/// with strings of homomorphisms, both enumerated exhaustively.
pub fn pn_algebras_as_strings(p: &Multicategory, sizes: &[usize], budget: usize) -> Result<StringReport> {
    if p.colors().len() != 1 {
        return Err(Error::Domain(format!("`{}` has {} colors; strings need one", p.name(), p.colors().len())));
    }
    if sizes.is_empty() {
        return Err(Error::Domain("at least one carrier is needed".into()));
    }
    let n = sizes.len() - 1;
    let pn = arrow_multicategory(p, n)?;
    let family = ObjectFamily::new((0..=n).map(|i| i.to_string()).collect(), sizes.to_vec());
    let fams: Vec<ObjectFamily> = sizes.iter().map(|&s| ObjectFamily::single(s)).collect();
    let arrow = enumerate_algebras(&pn, &family, budget)?;
    let restricted: Vec<HomString> = arrow.iter().map(|a| restrict(p, &pn, a, &fams)).collect();

    let per_carrier: Vec<Vec<AlgebraStructure>> = fams.iter().map(|f| enumerate_algebras(p, f, budget)).collect::<Result<_>>()?;
    let mut strings: Vec<HomString> = per_carrier[0].iter().map(|a| (vec![a.clone()], Vec::new())).collect();
    for i in 1..=n {
        let maps: Vec<Vec<usize>> = carrier_maps(&fams[i - 1], &fams[i]).into_iter().map(|mut m| m.remove(0)).collect();
        let mut next = Vec::new();
        for (algs, fs) in &strings {
            let prev = algs.last().unwrap();
            for b in &per_carrier[i] {
                for f in &maps {
                    if is_homomorphism(p, &fams[i - 1], prev, &fams[i], b, std::slice::from_ref(f)) {
                        let mut algs = algs.clone();
                        algs.push(b.clone());
                        let mut fs = fs.clone();
                        fs.push(f.clone());
                        next.push((algs, fs));
                    }
                }
            }
        }
        strings = next;
    }
    let image: BTreeSet<&HomString> = restricted.iter().collect();
    let all: BTreeSet<&HomString> = strings.iter().collect();
    let bijective = image.len() == restricted.len() && image == all;
    Ok(StringReport { arrow_algebras: arrow.len(), strings: strings.len(), bijective })
}

/// `P¹`-algebras on `(A_0, A_1)` against triples `(A_0, A_1, f)`.
pub fn p1_algebras_as_triples(p: &Multicategory, a0: usize, a1: usize, budget: usize) -> Result<StringReport> {
    pn_algebras_as_strings(p, &[a0, a1], budget)
}

/// Checks the action of an arrow operation against the string it came from:
/// an operation of signature `(x_1..x_k; x)` acts by pushing each argument
/// forward to `x` and applying the `P`-action there.
pub fn arrow_action_matches(p: &Multicategory, sizes: &[usize], a: &AlgebraStructure) -> Result<bool> {
    let n = sizes.len() - 1;
    let pn = arrow_multicategory(p, n)?;
    let family = ObjectFamily::new((0..=n).map(|i| i.to_string()).collect(), sizes.to_vec());
    let fams: Vec<ObjectFamily> = sizes.iter().map(|&s| ObjectFamily::single(s)).collect();
    let (algs, maps) = restrict(p, &pn, a, &fams);
    let end = EndMulticategory::new(family.clone(), None);
    let push = |mut v: usize, from: usize, to: usize| {
        for m in &maps[from..to] {
            v = m[v];
        }
        v
    };
    for o in pn.op_ids() {
        let sig = pn.signature(o);
        let base = p.find_op(&Signature::new(vec![0; sig.arity()], 0), pn.op_name(o)).unwrap();
        let local = EndMulticategory::new(fams[sig.output].clone(), None);
        for t in family.domain(&sig.inputs) {
            let pushed: Vec<usize> = t.iter().zip(&sig.inputs).map(|(&v, &c)| push(v, c, sig.output)).collect();
            if end.eval(a.action(o), &t) != local.eval(algs[sig.output].action(base), &pushed) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::builtin;

    #[test]
    fn unit_multicategory_gives_functions() {
        let r = p1_algebras_as_triples(&builtin::trivial(), 2, 3, 10_000).unwrap();
        assert_eq!((r.arrow_algebras, r.strings, r.bijective), (9, 9, true));
    }
}
