//! Multifunctors out of table multicategories, and equivalence testing.

use crate::category::underlying_category;
use crate::multicat::laws::LawReport;
use crate::multicat::{ColorId, Multicat, Multicategory, OpId, Signature};
use crate::perm;

/// A multifunctor from a table multicategory: an object map and the image
/// of every operation (indexed by `OpId`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multifunctor<T = OpId> {
    pub objects: Vec<ColorId>,
    pub ops: Vec<T>,
}

impl<T: Clone> Multifunctor<T> {
    pub fn image(&self, op: OpId) -> &T {
        &self.ops[op.index()]
    }

    pub fn map_signature(&self, sig: &Signature) -> Signature {
        Signature::new(sig.inputs.iter().map(|&c| self.objects[c]).collect(), self.objects[sig.output])
    }
}

impl Multifunctor<OpId> {
    pub fn identity(m: &Multicategory) -> Self {
        Multifunctor { objects: (0..m.colors().len()).collect(), ops: m.op_ids().collect() }
    }

    /// `G∘F`.
    pub fn then(&self, g: &Multifunctor<OpId>) -> Multifunctor<OpId> {
        Multifunctor {
            objects: self.objects.iter().map(|&c| g.objects[c]).collect(),
            ops: self.ops.iter().map(|&o| g.ops[o.index()]).collect(),
        }
    }
}

/// Checks signatures, units, every composition entry of the source and
/// equivariance on the generating transpositions.
pub fn check_multifunctor<Q: Multicat>(p: &Multicategory, q: &Q, f: &Multifunctor<Q::Op>) -> LawReport {
    let mut rep = LawReport::default();
    if f.objects.len() != p.colors().len() || f.ops.len() != p.op_count() {
        rep.fail("shape", format!("{} objects and {} operations given", f.objects.len(), f.ops.len()));
        return rep;
    }
    if let Some(&c) = f.objects.iter().find(|&&c| c >= q.color_count()) {
        rep.fail("object map", format!("color index {c} outside the target"));
        return rep;
    }
    for o in p.op_ids() {
        rep.checked += 1;
        let want = f.map_signature(p.signature(o));
        let got = q.signature_of(f.image(o));
        if want != got {
            rep.fail("signature", format!("{} goes to {} of signature {:?}, expected {:?}", p.op_name(o), q.op_label(f.image(o)), got, want));
        }
    }
    if !rep.passed() {
        return rep;
    }
    for c in 0..p.colors().len() {
        rep.checked += 1;
        let u = p.unit_of(c).unwrap();
        if *f.image(u) != q.unit(f.objects[c]) {
            rep.fail("unit", format!("image of the unit of `{}`", p.colors()[c]));
        }
    }
    for (a, i, b, r) in p.compositions() {
        rep.checked += 1;
        match q.compose(f.image(a), i, f.image(b)) {
            Some(x) if x == *f.image(r) => {}
            Some(x) => rep.fail(
                "composition",
                format!("F({} ∘{} {}) = {} but F{} ∘{} F{} = {}", p.op_name(a), i + 1, p.op_name(b), q.op_label(f.image(r)), p.op_name(a), i + 1, p.op_name(b), q.op_label(&x)),
            ),
            None => rep.skipped += 1,
        }
    }
    if p.symmetric() {
        for o in p.op_ids() {
            for gen in perm::adjacent_transpositions(p.arity(o)) {
                rep.checked += 1;
                let lhs = f.image(p.action(o, &gen).unwrap());
                match q.act(f.image(o), &gen) {
                    Some(x) if x == *lhs => {}
                    _ => rep.fail("equivariance", format!("F({}·{:?}) ≠ F({})·{:?}", p.op_name(o), gen, p.op_name(o), gen)),
                }
            }
        }
    }
    rep
}

/// Outcome of [`is_equivalence`], with witnesses for each failed clause.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Signatures of the source on which `F` is not injective.
    pub not_faithful: Vec<String>,
    /// Signatures (over source colors) on which `F` is not surjective.
    pub not_full: Vec<String>,
    /// Target colors not isomorphic in `[Q]_1` to any image color.
    pub not_essentially_surjective: Vec<String>,
    /// For each target color, an image color and the isomorphism used.
    pub iso_witnesses: Vec<(String, String, String)>,
}

impl EquivalenceReport {
    pub fn faithful(&self) -> bool {
        self.not_faithful.is_empty()
    }

    pub fn full(&self) -> bool {
        self.not_full.is_empty()
    }

    pub fn fully_faithful(&self) -> bool {
        self.faithful() && self.full()
    }

    pub fn essentially_surjective(&self) -> bool {
        self.not_essentially_surjective.is_empty()
    }

    pub fn is_equivalence(&self) -> bool {
        self.fully_faithful() && self.essentially_surjective()
    }
}

/// Full faithfulness on every signature over source colors and essential
/// surjectivity of the underlying functor. Signatures are enumerated from
/// the supports of both sides, so empty-to-empty signatures are vacuous.
pub fn is_equivalence(p: &Multicategory, q: &Multicategory, f: &Multifunctor) -> EquivalenceReport {
    let mut rep = EquivalenceReport::default();
    let pc = p.colors();
    let mut sigs: Vec<Signature> = p.support().to_vec();
    // Source signatures whose image carries operations but which are empty.
    let mut pre: Vec<Vec<ColorId>> = vec![Vec::new(); q.colors().len()];
    for (a, &b) in f.objects.iter().enumerate() {
        pre[b].push(a);
    }
    for qs in q.support() {
        let choices: Vec<&Vec<ColorId>> = qs.inputs.iter().map(|&c| &pre[c]).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        for &out in &pre[qs.output] {
            let mut idx = vec![0; choices.len()];
            loop {
                sigs.push(Signature::new(idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect(), out));
                let mut k = idx.len();
                let more = loop {
                    if k == 0 {
                        break false;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break true;
                    }
                    idx[k] = 0;
                };
                if !more {
                    break;
                }
            }
        }
    }
    sigs.sort();
    sigs.dedup();
    for sig in &sigs {
        let src = p.ops_of(sig);
        let mut img: Vec<OpId> = src.iter().map(|&o| f.ops[o.index()]).collect();
        img.sort();
        img.dedup();
        let name = sig.display(pc);
        if img.len() < src.len() {
            rep.not_faithful.push(name.clone());
        }
        if img.len() < q.ops_of(&f.map_signature(sig)).len() {
            rep.not_full.push(name);
        }
    }
    let cat = underlying_category(q);
    for b in 0..q.colors().len() {
        let found = (0..pc.len()).find_map(|a| cat.find_isomorphism(b, f.objects[a]).map(|(iso, _)| (a, iso)));
        match found {
            Some((a, iso)) => rep.iso_witnesses.push((q.colors()[b].clone(), pc[a].clone(), cat.morphisms[iso].name.clone())),
            None => rep.not_essentially_surjective.push(q.colors()[b].clone()),
        }
    }
    rep
}
