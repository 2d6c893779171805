//! Finite categories, the underlying category of a multicategory, and nerves.

use crate::multicat::laws::LawReport;
use crate::multicat::{Multicategory, OpId};
use crate::simplicial::TruncatedSimplicialSet;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category. `compose(g, f)` is `g∘f` for `f: a → b`, `g: b → c`.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    pub composition: HashMap<(usize, usize), usize>,
}

impl FiniteCategory {
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.morphisms[f].source == a && self.morphisms[f].target == b)
            .collect()
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.composition.get(&(g, f)).copied()
    }

    /// An isomorphism `a → b` together with its inverse, if one exists.
    pub fn find_isomorphism(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        for f in self.hom(a, b) {
            for g in self.hom(b, a) {
                if self.compose(g, f) == Some(self.identities[a]) && self.compose(f, g) == Some(self.identities[b]) {
                    return Some((f, g));
                }
            }
        }
        None
    }

    pub fn check_laws(&self) -> LawReport {
        let mut rep = LawReport::default();
        let mor = &self.morphisms;
        for (f, m) in mor.iter().enumerate() {
            rep.checked += 2;
            if self.compose(self.identities[m.target], f) != Some(f) {
                rep.fail("left identity", m.name.clone());
            }
            if self.compose(f, self.identities[m.source]) != Some(f) {
                rep.fail("right identity", m.name.clone());
            }
        }
        for f in 0..mor.len() {
            for g in self.out_of(mor[f].target) {
                let Some(gf) = self.compose(g, f) else {
                    rep.fail("totality", format!("{} ∘ {}", mor[g].name, mor[f].name));
                    continue;
                };
                for h in self.out_of(mor[g].target) {
                    rep.checked += 1;
                    let lhs = self.compose(h, gf);
                    let rhs = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    if lhs.is_none() || lhs != rhs {
                        rep.fail("associativity", format!("{} ∘ {} ∘ {}", mor[h].name, mor[g].name, mor[f].name));
                    }
                }
            }
        }
        rep
    }

    fn out_of(&self, a: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.morphisms[f].source == a).collect()
    }
}

/// `[M]_1`: the colors of `M` with the unary operations as morphisms.
pub fn underlying_category(m: &Multicategory) -> FiniteCategory {
    let unary: Vec<OpId> = m.op_ids().filter(|&o| m.arity(o) == 1).collect();
    let index: HashMap<OpId, usize> = unary.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let morphisms = unary
        .iter()
        .map(|&o| Morphism {
            name: m.op_name(o).to_string(),
            source: m.signature(o).inputs[0],
            target: m.signature(o).output,
        })
        .collect();
    let identities = (0..m.colors().len()).map(|c| index[&m.unit_of(c).unwrap()]).collect();
    let mut composition = HashMap::new();
    for &g in &unary {
        for &f in &unary {
            if let Some(r) = m.lookup(g, 0, f) {
                composition.insert((index[&g], index[&f]), index[&r]);
            }
        }
    }
    FiniteCategory { objects: m.colors().to_vec(), morphisms, identities, composition }
}

/// The nerve truncated at level `d`: level `k` is the set of composable
/// chains `a_0 → a_1 → .. → a_k`.
pub fn nerve(c: &FiniteCategory, d: usize) -> TruncatedSimplicialSet {
    // A chain is its start object followed by its morphisms.
    type Chain = (usize, Vec<usize>);
    let mut levels: Vec<Vec<Chain>> = vec![(0..c.objects.len()).map(|a| (a, Vec::new())).collect()];
    for k in 1..=d {
        let mut next = Vec::new();
        for (a, fs) in &levels[k - 1] {
            let end = fs.last().map_or(*a, |&f| c.morphisms[f].target);
            for g in c.out_of(end) {
                let mut gs = fs.clone();
                gs.push(g);
                next.push((*a, gs));
            }
        }
        levels.push(next);
    }
    let index: Vec<HashMap<Chain, usize>> = levels
        .iter()
        .map(|l| l.iter().cloned().enumerate().map(|(i, ch)| (ch, i)).collect())
        .collect();
    let vertex = |(a, fs): &Chain, i: usize| if i == 0 { *a } else { c.morphisms[fs[i - 1]].target };
    let mut faces = vec![Vec::new()];
    for k in 1..=d {
        let mut fk = Vec::new();
        for i in 0..=k {
            let table = levels[k]
                .iter()
                .map(|ch| {
                    let (a, fs) = ch;
                    let out: Chain = if i == 0 {
                        (vertex(ch, 1), fs[1..].to_vec())
                    } else if i == k {
                        (*a, fs[..k - 1].to_vec())
                    } else {
                        let mut gs = fs[..i - 1].to_vec();
                        gs.push(c.compose(fs[i], fs[i - 1]).expect("total composition"));
                        gs.extend_from_slice(&fs[i + 1..]);
                        (*a, gs)
                    };
                    index[k - 1][&out]
                })
                .collect();
            fk.push(table);
        }
        faces.push(fk);
    }
    let mut degeneracies = Vec::new();
    for k in 0..d {
        let mut sk = Vec::new();
        for j in 0..=k {
            let table = levels[k]
                .iter()
                .map(|ch| {
                    let (a, fs) = ch;
                    let mut gs = fs[..j].to_vec();
                    gs.push(c.identities[vertex(ch, j)]);
                    gs.extend_from_slice(&fs[j..]);
                    index[k + 1][&(*a, gs)]
                })
                .collect();
            sk.push(table);
        }
        degeneracies.push(sk);
    }
    let labels = levels
        .iter()
        .map(|l| {
            l.iter()
                .map(|(a, fs)| {
                    if fs.is_empty() {
                        c.objects[*a].clone()
                    } else {
                        fs.iter().map(|&f| c.morphisms[f].name.as_str()).collect::<Vec<_>>().join(";")
                    }
                })
                .collect()
        })
        .collect();
    TruncatedSimplicialSet { labels, faces, degeneracies }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Objects 0, 1 and one arrow 0 → 1.
    pub(crate) fn arrow() -> FiniteCategory {
        let morphisms = vec![
            Morphism { name: "id0".into(), source: 0, target: 0 },
            Morphism { name: "id1".into(), source: 1, target: 1 },
            Morphism { name: "f".into(), source: 0, target: 1 },
        ];
        let composition = HashMap::from([((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((1, 2), 2)]);
        FiniteCategory { objects: vec!["0".into(), "1".into()], morphisms, identities: vec![0, 1], composition }
    }

    #[test]
    fn arrow_nerve() {
        let c = arrow();
        assert!(c.check_laws().passed());
        let n = nerve(&c, 3);
        assert_eq!(n.level_size(0), 2);
        assert_eq!(n.level_size(1), 3);
        // chains of length k in the poset 0 < 1 are weakly increasing sequences
        assert_eq!(n.level_size(2), 4);
        assert_eq!(n.level_size(3), 5);
        assert!(n.check_identities().passed());
    }
}
