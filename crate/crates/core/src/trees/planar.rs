//! Unlabeled planar rooted trees.
//!
//! Text encoding: a leaf is `|`, a vertex is `[c1,..,ck]` listing its
//! children in planar order. The trivial tree (no vertices) is `|`.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Vertex(Vec<PlanarTree>),
}

impl PlanarTree {
    /// The corolla `t_n`.
    pub fn corolla(n: usize) -> Self {
        PlanarTree::Vertex(vec![PlanarTree::Leaf; n])
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Vertex(cs) => cs.iter().map(|c| c.leaves()).sum(),
        }
    }

    pub fn vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Vertex(cs) => 1 + cs.iter().map(|c| c.vertices()).sum::<usize>(),
        }
    }

    /// Valences of the vertices in preorder.
    pub fn valences(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let PlanarTree::Vertex(cs) = t {
                out.push(cs.len());
            }
        });
        out
    }

    fn walk(&self, f: &mut dyn FnMut(&PlanarTree)) {
        f(self);
        if let PlanarTree::Vertex(cs) = self {
            for c in cs {
                c.walk(f);
            }
        }
    }

    /// Replaces the vertex with preorder index `vertex` by `s`. Leaf `j` of
    /// `s` (in planar order) receives child `matching[j]` of the replaced vertex.
    pub fn graft(&self, vertex: usize, s: &PlanarTree, matching: &[usize]) -> Result<PlanarTree> {
        let mut counter = 0;
        let out = self.graft_at(vertex, s, matching, &mut counter)?;
        if counter <= vertex {
            return Err(Error::Domain(format!("tree has {counter} vertices, no vertex {vertex}")));
        }
        Ok(out)
    }

    fn graft_at(&self, vertex: usize, s: &PlanarTree, matching: &[usize], counter: &mut usize) -> Result<PlanarTree> {
        match self {
            PlanarTree::Leaf => Ok(PlanarTree::Leaf),
            PlanarTree::Vertex(cs) => {
                let me = *counter;
                *counter += 1;
                let new_children = cs.iter().map(|c| c.graft_at(vertex, s, matching, counter)).collect::<Result<Vec<_>>>()?;
                if me != vertex {
                    return Ok(PlanarTree::Vertex(new_children));
                }
                if s.leaves() != cs.len() {
                    return Err(Error::Domain(format!("vertex of valence {} cannot be replaced by a tree with {} leaves", cs.len(), s.leaves())));
                }
                let mut seen = vec![false; cs.len()];
                if matching.len() != cs.len() || matching.iter().any(|&m| m >= cs.len() || std::mem::replace(&mut seen[m], true)) {
                    return Err(Error::Domain("leaf matching is not a bijection".into()));
                }
                let mut next = 0;
                Ok(s.plug(&mut |_| {
                    let c = new_children[matching[next]].clone();
                    next += 1;
                    c
                }))
            }
        }
    }

    /// Attaches `s` at the leaf with planar index `leaf`.
    pub fn graft_leaf(&self, leaf: usize, s: &PlanarTree) -> Result<PlanarTree> {
        if leaf >= self.leaves() {
            return Err(Error::SlotOutOfRange { op: self.to_string(), slot: leaf, arity: self.leaves() });
        }
        Ok(self.plug(&mut |i| if i == leaf { s.clone() } else { PlanarTree::Leaf }))
    }

    /// Replaces leaves, in planar order, by `f(leaf index)`.
    fn plug(&self, f: &mut dyn FnMut(usize) -> PlanarTree) -> PlanarTree {
        fn go(t: &PlanarTree, f: &mut dyn FnMut(usize) -> PlanarTree, i: &mut usize) -> PlanarTree {
            match t {
                PlanarTree::Leaf => {
                    *i += 1;
                    f(*i - 1)
                }
                PlanarTree::Vertex(cs) => PlanarTree::Vertex(cs.iter().map(|c| go(c, f, i)).collect()),
            }
        }
        go(self, f, &mut 0)
    }

    pub fn parse(text: &str) -> Result<PlanarTree> {
        let bytes: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_tree(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Domain(format!("trailing input in tree `{text}`")));
        }
        Ok(t)
    }
}

fn parse_tree(s: &[char], pos: &mut usize) -> Result<PlanarTree> {
    match s.get(*pos) {
        Some('|') => {
            *pos += 1;
            Ok(PlanarTree::Leaf)
        }
        Some('[') => {
            *pos += 1;
            let mut cs = Vec::new();
            if s.get(*pos) == Some(&']') {
                *pos += 1;
                return Ok(PlanarTree::Vertex(cs));
            }
            loop {
                cs.push(parse_tree(s, pos)?);
                match s.get(*pos) {
                    Some(',') => *pos += 1,
                    Some(']') => {
                        *pos += 1;
                        return Ok(PlanarTree::Vertex(cs));
                    }
                    _ => return Err(Error::Domain(format!("expected `,` or `]` at {}", *pos))),
                }
            }
        }
        _ => Err(Error::Domain(format!("expected `|` or `[` at {}", *pos))),
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "|"),
            PlanarTree::Vertex(cs) => {
                write!(f, "[")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graft_binary_into_binary() {
        let t2 = PlanarTree::corolla(2);
        assert_eq!(t2.graft(0, &t2, &[0, 1]).unwrap(), t2);
        let left = PlanarTree::parse("[[|,|],|]").unwrap();
        assert_eq!(left.graft(1, &t2, &[0, 1]).unwrap(), left);
        assert_eq!(t2.graft_leaf(0, &t2).unwrap(), left);
        assert_eq!(t2.graft_leaf(1, &t2).unwrap().to_string(), "[|,[|,|]]");
        assert!(t2.graft_leaf(2, &t2).is_err());
        let unary = PlanarTree::parse("[[|,|]]").unwrap();
        assert_eq!(unary.graft(0, &PlanarTree::corolla(1), &[0]).unwrap(), unary);
        assert!(t2.graft(0, &PlanarTree::corolla(3), &[0, 1, 2]).is_err());
        assert!(t2.graft(0, &t2, &[0, 0]).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["|", "[]", "[|,[],[|,|]]"] {
            assert_eq!(PlanarTree::parse(s).unwrap().to_string(), s);
        }
    }
}
