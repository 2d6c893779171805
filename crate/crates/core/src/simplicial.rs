//! Truncated simplicial sets given by explicit face and degeneracy tables.

use crate::multicat::laws::LawReport;

/// Levels `0..=top`. `faces[k][i]` is `d_i` from level `k` to `k-1`
/// (`faces[0]` is empty); `degeneracies[k][j]` is `s_j` from level `k` to
/// `k+1`, present for `k < top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    pub labels: Vec<Vec<String>>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSimplicialSet {
    pub fn top(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn level_size(&self, k: usize) -> usize {
        self.labels[k].len()
    }

    pub fn face(&self, k: usize, i: usize, x: usize) -> usize {
        self.faces[k][i][x]
    }

    pub fn degeneracy(&self, k: usize, j: usize, x: usize) -> usize {
        self.degeneracies[k][j][x]
    }

    /// Checks the five families of simplicial identities on every element of
    /// every level where both sides are defined.
    pub fn check_identities(&self) -> LawReport {
        let mut rep = LawReport::default();
        let top = self.top();
        let d = |k: usize, i: usize, x: usize| self.faces[k][i][x];
        let s = |k: usize, j: usize, x: usize| self.degeneracies[k][j][x];
        for k in 0..=top {
            for x in 0..self.level_size(k) {
                // d_i d_j = d_{j-1} d_i, i < j, on level k >= 2.
                if k >= 2 {
                    for j in 1..=k {
                        for i in 0..j {
                            rep.checked += 1;
                            if d(k - 1, i, d(k, j, x)) != d(k - 1, j - 1, d(k, i, x)) {
                                rep.fail("d_i d_j = d_{j-1} d_i", format!("level {k}, i={i}, j={j}, {}", self.labels[k][x]));
                            }
                        }
                    }
                }
                if k < top {
                    for j in 0..=k {
                        let y = s(k, j, x);
                        for i in 0..=k + 1 {
                            rep.checked += 1;
                            let lhs = d(k + 1, i, y);
                            let (law, ok) = if i < j {
                                ("d_i s_j = s_{j-1} d_i", lhs == s(k - 1, j - 1, d(k, i, x)))
                            } else if i == j || i == j + 1 {
                                ("d_j s_j = d_{j+1} s_j = id", lhs == x)
                            } else {
                                ("d_i s_j = s_j d_{i-1}", lhs == s(k - 1, j, d(k, i - 1, x)))
                            };
                            if !ok {
                                rep.fail(law, format!("level {k}, i={i}, j={j}, {}", self.labels[k][x]));
                            }
                        }
                    }
                }
                if k + 2 <= top {
                    for j in 0..=k {
                        for i in 0..=j {
                            rep.checked += 1;
                            if s(k + 1, i, s(k, j, x)) != s(k + 1, j + 1, s(k, i, x)) {
                                rep.fail("s_i s_j = s_{j+1} s_i", format!("level {k}, i={i}, j={j}, {}", self.labels[k][x]));
                            }
                        }
                    }
                }
            }
        }
        rep
    }
}
