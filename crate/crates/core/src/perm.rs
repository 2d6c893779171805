//! Permutations of `{0..n}` stored as image vectors: `p[k]` is the image of `k`.
//!
//! The right action convention used throughout the crate: for an operation `p`
//! with inputs `(x_0, .., x_{n-1})`, the operation `p·σ` has inputs
//! `(x_{σ(0)}, .., x_{σ(n-1)})`, i.e. input `k` of `p·σ` is input `σ(k)` of `p`.
//! With this convention `(p·σ)·τ = p·(σ∘τ)`.

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// `σ∘τ`, i.e. `k ↦ σ(τ(k))`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Perm {
    tau.iter().map(|&t| sigma[t]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All permutations of `n` letters in lexicographic order (so `all(n)[rank(p)] == p`).
pub fn all(n: usize) -> Vec<Perm> {
    (0..factorial(n)).map(|r| unrank(n, r)).collect()
}

/// Lexicographic rank.
pub fn rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

pub fn unrank(n: usize, mut r: usize) -> Perm {
    let mut digits = vec![0; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = r % base;
        r /= base;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

/// Adjacent transpositions `(i i+1)`, which generate `Σ_n`.
pub fn adjacent_transpositions(n: usize) -> Vec<Perm> {
    (0..n.saturating_sub(1))
        .map(|i| {
            let mut p = identity(n);
            p.swap(i, i + 1);
            p
        })
        .collect()
}

/// Reorders `items` by the right action: result `k` is `items[σ(k)]`.
pub fn permute<T: Clone>(items: &[T], sigma: &[usize]) -> Vec<T> {
    sigma.iter().map(|&s| items[s].clone()).collect()
}

/// Block permutation induced by `σ` when old slot `t` has been expanded to a
/// block of `sizes[t]` consecutive positions.
///
/// Returns `ρ` such that new position `(j, r)` (block `j` of the new order,
/// offset `r`) maps to old position `offset(σ(j)) + r`.
pub fn block_permutation(sigma: &[usize], sizes: &[usize]) -> Perm {
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        offsets.push(acc);
        acc += s;
    }
    let mut rho = Vec::with_capacity(acc);
    for &old in sigma {
        for r in 0..sizes[old] {
            rho.push(offsets[old] + r);
        }
    }
    rho
}

/// The shuffle taking `outer` blocks of `inner` entries to `inner` blocks of
/// `outer` entries: position `o*inner + x` maps to `x*outer + o`.
pub fn transpose_blocks(outer: usize, inner: usize) -> Perm {
    let mut p = Vec::with_capacity(outer * inner);
    for o in 0..outer {
        for x in 0..inner {
            p.push(x * outer + o);
        }
    }
    p
}

/// `id_{before} ⊕ τ ⊕ id_{after}`.
pub fn embed(tau: &[usize], before: usize, after: usize) -> Perm {
    let mut p: Perm = (0..before).collect();
    p.extend(tau.iter().map(|&t| t + before));
    let start = before + tau.len();
    p.extend(start..start + after);
    p
}
