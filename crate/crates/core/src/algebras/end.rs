//! Endomorphism multicategories of finite carrier families, computed lazily.

use crate::error::{Error, Result};
use crate::multicat::builtin::{all_signatures, materialize_with_ops};
use crate::multicat::{ColorId, Multicat, Multicategory, Signature};

/// Default bound on the number of functions listed for one signature.
pub const DEFAULT_LIMIT: usize = 1 << 22;

/// A finite set `A(x)` for each color `x`, with elements `0..sizes[x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectFamily {
    pub colors: Vec<String>,
    pub sizes: Vec<usize>,
}

impl ObjectFamily {
    pub fn new(colors: Vec<String>, sizes: Vec<usize>) -> Self {
        assert_eq!(colors.len(), sizes.len());
        ObjectFamily { colors, sizes }
    }

    pub fn single(size: usize) -> Self {
        ObjectFamily::new(vec!["x".into()], vec![size])
    }

    /// Number of input tuples `A(x_1) × .. × A(x_n)`.
    pub fn domain_size(&self, inputs: &[ColorId]) -> usize {
        inputs.iter().map(|&c| self.sizes[c]).product()
    }

    /// All input tuples in lexicographic order, the first input varying slowest.
    pub fn domain(&self, inputs: &[ColorId]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if inputs.iter().any(|&c| self.sizes[c] == 0) {
            return out;
        }
        let mut t = vec![0; inputs.len()];
        loop {
            out.push(t.clone());
            let mut k = t.len();
            let more = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                t[k] += 1;
                if t[k] < self.sizes[inputs[k]] {
                    break true;
                }
                t[k] = 0;
            };
            if !more {
                return out;
            }
        }
    }

    /// Position of an input tuple in [`ObjectFamily::domain`].
    pub fn index(&self, inputs: &[ColorId], tuple: &[usize]) -> usize {
        let mut i = 0;
        for (k, &a) in tuple.iter().enumerate() {
            i = i * self.sizes[inputs[k]] + a;
        }
        i
    }
}

/// A function `A(x_1) × .. × A(x_n) → B(x)` as a value table over the domain
/// in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Function {
    pub sig: Signature,
    pub table: Vec<u32>,
}

impl Function {
    pub fn label(&self) -> String {
        let body: Vec<String> = self.table.iter().map(|v| v.to_string()).collect();
        format!("[{}]", body.join(" "))
    }
}

/// Lists every function table with `domain` entries and values below `codomain`.
pub(crate) fn all_tables(domain: usize, codomain: usize, limit: usize) -> Result<Vec<Vec<u32>>> {
    let count = (codomain as u128).checked_pow(domain as u32);
    match count {
        Some(c) if c <= limit as u128 => {}
        _ => return Err(Error::Overflow(format!("{codomain}^{domain} functions exceed the limit of {limit}"))),
    }
    if codomain == 0 {
        return Ok(if domain == 0 { vec![Vec::new()] } else { Vec::new() });
    }
    let mut out = Vec::new();
    let mut t = vec![0u32; domain];
    loop {
        out.push(t.clone());
        let mut k = domain;
        let more = loop {
            if k == 0 {
                break false;
            }
            k -= 1;
            t[k] += 1;
            if (t[k] as usize) < codomain {
                break true;
            }
            t[k] = 0;
        };
        if !more {
            return Ok(out);
        }
    }
}

/// `End(A)`: operations `A(x_1) × .. × A(x_n) → A(x)`, composition by
/// substitution and the action permuting source factors.
#[derive(Debug, Clone)]
pub struct EndMulticategory {
    pub family: ObjectFamily,
    pub cap: Option<usize>,
    pub limit: usize,
}

impl EndMulticategory {
    pub fn new(family: ObjectFamily, cap: Option<usize>) -> Self {
        EndMulticategory { family, cap, limit: DEFAULT_LIMIT }
    }

    /// `|A(x)|^(∏ |A(x_i)|)`, or `None` on overflow.
    pub fn cardinality(&self, sig: &Signature) -> Option<u128> {
        let mut dom: u32 = 1;
        for &c in &sig.inputs {
            dom = dom.checked_mul(self.family.sizes[c] as u32)?;
        }
        (self.family.sizes[sig.output] as u128).checked_pow(dom)
    }

    /// Evaluates `f` at an input tuple.
    pub fn eval(&self, f: &Function, args: &[usize]) -> usize {
        f.table[self.family.index(&f.sig.inputs, args)] as usize
    }

    /// The function given by a closure on input tuples.
    pub fn function(&self, sig: Signature, mut f: impl FnMut(&[usize]) -> usize) -> Function {
        let table = self.family.domain(&sig.inputs).iter().map(|t| f(t) as u32).collect();
        Function { sig, table }
    }
}

impl Multicat for EndMulticategory {
    type Op = Function;

    fn color_count(&self) -> usize {
        self.family.colors.len()
    }

    fn color_name(&self, c: ColorId) -> String {
        self.family.colors[c].clone()
    }

    fn is_symmetric(&self) -> bool {
        true
    }

    fn arity_cap(&self) -> Option<usize> {
        self.cap
    }

    fn signature_of(&self, op: &Function) -> Signature {
        op.sig.clone()
    }

    fn operations(&self, sig: &Signature) -> Result<Vec<Function>> {
        if !self.arity_allowed(sig.arity()) {
            return Ok(Vec::new());
        }
        let dom = self.family.domain_size(&sig.inputs);
        let tables = all_tables(dom, self.family.sizes[sig.output], self.limit)?;
        Ok(tables.into_iter().map(|table| Function { sig: sig.clone(), table }).collect())
    }

    fn compose(&self, p: &Function, slot: usize, q: &Function) -> Option<Function> {
        let sig = p.sig.graft(slot, &q.sig);
        if !self.arity_allowed(sig.arity()) {
            return None;
        }
        let m = q.sig.arity();
        let mut inner_args = Vec::with_capacity(p.sig.arity());
        Some(self.function(sig, |t| {
            inner_args.clear();
            inner_args.extend_from_slice(&t[..slot]);
            inner_args.push(self.eval(q, &t[slot..slot + m]));
            inner_args.extend_from_slice(&t[slot + m..]);
            self.eval(p, &inner_args)
        }))
    }

    fn act(&self, p: &Function, sigma: &[usize]) -> Option<Function> {
        let sig = p.sig.permuted(sigma);
        let mut z = vec![0; sigma.len()];
        Some(self.function(sig, |y| {
            for (k, &s) in sigma.iter().enumerate() {
                z[s] = y[k];
            }
            self.eval(p, &z)
        }))
    }

    fn unit(&self, c: ColorId) -> Function {
        self.function(Signature::new(vec![c], c), |t| t[0])
    }

    fn op_label(&self, op: &Function) -> String {
        op.label()
    }
}

/// `End(A)` tabulated over every signature of arity at most `cap`.
pub fn end_multicategory(family: &ObjectFamily, cap: usize, limit: usize) -> Result<Multicategory> {
    end_multicategory_with_ops(family, cap, limit).map(|(m, _)| m)
}

/// As [`end_multicategory`], also returning the function behind each operation.
pub fn end_multicategory_with_ops(family: &ObjectFamily, cap: usize, limit: usize) -> Result<(Multicategory, Vec<Function>)> {
    let mut e = EndMulticategory::new(family.clone(), Some(cap));
    e.limit = limit;
    let support: Vec<Signature> = all_signatures(family.colors.len(), cap)
        .into_iter()
        .filter(|s| e.cardinality(s).is_none_or(|c| c > 0))
        .collect();
    materialize_with_ops(&e, "End", &support, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicat::laws::check_multicategory_laws;

    #[test]
    fn sizes_and_swap() {
        let e = EndMulticategory::new(ObjectFamily::single(2), Some(3));
        for (n, want) in [(0, 2), (1, 4), (2, 16)] {
            assert_eq!(e.operations(&Signature::new(vec![0; n], 0)).unwrap().len(), want);
        }
        let sub = e.function(Signature::new(vec![0, 0], 0), |t| (t[0] + 2 - t[1]) % 2 * t[0]);
        let swapped = e.act(&sub, &[1, 0]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(e.eval(&swapped, &[a, b]), e.eval(&sub, &[b, a]));
            }
        }
    }

    #[test]
    fn tabulated_end_passes_laws() {
        let fam = ObjectFamily::new(vec!["x".into(), "y".into()], vec![2, 1]);
        let m = end_multicategory(&fam, 2, 1 << 16).unwrap();
        assert!(!m.is_partial());
        let r = check_multicategory_laws(&m).unwrap();
        assert!(r.passed(), "{:?}", r.first());
    }
}
