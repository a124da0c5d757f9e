//! Sparse multivariate polynomials over F_q in lexicographic order.
//!
//! Terms are kept sorted with the lex-largest monomial first and no zero
//! coefficients, so structural equality is polynomial equality. The gcd is the
//! recursive primitive remainder sequence: content in the first occurring
//! variable, then pseudo-remainders of the primitive parts.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use smallvec::SmallVec;

use super::finite::{FiniteField, Fq};

pub type Monomial = SmallVec<[u32; 2]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    nvars: usize,
    terms: Vec<(Monomial, Fq)>,
}

fn lex_desc(a: &Monomial, b: &Monomial) -> Ordering {
    b.cmp(a)
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(c: Fq, nvars: usize) -> Self {
        if c == 0 {
            return Self::zero(nvars);
        }
        MPoly { nvars, terms: vec![(SmallVec::from_elem(0, nvars), c)] }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(1, nvars)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut m: Monomial = SmallVec::from_elem(0, nvars);
        m[i] = 1;
        MPoly { nvars, terms: vec![(m, 1)] }
    }

    pub fn monomial(exps: Monomial, c: Fq) -> Self {
        let nvars = exps.len();
        if c == 0 {
            return Self::zero(nvars);
        }
        MPoly { nvars, terms: vec![(exps, c)] }
    }

    /// Builds from arbitrary terms, merging duplicates.
    pub fn from_terms(f: &FiniteField, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Fq)>) -> Self {
        let mut map: BTreeMap<Monomial, Fq> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), nvars);
            let e = map.entry(m).or_insert(0);
            *e = f.add(*e, c);
        }
        let mut terms: Vec<(Monomial, Fq)> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.reverse();
        MPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Fq)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_const(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn const_value(&self) -> Option<Fq> {
        if self.terms.is_empty() {
            Some(0)
        } else if self.is_const() {
            Some(self.terms[0].1)
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.const_value() == Some(1)
    }

    pub fn leading(&self) -> Option<&(Monomial, Fq)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Fq {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m[var] > 0)
    }

    fn merge(f: &FiniteField, a: &[(Monomial, Fq)], b: &[(Monomial, Fq)], negate_b: bool, nvars: usize) -> Self {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                lex_desc(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate_b { f.neg(b[j].1) } else { b[j].1 };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b { f.sub(a[i].1, b[j].1) } else { f.add(a[i].1, b[j].1) };
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly { nvars, terms: out }
    }

    pub fn add(&self, f: &FiniteField, other: &Self) -> Self {
        Self::merge(f, &self.terms, &other.terms, false, self.nvars)
    }

    pub fn sub(&self, f: &FiniteField, other: &Self) -> Self {
        Self::merge(f, &self.terms, &other.terms, true, self.nvars)
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect() }
    }

    pub fn scale(&self, f: &FiniteField, c: Fq) -> Self {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), f.mul(*x, c))).collect() }
    }

    pub fn mul_term(&self, f: &FiniteField, mono: &Monomial, c: Fq) -> Self {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        // multiplying by a monomial preserves lex order
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, x)| {
                    let prod: Monomial = m.iter().zip(mono.iter()).map(|(a, b)| a + b).collect();
                    (prod, f.mul(*x, c))
                })
                .collect(),
        }
    }

    pub fn mul(&self, f: &FiniteField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if let Some(c) = self.const_value() {
            return other.scale(f, c);
        }
        if let Some(c) = other.const_value() {
            return self.scale(f, c);
        }
        let mut acc: BTreeMap<Monomial, Fq> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                let e = acc.entry(m).or_insert(0);
                *e = f.add(*e, f.mul(*ca, *cb));
            }
        }
        let mut terms: Vec<(Monomial, Fq)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.reverse();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, f: &FiniteField, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Scales so the lex-leading coefficient is 1.
    pub fn monic(&self, f: &FiniteField) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if *c == 1 => self.clone(),
            Some((_, c)) => self.scale(f, f.inv(*c)),
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, f: &FiniteField, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "exact division by the zero polynomial");
        if let Some(c) = divisor.const_value() {
            return Some(self.scale(f, f.inv(c)));
        }
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = f.inv(lc);
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Fq)> = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !divides(&lm, &m) {
                return None;
            }
            let qm: Monomial = m.iter().zip(lm.iter()).map(|(a, b)| a - b).collect();
            let qc = f.mul(c, lc_inv);
            rem = rem.sub(f, &divisor.mul_term(f, &qm, qc));
            quot.push((qm, qc));
        }
        // quotient terms are produced in descending order
        Some(MPoly { nvars: self.nvars, terms: quot })
    }

    /// Coefficients with respect to `var`, lowest power first; each
    /// coefficient has exponent zero in `var`.
    pub fn coeffs_in(&self, f: &FiniteField, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Fq)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            let k = mm[var] as usize;
            mm[var] = 0;
            buckets[k].push((mm, *c));
        }
        buckets.into_iter().map(|b| MPoly::from_terms(f, self.nvars, b)).collect()
    }

    fn from_coeffs_in(f: &FiniteField, nvars: usize, var: usize, coeffs: &[MPoly]) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut mm = m.clone();
                mm[var] += k as u32;
                terms.push((mm, *x));
            }
        }
        MPoly::from_terms(f, nvars, terms)
    }

    fn first_var(&self) -> Option<usize> {
        (0..self.nvars).find(|&v| self.involves(v))
    }

    /// Monic gcd of the coefficients with respect to `var`.
    pub fn content_in(&self, f: &FiniteField, var: usize) -> MPoly {
        let mut g = MPoly::zero(self.nvars);
        for c in self.coeffs_in(f, var) {
            if c.is_zero() {
                continue;
            }
            g = gcd(f, &g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `var`.
    fn pseudo_rem(&self, f: &FiniteField, b: &MPoly, var: usize) -> MPoly {
        let bc = b.coeffs_in(f, var);
        let db = bc.len() - 1;
        let lb = bc[db].clone();
        let mut r = self.coeffs_in(f, var);
        while r.len() > db && !r.iter().all(|c| c.is_zero()) {
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            if r.len() <= db {
                break;
            }
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            let mut next: Vec<MPoly> = r.iter().map(|c| c.mul(f, &lb)).collect();
            for (i, bi) in bc.iter().enumerate() {
                next[shift + i] = next[shift + i].sub(f, &bi.mul(f, &lr));
            }
            next.pop();
            r = next;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        Self::from_coeffs_in(f, self.nvars, var, &r)
    }

    pub fn derivative(&self, f: &FiniteField, var: usize) -> MPoly {
        let terms = self.terms.iter().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
            let mut mm = m.clone();
            let k = mm[var];
            mm[var] -= 1;
            (mm, f.mul(*c, f.from_int(k as i64)))
        });
        MPoly::from_terms(f, self.nvars, terms)
    }

    /// The unique p-th root, if every exponent is divisible by p.
    pub fn pth_root(&self, f: &FiniteField) -> Option<MPoly> {
        let p = f.characteristic();
        if self.terms.iter().any(|(m, _)| m.iter().any(|e| e % p != 0)) {
            return None;
        }
        Some(MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().map(|e| e / p).collect(), f.pth_root(*c)))
                .collect(),
        })
    }

    /// A k-th root with prescribed leading coefficient `lc_root`
    /// (`lc_root^k` must equal the leading coefficient), for p not dividing k.
    pub fn kth_root(&self, f: &FiniteField, k: u32, lc_root: Fq) -> Option<MPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = self.terms[0].clone();
        if f.pow(lc_root, k as u64) != lc || lm.iter().any(|e| e % k != 0) {
            return None;
        }
        let k_fq = f.from_int(k as i64);
        if k_fq == 0 {
            return None;
        }
        let root_lm: Monomial = lm.iter().map(|e| e / k).collect();
        let mut root = MPoly::monomial(root_lm.clone(), lc_root);
        // d/dA (A^k) leading term = k * lt(A)^{k-1}
        let lead_deriv_c = f.mul(k_fq, f.pow(lc_root, (k - 1) as u64));
        let lead_deriv_m: Monomial = root_lm.iter().map(|e| e * (k - 1)).collect();
        let max_terms = self.total_degree() as usize * 4 + 16;
        for _ in 0..max_terms.max(self.terms.len() * 4) {
            let rem = self.sub(f, &root.pow(f, k as u64));
            let Some((m, c)) = rem.terms.first().cloned() else {
                return Some(root);
            };
            if !divides(&lead_deriv_m, &m) {
                return None;
            }
            let tm: Monomial = m.iter().zip(lead_deriv_m.iter()).map(|(a, b)| a - b).collect();
            if tm >= root_lm {
                return None;
            }
            root = root.add(f, &MPoly::monomial(tm, f.mul(c, f.inv(lead_deriv_c))));
        }
        None
    }

    /// Evaluates with every variable replaced by a value from `vals` using
    /// caller-supplied ring operations.
    pub fn eval_with<T: Clone>(
        &self,
        vals: &[T],
        one: T,
        lift: impl Fn(Fq) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> Option<T> {
        let mut acc: Option<T> = None;
        let mut pow_cache: Vec<Vec<T>> = vals.iter().map(|v| vec![one.clone(), v.clone()]).collect();
        for (m, c) in &self.terms {
            let mut term = lift(*c);
            for (i, &e) in m.iter().enumerate() {
                while pow_cache[i].len() <= e as usize {
                    let next = mul(pow_cache[i].last().unwrap(), &vals[i]);
                    pow_cache[i].push(next);
                }
                if e > 0 {
                    term = mul(&term, &pow_cache[i][e as usize]);
                }
            }
            acc = Some(match acc {
                None => term,
                Some(a) => add(&a, &term),
            });
        }
        acc
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(f: &FiniteField, a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic(f);
    }
    if b.is_zero() {
        return a.monic(f);
    }
    if a.is_const() || b.is_const() {
        return MPoly::one(a.nvars);
    }
    if a == b {
        return a.monic(f);
    }
    let var = match (a.first_var(), b.first_var()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => return MPoly::one(a.nvars),
    };
    let ca = a.content_in(f, var);
    let cb = b.content_in(f, var);
    let c = gcd(f, &ca, &cb);
    let pa = a.div_exact(f, &ca).expect("content divides");
    let pb = b.div_exact(f, &cb).expect("content divides");
    let (mut r0, mut r1) = if pa.degree_in(var) >= pb.degree_in(var) { (pa, pb) } else { (pb, pa) };
    while !r1.is_zero() {
        if r1.degree_in(var) == 0 {
            // a nonzero constant in `var` that is primitive: the gcd is trivial
            r0 = MPoly::one(a.nvars);
            break;
        }
        let r = r0.pseudo_rem(f, &r1, var);
        r0 = r1;
        r1 = if r.is_zero() { r } else { r.div_exact(f, &r.content_in(f, var)).expect("content divides") };
    }
    let g = if r0.is_const() { MPoly::one(a.nvars) } else { r0.div_exact(f, &r0.content_in(f, var)).unwrap() };
    c.mul(f, &g).monic(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    fn f3() -> FiniteField {
        FiniteField::prime(3).unwrap()
    }

    #[test]
    fn gcd_univariate() {
        let f = f3();
        let u = MPoly::var(0, 1);
        let one = MPoly::one(1);
        // (u^2 - 1) and (u - 1)
        let a = u.mul(&f, &u).sub(&f, &one);
        let b = u.sub(&f, &one);
        assert_eq!(gcd(&f, &a, &b), b);
        assert_eq!(a.div_exact(&f, &b).unwrap(), u.add(&f, &one));
    }

    #[test]
    fn gcd_bivariate() {
        let f = f2();
        let u = MPoly::var(0, 2);
        let v = MPoly::var(1, 2);
        let one = MPoly::one(2);
        let g = u.mul(&f, &v).add(&f, &one); // uv + 1
        let a = g.mul(&f, &u.add(&f, &v));
        let b = g.mul(&f, &v.mul(&f, &v).add(&f, &u));
        assert_eq!(gcd(&f, &a, &b), g);
        assert!(gcd(&f, &u, &v).is_one());
    }

    #[test]
    fn pth_and_kth_roots() {
        let f = f3();
        let u = MPoly::var(0, 1);
        let cube = u.pow(&f, 3).add(&f, &MPoly::constant(2, 1));
        let r = cube.pth_root(&f).unwrap();
        assert_eq!(r.pow(&f, 3), cube);
        assert!(u.pth_root(&f).is_none());

        let g = f2();
        let uu = MPoly::var(0, 1);
        let sq = uu.add(&g, &MPoly::one(1)).pow(&g, 3);
        let root = sq.kth_root(&g, 3, 1).unwrap();
        assert_eq!(root, uu.add(&g, &MPoly::one(1)));
    }

    #[test]
    fn derivative_in_char_p() {
        let f = f2();
        let m: Monomial = smallvec![2];
        let x = MPoly::monomial(m, 1);
        assert!(x.derivative(&f, 0).is_zero());
    }
}
