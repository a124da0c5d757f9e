//! Residue fields F = F_q(u_1, ..., u_m) and their elements.
//!
//! An element is a reduced fraction of polynomials over F_q whose denominator
//! is monic in lex order, so two elements are equal exactly when their
//! numerators and denominators are structurally equal.

use std::fmt;

use super::finite::{FiniteField, Fq};
use super::mpoly::{gcd, MPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    num: MPoly,
    den: MPoly,
}

impl FieldElement {
    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value in F_q, when the element is a constant.
    pub fn as_const(&self) -> Option<Fq> {
        if self.den.is_one() {
            self.num.const_value()
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    fq: FiniteField,
    generator: String,
    vars: Vec<String>,
}

impl ResidueField {
    pub fn new(fq: FiniteField, generator: impl Into<String>, vars: Vec<String>) -> Result<Self> {
        let generator = generator.into();
        let mut seen = std::collections::BTreeSet::new();
        for v in vars.iter().chain(std::iter::once(&generator)) {
            if !seen.insert(v.as_str()) {
                return Err(Error::Field(format!("symbol {v} declared twice")));
            }
            if v == "t" {
                return Err(Error::Field("the symbol t is reserved for the uniformizer".into()));
            }
        }
        Ok(ResidueField { fq, generator, vars })
    }

    /// F_p with no transcendentals.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(FiniteField::prime(p)?, "a", Vec::new())
    }

    pub fn fq(&self) -> &FiniteField {
        &self.fq
    }

    pub fn characteristic(&self) -> u32 {
        self.fq.characteristic()
    }

    pub fn generator_name(&self) -> &str {
        &self.generator
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_perfect(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { num: MPoly::zero(self.nvars()), den: MPoly::one(self.nvars()) }
    }

    pub fn one(&self) -> FieldElement {
        self.from_fq(1)
    }

    pub fn from_fq(&self, c: Fq) -> FieldElement {
        FieldElement { num: MPoly::constant(c, self.nvars()), den: MPoly::one(self.nvars()) }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_fq(self.fq.from_int(n))
    }

    pub fn var(&self, i: usize) -> FieldElement {
        FieldElement { num: MPoly::var(i, self.nvars()), den: MPoly::one(self.nvars()) }
    }

    pub fn from_poly(&self, num: MPoly) -> FieldElement {
        FieldElement { num, den: MPoly::one(self.nvars()) }
    }

    /// Reduces `num/den` to canonical form.
    pub fn fraction(&self, num: MPoly, den: MPoly) -> Result<FieldElement> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.reduce(num, den))
    }

    fn reduce(&self, num: MPoly, den: MPoly) -> FieldElement {
        let f = &self.fq;
        if num.is_zero() {
            return self.zero();
        }
        if let Some(c) = den.const_value() {
            return FieldElement { num: num.scale(f, f.inv(c)), den: MPoly::one(self.nvars()) };
        }
        let g = gcd(f, &num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(f, &g).expect("gcd divides"), den.div_exact(f, &g).expect("gcd divides"))
        };
        let lc = den.lc();
        if lc == 1 {
            FieldElement { num, den }
        } else {
            let inv = f.inv(lc);
            FieldElement { num: num.scale(f, inv), den: den.scale(f, inv) }
        }
    }

    pub fn canonicalize(&self, a: &FieldElement) -> Result<FieldElement> {
        self.fraction(a.num.clone(), a.den.clone())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.fq;
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            let num = a.num.add(f, &b.num);
            if a.den.is_one() {
                return FieldElement { num, den: a.den.clone() };
            }
            return self.reduce(num, a.den.clone());
        }
        let num = a.num.mul(f, &b.den).add(f, &b.num.mul(f, &a.den));
        self.reduce(num, a.den.mul(f, &b.den))
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement { num: a.num.neg(&self.fq), den: a.den.clone() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.fq;
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.den.is_one() && b.den.is_one() {
            return FieldElement { num: a.num.mul(f, &b.num), den: a.den.clone() };
        }
        if let Some(c) = a.as_const() {
            return FieldElement { num: b.num.scale(f, c), den: b.den.clone() };
        }
        if let Some(c) = b.as_const() {
            return FieldElement { num: a.num.scale(f, c), den: a.den.clone() };
        }
        // cross-cancel before multiplying to keep the gcds small
        let g1 = gcd(f, &a.num, &b.den);
        let g2 = gcd(f, &b.num, &a.den);
        let an = a.num.div_exact(f, &g1).unwrap();
        let bd = b.den.div_exact(f, &g1).unwrap();
        let bn = b.num.div_exact(f, &g2).unwrap();
        let ad = a.den.div_exact(f, &g2).unwrap();
        let num = an.mul(f, &bn);
        let den = ad.mul(f, &bd);
        let lc = den.lc();
        let inv = f.inv(lc);
        FieldElement { num: num.scale(f, inv), den: den.scale(f, inv) }
    }

    pub fn scale(&self, a: &FieldElement, c: Fq) -> FieldElement {
        if c == 0 {
            return self.zero();
        }
        FieldElement { num: a.num.scale(&self.fq, c), den: a.den.clone() }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.fq;
        let lc = a.num.lc();
        let inv = f.inv(lc);
        Ok(FieldElement { num: a.den.scale(f, inv), den: a.num.scale(f, inv) })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        if e < 0 {
            return self.pow(&self.inv(a)?, -e);
        }
        let f = &self.fq;
        Ok(FieldElement { num: a.num.pow(f, e as u64), den: a.den.pow(f, e as u64) })
    }

    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.characteristic() as i64).expect("nonnegative exponent")
    }

    /// The p-th root, when `a` is a p-th power in F.
    pub fn pth_root(&self, a: &FieldElement) -> Option<FieldElement> {
        let num = a.num.pth_root(&self.fq)?;
        let den = a.den.pth_root(&self.fq)?;
        Some(FieldElement { num, den })
    }

    pub fn is_pth_power(&self, a: &FieldElement) -> bool {
        self.pth_root(a).is_some()
    }

    /// All `z` in F with `z^k = a`, in a deterministic order.
    pub fn kth_roots(&self, a: &FieldElement, k: u64) -> Vec<FieldElement> {
        if k == 0 {
            return Vec::new();
        }
        if a.is_zero() {
            return vec![self.zero()];
        }
        let p = self.characteristic() as u64;
        if k.is_multiple_of(p) {
            return match self.pth_root(a) {
                Some(r) => self.kth_roots(&r, k / p),
                None => Vec::new(),
            };
        }
        if k == 1 {
            return vec![a.clone()];
        }
        let f = &self.fq;
        if let Some(c) = a.as_const() {
            return f.nth_roots(c, k).into_iter().map(|r| self.from_fq(r)).collect();
        }
        let Some(den) = a.den.kth_root(f, k as u32, 1) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for lc_root in f.nth_roots(a.num.lc(), k) {
            if let Some(num) = a.num.kth_root(f, k as u32, lc_root) {
                out.push(FieldElement { num, den: den.clone() });
            }
        }
        out
    }

    /// Partial derivative with respect to the transcendental `var`.
    pub fn derivative(&self, a: &FieldElement, var: usize) -> FieldElement {
        let f = &self.fq;
        if a.den.is_one() {
            return FieldElement { num: a.num.derivative(f, var), den: a.den.clone() };
        }
        let num = a.num.derivative(f, var).mul(f, &a.den).sub(f, &a.num.mul(f, &a.den.derivative(f, var)));
        self.reduce(num, a.den.mul(f, &a.den))
    }

    /// Evaluates `a` with the transcendentals replaced by `vals`, using ring
    /// operations supplied by the caller; the denominator is inverted by
    /// `inv`.
    pub fn eval_with<T: Clone>(
        &self,
        a: &FieldElement,
        vals: &[T],
        one: T,
        lift: impl Fn(Fq) -> T + Copy,
        add: impl Fn(&T, &T) -> T + Copy,
        mul: impl Fn(&T, &T) -> T + Copy,
        inv: impl Fn(&T) -> Result<T>,
    ) -> Result<T> {
        let zero = lift(0);
        let num = a.num.eval_with(vals, one.clone(), lift, add, mul).unwrap_or_else(|| zero.clone());
        if a.den.is_one() {
            return Ok(num);
        }
        let den = a.den.eval_with(vals, one, lift, add, mul).unwrap_or(zero);
        Ok(mul(&num, &inv(&den)?))
    }

    /// Moves `a` into `target`, renaming transcendental `i` to
    /// `var_map[i]` and mapping constants by `fq_map`.
    pub fn transport(
        &self,
        target: &ResidueField,
        a: &FieldElement,
        var_map: &[usize],
        fq_map: impl Fn(Fq) -> Fq,
    ) -> FieldElement {
        let tf = &target.fq;
        let nv = target.nvars();
        let move_poly = |poly: &MPoly| {
            let terms = poly.terms().iter().map(|(m, c)| {
                let mut mm: super::mpoly::Monomial = smallvec::SmallVec::from_elem(0, nv);
                for (i, &e) in m.iter().enumerate() {
                    mm[var_map[i]] += e;
                }
                (mm, fq_map(*c))
            });
            MPoly::from_terms(tf, nv, terms)
        };
        target.reduce(move_poly(&a.num), move_poly(&a.den))
    }

    pub fn render(&self, a: &FieldElement) -> String {
        let num = self.render_poly(&a.num);
        if a.den.is_one() {
            return num;
        }
        let den = self.render_poly(&a.den);
        let wrap = |s: String, poly: &MPoly| if poly.terms().len() > 1 { format!("({s})") } else { s };
        format!("{}/{}", wrap(num, &a.num), wrap(den, &a.den))
    }

    fn render_poly(&self, poly: &MPoly) -> String {
        if poly.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in poly.terms() {
            let mut factors = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            let coeff = self.fq.render(*c, &self.generator);
            if factors.is_empty() {
                parts.push(coeff);
            } else if *c == 1 {
                parts.push(factors.join("*"));
            } else {
                parts.push(format!("{coeff}*{}", factors.join("*")));
            }
        }
        parts.join(" + ")
    }

    pub fn display<'a>(&'a self, a: &'a FieldElement) -> impl fmt::Display + 'a {
        struct D<'a>(&'a ResidueField, &'a FieldElement);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        D(self, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3u() -> ResidueField {
        ResidueField::new(FiniteField::prime(3).unwrap(), "a", vec!["u".into()]).unwrap()
    }

    #[test]
    fn cancels_common_factor() {
        let f = f3u();
        let u = f.var(0);
        let one = f.one();
        let num = f.sub(&f.mul(&u, &u), &one);
        let den = f.sub(&u, &one);
        let q = f.div(&num, &den).unwrap();
        assert_eq!(q, f.add(&u, &one));
        assert_eq!(f.render(&q), "u + 1");
    }

    #[test]
    fn zero_normal_form() {
        let f = f3u();
        let z = f.fraction(MPoly::zero(1), MPoly::var(0, 1)).unwrap();
        assert_eq!(z, f.zero());
        assert!(matches!(f.fraction(MPoly::one(1), MPoly::zero(1)), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn unit_normalization_is_idempotent() {
        let f = f3u();
        let two_u = f.scale(&f.var(0), 2);
        let e = f.fraction(two_u.numerator().clone(), MPoly::constant(2, 1)).unwrap();
        assert_eq!(e, f.var(0));
        let back = f.canonicalize(&e).unwrap();
        assert_eq!(back, e);
        let g = f.fraction(MPoly::var(0, 1), MPoly::var(0, 1).scale(f.fq(), 2)).unwrap();
        assert_eq!(g, f.from_int(2));
    }

    #[test]
    fn derivative_of_quotient() {
        let f = f3u();
        let u = f.var(0);
        let inv_u = f.inv(&u).unwrap();
        // d(1/u) = -1/u^2
        let d = f.derivative(&inv_u, 0);
        assert_eq!(d, f.neg(&f.pow(&u, -2).unwrap()));
    }

    #[test]
    fn roots_in_function_field() {
        let f = f3u();
        let u = f.var(0);
        let sq = f.mul(&u, &u);
        let roots = f.kth_roots(&sq, 2);
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&u) && roots.contains(&f.neg(&u)));
        assert!(f.kth_roots(&u, 2).is_empty());
        assert!(f.pth_root(&u).is_none());
        assert_eq!(f.pth_root(&f.pow(&u, 3).unwrap()), Some(u));
    }
}
