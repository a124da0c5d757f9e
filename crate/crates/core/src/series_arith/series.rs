//! Truncated Laurent series over a residue field F, i.e. elements of F((t)).
//!
//! A series stores its coefficients from `start` on together with an optional
//! cap: `Some(c)` means every coefficient at exponent `>= c` is unknown,
//! `None` means the stored terms are the whole series.

use std::fmt;
use std::sync::Arc;

use super::finite::Fq;
use super::residue::{FieldElement, ResidueField};
use crate::error::{Error, Result};

/// Valuation reported for an exact zero.
pub const INF: i64 = i64::MAX;

/// Default working precision in t-adic digits.
pub const DEFAULT_PRECISION: i64 = 64;

/// The field K = F((t)) together with the working precision used when an
/// operation (inversion, root finding) has no natural stopping point.
#[derive(Debug, PartialEq, Eq)]
pub struct LocalField {
    residue: ResidueField,
    precision: i64,
}

impl LocalField {
    pub fn new(residue: ResidueField, precision: i64) -> Arc<Self> {
        Arc::new(LocalField { residue, precision: precision.max(2) })
    }

    pub fn residue(&self) -> &ResidueField {
        &self.residue
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn characteristic(&self) -> u32 {
        self.residue.characteristic()
    }

    /// The same field with another working precision.
    pub fn with_precision(&self, precision: i64) -> Arc<Self> {
        LocalField::new(self.residue.clone(), precision)
    }
}

#[derive(Clone)]
pub struct LaurentSeries {
    k: Arc<LocalField>,
    start: i64,
    coeffs: Vec<FieldElement>,
    cap: Option<i64>,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start && self.cap == other.cap && self.coeffs == other.coeffs
    }
}

impl Eq for LaurentSeries {}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The coefficients as elements of F_q, when all of them are constants.
fn const_coeffs(c: &[FieldElement]) -> Option<Vec<Fq>> {
    c.iter().map(|x| if x.is_zero() { Some(0) } else { x.as_const() }).collect()
}

impl LaurentSeries {
    pub fn new(k: &Arc<LocalField>, start: i64, coeffs: Vec<FieldElement>, cap: Option<i64>) -> Self {
        let mut s = LaurentSeries { k: k.clone(), start, coeffs, cap };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(c) = self.cap {
            let keep = (c - self.start).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.start = self.cap.unwrap_or(0);
            }
            Some(i) => {
                if i > 0 {
                    self.coeffs.drain(..i);
                    self.start += i as i64;
                }
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn zero(k: &Arc<LocalField>) -> Self {
        LaurentSeries { k: k.clone(), start: 0, coeffs: Vec::new(), cap: None }
    }

    /// Zero modulo t^cap.
    pub fn zero_to(k: &Arc<LocalField>, cap: i64) -> Self {
        LaurentSeries { k: k.clone(), start: cap, coeffs: Vec::new(), cap: Some(cap) }
    }

    pub fn constant(k: &Arc<LocalField>, c: FieldElement) -> Self {
        Self::new(k, 0, vec![c], None)
    }

    pub fn from_fq(k: &Arc<LocalField>, c: Fq) -> Self {
        Self::constant(k, k.residue().from_fq(c))
    }

    pub fn from_int(k: &Arc<LocalField>, n: i64) -> Self {
        Self::constant(k, k.residue().from_int(n))
    }

    pub fn one(k: &Arc<LocalField>) -> Self {
        Self::from_fq(k, 1)
    }

    pub fn monomial(k: &Arc<LocalField>, c: FieldElement, e: i64) -> Self {
        Self::new(k, e, vec![c], None)
    }

    /// The uniformizer t.
    pub fn t(k: &Arc<LocalField>) -> Self {
        Self::monomial(k, k.residue().one(), 1)
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.k
    }

    pub fn residue_field(&self) -> &ResidueField {
        self.k.residue()
    }

    pub fn cap(&self) -> Option<i64> {
        self.cap
    }

    pub fn is_exact(&self) -> bool {
        self.cap.is_none()
    }

    /// True when no nonzero coefficient is known (exact zero or zero to
    /// precision).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.cap.is_none()
    }

    /// Exponent of the first known nonzero term, the cap for a series that
    /// is zero to precision, or `INF` for the exact zero.
    pub fn lower_bound(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.cap.unwrap_or(INF)
        } else {
            self.start
        }
    }

    /// The t-adic valuation.
    pub fn valuation(&self) -> Result<i64> {
        if self.coeffs.is_empty() {
            return match self.cap {
                None => Ok(INF),
                Some(c) => Err(Error::precision(format!("series is zero modulo t^{c}"))),
            };
        }
        Ok(self.start)
    }

    /// Valuation and leading coefficient of a series known to be nonzero.
    pub fn leading(&self) -> Result<(i64, FieldElement)> {
        match self.coeffs.first() {
            Some(c) => Ok((self.start, c.clone())),
            None => match self.cap {
                None => Err(Error::DivisionByZero),
                Some(c) => Err(Error::precision(format!("series is zero modulo t^{c}"))),
            },
        }
    }

    /// The coefficient of t^e; zero outside the stored range.
    pub fn coeff(&self, e: i64) -> FieldElement {
        if e < self.start || e - self.start >= self.coeffs.len() as i64 {
            return self.k.residue().zero();
        }
        self.coeffs[(e - self.start) as usize].clone()
    }

    /// Nonzero terms as (exponent, coefficient) pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElement)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Last exponent with a stored coefficient.
    pub fn degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start + self.coeffs.len() as i64 - 1)
        }
    }

    /// The coefficient of t^0 of a series of nonnegative valuation.
    pub fn residue(&self) -> Result<FieldElement> {
        let v = self.lower_bound();
        if v < 0 {
            return Err(Error::Mismatch("residue of a series with a pole".into()));
        }
        if let Some(c) = self.cap {
            if c <= 0 {
                return Err(Error::precision("residue beyond the precision cap"));
            }
        }
        Ok(self.coeff(0))
    }

    /// The exact series made of the known terms below t^cap.
    pub fn round(&self, cap: i64) -> Self {
        let cap = self.cap.map_or(cap, |c| c.min(cap));
        let keep = (cap - self.start).clamp(0, self.coeffs.len() as i64) as usize;
        Self::new(&self.k, self.start, self.coeffs[..keep].to_vec(), None)
    }

    pub fn truncate(&self, cap: i64) -> Self {
        let cap = match self.cap {
            Some(c) => c.min(cap),
            None => cap,
        };
        Self::new(&self.k, self.start, self.coeffs.clone(), Some(cap))
    }

    fn min_cap(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(x.min(y)),
        }
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let f = self.k.residue();
        let cap = Self::min_cap(self.cap, other.cap);
        if other.coeffs.is_empty() {
            let mut s = self.clone();
            s.cap = cap;
            s.normalize();
            return s;
        }
        if self.coeffs.is_empty() && !negate {
            let mut s = other.clone();
            s.cap = cap;
            s.normalize();
            return s;
        }
        let lo = self.lower_bound().min(other.lower_bound());
        let hi_a = self.start + self.coeffs.len() as i64;
        let hi_b = other.start + other.coeffs.len() as i64;
        let mut hi = if self.coeffs.is_empty() { hi_b } else { hi_a.max(hi_b) };
        if let Some(c) = cap {
            hi = hi.min(c);
        }
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for e in lo..hi {
            let a = self.coeff(e);
            let b = other.coeff(e);
            coeffs.push(if negate { f.sub(&a, &b) } else { f.add(&a, &b) });
        }
        Self::new(&self.k, lo, coeffs, cap)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        let f = self.k.residue();
        LaurentSeries {
            k: self.k.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
            cap: self.cap,
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_one() {
            return self.clone();
        }
        let f = self.k.residue();
        Self::new(&self.k, self.start, self.coeffs.iter().map(|x| f.mul(x, c)).collect(), self.cap)
    }

    /// Multiplication by t^e.
    pub fn shift(&self, e: i64) -> Self {
        LaurentSeries {
            k: self.k.clone(),
            start: self.start + e,
            coeffs: self.coeffs.clone(),
            cap: self.cap.map(|c| c + e),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.k.residue();
        let va = self.lower_bound();
        let vb = other.lower_bound();
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.k);
        }
        let mut cap = match (self.cap, other.cap) {
            (None, None) => None,
            (Some(ca), None) => Some(ca + vb),
            (None, Some(cb)) => Some(cb + va),
            (Some(ca), Some(cb)) => Some((ca + vb).min(cb + va)),
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero_to(&self.k, cap.expect("a zero factor with a cap"));
        }
        let start = self.start + other.start;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if cap.is_none() && len as i64 > 4 * self.k.precision() {
            cap = Some(start + 4 * self.k.precision());
        }
        if let Some(c) = cap {
            len = len.min((c - start).max(0) as usize);
        }
        if let (Some(a), Some(b)) = (const_coeffs(&self.coeffs), const_coeffs(&other.coeffs)) {
            let fq = f.fq();
            let mut acc = vec![0 as Fq; len];
            for (i, &x) in a.iter().enumerate().take(len) {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate().take(len - i) {
                    if y != 0 {
                        acc[i + j] = fq.add(acc[i + j], fq.mul(x, y));
                    }
                }
            }
            return Self::new(&self.k, start, acc.into_iter().map(|c| f.from_fq(c)).collect(), cap);
        }
        let mut coeffs = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
            }
        }
        Self::new(&self.k, start, coeffs, cap)
    }

    /// Inverse; an exact non-monomial series is inverted to the working
    /// precision of its field.
    pub fn inv(&self) -> Result<Self> {
        let f = self.k.residue();
        let (v, c0) = self.leading()?;
        let c0_inv = f.inv(&c0)?;
        if self.cap.is_none() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(&self.k, c0_inv, -v));
        }
        let rel = match self.cap {
            Some(c) => (c - v).min(self.k.precision()),
            None => self.k.precision(),
        };
        let n = rel as usize;
        if let Some(a) = const_coeffs(&self.coeffs) {
            let fq = f.fq();
            let c0_inv = fq.inv(a[0]);
            let mut out: Vec<Fq> = Vec::with_capacity(n);
            out.push(c0_inv);
            for k in 1..n {
                let mut acc = 0;
                for i in 1..=k.min(a.len() - 1) {
                    if a[i] != 0 {
                        acc = fq.add(acc, fq.mul(a[i], out[k - i]));
                    }
                }
                out.push(fq.neg(fq.mul(acc, c0_inv)));
            }
            return Ok(Self::new(&self.k, -v, out.into_iter().map(|c| f.from_fq(c)).collect(), Some(-v + rel)));
        }
        let mut out: Vec<FieldElement> = Vec::with_capacity(n);
        out.push(c0_inv.clone());
        for k in 1..n {
            let mut acc = f.zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                let ci = &self.coeffs[i];
                if ci.is_zero() {
                    continue;
                }
                acc = f.add(&acc, &f.mul(ci, &out[k - i]));
            }
            out.push(f.neg(&f.mul(&acc, &c0_inv)));
        }
        Ok(Self::new(&self.k, -v, out, Some(-v + rel)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow((-e) as u64))
        }
    }

    /// Termwise derivative d/dt.
    pub fn derivative_t(&self) -> Self {
        let f = self.k.residue();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f.mul(c, &f.from_int(self.start + i as i64)))
            .collect();
        Self::new(&self.k, self.start - 1, coeffs, self.cap.map(|c| c - 1))
    }

    /// Termwise partial derivative with respect to the transcendental `var`.
    pub fn derivative_u(&self, var: usize) -> Self {
        let f = self.k.residue();
        let coeffs = self.coeffs.iter().map(|c| f.derivative(c, var)).collect();
        Self::new(&self.k, self.start, coeffs, self.cap)
    }

    /// Applies a map to every coefficient, landing in another field.
    pub fn map_coeffs(&self, target: &Arc<LocalField>, g: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Self::new(target, self.start, self.coeffs.iter().map(g).collect(), self.cap)
    }

    /// The same series in a field with another working precision.
    pub fn rebase(&self, k: &Arc<LocalField>) -> Self {
        LaurentSeries { k: k.clone(), start: self.start, coeffs: self.coeffs.clone(), cap: self.cap }
    }

    pub fn render(&self) -> String {
        let f = self.k.residue();
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let cs = f.render(c);
            let cs = if cs.contains(" + ") && !cs.starts_with('(') { format!("({cs})") } else { cs };
            let mono = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            parts.push(match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs,
                ("1", false) => mono,
                (_, false) => format!("{cs}*{mono}"),
            });
        }
        if let Some(c) = self.cap {
            parts.push(format!("O(t^{c})"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_arith::finite::FiniteField;

    fn k(p: u32) -> Arc<LocalField> {
        LocalField::new(ResidueField::prime(p).unwrap(), 64)
    }

    #[test]
    fn cancellation_is_exact() {
        let k = k(3);
        let t = LaurentSeries::t(&k);
        let t_inv = t.inv().unwrap();
        let a = t_inv.add(&LaurentSeries::one(&k));
        let s = a.add(&t_inv.neg());
        assert_eq!(s, LaurentSeries::one(&k));
        assert_eq!(t.mul(&t_inv), LaurentSeries::one(&k));
    }

    #[test]
    fn geometric_series_with_cap() {
        let k = k(5);
        let one_plus_t = LaurentSeries::one(&k).add(&LaurentSeries::t(&k)).truncate(4);
        let inv = one_plus_t.inv().unwrap();
        assert_eq!(inv.render(), "1 + 4*t + t^2 + 4*t^3 + O(t^4)");
        let back = inv.mul(&one_plus_t);
        assert_eq!(back.sub(&LaurentSeries::one(&k)).lower_bound(), 4);
    }

    #[test]
    fn zero_to_precision_has_no_valuation() {
        let k = k(2);
        let a = LaurentSeries::t(&k).truncate(3);
        let z = a.sub(&a);
        assert!(z.valuation().unwrap_err().is_precision());
        assert_eq!(LaurentSeries::zero(&k).valuation().unwrap(), INF);
    }

    #[test]
    fn derivatives_in_characteristic_two() {
        let f = ResidueField::new(FiniteField::prime(2).unwrap(), "a", vec!["u".into()]).unwrap();
        let k = LocalField::new(f.clone(), 32);
        let a = LaurentSeries::monomial(&k, f.var(0), -2);
        assert!(a.derivative_t().is_exact_zero());
        assert_eq!(a.derivative_u(0), LaurentSeries::monomial(&k, f.one(), -2));
    }
}
