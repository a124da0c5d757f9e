//! Totally ramified extensions L = K[X]/(f) with f Eisenstein, and their
//! elements in the power basis of the root alpha.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::series_arith::{FieldElement, LaurentSeries, LocalField, NewtonPoint, PolyOverK, ResidueField, INF};

pub struct ExtField {
    k: Arc<LocalField>,
    /// Monic Eisenstein polynomial, lowest coefficient first.
    f: PolyOverK,
    n: usize,
    /// Residue of t / alpha^n.
    t_over_alpha_n: FieldElement,
    alpha_inv: Vec<LaurentSeries>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtField({})", self.render_poly("X"))
    }
}

impl ExtField {
    /// Builds L from the coefficients c_0, ..., c_{n-1} of a monic
    /// Eisenstein polynomial X^n + c_{n-1} X^{n-1} + ... + c_0.
    pub fn eisenstein(k: &Arc<LocalField>, lower: Vec<LaurentSeries>) -> Result<Arc<Self>> {
        let n = lower.len();
        if n == 0 {
            return Err(Error::NotEisenstein("degree 0".into()));
        }
        for (i, c) in lower.iter().enumerate() {
            let v = c.lower_bound();
            if v < 1 {
                return Err(Error::NotEisenstein(format!("coefficient of X^{i} has valuation {v} < 1")));
            }
        }
        let c0 = &lower[0];
        match c0.valuation() {
            Ok(1) => {}
            Ok(v) if v < INF => return Err(Error::NotEisenstein(format!("constant term has valuation {v}"))),
            Ok(_) => return Err(Error::NotEisenstein("constant term is zero".into())),
            Err(e) => return Err(e),
        }
        let res = k.residue();
        let (_, eps) = c0.leading()?;
        let t_over_alpha_n = res.neg(&res.inv(&eps)?);
        // alpha^{-1} = -(alpha^{n-1} + c_{n-1} alpha^{n-2} + ... + c_1) / c_0
        let c0_inv = c0.inv()?.neg();
        let mut alpha_inv = Vec::with_capacity(n);
        for j in 0..n {
            let c = if j + 1 < n { lower[j + 1].clone() } else { LaurentSeries::one(k) };
            alpha_inv.push(c.mul(&c0_inv));
        }
        let mut coeffs = lower;
        coeffs.push(LaurentSeries::one(k));
        Ok(Arc::new(ExtField { k: k.clone(), f: PolyOverK::new(coeffs), n, t_over_alpha_n, alpha_inv }))
    }

    /// K itself, presented as K[X]/(X - t).
    pub fn base(k: &Arc<LocalField>) -> Arc<Self> {
        Self::eisenstein(k, vec![LaurentSeries::t(k).neg()]).expect("X - t is Eisenstein")
    }

    pub fn base_field(&self) -> &Arc<LocalField> {
        &self.k
    }

    pub fn residue(&self) -> &ResidueField {
        self.k.residue()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Ramification index; equal to the degree for an Eisenstein extension.
    pub fn ramification_index(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &PolyOverK {
        &self.f
    }

    /// f(0), the norm of -alpha up to sign.
    pub fn constant_term(&self) -> &LaurentSeries {
        &self.f.coeffs[0]
    }

    /// The residue of t / alpha^n.
    pub fn t_over_alpha_n(&self) -> &FieldElement {
        &self.t_over_alpha_n
    }

    /// The extension obtained by mapping every coefficient of f through a
    /// residue field map into `k2`.
    pub fn map_coefficients(&self, k2: &Arc<LocalField>, g: &dyn Fn(&FieldElement) -> FieldElement) -> Result<Arc<Self>> {
        let lower = self.f.coeffs[..self.n].iter().map(|c| c.map_coeffs(k2, g)).collect();
        Self::eisenstein(k2, lower)
    }

    pub fn render_poly(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.f.coeffs.iter().enumerate().rev() {
            if c.is_exact_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = c.render();
            parts.push(match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs,
                ("1", false) => mono,
                (_, false) if cs.contains(" + ") => format!("({cs})*{mono}"),
                (_, false) => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

#[derive(Clone)]
pub struct ExtElement {
    l: Arc<ExtField>,
    c: Vec<LaurentSeries>,
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_exact_zero())
            .map(|(j, a)| match j {
                0 => format!("({a})"),
                1 => format!("({a})*X"),
                _ => format!("({a})*X^{j}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl ExtElement {
    pub fn from_coords(l: &Arc<ExtField>, c: Vec<LaurentSeries>) -> Self {
        assert_eq!(c.len(), l.n, "coordinate count must equal the degree");
        ExtElement { l: l.clone(), c }
    }

    pub fn zero(l: &Arc<ExtField>) -> Self {
        Self::from_base(l, LaurentSeries::zero(&l.k))
    }

    pub fn one(l: &Arc<ExtField>) -> Self {
        Self::from_base(l, LaurentSeries::one(&l.k))
    }

    pub fn from_base(l: &Arc<ExtField>, a: LaurentSeries) -> Self {
        let mut c = vec![LaurentSeries::zero(&l.k); l.n];
        c[0] = a;
        ExtElement { l: l.clone(), c }
    }

    pub fn from_residue(l: &Arc<ExtField>, a: FieldElement) -> Self {
        Self::from_base(l, LaurentSeries::constant(&l.k, a))
    }

    /// The root alpha of f.
    pub fn alpha(l: &Arc<ExtField>) -> Self {
        if l.n == 1 {
            return Self::from_base(l, l.f.coeffs[0].neg());
        }
        let mut c = vec![LaurentSeries::zero(&l.k); l.n];
        c[1] = LaurentSeries::one(&l.k);
        ExtElement { l: l.clone(), c }
    }

    pub fn alpha_inv(l: &Arc<ExtField>) -> Self {
        ExtElement { l: l.clone(), c: l.alpha_inv.clone() }
    }

    /// alpha^e for any integer e.
    pub fn alpha_pow(l: &Arc<ExtField>, e: i64) -> Self {
        if e >= 0 {
            Self::alpha(l).pow(e as u64)
        } else {
            Self::alpha_inv(l).pow((-e) as u64)
        }
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.l
    }

    pub fn coords(&self) -> &[LaurentSeries] {
        &self.c
    }

    pub fn add(&self, o: &Self) -> Self {
        ExtElement { l: self.l.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ExtElement { l: self.l.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        ExtElement { l: self.l.clone(), c: self.c.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale_base(&self, s: &LaurentSeries) -> Self {
        ExtElement { l: self.l.clone(), c: self.c.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        ExtElement { l: self.l.clone(), c: self.c.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.l.n;
        let k = &self.l.k;
        let mut prod = vec![LaurentSeries::zero(k); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        reduce_mod(&mut prod, &self.l.f.coeffs, n);
        prod.truncate(n);
        ExtElement { l: self.l.clone(), c: prod }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.l);
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

    /// Bound beyond which the element is unknown, in ord_L units; `INF` for
    /// an exact element.
    pub fn precision(&self) -> i64 {
        let n = self.l.n as i64;
        self.c
            .iter()
            .enumerate()
            .filter_map(|(j, a)| a.cap().map(|cap| n * cap + j as i64))
            .min()
            .unwrap_or(INF)
    }

    /// Smallest known term valuation, ignoring precision.
    fn known_ord(&self) -> i64 {
        let n = self.l.n as i64;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| n * a.lower_bound() + j as i64)
            .min()
            .unwrap_or(INF)
    }

    /// A lower bound for the valuation that is exact whenever the valuation
    /// is certified.
    pub fn ord_lower_bound(&self) -> i64 {
        self.known_ord().min(self.precision())
    }

    /// True when no nonzero term is known.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_exact_zero())
    }

    /// ord_L, computed as min_j (n * ord_K(a_j) + j).
    pub fn ord(&self) -> Result<i64> {
        let v = self.known_ord();
        let prec = self.precision();
        if v < prec {
            Ok(v)
        } else if prec == INF {
            Ok(INF)
        } else {
            Err(Error::precision(format!("element of L is zero modulo alpha^{prec}")))
        }
    }

    /// Valuation v and the residue of x / alpha^v.
    pub fn leading(&self) -> Result<(i64, FieldElement)> {
        let v = self.ord()?;
        if v == INF {
            return Err(Error::DivisionByZero);
        }
        let n = self.l.n as i64;
        let j = v.rem_euclid(n);
        let m = (v - j) / n;
        let (_, c) = self.c[j as usize].leading()?;
        let res = self.l.residue();
        Ok((v, res.mul(&c, &res.pow(&self.l.t_over_alpha_n, m)?)))
    }

    /// The residue class of an element of nonnegative valuation.
    pub fn residue(&self) -> Result<FieldElement> {
        let v = self.ord_lower_bound();
        if v < 0 {
            return Err(Error::Mismatch("residue of an element with a pole".into()));
        }
        if self.precision() <= 0 {
            return Err(Error::precision("residue beyond the precision cap"));
        }
        if v > 0 {
            return Ok(self.l.residue().zero());
        }
        self.c[0].residue()
    }

    fn coord_cap(&self, j: usize, bound: i64) -> i64 {
        let n = self.l.n as i64;
        (bound - j as i64).div_euclid(n) + i64::from((bound - j as i64).rem_euclid(n) != 0)
    }

    /// The exact element made of the known terms of valuation below `bound`.
    pub fn round_ord(&self, bound: i64) -> Self {
        let c = self.c.iter().enumerate().map(|(j, a)| a.round(self.coord_cap(j, bound))).collect();
        ExtElement { l: self.l.clone(), c }
    }

    /// Forgets everything at valuation `bound` and above.
    pub fn truncate_ord(&self, bound: i64) -> Self {
        let c = self.c.iter().enumerate().map(|(j, a)| a.truncate(self.coord_cap(j, bound))).collect();
        ExtElement { l: self.l.clone(), c }
    }

    /// Inverse by Newton iteration y <- y + y(1 - xy), doubling the working
    /// precision at every step.
    pub fn inv(&self) -> Result<Self> {
        let (v, lc) = self.leading()?;
        let res = self.l.residue();
        let n = self.l.n as i64;
        let rel = (self.precision().saturating_sub(v)).min(n * self.l.k.precision());
        let mut y = Self::alpha_pow(&self.l, -v).scale(&res.inv(&lc)?);
        let one = Self::one(&self.l);
        let mut acc = 1;
        while acc < rel {
            let want = (2 * acc).min(rel);
            let e = one.sub(&self.truncate_ord(v + want).mul(&y)).truncate_ord(want);
            let got = e.ord_lower_bound().min(want);
            if got < acc {
                return Err(Error::precision("inverse iteration lost precision"));
            }
            y = y.add(&y.mul(&e)).round_ord(-v + want);
            acc = (2 * got).min(want);
        }
        Ok(y.truncate_ord(-v + rel))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// The residue of self / other; both must have the same valuation.
    pub fn residue_ratio(&self, other: &Self) -> Result<FieldElement> {
        let (v1, c1) = self.leading()?;
        let (v2, c2) = other.leading()?;
        if v1 != v2 {
            return Err(Error::Mismatch(format!("valuations {v1} and {v2} differ")));
        }
        self.l.residue().div(&c1, &c2)
    }

    /// Evaluates the power-basis expression of self at another element,
    /// i.e. sum a_j y^j. For y a root of f this is the image of self under
    /// the automorphism alpha -> y.
    pub fn substitute(&self, y: &Self) -> Self {
        let mut acc = Self::zero(&self.l);
        for a in self.c.iter().rev() {
            acc = acc.mul(y).add(&Self::from_base(&self.l, a.clone()));
        }
        acc
    }

    /// The K-value of an element lying in K.
    pub fn to_base(&self) -> Result<LaurentSeries> {
        for (j, a) in self.c.iter().enumerate().skip(1) {
            if !a.is_zero() {
                return Err(Error::NotInBase(format!("coordinate {j} is {a}")));
            }
        }
        let mut base = self.c[0].clone();
        let prec = self.precision();
        if prec < INF {
            let n = self.l.n as i64;
            base = base.truncate(prec.div_euclid(n) + i64::from(prec.rem_euclid(n) != 0));
        }
        Ok(base)
    }

    /// Maps the coordinates through a residue field map; `l2` must be the
    /// correspondingly mapped extension.
    pub fn map_coefficients(&self, l2: &Arc<ExtField>, g: &dyn Fn(&FieldElement) -> FieldElement) -> Self {
        let k2 = l2.base_field();
        ExtElement { l: l2.clone(), c: self.c.iter().map(|a| a.map_coeffs(k2, g)).collect() }
    }

    pub fn newton_point(&self) -> NewtonPoint {
        if self.is_exact_zero() {
            NewtonPoint::Absent
        } else if self.is_zero() {
            NewtonPoint::AtLeast(self.precision())
        } else {
            match self.ord() {
                Ok(v) => NewtonPoint::Known(v),
                Err(_) => NewtonPoint::AtLeast(self.precision()),
            }
        }
    }
}

/// Reduces a coefficient vector modulo the monic polynomial `f` of degree
/// `n` in place; only the first `n` entries are meaningful afterwards.
pub(crate) fn reduce_mod(prod: &mut [LaurentSeries], f: &[LaurentSeries], n: usize) {
    for d in (n..prod.len()).rev() {
        let h = prod[d].clone();
        if h.is_exact_zero() {
            continue;
        }
        for j in 0..n {
            if f[j].is_exact_zero() {
                continue;
            }
            prod[d - n + j] = prod[d - n + j].sub(&h.mul(&f[j]));
        }
        prod[d] = LaurentSeries::zero(h.field());
    }
}

/// f'(alpha) computed from the coefficients of f.
pub fn derivative_at_alpha(l: &Arc<ExtField>) -> ExtElement {
    let k = l.base_field();
    let n = l.degree();
    let mut c = vec![LaurentSeries::zero(k); n];
    for (j, cj) in l.poly().coeffs.iter().enumerate().skip(1) {
        let jj = LaurentSeries::from_int(k, j as i64);
        if n == 1 {
            c[0] = c[0].add(&cj.mul(&jj));
        } else {
            c[j - 1] = c[j - 1].add(&cj.mul(&jj));
        }
    }
    ExtElement::from_coords(l, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_quadratic() -> Arc<ExtField> {
        // X^2 + tX + t over F_2((t))
        let k = LocalField::new(ResidueField::prime(2).unwrap(), 32);
        let t = LaurentSeries::t(&k);
        ExtField::eisenstein(&k, vec![t.clone(), t]).unwrap()
    }

    #[test]
    fn rejects_non_eisenstein() {
        let k = LocalField::new(ResidueField::prime(2).unwrap(), 32);
        let t = LaurentSeries::t(&k);
        assert!(ExtField::eisenstein(&k, vec![t.mul(&t), t.clone()]).is_err());
        assert!(ExtField::eisenstein(&k, vec![t.clone(), LaurentSeries::one(&k)]).is_err());
    }

    #[test]
    fn valuations_and_inverse() {
        let l = as_quadratic();
        let a = ExtElement::alpha(&l);
        assert_eq!(a.ord().unwrap(), 1);
        let a_inv = ExtElement::alpha_inv(&l);
        assert_eq!(a.mul(&a_inv).sub(&ExtElement::one(&l)).ord().unwrap(), INF);
        let t = ExtElement::from_base(&l, LaurentSeries::t(l.base_field()));
        assert_eq!(t.ord().unwrap(), 2);
        let u = ExtElement::one(&l).add(&a);
        let u_inv = u.inv().unwrap();
        assert!(u.mul(&u_inv).sub(&ExtElement::one(&l)).is_zero());
    }

    #[test]
    fn conjugate_root_substitution() {
        let l = as_quadratic();
        let a = ExtElement::alpha(&l);
        let t = ExtElement::from_base(&l, LaurentSeries::t(l.base_field()));
        let b = a.add(&t);
        // f(alpha + t) = 0
        let fb = b.mul(&b).add(&t.mul(&b)).add(&t);
        assert!(fb.is_exact_zero());
        assert_eq!(derivative_at_alpha(&l).ord().unwrap(), 2);
    }
}
