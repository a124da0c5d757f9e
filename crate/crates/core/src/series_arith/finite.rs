//! The finite field F_q = F_p[x]/(m(x)).
//!
//! Elements are encoded as integers in `0..q`: the base-p digits are the
//! coefficients of the residue polynomial, lowest degree first. Multiplication
//! goes through exp/log tables for a primitive element found at construction.

use crate::error::{Error, Result};

/// Largest field size accepted; keeps the log tables small.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of F_q in base-p digit encoding.
pub type Fq = u32;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    degree: u32,
    q: u32,
    /// Monic modulus, lowest coefficient first, length `degree + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p, lowest coefficient first, used only while
// building and validating the field.
fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lc = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = (r[k] as u64 * inv_lc as u64 % p as u64) as u32;
        let shift = k - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    a = r as u32;
    a
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let mut f = poly.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u32; d + 1];
            let mut x = idx;
            for c in g.iter_mut().take(d) {
                *c = (x % p as u64) as u32;
                x /= p as u64;
            }
            g[d] = 1;
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of the
/// given degree, lowest coefficient first.
pub fn default_modulus(p: u32, degree: u32) -> Vec<u32> {
    if degree == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(degree);
    for idx in 0..count {
        let mut g = vec![0u32; degree as usize + 1];
        let mut x = idx;
        for c in g.iter_mut().take(degree as usize) {
            *c = (x % p as u64) as u32;
            x /= p as u64;
        }
        g[degree as usize] = 1;
        if g[0] != 0 && is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// Builds F_p[x]/(modulus). The modulus is given lowest coefficient first
    /// and is made monic.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        let mut m: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        trim(&mut m);
        if m.len() < 2 {
            return Err(Error::Field("modulus must have degree at least 1".into()));
        }
        let lc_inv = inv_mod(*m.last().unwrap(), p);
        for c in m.iter_mut() {
            *c = (*c as u64 * lc_inv as u64 % p as u64) as u32;
        }
        let degree = (m.len() - 1) as u32;
        let q64 = (p as u64).pow(degree);
        if q64 > MAX_FIELD_SIZE {
            return Err(Error::Field(format!("field of size {q64} is too large")));
        }
        if !is_irreducible(&m, p) {
            return Err(Error::NotIrreducible(format!("{m:?} over F_{p}")));
        }
        let q = q64 as u32;
        let mut field = FiniteField { p, degree, q, modulus: m, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    fn decode(&self, a: Fq) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.degree as usize);
        let mut x = a;
        for _ in 0..self.degree {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    fn encode(&self, v: &[u32]) -> Fq {
        v.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn slow_mul(&self, a: Fq, b: Fq) -> Fq {
        let (x, y) = (self.decode(a), self.decode(b));
        let mut prod = vec![0u32; x.len() + y.len()];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + xi as u64 * yj as u64) % self.p as u64) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.degree as usize, 0);
        self.encode(&r)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let one: Fq = 1;
        if order == 1 {
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return;
        }
        let mut g = 2u32.min(self.q - 1);
        'search: loop {
            let mut x = g;
            let mut k = 1u32;
            while x != one {
                x = self.slow_mul(x, g);
                k += 1;
                if k > order {
                    break;
                }
            }
            if k == order {
                break 'search;
            }
            g += 1;
        }
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = one;
        for i in 0..order {
            exp[i as usize] = x;
            log[x as usize] = i;
            x = self.slow_mul(x, g);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of x in F_p[x]/(m).
    pub fn generator(&self) -> Fq {
        if self.degree == 1 {
            // x = -m_0 in F_p
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return a ^ b;
        }
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut x, mut y, mut r, mut place) = (a, b, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            r += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        if self.degree == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let (mut x, mut r, mut place) = (a, 0u32, 1u32);
        while x > 0 {
            let d = (self.p - x % self.p) % self.p;
            r += d * place;
            place *= self.p;
            x /= self.p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Panics on zero; callers check first.
    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(a != 0, "inverse of zero in F_q");
        let order = self.q - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// Unique p-th root (Frobenius is bijective on F_q).
    pub fn pth_root(&self, a: Fq) -> Fq {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// All solutions of y^k = a in F_q.
    pub fn nth_roots(&self, a: Fq, k: u64) -> Vec<Fq> {
        if a == 0 {
            return vec![0];
        }
        (1..self.q).filter(|&y| self.pow(y, k) == a).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q
    }

    /// F_p-coordinates of an element.
    pub fn coordinates(&self, a: Fq) -> Vec<u32> {
        self.decode(a)
    }

    pub fn from_coordinates(&self, v: &[u32]) -> Fq {
        let mut w = v.to_vec();
        w.resize(self.degree as usize, 0);
        self.encode(&w)
    }

    /// Evaluates a polynomial with F_p coefficients (lowest first) at `x`.
    pub fn eval_fp_poly(&self, poly: &[u32], x: Fq) -> Fq {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), self.from_int(c as i64)))
    }

    /// Image of the generator under some embedding into `target`: the
    /// smallest root of the modulus there.
    pub fn embedding_into(&self, target: &FiniteField) -> Option<Fq> {
        if target.p != self.p || !target.degree.is_multiple_of(self.degree) {
            return None;
        }
        target.elements().find(|&x| target.eval_fp_poly(&self.modulus, x) == 0)
    }

    /// Maps `a` into `target`, sending the generator to `gen_image`.
    pub fn embed(&self, target: &FiniteField, gen_image: Fq, a: Fq) -> Fq {
        let digits = self.decode(a);
        digits.iter().rev().fold(0, |acc, &d| target.add(target.mul(acc, gen_image), d))
    }

    /// Renders an element as a polynomial in the generator name.
    pub fn render(&self, a: Fq, gen: &str) -> String {
        if self.degree == 1 {
            return a.to_string();
        }
        let digits = self.decode(a);
        let mut parts = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => gen.to_string(),
                _ => format!("{gen}^{i}"),
            };
            parts.push(match (d, mono.is_empty()) {
                (_, true) => d.to_string(),
                (1, false) => mono,
                (_, false) => format!("{d}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            format!("({})", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        let f = FiniteField::new(2, default_modulus(2, 2)).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.generator();
        // w^2 = w + 1
        assert_eq!(f.mul(w, w), f.add(w, 1));
        assert_eq!(f.pow(w, 3), 1);
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn f9_field_axioms() {
        let f = FiniteField::new(3, default_modulus(3, 2)).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.pow(f.pth_root(a), 3), a);
            for b in f.elements() {
                for c in f.elements() {
                    let lhs = f.mul(a, f.add(b, c));
                    let rhs = f.add(f.mul(a, b), f.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(matches!(FiniteField::new(2, vec![1, 0, 1]), Err(Error::NotIrreducible(_))));
        assert!(FiniteField::new(4, vec![0, 1]).is_err());
    }

    #[test]
    fn cube_roots_of_unity_in_f4() {
        let f = FiniteField::new(2, default_modulus(2, 2)).unwrap();
        assert_eq!(f.nth_roots(1, 3).len(), 3);
    }
}
