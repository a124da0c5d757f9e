//! K[x_1, ..., x_s] / (x_i^p - x_i - a_i), stored as p^s coordinates in the
//! monomial basis x^e with 0 <= e_i < p.

use std::sync::Arc;

use crate::series_arith::{LaurentSeries, LocalField};

#[derive(Clone, Debug)]
pub struct ASAlgebra {
    k: Arc<LocalField>,
    p: usize,
    gens: Vec<LaurentSeries>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASElement {
    pub coords: Vec<LaurentSeries>,
}

fn binomial_mod(n: usize, k: usize, p: usize) -> i64 {
    let mut c = 1u64;
    for i in 0..k {
        c = c * (n - i) as u64 / (i + 1) as u64;
    }
    (c % p as u64) as i64
}

impl ASAlgebra {
    pub fn new(k: &Arc<LocalField>, gens: Vec<LaurentSeries>) -> Self {
        ASAlgebra { k: k.clone(), p: k.characteristic() as usize, gens }
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.k
    }

    pub fn generators(&self) -> &[LaurentSeries] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.p.pow(self.gens.len() as u32)
    }

    fn digits(&self, mut idx: usize) -> Vec<usize> {
        (0..self.gens.len())
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn zero(&self) -> ASElement {
        ASElement { coords: vec![LaurentSeries::zero(&self.k); self.dim()] }
    }

    pub fn from_base(&self, a: LaurentSeries) -> ASElement {
        let mut z = self.zero();
        z.coords[0] = a;
        z
    }

    pub fn one(&self) -> ASElement {
        self.from_base(LaurentSeries::one(&self.k))
    }

    pub fn gen(&self, i: usize) -> ASElement {
        let mut z = self.zero();
        let mut d = vec![0; self.gens.len()];
        d[i] = 1;
        z.coords[self.index(&d)] = LaurentSeries::one(&self.k);
        z
    }

    /// c * x^e.
    pub fn monomial(&self, c: LaurentSeries, exps: &[usize]) -> ASElement {
        let mut z = self.zero();
        z.coords[self.index(exps)] = c;
        z
    }

    /// Embeds an element of the algebra on the first generators.
    pub fn embed(&self, sub: &ASAlgebra, a: &ASElement) -> ASElement {
        let mut z = self.zero();
        for (idx, c) in a.coords.iter().enumerate() {
            let mut d = sub.digits(idx);
            d.resize(self.gens.len(), 0);
            z.coords[self.index(&d)] = c.clone();
        }
        z
    }

    pub fn add(&self, a: &ASElement, b: &ASElement) -> ASElement {
        ASElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, a: &ASElement, b: &ASElement) -> ASElement {
        ASElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn neg(&self, a: &ASElement) -> ASElement {
        ASElement { coords: a.coords.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale_base(&self, a: &ASElement, s: &LaurentSeries) -> ASElement {
        ASElement { coords: a.coords.iter().map(|x| x.mul(s)).collect() }
    }

    pub fn mul(&self, a: &ASElement, b: &ASElement) -> ASElement {
        let mut out = self.zero();
        for (i, ca) in a.coords.iter().enumerate() {
            if ca.is_exact_zero() {
                continue;
            }
            let di = self.digits(i);
            for (j, cb) in b.coords.iter().enumerate() {
                if cb.is_exact_zero() {
                    continue;
                }
                let dj = self.digits(j);
                let mut terms: Vec<(Vec<usize>, LaurentSeries)> = vec![(Vec::new(), ca.mul(cb))];
                for (v, (x, y)) in di.iter().zip(&dj).enumerate() {
                    let e = x + y;
                    let mut next = Vec::with_capacity(terms.len() * 2);
                    for (d, c) in terms {
                        if e < self.p {
                            next.push(([d.as_slice(), &[e]].concat(), c));
                        } else {
                            // x^e = x^{e-p+1} + a x^{e-p}
                            next.push(([d.as_slice(), &[e - self.p + 1]].concat(), c.clone()));
                            next.push(([d.as_slice(), &[e - self.p]].concat(), c.mul(&self.gens[v])));
                        }
                    }
                    terms = next;
                }
                for (d, c) in terms {
                    let idx = self.index(&d);
                    out.coords[idx] = out.coords[idx].add(&c);
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &ASElement, mut e: u64) -> ASElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The automorphism x_i -> x_i + c_i.
    pub fn shift(&self, a: &ASElement, c: &[i64]) -> ASElement {
        let res = self.k.residue();
        let mut out = self.zero();
        for (idx, coef) in a.coords.iter().enumerate() {
            if coef.is_exact_zero() {
                continue;
            }
            let d = self.digits(idx);
            // prod_i (x_i + c_i)^{d_i} without any reduction, since d_i < p
            let mut terms: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 1)];
            for (v, &e) in d.iter().enumerate() {
                let mut next = Vec::new();
                for (dd, m) in &terms {
                    for kk in 0..=e {
                        let w = binomial_mod(e, kk, self.p) * c[v].rem_euclid(self.p as i64).pow((e - kk) as u32);
                        if w % self.p as i64 != 0 {
                            next.push(([dd.as_slice(), &[kk]].concat(), m * w % self.p as i64));
                        }
                    }
                }
                terms = next;
            }
            for (dd, m) in terms {
                let i2 = self.index(&dd);
                out.coords[i2] = out.coords[i2].add(&coef.scale(&res.from_int(m)));
            }
        }
        out
    }

    /// Every shift vector in F_p^s, ordered like the coordinates.
    pub fn shifts(&self) -> Vec<Vec<i64>> {
        (0..self.dim()).map(|i| self.digits(i).into_iter().map(|d| d as i64).collect()).collect()
    }

    /// The base-field component, provided every other coordinate vanishes.
    pub fn to_base(&self, a: &ASElement) -> Option<LaurentSeries> {
        a.coords[1..].iter().all(|c| c.is_zero()).then(|| a.coords[0].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_arith::ResidueField;

    #[test]
    fn generator_relation() {
        let k = LocalField::new(ResidueField::prime(3).unwrap(), 32);
        let a = LaurentSeries::t(&k).pow_i64(-2).unwrap();
        let alg = ASAlgebra::new(&k, vec![a.clone()]);
        let x = alg.gen(0);
        let lhs = alg.sub(&alg.pow(&x, 3), &x);
        assert_eq!(lhs, alg.from_base(a));
        let sx = alg.shift(&x, &[2]);
        assert_eq!(sx, alg.add(&x, &alg.from_base(LaurentSeries::from_int(&k, 2))));
        let x2 = alg.mul(&x, &x);
        let s1 = alg.shift(&x, &[1]);
        assert_eq!(alg.shift(&x2, &[1]), alg.mul(&s1, &s1));
    }
}
