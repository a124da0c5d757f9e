//! Eisenstein polynomials for Artin-Schreier extensions and for the
//! compositum of two of them.

use std::sync::Arc;

use super::algebra::{ASAlgebra, ASElement};
use super::{reduce_best_form, Kind};
use crate::error::{Error, Result};
use crate::extensions::ExtField;
use crate::series_arith::{FieldElement, LaurentSeries, LocalField, INF};

/// The smallest (a, b) with a, b >= 0 and -n a + p b = 1.
pub fn uniformizer_exponents(n: i64, p: i64) -> (i64, i64) {
    let a = (0..p).find(|a| (1 + n * a) % p == 0).expect("p does not divide n");
    (a, (1 + n * a) / p)
}

#[derive(Clone, Debug)]
pub struct ASExtension {
    pub algebra: ASAlgebra,
    /// Best forms of the generators as used in the algebra.
    pub reduced: Vec<LaurentSeries>,
    /// Pole orders driving each uniformizer step, measured in the field
    /// generated by the previous generators.
    pub poles: Vec<i64>,
    pub exponents: Vec<(i64, i64)>,
    pub uniformizer: ASElement,
    pub field: Arc<ExtField>,
}

/// min_j (p ord b_j - n j) and the index attaining it, for the algebra on
/// one generator of pole order n.
fn ord_one(p: i64, n: i64, a: &ASElement) -> Result<(i64, usize)> {
    let mut best: Option<(i64, usize)> = None;
    let mut bound = INF;
    for (j, b) in a.coords.iter().enumerate() {
        if let Some(cap) = b.cap() {
            bound = bound.min(p.saturating_mul(cap).saturating_sub(n * j as i64));
        }
        if b.is_zero() {
            continue;
        }
        let w = p * b.lower_bound() - n * j as i64;
        if best.is_none_or(|(bw, _)| w < bw) {
            best = Some((w, j));
        }
    }
    match best {
        Some((w, j)) if w < bound => Ok((w, j)),
        _ => Err(Error::precision("element vanishes to the working precision")),
    }
}

/// Rewrites a2 as a2 - (D^p - D) with D in K[x], until its valuation in
/// K[x]/(x^p - x - a1) is prime to p.
fn reduce_over_first(alg1: &ASAlgebra, n1: i64, a2: &LaurentSeries) -> Result<(ASElement, i64)> {
    let k = alg1.field();
    let res = k.residue();
    let p = k.characteristic() as i64;
    let a1_lc = alg1.generators()[0].leading()?.1;
    let mut rest = alg1.from_base(a2.clone());
    let mut d = alg1.zero();
    loop {
        let (w, j) = ord_one(p, n1, &rest)?;
        if w >= 0 {
            return Err(Error::UnramifiedCharacter);
        }
        if j != 0 {
            return Ok((d, -w));
        }
        let m = w / p;
        let beta = rest.coords[0].leading()?.1;
        let jp = (0..p).find(|jp| (m + n1 * jp).rem_euclid(p) == 0).expect("n1 is prime to p");
        let o = (m + n1 * jp) / p;
        let target = res.div(&beta, &res.pow(&a1_lc, jp)?)?;
        let gamma = res.pth_root(&target).ok_or(Error::FierceCharacter)?;
        let dk = alg1.monomial(LaurentSeries::monomial(k, gamma, o), &[jp as usize]);
        let wp = alg1.sub(&alg1.pow(&dk, p as u64), &dk);
        rest = alg1.sub(&rest, &wp);
        d = alg1.add(&d, &dk);
    }
}

fn reduced_generator(a: &LaurentSeries) -> Result<(LaurentSeries, i64)> {
    let bf = reduce_best_form(a)?;
    match bf.kind {
        Kind::Unramified => Err(Error::UnramifiedCharacter),
        Kind::Fierce => Err(Error::FierceCharacter),
        Kind::NonFierce => Ok((bf.a_red, bf.n)),
    }
}

/// The totally ramified extension of K generated by the roots of
/// x_i^p - x_i = a_i, presented by the minimal polynomial of a uniformizer.
pub fn artin_schreier_extension(k: &Arc<LocalField>, gens: &[LaurentSeries]) -> Result<ASExtension> {
    let p = k.characteristic() as i64;
    if gens.is_empty() || gens.len() > 2 {
        return Err(Error::Config("an Artin-Schreier recipe takes one or two generators".into()));
    }
    let (a1, n1) = reduced_generator(&gens[0])?;
    let alg1 = ASAlgebra::new(k, vec![a1.clone()]);
    let (ea1, eb1) = uniformizer_exponents(n1, p);
    let t = LaurentSeries::t(k);
    let lambda1 = alg1.scale_base(&alg1.pow(&alg1.gen(0), ea1 as u64), &t.pow(eb1 as u64));
    let (algebra, reduced, poles, exponents, uniformizer) = if gens.len() == 1 {
        (alg1, vec![a1], vec![n1], vec![(ea1, eb1)], lambda1)
    } else {
        let a2 = gens[1].clone();
        let (d, n2) = reduce_over_first(&alg1, n1, &a2)?;
        let alg = ASAlgebra::new(k, vec![a1.clone(), a2.clone()]);
        let y_red = alg.sub(&alg.gen(1), &alg.embed(&alg1, &d));
        let (ea2, eb2) = uniformizer_exponents(n2, p);
        let lambda = alg.mul(&alg.pow(&y_red, ea2 as u64), &alg.pow(&alg.embed(&alg1, &lambda1), eb2 as u64));
        (alg, vec![a1, a2], vec![n1, n2], vec![(ea1, eb1), (ea2, eb2)], lambda)
    };
    let lower = minimal_polynomial(&algebra, &uniformizer)?;
    let field = ExtField::eisenstein(k, lower)?;
    Ok(ASExtension { algebra, reduced, poles, exponents, uniformizer, field })
}

/// prod over all shifts (T - sigma(z)), returned as its lower coefficients
/// in K.
pub fn minimal_polynomial(alg: &ASAlgebra, z: &ASElement) -> Result<Vec<LaurentSeries>> {
    let mut poly: Vec<ASElement> = vec![alg.one()];
    for c in alg.shifts() {
        let root = alg.shift(z, &c);
        let mut next = vec![alg.zero(); poly.len() + 1];
        for (i, coef) in poly.iter().enumerate() {
            next[i + 1] = alg.add(&next[i + 1], coef);
            next[i] = alg.sub(&next[i], &alg.mul(coef, &root));
        }
        poly = next;
    }
    poly.pop();
    poly.iter()
        .enumerate()
        .map(|(i, c)| alg.to_base(c).ok_or_else(|| Error::Mismatch(format!("coefficient of T^{i} is not in K"))))
        .collect()
}

impl ASExtension {
    /// For a single generator: the shift c in F_p with sigma(x) = x + c for
    /// the automorphism sending alpha to `root`, read off from
    /// alpha_s - alpha ~ c * ea * a_lc^{-eb} * alpha^{n+1}.
    pub fn shift_of_root(&self, alpha: &crate::extensions::ExtElement, root: &crate::extensions::ExtElement) -> Result<i64> {
        let res = self.field.residue();
        let p = res.characteristic() as i64;
        let (ea, eb) = self.exponents[0];
        let n = self.poles[0];
        let diff = root.sub(alpha);
        if diff.is_exact_zero() {
            return Ok(0);
        }
        let (v, lres) = diff.leading()?;
        if v != n + 1 {
            return Err(Error::Mismatch(format!("conjugate at distance {v}, expected {}", n + 1)));
        }
        let a_lc = self.reduced[0].leading()?.1;
        let unit = res.mul(&res.from_int(ea), &res.pow(&a_lc, -eb)?);
        let c: FieldElement = res.div(&lres, &unit)?;
        (0..p)
            .find(|&m| res.from_int(m) == c)
            .ok_or_else(|| Error::Mismatch(format!("shift {} is not in F_p", res.render(&c))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramification::analyze;
    use crate::series_arith::ResidueField;
    use num_rational::Ratio;

    fn inv_t(k: &Arc<LocalField>, n: i64) -> LaurentSeries {
        LaurentSeries::monomial(k, k.residue().one(), -n)
    }

    #[test]
    fn exponents() {
        assert_eq!(uniformizer_exponents(1, 2), (1, 1));
        assert_eq!(uniformizer_exponents(3, 2), (1, 2));
        assert_eq!(uniformizer_exponents(1, 3), (2, 1));
        assert_eq!(uniformizer_exponents(2, 3), (1, 1));
    }

    #[test]
    fn quadratic_t_inverse() {
        let k = LocalField::new(ResidueField::prime(2).unwrap(), 48);
        let ext = artin_schreier_extension(&k, &[inv_t(&k, 1)]).unwrap();
        // lambda = x t has minimal polynomial T^2 + t T + t
        assert_eq!(ext.field.render_poly("T"), "T^2 + t*T + t");
        let rep = analyze(&ext.field).unwrap();
        assert_eq!(rep.largest.as_ref().unwrap().r, Ratio::from_integer(2));
    }

    #[test]
    fn klein_four_breaks() {
        let k = LocalField::new(ResidueField::prime(2).unwrap(), 64);
        let ext = artin_schreier_extension(&k, &[inv_t(&k, 1), inv_t(&k, 3)]).unwrap();
        assert_eq!(ext.poles, vec![1, 5]);
        let rep = analyze(&ext.field).unwrap();
        let lower: Vec<_> = rep.lower.indices();
        assert_eq!(lower, vec![Ratio::from_integer(1), Ratio::from_integer(5)]);
        let nonlog: Vec<_> = rep.nonlog.indices();
        assert_eq!(nonlog, vec![Ratio::from_integer(2), Ratio::from_integer(4)]);
        assert_eq!(rep.hasse_arf, Some(true));
        assert!(rep.checks_pass());
    }
}
