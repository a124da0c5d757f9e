//! Additive polynomials attached to the largest ramification break: the
//! vanishing polynomial of a finite subgroup, the map beta, the polynomial
//! induced by norm and trace on unit groups, and the extension class of a
//! character.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::extensions::{derivative_at_alpha, ExtElement, GaloisGroup};
use crate::ramification::Filtration;
use crate::series_arith::linalg::solve;
use crate::series_arith::{FieldElement, FiniteField, Fq, LaurentSeries, LocalField, ResidueField};

/// sum_j c_j X^{p^j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePolynomial {
    pub coeffs: Vec<FieldElement>,
}

impl AdditivePolynomial {
    pub fn identity(res: &ResidueField) -> Self {
        AdditivePolynomial { coeffs: vec![res.one()] }
    }

    pub fn eval(&self, res: &ResidueField, x: &FieldElement) -> FieldElement {
        let mut acc = res.zero();
        let mut pw = x.clone();
        for c in &self.coeffs {
            acc = res.add(&acc, &res.mul(c, &pw));
            pw = res.frobenius(&pw);
        }
        acc
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs.first().is_some_and(|c| c.is_one())
    }

    pub fn is_separable(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    /// Dense coefficients, index = degree.
    pub fn to_dense(&self, res: &ResidueField) -> Vec<FieldElement> {
        let p = res.characteristic() as usize;
        let deg = p.pow(self.coeffs.len().saturating_sub(1) as u32);
        let mut out = vec![res.zero(); deg + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[p.pow(j as u32)] = c.clone();
        }
        out
    }

    pub fn render(&self, res: &ResidueField) -> String {
        let p = res.characteristic() as u64;
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let deg = p.pow(j as u32);
            let mono = if deg == 1 { "X".to_string() } else { format!("X^{deg}") };
            let cs = res.render(c);
            parts.push(if cs == "1" {
                mono
            } else if cs.contains(' ') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// A greedy F_p-basis of the span of `elems`, as indices into `elems`.
pub fn fp_basis(res: &ResidueField, elems: &[FieldElement]) -> Vec<usize> {
    let p = res.characteristic() as i64;
    let mut span: BTreeSet<FieldElement> = BTreeSet::from([res.zero()]);
    let mut basis = Vec::new();
    for (idx, g) in elems.iter().enumerate() {
        if span.contains(g) {
            continue;
        }
        let mut next = BTreeSet::new();
        for s in &span {
            for c in 0..p {
                next.insert(res.add(s, &res.mul(&res.from_int(c), g)));
            }
        }
        span = next;
        basis.push(idx);
    }
    basis
}

fn check_subgroup(res: &ResidueField, elems: &[FieldElement]) -> Result<()> {
    let set: BTreeSet<&FieldElement> = elems.iter().collect();
    if !set.contains(&res.zero()) {
        return Err(Error::NotAGroup("subgroup does not contain 0".into()));
    }
    for a in elems {
        for b in elems {
            if !set.contains(&res.add(a, b)) {
                return Err(Error::NotAGroup(format!("{} + {} leaves the set", res.render(a), res.render(b))));
            }
        }
    }
    Ok(())
}

/// The unique separable additive polynomial with linear coefficient 1
/// vanishing exactly on the finite subgroup `elems`.
pub fn a1_from_subgroup(res: &ResidueField, elems: &[FieldElement]) -> Result<AdditivePolynomial> {
    check_subgroup(res, elems)?;
    let p = res.characteristic() as i64;
    let mut poly = AdditivePolynomial::identity(res);
    for idx in fp_basis(res, elems) {
        // P <- P^p - P(g)^{p-1} P, then rescale so the linear term is 1
        let v = poly.eval(res, &elems[idx]);
        let lam = res.pow(&v, p - 1)?;
        let mut next = Vec::with_capacity(poly.coeffs.len() + 1);
        for j in 0..=poly.coeffs.len() {
            let high = if j == 0 { res.zero() } else { res.frobenius(&poly.coeffs[j - 1]) };
            let low = poly.coeffs.get(j).map(|c| res.mul(&lam, c)).unwrap_or_else(|| res.zero());
            next.push(res.sub(&high, &low));
        }
        let c0_inv = res.inv(&next[0])?;
        poly = AdditivePolynomial { coeffs: next.iter().map(|c| res.mul(c, &c0_inv)).collect() };
    }
    Ok(poly)
}

/// prod_{g in G} (X - g) / prod_{g != 0} (-g), expanded densely.
pub fn vanishing_product(res: &ResidueField, elems: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let mut poly = vec![res.one()];
    let mut scale = res.one();
    for g in elems {
        let mut next = vec![res.zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = res.add(&next[i + 1], c);
            next[i] = res.sub(&next[i], &res.mul(c, g));
        }
        poly = next;
        if !g.is_zero() {
            scale = res.mul(&scale, &res.neg(g));
        }
    }
    let inv = res.inv(&scale)?;
    Ok(poly.iter().map(|c| res.mul(c, &inv)).collect())
}

/// beta(sigma) = residue of (sigma(alpha) - alpha) / (alpha_{n-1} - alpha_n)
/// on the largest-break subgroup.
#[derive(Clone, Debug)]
pub struct BetaMap {
    pub elements: Vec<usize>,
    pub values: Vec<FieldElement>,
}

impl BetaMap {
    pub fn value_of(&self, s: usize) -> Option<&FieldElement> {
        self.elements.iter().position(|&e| e == s).map(|k| &self.values[k])
    }
}

pub fn beta_map(group: &GaloisGroup, lower: &Filtration) -> Result<BetaMap> {
    let top = lower.jumps.last().ok_or(Error::TameExtension)?;
    let roots = group.roots();
    let rs = roots.roots();
    let n = rs.len();
    let alpha = roots.alpha();
    let res = roots.field().residue();
    let denom = rs[n - 2].sub(&rs[n - 1]);
    let mut values = Vec::new();
    for &s in &top.subgroup {
        if s == group.identity() {
            values.push(res.zero());
        } else {
            values.push(rs[s].sub(alpha).residue_ratio(&denom)?);
        }
    }
    let map = BetaMap { elements: top.subgroup.clone(), values };
    let distinct: BTreeSet<&FieldElement> = map.values.iter().collect();
    if distinct.len() != map.values.len() {
        return Err(Error::NotAdditive("beta is not injective".into()));
    }
    for (a, &s) in map.elements.iter().enumerate() {
        for (b, &t) in map.elements.iter().enumerate() {
            let st = group.compose(s, t);
            let expected = res.add(&map.values[a], &map.values[b]);
            if map.value_of(st) != Some(&expected) {
                return Err(Error::NotAdditive(format!("beta(s t) != beta(s) + beta(t) for roots {s}, {t}")));
            }
        }
    }
    Ok(map)
}

pub fn b1_from_beta(res: &ResidueField, beta: &BetaMap) -> Result<AdditivePolynomial> {
    a1_from_subgroup(res, &beta.values)
}

/// The single lower break i of an extension with G = G_i and G_{i+1} = 1.
pub fn single_break(group: &GaloisGroup, lower: &Filtration) -> Result<i64> {
    match lower.jumps.as_slice() {
        [j] if j.index >= Ratio::from_integer(1) && j.subgroup.len() == group.order() => Ok(j.index.to_integer()),
        _ => Err(Error::NotSingleBreak),
    }
}

/// A residue field holding enough F_p-independent sample points for a
/// Moore system with `count` unknowns, with the embedding of F into it.
struct SampleField {
    res: ResidueField,
    /// Image of the F_q generator.
    gen_image: Fq,
    samples: Vec<FieldElement>,
}

fn sample_field(res: &ResidueField, count: usize) -> Result<SampleField> {
    let fq = res.fq();
    if res.nvars() > 0 {
        let u = res.var(0);
        let samples = (0..count).map(|j| res.pow(&u, j as i64)).collect::<Result<_>>()?;
        return Ok(SampleField { res: res.clone(), gen_image: fq.generator(), samples });
    }
    let mut deg = fq.degree();
    while (deg as usize) < count {
        deg += fq.degree();
    }
    let target = if deg == fq.degree() {
        fq.clone()
    } else {
        FiniteField::new(fq.characteristic(), crate::series_arith::finite::default_modulus(fq.characteristic(), deg))?
    };
    let gen_image = fq.embedding_into(&target).ok_or_else(|| Error::Field("no embedding into the sample field".into()))?;
    let name = if deg == fq.degree() { res.generator_name().to_string() } else { format!("{}_", res.generator_name()) };
    let big = ResidueField::new(target.clone(), name, Vec::new())?;
    let g = big.from_fq(target.generator());
    let samples = (0..count).map(|j| big.pow(&g, j as i64)).collect::<Result<_>>()?;
    Ok(SampleField { res: big, gen_image, samples })
}

/// The additive polynomial P of (T^i)^{-1} o N^i on U^i_L / U^{i+1}_L,
/// in the basis given by the class of alpha_{n-1}/alpha_n on both sides.
pub fn unit_map_polynomial(group: &GaloisGroup, lower: &Filtration) -> Result<AdditivePolynomial> {
    let i = single_break(group, lower)?;
    let roots = group.roots();
    let l = roots.field();
    let res = l.residue();
    let p = res.characteristic() as usize;
    let order = group.order();
    let mut k = 0;
    while p.pow(k) < order {
        k += 1;
    }
    if p.pow(k) != order {
        return Err(Error::NotSingleBreak);
    }
    let sf = sample_field(res, k as usize + 1)?;
    let same = sf.res == *res;
    let (l2, rs2) = if same {
        (l.clone(), roots.roots().to_vec())
    } else {
        let k2 = LocalField::new(sf.res.clone(), l.base_field().precision());
        let map = |a: &FieldElement| res.transport(&sf.res, a, &[], |c| res.fq().embed(sf.res.fq(), sf.gen_image, c));
        let l2 = l.map_coefficients(&k2, &map)?;
        let rs2: Vec<ExtElement> = roots.roots().iter().map(|r| r.map_coefficients(&l2, &map)).collect();
        (l2, rs2)
    };
    let big = &sf.res;
    let n = rs2.len();
    let mu = rs2[n - 2].div(&rs2[n - 1])?.sub(&ExtElement::one(&l2));
    let conj = |x: &ExtElement| -> Vec<ExtElement> { rs2.iter().map(|r| x.substitute(r)).collect() };
    let tau = conj(&mu).iter().fold(ExtElement::zero(&l2), |acc, y| acc.add(y)).to_base()?;
    if tau.valuation()? != i {
        return Err(Error::DiagramMismatch(format!("trace of the basis has valuation {} instead of {i}", tau.lower_bound())));
    }
    let tau_inv = tau.inv()?;
    let one = LaurentSeries::one(l2.base_field());
    let mut values = Vec::new();
    for theta in &sf.samples {
        let x = ExtElement::one(&l2).add(&mu.scale(theta));
        let norm = conj(&x).iter().fold(ExtElement::one(&l2), |acc, y| acc.mul(y)).to_base()?;
        values.push(norm.sub(&one).mul(&tau_inv).residue()?);
    }
    let moore: Vec<Vec<FieldElement>> = sf
        .samples
        .iter()
        .map(|th| (0..=k).map(|j| big.pow(th, p.pow(j) as i64)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let coeffs = solve(big, &moore, &values).ok_or(Error::SingularMoore)?;
    let coeffs = if same {
        coeffs
    } else {
        coeffs
            .iter()
            .map(|c| {
                let v = c.as_const().expect("perfect sample field");
                res.fq()
                    .elements()
                    .find(|&a| res.fq().embed(big.fq(), sf.gen_image, a) == v)
                    .map(|a| res.from_fq(a))
                    .ok_or_else(|| Error::DiagramMismatch("unit map coefficient outside F".into()))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(AdditivePolynomial { coeffs })
}

#[derive(Clone, Debug)]
pub struct DiagramReport {
    pub break_index: i64,
    pub b1: AdditivePolynomial,
    pub unit_map: AdditivePolynomial,
    /// P = b1 coefficient for coefficient.
    pub right_square: bool,
    /// sigma(alpha)/alpha = 1 + beta(sigma)(alpha_{n-1}/alpha_n - 1) mod m^{i+1}.
    pub left_square: bool,
    /// b1 and P vanish on beta(G), both have linear coefficient 1.
    pub rows_exact: bool,
    /// i + ord_L(f'(alpha) alpha_n / f(0)) = e(r - 1).
    pub corollary_levels: bool,
}

impl DiagramReport {
    pub fn all_hold(&self) -> bool {
        self.right_square && self.left_square && self.rows_exact && self.corollary_levels
    }
}

/// Checks the diagrams on a single-break extension. With `mutate_b1` the
/// top coefficient of b1 is negated before comparing, to exercise the
/// failure path.
pub fn check_diagrams(group: &GaloisGroup, lower: &Filtration, mutate_b1: bool) -> Result<DiagramReport> {
    let i = single_break(group, lower)?;
    let roots = group.roots();
    let l = roots.field();
    let res = l.residue();
    let beta = beta_map(group, lower)?;
    let mut b1 = b1_from_beta(res, &beta)?;
    if mutate_b1 {
        let top = b1.coeffs.len() - 1;
        b1.coeffs[top] = res.neg(&b1.coeffs[top]);
    }
    let unit_map = unit_map_polynomial(group, lower)?;
    let right_square = unit_map == b1;
    let rs = roots.roots();
    let n = rs.len();
    let alpha = roots.alpha();
    let mu = rs[n - 2].div(&rs[n - 1])?.sub(&ExtElement::one(l));
    let mut left_square = true;
    for (k, &s) in beta.elements.iter().enumerate() {
        let lhs = rs[s].div(alpha)?.sub(&ExtElement::one(l));
        let diff = lhs.sub(&mu.scale(&beta.values[k]));
        if diff.ord_lower_bound() < i + 1 {
            left_square = false;
        }
    }
    let rows_exact = b1.is_normalized()
        && unit_map.is_normalized()
        && beta.values.iter().all(|v| b1.eval(res, v).is_zero() && unit_map.eval(res, v).is_zero());
    let e = n as i64;
    let d = derivative_at_alpha(l).ord()?;
    let r_times_e = d + roots.closest_separation();
    let basis = derivative_at_alpha(l).mul(alpha).div(&ExtElement::from_base(l, l.constant_term().clone()))?;
    let corollary_levels = i + basis.ord()? == r_times_e - e;
    Ok(DiagramReport { break_index: i, b1, unit_map, right_square, left_square, rows_exact, corollary_levels })
}

/// Every homomorphism G^r -> F_p, as values aligned with `beta.elements`.
pub fn characters_of(res: &ResidueField, beta: &BetaMap) -> Vec<Vec<i64>> {
    let p = res.characteristic() as i64;
    let basis = fp_basis(res, &beta.values);
    let k = basis.len();
    // coordinates of every beta value in the chosen basis
    let mut coords: Vec<Vec<i64>> = Vec::with_capacity(beta.values.len());
    for v in &beta.values {
        let total = p.pow(k as u32);
        let found = (0..total).find_map(|code| {
            let digits: Vec<i64> = (0..k).map(|s| (code / p.pow(s as u32)) % p).collect();
            let sum = basis
                .iter()
                .zip(&digits)
                .fold(res.zero(), |acc, (&b, &d)| res.add(&acc, &res.mul(&res.from_int(d), &beta.values[b])));
            (sum == *v).then_some(digits)
        });
        coords.push(found.expect("beta values lie in their own span"));
    }
    let mut out = Vec::new();
    for code in 0..p.pow(k as u32) {
        let w: Vec<i64> = (0..k).map(|s| (code / p.pow(s as u32)) % p).collect();
        out.push(coords.iter().map(|c| c.iter().zip(&w).map(|(a, b)| a * b).sum::<i64>().rem_euclid(p)).collect());
    }
    out
}

/// A scalar on a one-dimensional graded piece together with the basis
/// vector it is measured against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHom {
    pub level: i64,
    pub value: FieldElement,
    pub basis: String,
}

#[derive(Clone, Debug)]
pub struct Pairing {
    /// The scalar c with (U^p - U) = c * b1.
    pub scalar: FieldElement,
    pub u: AdditivePolynomial,
}

/// Pushes the extension 0 -> G^r -> G_a -> G_a -> 0 given by b1 out along
/// the character `chi`, returning the class c with U^p - U = c b1 and
/// U(beta(sigma)) = chi(sigma).
pub fn extension_pairing(res: &ResidueField, b1: &AdditivePolynomial, beta: &BetaMap, chi: &[i64]) -> Result<Pairing> {
    let p = res.characteristic() as i64;
    let k = b1.coeffs.len() - 1;
    let basis = fp_basis(res, &beta.values);
    if basis.len() != k {
        return Err(Error::NoSolution(format!("beta image has rank {} but b1 has degree p^{k}", basis.len())));
    }
    let moore: Vec<Vec<FieldElement>> = basis
        .iter()
        .map(|&b| (0..k).map(|j| res.pow(&beta.values[b], p.pow(j as u32))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let rhs: Vec<FieldElement> = basis.iter().map(|&b| res.from_int(chi[b])).collect();
    let u_coeffs = if k == 0 { Vec::new() } else { solve(res, &moore, &rhs).ok_or(Error::SingularMoore)? };
    let u = AdditivePolynomial { coeffs: u_coeffs };
    let scalar = match u.coeffs.first() {
        Some(u0) => res.neg(u0),
        None => res.zero(),
    };
    for j in 0..=k {
        let high = if j == 0 { res.zero() } else { res.frobenius(&u.coeffs[j - 1]) };
        let low = u.coeffs.get(j).cloned().unwrap_or_else(|| res.zero());
        if res.sub(&high, &low) != res.mul(&scalar, &b1.coeffs[j]) {
            return Err(Error::NoSolution(format!("U^p - U differs from c b1 in degree p^{j}")));
        }
    }
    for (v, &c) in beta.values.iter().zip(chi) {
        if u.eval(res, v) != res.from_int(c) {
            return Err(Error::NoSolution("chi is not a homomorphism on beta(G^r)".into()));
        }
    }
    Ok(Pairing { scalar, u })
}

#[derive(Clone, Debug)]
pub struct RswScalar {
    pub hom: GradedHom,
    pub u: AdditivePolynomial,
    /// The value on the class of t^{r-1}, i.e. the dt-coefficient under
    /// dt <-> t, when r is an integer.
    pub dt_coefficient: Option<FieldElement>,
    pub r: Ratio<i64>,
}

/// The pairing of `chi` measured against f'(alpha)(alpha_{n-1} - alpha_n)/f(0)
/// and against t^{r-1}.
pub fn rsw_scalar(group: &GaloisGroup, lower: &Filtration, r: Ratio<i64>, chi: &[i64]) -> Result<RswScalar> {
    let roots = group.roots();
    let l = roots.field();
    let res = l.residue();
    let beta = beta_map(group, lower)?;
    let b1 = b1_from_beta(res, &beta)?;
    let pairing = extension_pairing(res, &b1, &beta, chi)?;
    let rs = roots.roots();
    let n = rs.len();
    let pi = ExtElement::from_base(l, l.constant_term().clone());
    let w = derivative_at_alpha(l).mul(&rs[n - 2].sub(&rs[n - 1])).div(&pi)?;
    let e = n as i64;
    let level = w.ord()?;
    let er = r * e;
    if Ratio::from_integer(level) != er - e {
        return Err(Error::Mismatch(format!("basis vector has valuation {level}, expected e(r-1) = {}", er - e)));
    }
    let dt_coefficient = if r.is_integer() {
        let k: &Arc<LocalField> = l.base_field();
        let tr = ExtElement::from_base(l, LaurentSeries::t(k).pow((r.to_integer() - 1) as u64));
        Some(res.mul(&pairing.scalar, &tr.residue_ratio(&w)?))
    } else {
        None
    };
    Ok(RswScalar {
        hom: GradedHom { level, value: pairing.scalar, basis: "f'(alpha)*(alpha_{n-1} - alpha_n)/f(0)".into() },
        u: pairing.u,
        dt_coefficient,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_subgroup() {
        for p in [2u32, 3, 5] {
            let res = ResidueField::prime(p).unwrap();
            let elems: Vec<_> = (0..p as i64).map(|c| res.from_int(c)).collect();
            let a1 = a1_from_subgroup(&res, &elems).unwrap();
            assert_eq!(a1.coeffs, vec![res.one(), res.from_int(-1)]);
            let dense = vanishing_product(&res, &elems).unwrap();
            assert_eq!(dense, a1.to_dense(&res));
        }
    }

    #[test]
    fn trivial_subgroup() {
        let res = ResidueField::prime(3).unwrap();
        let a1 = a1_from_subgroup(&res, &[res.zero()]).unwrap();
        assert_eq!(a1.render(&res), "X");
    }

    #[test]
    fn rejects_non_subgroup() {
        let res = ResidueField::prime(3).unwrap();
        assert!(a1_from_subgroup(&res, &[res.zero(), res.one()]).is_err());
    }

    #[test]
    fn pairing_for_quadratic() {
        let res = ResidueField::prime(2).unwrap();
        let beta = BetaMap { elements: vec![0, 1], values: vec![res.one(), res.zero()] };
        let b1 = b1_from_beta(&res, &beta).unwrap();
        assert_eq!(b1.render(&res), "X^2 + X");
        let p = extension_pairing(&res, &b1, &beta, &[1, 0]).unwrap();
        assert_eq!(p.scalar, res.one());
        assert_eq!(p.u.render(&res), "X");
        let z = extension_pairing(&res, &b1, &beta, &[0, 0]).unwrap();
        assert!(z.scalar.is_zero());
    }
}
