//! Roots of polynomials over L: Newton polygons, residual polynomials and
//! Newton iteration.

use std::sync::Arc;

use num_rational::Ratio;

use super::ext::{ExtElement, ExtField};
use crate::error::{Error, Result};
use crate::series_arith::{newton_polygon, FieldElement, LaurentSeries, NewtonPoint, ResidueField, INF};

/// A polynomial over L, lowest coefficient first.
pub type LPoly = Vec<ExtElement>;

pub fn lift_poly(l: &Arc<ExtField>, coeffs: &[LaurentSeries]) -> LPoly {
    coeffs.iter().map(|c| ExtElement::from_base(l, c.clone())).collect()
}

pub fn eval(g: &[ExtElement], y: &ExtElement) -> ExtElement {
    let mut acc = ExtElement::zero(y.field());
    for c in g.iter().rev() {
        acc = acc.mul(y).add(c);
    }
    acc
}

pub fn derivative(g: &[ExtElement]) -> LPoly {
    g.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale_base(&LaurentSeries::from_int(c.field().base_field(), i as i64)))
        .collect()
}

/// g(Y + a).
pub fn taylor_shift(g: &[ExtElement], a: &ExtElement) -> LPoly {
    let mut out: LPoly = g.to_vec();
    let d = out.len();
    for i in 0..d {
        for j in (i..d - 1).rev() {
            let add = out[j + 1].mul(a);
            out[j] = out[j].add(&add);
        }
    }
    out
}

/// Quotient of g by (Y - a), discarding the remainder g(a).
pub fn divide_linear(g: &[ExtElement], a: &ExtElement) -> LPoly {
    let d = g.len() - 1;
    let mut q = vec![ExtElement::zero(a.field()); d];
    let mut carry = ExtElement::zero(a.field());
    for i in (1..=d).rev() {
        carry = carry.mul(a).add(&g[i]);
        q[i - 1] = carry.clone();
    }
    q
}

fn trim(g: &mut LPoly) {
    while g.len() > 1 && g.last().is_some_and(|c| c.is_exact_zero()) {
        g.pop();
    }
}

/// Newton iteration from `seed`; `seed` must lie in the basin of a simple
/// root. The iterate is kept exact and the result is certified to the
/// working precision of the field, or to what the coefficients of g allow.
pub fn newton_refine(g: &[ExtElement], seed: &ExtElement) -> Result<ExtElement> {
    let dg = derivative(g);
    let l = seed.field();
    let target = l.degree() as i64 * l.base_field().precision();
    let mut y = seed.round_ord(INF);
    let mut last = i64::MIN;
    for _ in 0..64 {
        let gy = eval(g, &y);
        let d = eval(&dg, &y);
        let dv = d.ord()?;
        if gy.is_zero() {
            let bound = gy.precision();
            if bound == INF {
                return Ok(y);
            }
            return Ok(y.truncate_ord(bound - dv));
        }
        let gv = gy.ord()?;
        if gv - dv <= last {
            return Err(Error::HenselFails(format!("Newton step stalled at valuation {}", gv - dv)));
        }
        if gv - dv >= target {
            return Ok(y.truncate_ord(gv - dv));
        }
        last = gv - dv;
        // g'(y) is only needed to relative precision gv - dv
        let step = gy.div(&d.truncate_ord(gv + 2))?;
        y = y.sub(&step).round_ord(INF);
    }
    Err(Error::precision("Newton iteration did not converge"))
}

/// Lifts approximate roots, checking the Hensel criterion
/// ord g(r) > 2 ord g'(r) for each seed.
pub fn hensel_lift_roots(g: &[ExtElement], seeds: &[ExtElement]) -> Result<Vec<ExtElement>> {
    let dg = derivative(g);
    seeds
        .iter()
        .map(|s| {
            let gv = eval(g, s).ord_lower_bound();
            let dv = eval(&dg, s).ord()?;
            if dv == INF || gv <= 2 * dv {
                return Err(Error::HenselFails(format!("ord g(r) = {gv}, ord g'(r) = {dv}")));
            }
            newton_refine(g, s)
        })
        .collect()
}

/// All roots of g in L, each simple root appearing once. Only roots of
/// valuation strictly above `above` are returned when it is set.
pub fn roots_in_field(g: &[ExtElement], above: Option<Ratio<i64>>) -> Result<Vec<ExtElement>> {
    let mut g: LPoly = g.to_vec();
    trim(&mut g);
    let l = g[0].field().clone();
    let mut out = Vec::new();
    if g.len() <= 1 {
        return Ok(out);
    }
    if g[0].is_exact_zero() {
        if above.is_none_or(|a| a < Ratio::from_integer(INF)) {
            out.push(ExtElement::zero(&l));
        }
        let rest: LPoly = g[1..].to_vec();
        out.extend(roots_in_field(&rest, above)?);
        return Ok(out);
    }
    if g.len() == 2 {
        let r = g[0].div(&g[1])?.neg();
        let keep = match above {
            None => true,
            Some(a) => Ratio::from_integer(r.ord_lower_bound()) > a,
        };
        if keep {
            out.push(r);
        }
        return Ok(out);
    }
    let pts: Vec<NewtonPoint> = g.iter().map(|c| c.newton_point()).collect();
    let segs = newton_polygon(&pts)?;
    let res = l.residue();
    for seg in segs {
        if above.is_some_and(|a| seg.root_valuation <= a) {
            continue;
        }
        if !seg.root_valuation.is_integer() {
            return Err(Error::NotSplit(format!("roots of valuation {} do not lie in L", seg.root_valuation)));
        }
        let s = seg.root_valuation.to_integer();
        let w = seg.heights.0 + s * seg.from as i64;
        let mut resid = Vec::with_capacity(seg.length + 1);
        for k in seg.from..=seg.to {
            let c = match pts[k] {
                NewtonPoint::Known(v) if v + s * k as i64 == w => g[k].leading()?.1,
                _ => res.zero(),
            };
            resid.push(c);
        }
        let zs = residual_roots(res, &resid)?;
        let count: usize = zs.iter().map(|(_, m)| m).sum();
        if count != seg.length {
            return Err(Error::NotSplit(format!(
                "residual polynomial of valuation {s} has {count} of {} roots in the residue field",
                seg.length
            )));
        }
        let alpha_s = ExtElement::alpha_pow(&l, s);
        for (z, m) in zs {
            let y0 = alpha_s.scale(&z);
            if m == 1 {
                out.push(newton_refine(&g, &y0)?);
            } else {
                let shifted = taylor_shift(&g, &y0);
                let deeper = roots_in_field(&shifted, Some(Ratio::from_integer(s)))?;
                if deeper.len() != m {
                    return Err(Error::NotSplit(format!(
                        "cluster of {m} roots near valuation {s} yields {} roots",
                        deeper.len()
                    )));
                }
                out.extend(deeper.into_iter().map(|d| y0.add(&d)));
            }
        }
    }
    Ok(out)
}

fn poly_eval(res: &ResidueField, r: &[FieldElement], z: &FieldElement) -> FieldElement {
    r.iter().rev().fold(res.zero(), |acc, c| res.add(&res.mul(&acc, z), c))
}

fn poly_div_linear(res: &ResidueField, r: &[FieldElement], z: &FieldElement) -> Vec<FieldElement> {
    let d = r.len() - 1;
    let mut q = vec![res.zero(); d];
    let mut carry = res.zero();
    for i in (1..=d).rev() {
        carry = res.add(&res.mul(&carry, z), &r[i]);
        q[i - 1] = carry.clone();
    }
    q
}

/// Divides out every factor (Z - z), returning the multiplicity.
fn strip_root(res: &ResidueField, r: &mut Vec<FieldElement>, z: &FieldElement) -> usize {
    let mut m = 0;
    while r.len() > 1 && poly_eval(res, r, z).is_zero() {
        *r = poly_div_linear(res, r, z);
        m += 1;
    }
    m
}

/// Nonzero roots in F of a polynomial with nonzero constant term, with
/// multiplicities. Over F_q every element is tried; over F_q(u) the roots
/// are found for binomials, linear factors, perfect powers of a linear
/// factor and constant roots.
pub fn residual_roots(res: &ResidueField, r: &[FieldElement]) -> Result<Vec<(FieldElement, usize)>> {
    let mut r: Vec<FieldElement> = r.to_vec();
    while r.len() > 1 && r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    let mut out: Vec<(FieldElement, usize)> = Vec::new();
    if res.is_perfect() {
        for c in 1..res.fq().size() {
            if r.len() <= 1 {
                break;
            }
            let z = res.from_fq(c);
            let m = strip_root(res, &mut r, &z);
            if m > 0 {
                out.push((z, m));
            }
        }
        return Ok(out);
    }
    let p = res.characteristic() as usize;
    for c in 1..res.fq().size() {
        let z = res.from_fq(c);
        let m = strip_root(res, &mut r, &z);
        if m > 0 {
            out.push((z, m));
        }
    }
    loop {
        let d = r.len() - 1;
        if d == 0 {
            break;
        }
        let lead = r[d].clone();
        let mut progress = false;
        let binomial = r[1..d].iter().all(|c| c.is_zero());
        let mut candidates: Vec<FieldElement> = Vec::new();
        if d == 1 {
            candidates.push(res.neg(&res.div(&r[0], &lead)?));
        } else if binomial {
            let target = res.neg(&res.div(&r[0], &lead)?);
            candidates.extend(res.kth_roots(&target, d as u64));
        } else {
            // a perfect d-th power r_d (Z - z)^d
            if !d.is_multiple_of(p) {
                let dd = res.from_int(d as i64);
                candidates.push(res.neg(&res.div(&r[d - 1], &res.mul(&dd, &lead))?));
            }
            let target = res.div(&r[0], &lead)?;
            let sign = if d % 2 == 1 { res.neg(&target) } else { target };
            candidates.extend(res.kth_roots(&sign, d as u64));
        }
        for z in candidates {
            if z.is_zero() {
                continue;
            }
            let m = strip_root(res, &mut r, &z);
            if m > 0 {
                progress = true;
                match out.iter_mut().find(|(w, _)| *w == z) {
                    Some(e) => e.1 += m,
                    None => out.push((z, m)),
                }
            }
        }
        if !progress {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_arith::{FiniteField, LocalField};

    #[test]
    fn hensel_square_root_of_one_plus_t() {
        let k = LocalField::new(ResidueField::prime(3).unwrap(), 16);
        let kk = ExtField::base(&k);
        let one = LaurentSeries::one(&k);
        let t = LaurentSeries::t(&k);
        // X^2 - (1 + t)
        let g = lift_poly(&kk, &[one.add(&t).neg(), LaurentSeries::zero(&k), one.clone()]);
        let roots = hensel_lift_roots(&g, &[ExtElement::one(&kk)]).unwrap();
        let r = &roots[0];
        assert_eq!(r.coords()[0].coeff(1), k.residue().from_int(2));
        let sq = r.mul(r).to_base().unwrap();
        assert!(sq.sub(&one.add(&t)).is_zero());
    }

    #[test]
    fn hensel_rejects_bad_seed() {
        let k = LocalField::new(ResidueField::prime(3).unwrap(), 16);
        let kk = ExtField::base(&k);
        let one = LaurentSeries::one(&k);
        let t = LaurentSeries::t(&k);
        let g = lift_poly(&kk, &[one.add(&t).neg(), LaurentSeries::zero(&k), one]);
        let seed = ExtElement::from_base(&kk, LaurentSeries::from_int(&k, 0));
        assert!(matches!(hensel_lift_roots(&g, &[seed]), Err(Error::HenselFails(_))));
    }

    #[test]
    fn residual_roots_over_f4() {
        let f4 = FiniteField::new(2, vec![1, 1, 1]).unwrap();
        let res = ResidueField::new(f4, "w", vec![]).unwrap();
        let one = res.one();
        let roots = residual_roots(&res, &[one.clone(), one.clone(), one]).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn residual_square_root_over_function_field() {
        let res = ResidueField::new(FiniteField::prime(3).unwrap(), "a", vec!["u".into()]).unwrap();
        let u = res.var(0);
        // Z^2 - u^2
        let r = vec![res.neg(&res.mul(&u, &u)), res.zero(), res.one()];
        let roots = residual_roots(&res, &r).unwrap();
        assert_eq!(roots.len(), 2);
    }
}
