//! Artin-Schreier characters x^p - x = a of K = F((t)): best forms, the
//! conductor, the refined Swan form da and the comparison with the
//! ramification engine.

pub mod algebra;
pub mod corab;
pub mod synthesis;

pub use algebra::{ASAlgebra, ASElement};
pub use corab::{compare_corab, CorabReport};
pub use synthesis::{artin_schreier_extension, ASExtension};

use crate::error::{Error, Result};
use crate::series_arith::{FieldElement, LaurentSeries, INF};

#[derive(Clone, Debug)]
pub struct ASCharacter {
    pub label: String,
    pub a: LaurentSeries,
}

impl ASCharacter {
    pub fn new(label: impl Into<String>, a: LaurentSeries) -> Self {
        ASCharacter { label: label.into(), a }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Unramified,
    NonFierce,
    Fierce,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Unramified => "unramified",
            Kind::NonFierce => "non-fierce",
            Kind::Fierce => "fierce",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BestForm {
    pub a_red: LaurentSeries,
    /// Pole order of `a_red`, or 0.
    pub n: i64,
    pub kind: Kind,
    pub steps: usize,
}

/// Removes p-th power leading poles: a <- a - (d t^{-n/p})^p + d t^{-n/p}.
pub fn reduce_best_form(a: &LaurentSeries) -> Result<BestForm> {
    let res = a.residue_field();
    let p = res.characteristic() as i64;
    let mut a = a.clone();
    let mut steps = 0;
    loop {
        let v = a.lower_bound();
        if v >= 0 {
            if a.cap().is_some_and(|c| c <= 0) {
                return Err(Error::precision("polar part is not determined"));
            }
            return Ok(BestForm { a_red: a, n: 0, kind: Kind::Unramified, steps });
        }
        let (v, c) = a.leading()?;
        let n = -v;
        if n % p != 0 {
            return Ok(BestForm { a_red: a, n, kind: Kind::NonFierce, steps });
        }
        let Some(d) = res.pth_root(&c) else {
            return Ok(BestForm { a_red: a, n, kind: Kind::Fierce, steps });
        };
        let k = a.field().clone();
        let dp = LaurentSeries::monomial(&k, c, -n);
        let d1 = LaurentSeries::monomial(&k, d, -n / p);
        a = a.sub(&dp).add(&d1);
        steps += 1;
    }
}

/// A differential g_0 dt + sum_j g_j du_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    pub dt: LaurentSeries,
    pub du: Vec<LaurentSeries>,
}

impl DifferentialForm {
    pub fn components(&self) -> impl Iterator<Item = &LaurentSeries> {
        std::iter::once(&self.dt).chain(&self.du)
    }

    /// The minimum of the valuations of the components.
    pub fn ord(&self) -> Result<i64> {
        let mut known = INF;
        let mut bound = INF;
        for c in self.components() {
            if !c.is_zero() {
                known = known.min(c.lower_bound());
            }
            if let Some(cap) = c.cap() {
                bound = bound.min(cap);
            }
        }
        if known < bound || (known == INF && bound == INF) {
            Ok(known)
        } else {
            Err(Error::precision(format!("differential is zero modulo t^{bound}")))
        }
    }

    /// The coefficients of t^{-j} in every component.
    pub fn graded_part(&self, j: i64) -> Result<(FieldElement, Vec<FieldElement>)> {
        for c in self.components() {
            if c.cap().is_some_and(|cap| cap <= -j) {
                return Err(Error::precision("graded part beyond the precision cap"));
            }
        }
        Ok((self.dt.coeff(-j), self.du.iter().map(|c| c.coeff(-j)).collect()))
    }
}

pub fn exterior_derivative(a: &LaurentSeries) -> DifferentialForm {
    let nvars = a.residue_field().nvars();
    DifferentialForm { dt: a.derivative_t(), du: (0..nvars).map(|v| a.derivative_u(v)).collect() }
}

/// rsw sends the class of t^level to dt * dt + sum du_j * du_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedSwan {
    pub level: i64,
    pub dt: FieldElement,
    pub du: Vec<FieldElement>,
}

impl RefinedSwan {
    pub fn is_zero(&self) -> bool {
        self.dt.is_zero() && self.du.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct Conductor {
    pub best: BestForm,
    pub j: i64,
    pub rsw: RefinedSwan,
}

impl Conductor {
    /// p = 2 with a fierce best form of pole 2. Adding c^2 - c with
    /// c = lambda t^-1 keeps the form best and moves the dt-coefficient of
    /// da at level 2 by lambda, so only j and the du-components are
    /// invariants of the character.
    pub fn is_exceptional(&self) -> bool {
        self.best.kind == Kind::Fierce && self.j == 2 && self.best.a_red.residue_field().characteristic() == 2
    }

    /// Equality of j and of the components of rsw that the character
    /// determines.
    pub fn same_invariants(&self, other: &Conductor) -> bool {
        let dt_free = self.is_exceptional() || other.is_exceptional();
        self.j == other.j && self.rsw.du == other.rsw.du && (dt_free || self.rsw.dt == other.rsw.dt)
    }
}

pub fn conductor_and_rsw(a: &LaurentSeries) -> Result<Conductor> {
    let best = reduce_best_form(a)?;
    if best.kind == Kind::Unramified {
        return Err(Error::UnramifiedCharacter);
    }
    let da = exterior_derivative(&best.a_red);
    let j = -da.ord()?;
    let (dt, du) = da.graded_part(j)?;
    Ok(Conductor { best, j, rsw: RefinedSwan { level: j, dt, du } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_arith::{LocalField, ResidueField};
    use std::sync::Arc;

    fn f2u() -> Arc<LocalField> {
        let fq = crate::series_arith::FiniteField::prime(2).unwrap();
        LocalField::new(ResidueField::new(fq, "a", vec!["u".into()]).unwrap(), 32)
    }

    fn mono(k: &Arc<LocalField>, c: FieldElement, e: i64) -> LaurentSeries {
        LaurentSeries::monomial(k, c, e)
    }

    #[test]
    fn reduction_of_t_minus_four() {
        let k = LocalField::new(ResidueField::prime(2).unwrap(), 32);
        let one = k.residue().one();
        let bf = reduce_best_form(&mono(&k, one.clone(), -4)).unwrap();
        assert_eq!(bf.kind, Kind::NonFierce);
        assert_eq!(bf.n, 1);
        assert_eq!(bf.steps, 2);
        assert_eq!(bf.a_red, mono(&k, one, -1));
    }

    #[test]
    fn fierce_and_unramified() {
        let k = f2u();
        let u = k.residue().var(0);
        let bf = reduce_best_form(&mono(&k, u.clone(), -2)).unwrap();
        assert_eq!((bf.kind, bf.n, bf.steps), (Kind::Fierce, 2, 0));
        let c = conductor_and_rsw(&bf.a_red).unwrap();
        assert_eq!(c.j, 2);
        assert!(c.rsw.dt.is_zero());
        assert_eq!(c.rsw.du, vec![k.residue().one()]);
        let t2 = mono(&k, k.residue().one(), 2);
        assert_eq!(reduce_best_form(&t2).unwrap().kind, Kind::Unramified);
        assert_eq!(conductor_and_rsw(&t2).unwrap_err(), Error::UnramifiedCharacter);
    }

    #[test]
    fn derivative_of_u_t_minus_n() {
        let k = f2u();
        let res = k.residue();
        let u = res.var(0);
        let c = conductor_and_rsw(&mono(&k, u.clone(), -3)).unwrap();
        assert_eq!(c.j, 4);
        assert_eq!(c.rsw.dt, u);
        assert!(c.rsw.du[0].is_zero());
        let z = exterior_derivative(&LaurentSeries::constant(&k, res.from_int(1)));
        assert_eq!(z.ord().unwrap(), INF);
        let du = exterior_derivative(&LaurentSeries::constant(&k, u));
        assert_eq!(du.ord().unwrap(), 0);
    }

    #[test]
    fn dt_coefficient_is_free_only_for_p2_level2() {
        let k = f2u();
        let res = k.residue();
        let u = res.var(0);
        let a = mono(&k, u.clone(), -2);
        let c = mono(&k, res.one(), -1);
        let b = a.add(&c.pow(2)).sub(&c);
        let (ca, cb) = (conductor_and_rsw(&a).unwrap(), conductor_and_rsw(&b).unwrap());
        assert_eq!(reduce_best_form(&b).unwrap().kind, Kind::Fierce);
        assert!(ca.is_exceptional());
        assert_eq!(cb.rsw.dt, res.one());
        assert_ne!(ca.rsw, cb.rsw);
        assert!(ca.same_invariants(&cb));

        let a = mono(&k, u.clone(), -4);
        let c = mono(&k, u, -2).add(&mono(&k, res.one(), -1));
        let b = a.add(&c.pow(2)).sub(&c);
        let (ca, cb) = (conductor_and_rsw(&a).unwrap(), conductor_and_rsw(&b).unwrap());
        assert!(!ca.is_exceptional());
        assert_eq!(ca.rsw, cb.rsw);
    }
}
