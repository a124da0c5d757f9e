//! Runs a non-fierce character through the ramification engine and compares
//! its largest break and pairing with the conductor and da.

use num_rational::Ratio;

use super::synthesis::{artin_schreier_extension, ASExtension};
use super::{conductor_and_rsw, Conductor, Kind};
use crate::additive::{beta_map, rsw_scalar, RswScalar};
use crate::error::{Error, Result};
use crate::ramification::{analyze, RamificationReport};
use crate::series_arith::{FieldElement, LaurentSeries};

#[derive(Clone, Debug)]
pub struct CorabReport {
    pub conductor: Conductor,
    pub extension: ASExtension,
    pub ramification: RamificationReport,
    pub r: Ratio<i64>,
    /// chi(sigma) for every element of G^r, aligned with the beta map.
    pub chi: Vec<i64>,
    pub engine: RswScalar,
    pub engine_dt: FieldElement,
    pub breaks_match: bool,
    pub dt_match: bool,
}

impl CorabReport {
    pub fn holds(&self) -> bool {
        self.breaks_match && self.dt_match
    }
}

pub fn compare_corab(a: &LaurentSeries) -> Result<CorabReport> {
    let conductor = conductor_and_rsw(a)?;
    if conductor.best.kind == Kind::Fierce {
        return Err(Error::FierceCharacter);
    }
    let k = a.field();
    let extension = artin_schreier_extension(k, std::slice::from_ref(&conductor.best.a_red))?;
    let ramification = analyze(&extension.field)?;
    let largest = ramification.largest.clone().ok_or(Error::TameExtension)?;
    let r = largest.r;
    let group = &ramification.group;
    let roots = group.roots();
    let beta = beta_map(group, &ramification.lower)?;
    // the character attached to a is chi_a(sigma) = x - sigma(x)
    let p = k.characteristic() as i64;
    let chi = beta
        .elements
        .iter()
        .map(|&s| extension.shift_of_root(roots.alpha(), &roots.roots()[s]).map(|c| (-c).rem_euclid(p)))
        .collect::<Result<Vec<_>>>()?;
    let engine = rsw_scalar(group, &ramification.lower, r, &chi)?;
    let engine_dt = engine.dt_coefficient.clone().ok_or_else(|| Error::Mismatch(format!("non-integral break {r}")))?;
    let breaks_match = r == Ratio::from_integer(conductor.j);
    let dt_match = engine_dt == conductor.rsw.dt;
    Ok(CorabReport { conductor, extension, ramification, r, chi, engine, engine_dt, breaks_match, dt_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_arith::{FiniteField, LocalField, ResidueField};

    #[test]
    fn matches_on_small_cases() {
        for p in [2u32, 3] {
            for n in [1i64, 2, 3, 5] {
                if n % p as i64 == 0 {
                    continue;
                }
                let k = LocalField::new(ResidueField::prime(p).unwrap(), 64);
                let a = LaurentSeries::monomial(&k, k.residue().one(), -n);
                let rep = compare_corab(&a).unwrap();
                assert!(rep.breaks_match, "p={p} n={n} r={}", rep.r);
                assert!(rep.dt_match, "p={p} n={n}: engine {:?} vs {:?}", rep.engine_dt, rep.conductor.rsw.dt);
            }
        }
    }

    #[test]
    fn imperfect_u_over_t() {
        let fq = FiniteField::prime(2).unwrap();
        let k = LocalField::new(ResidueField::new(fq, "a", vec!["u".into()]).unwrap(), 64);
        let a = LaurentSeries::monomial(&k, k.residue().var(0), -1);
        let rep = compare_corab(&a).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.conductor.j, 2);
        // da = t^-1 du - u t^-2 dt: the du part lies above the graded piece
        assert!(rep.conductor.rsw.du[0].is_zero());
        assert_eq!(rep.conductor.rsw.dt, k.residue().var(0));
    }
}
