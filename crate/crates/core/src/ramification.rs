//! Lower and upper ramification filtrations, the Herbrand function and the
//! largest-break formulas.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::extensions::{derivative_at_alpha, galois_table, split_in_self, ExtField, GaloisGroup, RootList};

pub type Q = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Lower,
    UpperClassical,
    Nonlog,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Lower => "lower",
            Flavor::UpperClassical => "upper_cl",
            Flavor::Nonlog => "nonlog",
        }
    }
}

/// G_v equals the subgroup of the first jump with index >= v, and is
/// trivial beyond the last jump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jump {
    pub index: Q,
    pub subgroup: Vec<usize>,
    /// Set for nonlog jumps over an imperfect residue field other than the
    /// largest one: they come from the classical shift and are not
    /// certified by the root data.
    pub unverified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub flavor: Flavor,
    pub jumps: Vec<Jump>,
}

impl Filtration {
    pub fn indices(&self) -> Vec<Q> {
        self.jumps.iter().map(|j| j.index).collect()
    }

    /// The subgroup G_v.
    pub fn at(&self, v: Q, identity: usize) -> Vec<usize> {
        match self.jumps.iter().find(|j| j.index >= v) {
            Some(j) => j.subgroup.clone(),
            None => vec![identity],
        }
    }
}

/// A continuous piecewise linear function with phi(v) = v for v <= 0 and
/// slope `slopes[k]` on (breakpoints[k], breakpoints[k+1]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakFunction {
    pub breakpoints: Vec<Q>,
    pub slopes: Vec<Q>,
}

impl BreakFunction {
    pub fn phi(&self, v: Q) -> Q {
        if v <= Q::from_integer(0) {
            return v;
        }
        let mut acc = Q::from_integer(0);
        for k in 0..self.breakpoints.len() {
            let lo = self.breakpoints[k];
            let hi = self.breakpoints.get(k + 1).copied();
            if v <= lo {
                break;
            }
            let end = match hi {
                Some(h) if h < v => h,
                _ => v,
            };
            acc += (end - lo) * self.slopes[k];
        }
        acc
    }

    pub fn psi(&self, y: Q) -> Q {
        if y <= Q::from_integer(0) {
            return y;
        }
        let mut acc = Q::from_integer(0);
        for k in 0..self.breakpoints.len() {
            let lo = self.breakpoints[k];
            let seg_end = self.breakpoints.get(k + 1).map(|h| acc + (*h - lo) * self.slopes[k]);
            match seg_end {
                Some(e) if e < y => acc = e,
                _ => return lo + (y - acc) / self.slopes[k],
            }
        }
        y
    }

    /// (x, phi(x), slope to the right) for each breakpoint.
    pub fn segments(&self) -> Vec<(Q, Q, Q)> {
        self.breakpoints.iter().zip(&self.slopes).map(|(&b, &s)| (b, self.phi(b), s)).collect()
    }
}

/// ord_L(sigma(alpha) - alpha); `INF` for the identity.
pub fn i_of_sigma(group: &GaloisGroup, s: usize) -> i64 {
    group.i_of_sigma(s)
}

pub fn lower_filtration(group: &GaloisGroup) -> Result<Filtration> {
    let id = group.identity();
    let mut breaks: Vec<i64> = (0..group.order()).filter(|&s| s != id).map(|s| group.i_of_sigma(s) - 1).collect();
    breaks.sort_unstable();
    breaks.dedup();
    let mut jumps = Vec::new();
    for b in breaks {
        let subgroup: Vec<usize> = (0..group.order()).filter(|&s| s == id || group.i_of_sigma(s) > b).collect();
        if !group.is_subgroup(&subgroup) {
            return Err(Error::NotAGroup(format!("G_{b} is not a subgroup")));
        }
        jumps.push(Jump { index: Q::from_integer(b), subgroup, unverified: false });
    }
    Ok(Filtration { flavor: Flavor::Lower, jumps })
}

pub fn herbrand(lower: &Filtration, order: usize) -> BreakFunction {
    let g0 = order as i64;
    let mut breakpoints = vec![Q::from_integer(0)];
    let mut slopes = Vec::new();
    for j in &lower.jumps {
        if j.index > Q::from_integer(0) {
            slopes.push(Q::new(j.subgroup.len() as i64, g0));
            breakpoints.push(j.index);
        }
    }
    slopes.push(Q::new(1, g0));
    BreakFunction { breakpoints, slopes }
}

/// phi(m) = (1/|G_0|) sum_sigma min(i(sigma), m + 1) - 1 at an integer m >= 0.
pub fn phi_by_averaging(group: &GaloisGroup, m: i64) -> Q {
    let total: i64 = (0..group.order()).map(|s| group.i_of_sigma(s).min(m + 1)).sum();
    Q::new(total, group.order() as i64) - 1
}

/// The classical upper filtration G^v = G_{psi(v)} and its shift by one.
pub fn upper_filtrations(lower: &Filtration, phi: &BreakFunction, imperfect: bool) -> (Filtration, Filtration) {
    let upper: Vec<Jump> = lower
        .jumps
        .iter()
        .map(|j| Jump { index: phi.phi(j.index), subgroup: j.subgroup.clone(), unverified: false })
        .collect();
    let last = upper.len().saturating_sub(1);
    let nonlog = upper
        .iter()
        .enumerate()
        .map(|(k, j)| Jump {
            index: j.index + 1,
            subgroup: j.subgroup.clone(),
            unverified: imperfect && k != last,
        })
        .collect();
    (Filtration { flavor: Flavor::UpperClassical, jumps: upper }, Filtration { flavor: Flavor::Nonlog, jumps: nonlog })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargestBreak {
    /// Largest r with G^r != 1 in the nonlog numbering.
    pub r: Q,
    pub e: i64,
    /// ord_L f'(alpha).
    pub different: i64,
    /// ord_L(alpha_{n-1} - alpha_n).
    pub closest_separation: i64,
    /// Largest i with G_i != 1.
    pub i: i64,
    pub eqr: bool,
    pub eqi: bool,
    pub eqri: bool,
}

impl LargestBreak {
    pub fn all_hold(&self) -> bool {
        self.eqr && self.eqi && self.eqri
    }
}

pub fn largest_break_report(roots: &RootList, lower: &Filtration, phi: &BreakFunction) -> Result<LargestBreak> {
    let top = lower.jumps.last().ok_or(Error::TameExtension)?;
    if top.index < Q::from_integer(1) {
        return Err(Error::TameExtension);
    }
    let i = top.index.to_integer();
    let r = phi.phi(top.index) + 1;
    let e = roots.len() as i64;
    let different = derivative_at_alpha(roots.field()).ord()?;
    let sep = roots.closest_separation();
    let er = r * e;
    Ok(LargestBreak {
        r,
        e,
        different,
        closest_separation: sep,
        i,
        eqr: er == Q::from_integer(different + sep),
        eqi: i == sep - 1,
        eqri: er == Q::from_integer(different + i + 1),
    })
}

pub fn hasse_arf_check(nonlog: &Filtration, group: &GaloisGroup) -> Result<bool> {
    if !group.is_abelian() {
        return Err(Error::NotAbelian);
    }
    Ok(nonlog.jumps.iter().all(|j| j.index.is_integer()))
}

/// i(sigma^{-1}) = i(sigma) and i(tau sigma tau^{-1}) = i(sigma) for all
/// sigma, tau.
pub fn conjugation_invariant(group: &GaloisGroup) -> bool {
    let n = group.order();
    (0..n).all(|s| {
        group.i_of_sigma(group.inverse(s)) == group.i_of_sigma(s)
            && (0..n).all(|t| {
                let conj = group.compose(group.compose(t, s), group.inverse(t));
                group.i_of_sigma(conj) == group.i_of_sigma(s)
            })
    })
}

#[derive(Clone, Debug)]
pub struct RamificationReport {
    pub group: GaloisGroup,
    pub i_values: Vec<i64>,
    pub lower: Filtration,
    pub phi: BreakFunction,
    pub upper: Filtration,
    pub nonlog: Filtration,
    pub largest: Option<LargestBreak>,
    pub different: i64,
    pub different_checksum: i64,
    pub phi_matches_average: bool,
    pub conjugation_invariant: bool,
    pub hasse_arf: Option<bool>,
}

impl RamificationReport {
    /// True when every asserted identity holds.
    pub fn checks_pass(&self) -> bool {
        self.different == self.different_checksum
            && self.phi_matches_average
            && self.conjugation_invariant
            && self.hasse_arf != Some(false)
            && self.largest.as_ref().is_none_or(|l| l.all_hold())
    }
}

/// Splits f, builds the Galois table and computes every filtration.
pub fn analyze(l: &std::sync::Arc<ExtField>) -> Result<RamificationReport> {
    let roots = split_in_self(l)?;
    let group = galois_table(&roots)?;
    let imperfect = !l.residue().is_perfect();
    analyze_group(group, imperfect)
}

pub fn analyze_group(group: GaloisGroup, imperfect: bool) -> Result<RamificationReport> {
    let roots = group.roots().clone();
    let lower = lower_filtration(&group)?;
    let phi = herbrand(&lower, group.order());
    let (upper, nonlog) = upper_filtrations(&lower, &phi, imperfect);
    let largest = match largest_break_report(&roots, &lower, &phi) {
        Ok(lb) => Some(lb),
        Err(Error::TameExtension) => None,
        Err(e) => return Err(e),
    };
    let different = derivative_at_alpha(roots.field()).ord()?;
    let n = roots.len();
    let different_checksum = roots.separations()[..n - 1].iter().sum();
    let top = lower.jumps.last().map(|j| j.index.to_integer()).unwrap_or(0);
    let phi_matches_average = (0..=top + 2).all(|m| phi.phi(Q::from_integer(m)) == phi_by_averaging(&group, m));
    let hasse_arf = match hasse_arf_check(&nonlog, &group) {
        Ok(b) => Some(b),
        Err(Error::NotAbelian) => None,
        Err(e) => return Err(e),
    };
    let i_values = (0..group.order()).map(|s| group.i_of_sigma(s)).collect();
    Ok(RamificationReport {
        conjugation_invariant: conjugation_invariant(&group),
        group,
        i_values,
        lower,
        phi,
        upper,
        nonlog,
        largest,
        different,
        different_checksum,
        phi_matches_average,
        hasse_arf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn herbrand_inverse_round_trip() {
        let phi = BreakFunction {
            breakpoints: vec![q(0, 1), q(1, 1), q(5, 1)],
            slopes: vec![q(1, 1), q(1, 2), q(1, 4)],
        };
        assert_eq!(phi.phi(q(5, 1)), q(3, 1));
        assert_eq!(phi.phi(q(9, 1)), q(4, 1));
        for v in [q(1, 2), q(1, 1), q(3, 1), q(5, 1), q(13, 2)] {
            assert_eq!(phi.psi(phi.phi(v)), v);
        }
        assert_eq!(phi.phi(q(-1, 1)), q(-1, 1));
    }

    #[test]
    fn tame_only() {
        let phi = BreakFunction { breakpoints: vec![q(0, 1)], slopes: vec![q(1, 3)] };
        assert_eq!(phi.phi(q(3, 1)), q(1, 1));
        assert_eq!(phi.psi(q(1, 1)), q(3, 1));
    }
}
