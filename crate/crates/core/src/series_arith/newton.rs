//! Newton polygons of polynomials whose coefficients have possibly
//! uncertain valuations.

use num_rational::Ratio;

use super::series::LaurentSeries;
use crate::error::{Error, Result};

/// What is known about the valuation of one coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonPoint {
    Known(i64),
    /// Zero to precision: the valuation is at least this value.
    AtLeast(i64),
    /// The coefficient is exactly zero.
    Absent,
}

impl NewtonPoint {
    pub fn of_series(s: &LaurentSeries) -> Self {
        if s.is_exact_zero() {
            NewtonPoint::Absent
        } else if s.is_zero() {
            NewtonPoint::AtLeast(s.lower_bound())
        } else {
            NewtonPoint::Known(s.lower_bound())
        }
    }
}

/// One edge of the lower convex hull. Roots belonging to the edge have
/// valuation `root_valuation`; there are `length` of them counted with
/// multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub root_valuation: Ratio<i64>,
    pub length: usize,
    /// Index of the left and right hull vertices.
    pub from: usize,
    pub to: usize,
    /// Valuation of the coefficients at the two vertices.
    pub heights: (i64, i64),
}

/// A monic or non-monic polynomial with Laurent series coefficients, lowest
/// degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyOverK {
    pub coeffs: Vec<LaurentSeries>,
}

impl PolyOverK {
    pub fn new(coeffs: Vec<LaurentSeries>) -> Self {
        PolyOverK { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_exact() && c.terms().count() == 1 && c.coeff(0).is_one())
    }

    pub fn newton_polygon(&self) -> Result<Vec<Segment>> {
        let pts: Vec<NewtonPoint> = self.coeffs.iter().map(NewtonPoint::of_series).collect();
        newton_polygon(&pts)
    }
}

/// Lower convex hull of the points `(i, v_i)`, returned as segments ordered
/// by ascending root valuation. Zero roots (leading exact zeros) are not
/// reported.
pub fn newton_polygon(points: &[NewtonPoint]) -> Result<Vec<Segment>> {
    let first = points.iter().position(|p| *p != NewtonPoint::Absent);
    let last = points.iter().rposition(|p| *p != NewtonPoint::Absent);
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::DivisionByZero);
    };
    for end in [first, last] {
        if let NewtonPoint::AtLeast(_) = points[end] {
            return Err(Error::precision("extreme Newton polygon coefficient is zero to precision"));
        }
    }
    let known: Vec<(i64, i64)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| match p {
            NewtonPoint::Known(v) => Some((i as i64, *v)),
            _ => None,
        })
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &known {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let cross = (x2 - x1) as i128 * (pt.1 - y1) as i128 - (y2 - y1) as i128 * (pt.0 - x1) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    for (i, p) in points.iter().enumerate() {
        let NewtonPoint::AtLeast(bound) = *p else { continue };
        let i = i as i64;
        if i < first as i64 || i > last as i64 {
            continue;
        }
        let w = hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).expect("index inside the hull");
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        let hull_at = Ratio::new(y1 * (x2 - x1) + (y2 - y1) * (i - x1), x2 - x1);
        if Ratio::from_integer(bound) <= hull_at {
            return Err(Error::precision(format!("coefficient {i} is unknown below the Newton polygon")));
        }
    }
    let mut segs: Vec<Segment> = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            Segment {
                root_valuation: Ratio::new(y1 - y2, x2 - x1),
                length: (x2 - x1) as usize,
                from: x1 as usize,
                to: x2 as usize,
                heights: (y1, y2),
            }
        })
        .collect();
    segs.reverse();
    Ok(segs)
}
