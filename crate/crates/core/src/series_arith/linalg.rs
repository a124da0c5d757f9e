//! Gaussian elimination over a residue field.

use super::residue::{FieldElement, ResidueField};

/// Row-reduces `m` in place and returns the pivot columns.
fn eliminate(res: &ResidueField, m: &mut [Vec<FieldElement>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, pr);
        let inv = res.inv(&m[row][col]).expect("pivot is nonzero");
        for c in col..m[row].len() {
            m[row][c] = res.mul(&m[row][c], &inv);
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..m[r].len() {
                let sub = res.mul(&factor, &m[row][c]);
                m[r][c] = res.sub(&m[r][c], &sub);
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(res: &ResidueField, m: &[Vec<FieldElement>]) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut work = m.to_vec();
    eliminate(res, &mut work, cols).len()
}

/// The unique solution of a square system, or `None` when it is singular.
pub fn solve(res: &ResidueField, a: &[Vec<FieldElement>], b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let n = a.len();
    let mut aug: Vec<Vec<FieldElement>> =
        a.iter().zip(b).map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect()).collect();
    let pivots = eliminate(res, &mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}
