//! Conjugates of alpha, the Galois group as a table of root indices, norms,
//! traces and the different.

use std::sync::Arc;

use super::ext::{derivative_at_alpha, ExtElement, ExtField};
use super::roots::{divide_linear, lift_poly, roots_in_field, taylor_shift};
use crate::error::{Error, Result};
use crate::series_arith::{LaurentSeries, INF};

/// The roots alpha_1, ..., alpha_n of f in L, with alpha_n = alpha and
/// ord_L(alpha_i - alpha_n) non-decreasing in i.
#[derive(Clone, Debug)]
pub struct RootList {
    field: Arc<ExtField>,
    roots: Vec<ExtElement>,
    separations: Vec<i64>,
}

impl RootList {
    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn roots(&self) -> &[ExtElement] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn alpha(&self) -> &ExtElement {
        self.roots.last().expect("at least one root")
    }

    /// ord_L(alpha_i - alpha_n); `INF` for i = n.
    pub fn separation(&self, i: usize) -> i64 {
        self.separations[i]
    }

    pub fn separations(&self) -> &[i64] {
        &self.separations
    }

    /// ord_L(alpha_{n-1} - alpha_n).
    pub fn closest_separation(&self) -> i64 {
        let n = self.len();
        if n < 2 {
            INF
        } else {
            self.separations[n - 2]
        }
    }
}

/// Finds all conjugates of alpha inside L.
pub fn split_in_self(l: &Arc<ExtField>) -> Result<RootList> {
    let n = l.degree();
    let alpha = ExtElement::alpha(l);
    if n == 1 {
        return Ok(RootList { field: l.clone(), roots: vec![alpha], separations: vec![INF] });
    }
    let f = lift_poly(l, &l.poly().coeffs);
    // H(Y) = f(alpha + Y) / Y; its roots are alpha_i - alpha for i < n
    let shifted = taylor_shift(&f, &alpha);
    if !shifted[0].is_zero() {
        return Err(Error::Mismatch("alpha is not a root of its own polynomial".into()));
    }
    let h: Vec<ExtElement> = shifted[1..].to_vec();
    let deltas = roots_in_field(&h, None)?;
    if deltas.len() != n - 1 {
        return Err(Error::NotSplit(format!("found {} of {} conjugates", deltas.len() + 1, n)));
    }
    let mut keyed = Vec::with_capacity(n - 1);
    for d in deltas {
        let v = d.ord()?;
        if v == INF {
            return Err(Error::NotSplit("repeated root".into()));
        }
        keyed.push((v, alpha.add(&d)));
    }
    keyed.sort_by_key(|(v, _)| *v);
    let mut separations: Vec<i64> = keyed.iter().map(|(v, _)| *v).collect();
    let mut roots: Vec<ExtElement> = keyed.into_iter().map(|(_, r)| r).collect();
    roots.push(alpha);
    separations.push(INF);
    Ok(RootList { field: l.clone(), roots, separations })
}

/// Galois elements are indices into the root list: sigma_i(alpha) = alpha_i.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    roots: RootList,
    /// compose[s][t] is the index of s o t.
    compose: Vec<Vec<usize>>,
}

impl GaloisGroup {
    pub fn roots(&self) -> &RootList {
        &self.roots
    }

    pub fn order(&self) -> usize {
        self.roots.len()
    }

    pub fn identity(&self) -> usize {
        self.roots.len() - 1
    }

    pub fn compose(&self, s: usize, t: usize) -> usize {
        self.compose[s][t]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.compose
    }

    pub fn inverse(&self, s: usize) -> usize {
        (0..self.order()).find(|&t| self.compose[s][t] == self.identity()).expect("group has inverses")
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|s| (0..self.order()).all(|t| self.compose[s][t] == self.compose[t][s]))
    }

    /// True when the index set is closed under composition and inverses.
    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        elems.contains(&self.identity())
            && elems.iter().all(|&s| elems.contains(&self.inverse(s)))
            && elems.iter().all(|&s| elems.iter().all(|&t| elems.contains(&self.compose[s][t])))
    }

    /// sigma(x) for the automorphism with index `s`.
    pub fn apply(&self, s: usize, x: &ExtElement) -> ExtElement {
        x.substitute(&self.roots.roots[s])
    }

    /// ord_L(sigma(alpha) - alpha), `INF` for the identity.
    pub fn i_of_sigma(&self, s: usize) -> i64 {
        self.roots.separation(s)
    }
}

/// Builds the composition table; (s o t)(alpha) = h_t(g_s(alpha)).
pub fn galois_table(roots: &RootList) -> Result<GaloisGroup> {
    let n = roots.len();
    let rs = roots.roots();
    let mut max_sep = i64::MIN;
    for i in 0..n {
        for j in (i + 1)..n {
            max_sep = max_sep.max(rs[i].sub(&rs[j]).ord()?);
        }
    }
    let mut compose = vec![vec![0; n]; n];
    for s in 0..n {
        for t in 0..n {
            let image = rs[t].substitute(&rs[s]);
            let found: Vec<usize> =
                (0..n).filter(|&j| image.sub(&rs[j]).ord_lower_bound() > max_sep).collect();
            if found.len() != 1 {
                return Err(Error::NotAGroup(format!("composition of roots {s} and {t} matches {} roots", found.len())));
            }
            compose[s][t] = found[0];
        }
    }
    let group = GaloisGroup { roots: roots.clone(), compose };
    let id = group.identity();
    for s in 0..n {
        if group.compose[s][id] != s || group.compose[id][s] != s {
            return Err(Error::NotAGroup("alpha -> alpha is not an identity".into()));
        }
        if !(0..n).any(|t| group.compose[s][t] == id) {
            return Err(Error::NotAGroup(format!("root {s} has no inverse")));
        }
        for t in 0..n {
            for u in 0..n {
                if group.compose[group.compose[s][t]][u] != group.compose[s][group.compose[t][u]] {
                    return Err(Error::NotAGroup("composition is not associative".into()));
                }
            }
        }
    }
    Ok(group)
}

/// Norm and trace from L to K.
pub fn norm_trace(x: &ExtElement, group: &GaloisGroup) -> Result<(LaurentSeries, LaurentSeries)> {
    let l = x.field();
    let mut norm = ExtElement::one(l);
    let mut trace = ExtElement::zero(l);
    for s in 0..group.order() {
        let y = group.apply(s, x);
        norm = norm.mul(&y);
        trace = trace.add(&y);
    }
    Ok((norm.to_base()?, trace.to_base()?))
}

/// ord_L f'(alpha) together with the sum of ord_L(alpha_n - alpha_i) over
/// i < n, which must agree.
pub fn different_ord(roots: &RootList) -> Result<(i64, i64)> {
    let d = derivative_at_alpha(roots.field()).ord()?;
    let n = roots.len();
    let sum: i64 = roots.separations()[..n - 1].iter().sum();
    Ok((d, sum))
}

/// The factor of f(X) remaining after removing X - alpha, over L.
pub fn cofactor(l: &Arc<ExtField>) -> Vec<ExtElement> {
    divide_linear(&lift_poly(l, &l.poly().coeffs), &ExtElement::alpha(l))
}
