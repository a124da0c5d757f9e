//! Totally ramified extensions presented by Eisenstein polynomials.

pub mod ext;
pub mod galois;
pub mod roots;

pub use ext::{derivative_at_alpha, ExtElement, ExtField};
pub use galois::{different_ord, galois_table, norm_trace, split_in_self, GaloisGroup, RootList};
pub use roots::{hensel_lift_roots, LPoly};
