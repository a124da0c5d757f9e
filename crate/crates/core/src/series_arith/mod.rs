//! Exact arithmetic: finite fields, rational function residue fields,
//! truncated Laurent series and Newton polygons.

pub mod finite;
pub mod linalg;
pub mod mpoly;
pub mod newton;
pub mod residue;
pub mod series;

pub use finite::{FiniteField, Fq};
pub use mpoly::MPoly;
pub use newton::{newton_polygon, NewtonPoint, PolyOverK, Segment};
pub use residue::{FieldElement, ResidueField};
pub use series::{LaurentSeries, LocalField, DEFAULT_PRECISION, INF};
