//! Closedness witnesses at truncation scale: inverses, roots, polynomial
//! root lifting and finite nested-interval intersections.

mod elementary;
mod interval;
mod roots;
mod series;

pub use elementary::{cos_to, exp_to, ln_to, sin_to};
pub use interval::{nested_interval_point, LcInterval};
pub use roots::{complex_roots, poly_roots, LcPolynomial, PolyRoot};
pub use series::{divide, inverse, inverse_to, nth_root, nth_root_to, power_series, powi, sqrt};
