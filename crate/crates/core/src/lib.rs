//! Computable non-standard asymptotic analysis.
//!
//! * [`lc`]: the truncated Levi-Civita field of representatives for the
//!   asymptotic numbers `^ρC`.
//! * [`closure`]: inverses, roots, polynomial root lifting, nested intervals.
//! * [`growth`]: symbolic growth orders and the convex-ring chain.
//! * [`smooth`], [`quad`]: smooth coefficient providers and quadrature.
//! * [`asym`]: asymptotic functions in canonical series form.
//! * [`mollify`]: moment-vanishing mollifiers and the distribution embedding.
//! * [`filter`]: sequences modulo the Fréchet filter.

pub mod asym;
pub mod closure;
pub mod filter;
pub mod growth;
pub mod lc;
pub mod mollify;
pub mod quad;
pub mod smooth;
