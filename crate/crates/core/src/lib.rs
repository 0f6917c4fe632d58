//! Exact computational machinery for Fuchsian groups over totally real
//! number fields: trace fields, arithmeticity certificates, quaternion
//! orders, reductions onto PSL(2,q), congruence-quotient identification
//! and the trace-based conjugacy solver.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals
//! throughout, with real algebraic numbers handled by isolating intervals
//! refined on demand. No floating point is used anywhere.

pub mod error;
pub mod poly;
pub mod intpoly;
pub mod linalg;
pub mod finfld;
pub mod numfield;
pub mod galois;
pub mod psl2;
pub mod local;
pub mod fuchsian;
pub mod order;
pub mod congruence;
pub mod rigidity;
pub mod corpus;

pub use error::{Error, Result};
