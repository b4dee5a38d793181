//! Exact tools for balanced linear systems `A xᵀ = 0` over finite fields.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod extend;
pub mod field;
pub mod format;
pub mod matrix;
pub mod matroid;
pub mod point;
pub mod poly;
pub mod search;
pub mod systems;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use matrix::MatrixGF;
pub use point::Point;
pub use systems::SolutionTuple;
