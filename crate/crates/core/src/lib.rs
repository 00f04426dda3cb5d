//! Strategies for an optimizer playing repeated matrix games against
//! learning algorithms.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod battery;
pub mod error;
pub mod frank_wolfe;
pub mod game;
pub mod io;
pub mod learners;
pub mod lp;
pub mod matrix;
pub mod ocdp;
pub mod planner;
pub mod softmax;

pub use error::{Error, Result};
pub use game::BimatrixGame;
pub use matrix::{Matrix, SimplexVector};
