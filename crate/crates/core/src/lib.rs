//! Inverse optimization under the weighted span objective.
//!
//! Given a family of feasible sets, a cost vector and a chosen set `F*`, find a
//! deviation vector `p` within bounds such that `F*` is a minimum-cost member
//! under `c − p` and the weighted span `max w·p − min w·p` is as small as possible.

pub mod cli;
pub mod error;
pub mod family;
pub mod feasibility;
pub mod gen;
pub mod io;
pub mod minmax;
pub mod model;
pub mod rational;
pub mod reduce;
pub mod sets;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
