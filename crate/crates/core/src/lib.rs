//! Exact computations around the lower central series of surface groups.

pub mod assoc;
pub mod cli;
pub mod enveloping;
pub mod error;
pub mod free_lie;
pub mod int_linalg;
pub mod nilpotent_group;
pub mod sp_rep;
pub mod surface_lie;
pub mod torelli_h1;

pub use error::{Error, Result};
