//! Computation with finite monoids and their right acts: purity of subacts,
//! pure closures, relative injectivity classes, and preenvelopes.

pub mod algebra;
pub mod catalog;
pub mod classes;
pub mod enumeration;
pub mod equations;
mod error;
pub mod fixtures;
pub mod preenvelope;
pub mod purity;

pub use error::{Error, Result};
