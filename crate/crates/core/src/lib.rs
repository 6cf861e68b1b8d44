pub mod acceptance;
pub mod cli;
pub mod error;
pub mod exactgeom;
pub mod filtration;
pub mod quotient;
pub mod reeb;
pub mod singularities;
pub mod valuation;

pub use error::{Error, Result};
