pub mod cli;
pub mod error;
pub mod gaf;
pub mod intensity;
pub mod numeric;
pub mod rigidity;
pub mod spaces;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
