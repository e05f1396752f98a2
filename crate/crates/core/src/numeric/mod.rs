//! Numerical building blocks shared by the special functions, phase
//! computations and the samplers.

pub mod gamma;
pub mod jet;
pub mod quad;
pub mod rng;
pub mod roots;

pub use jet::Jet;
