//! Airy and Bessel functions on the real line.

pub mod airy;
pub mod bessel;

pub use airy::{airy, airy_prime_zero, airy_scaled, airy_zero, AiryPair};
pub use bessel::{
    bessel_entire, bessel_entire_derivatives, bessel_entire_scaled, bessel_j, bessel_zero,
    BesselEntirePair,
};
