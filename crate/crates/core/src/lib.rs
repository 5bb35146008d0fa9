//! Exact strength certificates for symmetric, alternating and ordinary
//! tensors, and the membership pipeline that bounds strength on closed sets.

pub mod error;
pub mod exactalg;
pub mod families;
pub mod format;
pub mod machinery;
pub mod multilinear;
pub mod strength;

pub use error::{Error, Result};

/// The rationals.
pub type Q = num_rational::BigRational;
pub type F2 = exactalg::Fp<2>;
pub type F3 = exactalg::Fp<3>;
pub type F5 = exactalg::Fp<5>;
pub type F7 = exactalg::Fp<7>;
