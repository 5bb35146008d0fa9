//! Exact scalars, monomials, sparse polynomials and dense matrices.

mod field;
mod matrix;
mod monomial;
mod parse;
mod polynomial;

pub use field::{is_prime, parse_rational, Field, FieldTag, Fp};
pub use matrix::{Echelon, Matrix};
pub use monomial::Monomial;
pub use parse::parse_polynomial;
pub use polynomial::Polynomial;
