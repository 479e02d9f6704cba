//! Sparse multivariate polynomials, term orders, text and JSON formats.

mod monomial;
mod polynomial;
pub mod json;
pub mod parse;

pub use json::{parse_text_system, AnySystem, SystemFile};
pub use monomial::{monomials_of_degree, monomials_up_to_degree, order_compare, Monomial, MonomialOrder};
pub use polynomial::{Polynomial, Ring, Term};
pub use parse::{parse_polynomial, print_polynomial};
