//! Multivariate polynomials over k and Buchberger Gröbner bases.

mod groebner;
mod monomial;
mod polynomial;

pub use groebner::{buchberger, buchberger_with_budget, ideal_equal, normal_form, unit_cofactor, GbBudget, GroebnerBasis};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::Poly;
