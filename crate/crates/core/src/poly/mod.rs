//! Polynomials: dense univariate, sparse homogeneous trivariate, truncated
//! power series and Sylvester resultants.

mod homogeneous;
mod resultant;
mod series;
mod univariate;

pub use homogeneous::{HomogeneousPoly, Monomial, Var};
pub use resultant::{resultant, sylvester_matrix};
pub use series::Series;
pub use univariate::UniPoly;
