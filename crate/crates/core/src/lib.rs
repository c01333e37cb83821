//! Spectral analysis of discrete-time birth-death chains on spider graphs.
//!
//! A spider is `N` half-lines joined at one vertex. Grouping states by
//! distance from the body turns the transition matrix into a
//! block-tridiagonal operator with `N x N` blocks, and most of this crate
//! works on that block form:
//!
//! * [`chain`]: parameters, validation, blocks, truncations, potentials.
//! * [`spectral`]: matrix orthogonal polynomials and the Karlin–McGregor
//!   formula `P^n_{ij} = ∫ x^n Q_i dW Q_j^T Pi_j`.
//! * [`stieltjes`]: Stieltjes transforms, the block assembly from leg
//!   transforms, and continued-fraction convergents.
//! * [`factorization`]: reflecting-absorbing factorizations, the Darboux
//!   transform and its spectral matrix.
//! * [`spider_rw`]: closed forms for the walk with constant leg rates.
//! * [`oracle`]: truncated matrix powers and Monte Carlo simulation.

pub mod chain;
pub mod cli;
pub mod error;
pub mod factorization;
pub mod oracle;
pub mod presets;
pub mod quadrature;
pub mod spectral;
pub mod spider_rw;
pub mod stieltjes;
pub mod weight;

pub use chain::{validate, BlockOperator, BlockTriple, SpiderParams, StateIndex, ValidatedChain};
pub use error::{Error, Result};
pub use quadrature::QuadratureRule;
pub use weight::WeightMatrixSpec;
