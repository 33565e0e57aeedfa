//! Composite Bernstein-Szegő quadrature rules.
//!
//! Two families of Bernstein-Szegő polynomials — a Chebyshev weight divided
//! by a positive trigonometric polynomial — are glued into the eigenbasis of
//! a finite Jacobi matrix whose corners carry the two families' recurrence
//! coefficients. The eigenvalues are `2 cos(xi_l)` for nodes `xi_l` solving a
//! monotone transcendental equation, and the resulting discrete
//! orthogonality yields positive Gauss/Radau/Lobatto-like rules that
//! integrate rational functions with prescribed poles exactly against the
//! Chebyshev weight functions.
//!
//! The crate is organized along the pipeline:
//!
//! - [`params`]: validated family parameters and the composite configuration;
//! - [`special`]: the closed-form kernel `u_alpha`, its antiderivative, the
//!   `c`-function with its continuous phase, weights, and the explicit
//!   polynomials `q_l`;
//! - [`gram`]: moment-based bootstrap of the finitely many polynomials below
//!   the explicit threshold and their recurrence coefficients;
//! - [`nodes`]: the safeguarded node solver with bracket certificates;
//! - [`basis`]: the composite basis, primal/dual weights, orthogonality and
//!   Christoffel-Darboux checks;
//! - [`jacobi`]: the tridiagonal operators and the characteristic polynomial;
//! - [`quadrature`]: rule assembly, classification and rational integration.

pub mod basis;
pub mod error;
pub mod gram;
pub mod jacobi;
pub mod nodes;
pub mod params;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use params::{BSFamily, CompositeConfig, HalfInt};

pub use basis::CompositeBasis;
pub use gram::PolynomialFamily;
pub use jacobi::JacobiOperator;
pub use nodes::{NodeBounds, NodeGrid};
pub use quadrature::{QuadratureRule, RationalIntegrand, RuleKind};
