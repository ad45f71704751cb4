//! Networks of rectified power units that represent polynomials exactly,
//! plus a Legendre spectral front-end that compiles smooth functions into
//! such networks.
//!
//! The activation is `max(0, x)^s` for an integer power `s >= 2`. Because
//! `x^s`, low powers, and `x^n * y` all have exact one-hidden-layer
//! realizations, polynomials compile into networks with no approximation
//! error; projecting a smooth function onto a polynomial space and compiling
//! the projection therefore inherits the spectral approximation rates.

pub mod bivariate;
pub mod error;
pub mod monomial;
pub mod multipoly;
pub mod netcore;
pub mod oracle;
pub mod poly1d;
pub mod spectral;
mod stage;
pub mod vandermonde;

pub mod cli;

pub use error::{Error, Result};
pub use netcore::{AffineLayer, Matrix, NetStats, PowerNet};
