//! Moments of closed walks on regular trees, computed four independent ways:
//! exact combinatorics, formal generating functions, quadrature against the
//! Kesten-McKay density and random matrix Monte Carlo.
//!
//! The tree parameter `c = d - 1` may be any positive real once the problem
//! leaves pure counting; the analytic and random matrix layers accept it as a
//! float.

pub mod combinatorics;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod randmat;
pub mod series;
pub mod spectral;

pub use poly::{MomentPolynomial, Polynomial};
pub use spectral::{ComplexPoint, KestenMcKayLaw};
