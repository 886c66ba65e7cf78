//! Exact symbolic core for Kontsevich graph calculus on Nambu–Poisson
//! brackets: differential polynomials, multivectors, graph species, graph
//! evaluation, Leibniz micro-expansion and exact linear algebra.

#![no_std]

extern crate alloc;

pub mod coeff;
pub mod diffpoly;
pub mod error;
pub mod eval;
pub mod flow;
pub mod graph;
pub mod identity;
pub mod jet;
pub mod linalg;
pub mod micro_expand;
pub mod modp;
pub mod multivector;
pub mod orient;
pub mod poly;
pub mod relations;
pub mod trivialize;

pub use coeff::Q;
pub use diffpoly::DiffPoly;
pub use error::{Error, Result};
pub use jet::{Jet, Monomial, Symbol, MAX_DIM};
pub use multivector::Multivector;
