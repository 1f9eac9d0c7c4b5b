//! Exact lattice arithmetic and determinantal cubic geometry.
//!
//! The crate is organised bottom-up: [`poly`] provides rationals, sparse
//! polynomials, exact linear algebra, resultants and a multiprecision root
//! finder; the geometric modules build on it.

pub mod detgeo;
pub mod error;
pub mod fourfold;
pub mod lattice;
pub mod par;
pub mod poly;
pub mod schubert;
pub mod segre3;
pub mod surf27;

pub use error::{Error, Result};
