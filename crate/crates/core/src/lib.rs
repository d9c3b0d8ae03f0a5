//! Finite models of Stokes stratified spaces and Stokes functors with exact
//! rational coefficients.

pub mod error;
pub mod functor;
pub mod geometry;
pub mod json;
pub mod linalg;
pub mod ops;
pub mod par;
pub mod poset;

pub use error::{Error, Result};
