//! Exact linear algebra over the rationals.

mod complex;
mod matrix;

pub use complex::CochainComplex;
pub use matrix::{format_q, parse_q, q, q_frac, Cokernel, QMatrix, Q};
