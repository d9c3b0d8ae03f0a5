//! Finite posets, monotone maps, simplicial complexes and fibrations in posets.

mod map;
mod order;
mod simplicial;
mod stokes;

pub use map::{is_final, is_final_with_bound, Certification, FinalityVerdict, MonotoneMap};
pub use order::Poset;
pub use simplicial::SimplicialComplex;
pub use stokes::{FiberMap, StokesSpace, TotalPoset};
