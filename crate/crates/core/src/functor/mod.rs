//! Vector-space-valued functors on finite posets.

mod graded;
mod hom;
mod kan;
pub mod random;
mod stokes;
mod strip;
mod vect;

pub use graded::{
    gr_p, graded, graded_on_poset, induce_from_set, induce_from_underlying, induced_map, is_split,
    is_split_dims, Graded, SplitVerdict,
};
pub use hom::{ext_dims, hom_space, iso_exists, rhom, IsoOptions, IsoSummary, IsoVerdict};
pub use kan::{lan, Lan};
pub use stokes::{comparison_map, fiber_restriction, is_cocartesian, is_stokes, CocartesianVerdict, StokesVerdict};
pub use strip::{strip_summand, Stripped};
pub use vect::{restrict, NatTransformation, VectFunctor};
