//! Geometric sources of Stokes stratified spaces: sign stratifications of
//! polyhedra and circles of directions of irregular classes.

mod circle;
mod comparison;
mod irregular;
pub mod lp;
mod polyhedral;

pub use circle::{angle_label, circle_space, circle_space_over, level_filtration, CircleSpace, DeckAction};
pub use comparison::{
    common_grading, from_stokes_matrices, local_system_monodromy, random_stokes_data, to_stokes_matrices,
    StokesData,
};
pub use irregular::{compare_at, cos_pi_sign, reduce_mod, stokes_directions, IrregularClass, PuiseuxExponential, Term};
pub use polyhedral::{
    interval_space, is_realized, polyhedral_space, realized_sign_vectors, sign_label, sign_poset, AffineForm,
    CriterionVerdict, PolyhedralFiber, PolyhedralSpace, Polyhedron, Sign, SignVector,
};
