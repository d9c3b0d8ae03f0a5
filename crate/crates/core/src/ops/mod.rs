//! Operations on whole Stokes stratified spaces.

mod descent;
mod devissage;
mod elementary;
mod level;
mod sections;

pub use descent::{hybrid_descent_check, in_image_of_subfibration, restrict_to_base, DescentReport, PieceReport};
pub use devissage::{corrupt, devissage_check, DevissageReport};
pub use elementary::{certificate, is_elementary, search, ElementaryOptions, ElementaryVerdict};
pub use level::LevelStructure;
pub use sections::{sections, stokes_locus, CocartesianSection};
