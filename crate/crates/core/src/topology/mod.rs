//! Integer homology, fundamental-group presentations, finite-space cores and
//! homotopy certificates for posets.

mod finite_spaces;
mod homology;
mod pi1;
mod snf;

pub use finite_spaces::{
    cor_quillen_condition2_check, homotopy_equivalent_certificate, quillen_b_check, stong_core,
    HypothesisVerdict, Status,
};
pub(crate) use homology::{collapse_faces, homology_of_faces};
pub use homology::{chains, homology, homology_collapsed, poset_homology, HomologySummary};
pub use pi1::{abelianization, edge_path_presentation, AbelianGroup, GroupPresentation, Letter};
pub use snf::{invariant_factors, smith_normal_form, IntegerMatrix};
