//! The boundary path space `∂E`, restricted to finite and eventually
//! periodic points, with its cylinder algebra and the partial action of the
//! free group on edges.

mod action;
mod cylinder;
mod freeness;
mod point;

pub use action::{
    act_point, act_set, admissible_words, domain, isotropy_search, partial_action_report, shift, try_act, AxiomReport,
    WordAction,
};
pub use cylinder::{difference, intersect, normalize, CompactOpen, Cylinder};
pub use freeness::{
    topological_freeness_report, topological_freeness_report_with, trivial_isotropy_point, FreenessReport,
    DEFAULT_WORD_BOUND,
};
pub use point::{points_up_to, BoundaryPoint};
