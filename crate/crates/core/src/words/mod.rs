//! Free-group words, the graph inverse semigroup and characters of its
//! truncated idempotent semilattice.

mod characters;
mod free;
mod sgp;

pub use characters::{
    act_on_character, boundary, characters, check_boundary_invariance, is_filter, max_characters,
    simple_witnesses, witnesses_up_to, Character, InvarianceReport, TruncatedSemilattice,
};
pub use free::{fg_inv, fg_mul, Letter, ReducedWord};
pub use sgp::{
    sgp_elements, sgp_mul, sgp_star, sigma_graph, slat_meet, verify_partial_hom, verify_partial_hom_with,
    HomFailure, PartialHomReport, SgpElement,
};
