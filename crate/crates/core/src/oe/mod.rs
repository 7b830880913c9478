//! Continuous orbit equivalence `(φ, a, b)` and graph orbit equivalence
//! `(φ, k, l, k′, l′)` for homeomorphisms given by finite prefix rules, with
//! validators and translations in both directions.

mod cocycle;
pub mod examples;
mod homeo;
mod json;
mod translate;

pub use cocycle::{coe_check, derive_cocycle, generators, CocycleEntry, CocycleFailure, CoeReport, Cocycle};
pub use json::OeFile;
pub use homeo::{validate_homeo, GraphIso, HomeoReport, PrefixHomeo};
pub use translate::{coe_to_oe, oe_check, oe_to_coe, LocallyConstant, OeData, OeFailure, OeReport, OeToCoe};
