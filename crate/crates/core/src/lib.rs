//! Combinatorics of partial actions on graph boundary path spaces: reduced
//! words and the graph inverse semigroup, cylinder algebra on the boundary,
//! the transformation and Deaconu–Renault groupoid models, orbit equivalence
//! cocycles, paradoxical witnesses, and constructible ideals of semigroups.

pub mod boundary;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod groupoid;
pub mod oe;
pub mod paradox;
pub mod semigroup;
pub mod words;

pub use error::{Error, Result};
pub use graph::{load_graph, Card, Edge, EdgeId, EdgeInstance, Graph, Multiplicity, Path, VertexId};
