//! List Ramsey numbers of small graphs and hypergraphs: exact search,
//! constructive witnesses, decompositions and bound evaluation.

pub mod bounds;
pub mod canon;
pub mod cert;
pub mod coloring;
pub mod decomp;
pub mod hypergraph;
pub mod io;
pub mod listcolor;
pub mod matching;
pub mod mono;
pub mod solver;
pub mod witness;

pub use coloring::{verify_list_coloring, Color, EdgeColoring, ListAssignment};
pub use hypergraph::{complete_hypergraph, families, GraphError, Hypergraph};
pub use mono::find_monochromatic;
pub use solver::{SearchBudget, SearchOutcome};
