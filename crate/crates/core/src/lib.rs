//! Normal arborescences in finite digraphs, plus depth-bounded checks of end
//! and horizon structure on lazily presented infinite digraph families.

pub mod arborescence;
pub mod digraph;
pub mod dot;
pub mod horizon;
pub mod jung;
pub mod lazy;

pub use arborescence::{Arborescence, ArborError};
pub use digraph::{Digraph, DirectedPath, GraphError, VertexId, VertexSet};
