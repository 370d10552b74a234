//! Subquadratic-space distance oracles for weighted undirected graphs.
//!
//! * [`NearExactOracle`]: `(1+ε, 2W)` stretch from K-nearest lists, sampled
//!   pivots and full pivot rows, with path reporting.
//! * [`HierarchyOracle`]: `(2k-1+ε, 4kW)` stretch, replacing the pivot rows by a
//!   Thorup–Zwick oracle over the pivots.
//! * [`ApspTable`]: the exact all-pairs table used as the reference.

pub mod apsp;
pub mod bound;
pub mod error;
pub mod graph;
pub mod harness;
pub mod hierarchy;
pub mod near_exact;
pub mod params;
pub mod pivots;
pub mod snapshot;
pub mod tz;
pub mod vicinity;

pub use apsp::ApspTable;
pub use bound::{DistanceOracle, StretchBound, Verdict, RELATIVE_TOLERANCE};
pub use error::{EdgeError, GraphError, ParamError, QueryError, SnapshotError};
pub use graph::{generate, parse_graph, write_graph, Graph, GraphBuilder, Model, VertexId, Weight};
pub use hierarchy::HierarchyOracle;
pub use near_exact::NearExactOracle;
pub use params::Epsilon;
pub use pivots::{PivotScheme, PivotTable};
pub use snapshot::{load_snapshot, save_snapshot, AnyOracle, BuildParams, OracleKind, Snapshot};
pub use tz::TzOracle;
pub use vicinity::{bounded_hop_search, HopSearch, VicinityIndex};
