//! Exact shortest-path distances on road networks whose edge weights change.
//!
//! The index combines a balanced separator tree over the vertices (used to
//! answer queries), a shortcut graph over valley paths of that tree (used to
//! propagate weight changes) and a 2-hop labelling. Queries scan two label
//! prefixes. Weight increases and decreases are repaired incrementally,
//! either sequentially or with label columns spread over worker threads.
//!
//! ```
//! use dhl_core::{fixtures, BuildConfig, DynamicIndex, Execution, UpdateBatch, WeightUpdate};
//!
//! let graph = fixtures::sample_network();
//! let mut index = DynamicIndex::build(graph, &BuildConfig::default()).unwrap();
//! let (a, b) = (fixtures::v(2), fixtures::v(9));
//! assert_eq!(index.query(a, b).unwrap(), 4);
//!
//! let batch = UpdateBatch::new(vec![WeightUpdate::new(fixtures::v(8), fixtures::v(9), 10)]);
//! index.apply_batch(&batch, Execution::Sequential).unwrap();
//! assert_eq!(index.query(a, b).unwrap(), 8);
//! ```

pub mod dimacs;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod graph;
pub mod hierarchy_q;
pub mod hierarchy_u;
pub mod index;
pub mod index_file;
pub mod labelling;
pub mod maintenance;
pub mod oracle;
pub mod synth;
pub mod workload;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{
    Coordinates, Distance, Graph, UpdateBatch, VertexId, Weight, WeightUpdate, INFINITY,
};
pub use hierarchy_q::{build_query_hierarchy, PartitionConfig, QueryHierarchy};
pub use hierarchy_u::UpdateHierarchy;
pub use index::{BuildConfig, DynamicIndex, Metadata};
pub use labelling::Labelling;
pub use maintenance::MaintenanceReport;
