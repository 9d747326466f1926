use crate::error::{Error, Result};
use crate::exec::{map_collect, Execution};
use crate::graph::{apply_batch_weights, Distance, Graph, UpdateBatch, VertexId};
use crate::hierarchy_q::{build_query_hierarchy, PartitionConfig, QueryHierarchy};
use crate::hierarchy_u::UpdateHierarchy;
use crate::labelling::{LabelStats, Labelling};
use crate::maintenance::{maintain_decrease, maintain_increase, IndexParts, MaintenanceReport};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub seed: u64,
    pub dataset: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildConfig {
    pub partition: PartitionConfig,
    pub execution: Execution,
    pub meta: Metadata,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            partition: PartitionConfig::default(),
            execution: Execution::Sequential,
            meta: Metadata::default(),
        }
    }
}

/// Graph, both hierarchies and the labelling, kept consistent under
/// edge-weight updates.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicIndex {
    graph: Graph,
    hq: QueryHierarchy,
    hu: UpdateHierarchy,
    labels: Labelling,
    meta: Metadata,
}

impl DynamicIndex {
    pub fn build(graph: Graph, config: &BuildConfig) -> Result<Self> {
        let partition = PartitionConfig {
            execution: config.execution,
            ..config.partition
        };
        let hq = build_query_hierarchy(&graph, &partition)?;
        Self::with_hierarchy(graph, hq, config.execution, config.meta.clone())
    }

    /// Builds shortcuts and labels over a given query hierarchy.
    pub fn with_hierarchy(
        graph: Graph,
        hq: QueryHierarchy,
        execution: Execution,
        meta: Metadata,
    ) -> Result<Self> {
        hq.check_separator(&graph)?;
        let hu = UpdateHierarchy::build(&graph, &hq)?;
        let labels = Labelling::build(&hq, &hu, execution);
        Ok(Self {
            graph,
            hq,
            hu,
            labels,
            meta,
        })
    }

    pub fn from_parts(
        graph: Graph,
        hq: QueryHierarchy,
        hu: UpdateHierarchy,
        labels: Labelling,
        meta: Metadata,
    ) -> Result<Self> {
        let n = graph.num_vertices();
        if hq.num_vertices() != n || hu.num_vertices() != n || labels.offsets().len() != n + 1 {
            return Err(Error::Format(
                "sections disagree on the vertex count".into(),
            ));
        }
        Ok(Self {
            graph,
            hq,
            hu,
            labels,
            meta,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn query_hierarchy(&self) -> &QueryHierarchy {
        &self.hq
    }

    pub fn update_hierarchy(&self) -> &UpdateHierarchy {
        &self.hu
    }

    pub fn labels(&self) -> &Labelling {
        &self.labels
    }

    /// Direct label access, e.g. to inject faults in tests.
    pub fn labels_mut(&mut self) -> &mut Labelling {
        &mut self.labels
    }

    pub fn metadata(&self) -> &Metadata {
        &self.meta
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn query(&self, s: VertexId, t: VertexId) -> Result<Distance> {
        self.graph.check_vertex(s)?;
        self.graph.check_vertex(t)?;
        Ok(self.labels.query(&self.hq, s, t))
    }

    /// Like [`DynamicIndex::query`] without bounds checks beyond slicing.
    #[inline]
    pub fn query_unchecked(&self, s: VertexId, t: VertexId) -> Distance {
        self.labels.query(&self.hq, s, t)
    }

    /// Answers many queries, optionally spread over workers. Results follow
    /// input order.
    pub fn query_batch(
        &self,
        pairs: &[(VertexId, VertexId)],
        execution: Execution,
    ) -> Result<Vec<Distance>> {
        for &(s, t) in pairs {
            self.graph.check_vertex(s)?;
            self.graph.check_vertex(t)?;
        }
        Ok(execution.install(|| {
            map_collect(execution.is_parallel(), pairs, |&(s, t)| {
                self.query_unchecked(s, t)
            })
        }))
    }

    pub fn label_entry(&self, v: VertexId, i: usize) -> Result<Distance> {
        self.graph.check_vertex(v)?;
        self.labels.entry(v, i)
    }

    pub fn label_stats(&self) -> LabelStats {
        self.labels.stats()
    }

    /// Applies a mixed batch: increases first, then decreases, each followed
    /// by its maintenance pass. A batch naming a non-edge is rejected before
    /// anything changes.
    pub fn apply_batch(
        &mut self,
        batch: &UpdateBatch,
        execution: Execution,
    ) -> Result<MaintenanceReport> {
        let classified = self.graph.classify(batch)?;
        let mut report = MaintenanceReport::default();
        if !classified.increases.is_empty() {
            self.graph.apply_updates(&classified.increases)?;
            let r = maintain_increase(self.parts(), &classified.increases, execution)?;
            report.merge(&r);
        }
        if !classified.decreases.is_empty() {
            self.graph.apply_updates(&classified.decreases)?;
            let r = maintain_decrease(self.parts(), &classified.decreases, execution)?;
            report.merge(&r);
        }
        Ok(report)
    }

    fn parts(&mut self) -> IndexParts<'_> {
        IndexParts {
            graph: &self.graph,
            hq: &self.hq,
            hu: &mut self.hu,
            labels: &mut self.labels,
        }
    }

    /// Shortcuts and labels computed from scratch on the current graph.
    pub fn rebuilt(&self) -> Result<(UpdateHierarchy, Labelling)> {
        let hu = UpdateHierarchy::build(&self.graph, &self.hq)?;
        let labels = Labelling::build(&self.hq, &hu, Execution::Sequential);
        Ok((hu, labels))
    }

    /// Rebuilds shortcuts and labels in place.
    pub fn rebuild(&mut self, execution: Execution) -> Result<()> {
        self.hu = UpdateHierarchy::build(&self.graph, &self.hq)?;
        self.labels = Labelling::build(&self.hq, &self.hu, execution);
        Ok(())
    }
}

/// Updates a bare graph, e.g. to derive the expected state for a batch.
pub fn apply_to_graph(graph: &mut Graph, batch: &UpdateBatch) -> Result<()> {
    apply_batch_weights(graph, batch).map(|_| ())
}
