//! Binary index files.
//!
//! Layout: magic `DHL1`, format version (u16), section count (u16), then
//! sections of `tag: u32, length: u64, payload, crc32(payload): u32`. All
//! integers are little-endian. Sections, in order: graph, query hierarchy,
//! update hierarchy, labelling, metadata. Nothing time-dependent is written,
//! so equal indexes serialize to equal bytes.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Coordinates, Distance, Graph, IngestReport, VertexId};
use crate::hierarchy_q::{QueryHierarchy, QueryHierarchyBuilder, Side};
use crate::hierarchy_u::UpdateHierarchy;
use crate::index::{DynamicIndex, Metadata};
use crate::labelling::Labelling;

pub const MAGIC: &[u8; 4] = b"DHL1";
pub const VERSION: u16 = 1;

const SECTIONS: [(u32, &str); 5] = [
    (1, "graph"),
    (2, "query hierarchy"),
    (3, "update hierarchy"),
    (4, "labelling"),
    (5, "metadata"),
];

#[derive(Default)]
struct Out(Vec<u8>);

impl Out {
    fn u8(&mut self, x: u8) {
        self.0.push(x);
    }
    fn u16(&mut self, x: u16) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn u32(&mut self, x: u32) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn u64(&mut self, x: u64) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn i32(&mut self, x: i32) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn f64(&mut self, x: f64) {
        self.u64(x.to_bits());
    }
    fn len(&mut self, x: usize) {
        self.u64(x as u64);
    }
}

struct In<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> In<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, at: 0 }
    }

    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(k)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Format("unexpected end of data".into()))?;
        let s = &self.buf[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }

    /// A length prefix, sanity-checked against the bytes left (each item
    /// takes at least `min_item` bytes).
    fn len(&mut self, min_item: usize) -> Result<usize> {
        let n = self.u64()?;
        let left = (self.buf.len() - self.at) as u64;
        if n.saturating_mul(min_item as u64) > left {
            return Err(Error::Format(format!(
                "length {n} exceeds the remaining data"
            )));
        }
        Ok(n as usize)
    }

    fn finish(&self, what: &str) -> Result<()> {
        if self.at != self.buf.len() {
            return Err(Error::Format(format!(
                "trailing bytes in the {what} section"
            )));
        }
        Ok(())
    }
}

fn write_graph(g: &Graph, o: &mut Out) {
    o.len(g.num_vertices());
    for &e in g.external_ids() {
        o.u64(e);
    }
    let edges: Vec<_> = g.edges().collect();
    o.len(edges.len());
    for (u, v, w) in edges {
        o.u32(u);
        o.u32(v);
        o.u64(w);
    }
    let r = g.ingest_report();
    o.u64(r.merge_conflicts);
    o.u64(r.self_loops);
    o.u64(r.merged_arcs);
    match g.coordinates() {
        None => o.u8(0),
        Some(c) => {
            o.u8(1);
            for v in 0..g.num_vertices() as VertexId {
                match c.get(v) {
                    Some((x, y)) => {
                        o.u8(1);
                        o.i32(x);
                        o.i32(y);
                    }
                    None => {
                        o.u8(0);
                        o.i32(0);
                        o.i32(0);
                    }
                }
            }
        }
    }
}

fn read_graph(i: &mut In) -> Result<Graph> {
    let n = i.len(8)?;
    let ids = (0..n).map(|_| i.u64()).collect::<Result<Vec<_>>>()?;
    let m = i.len(16)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (u, v, w) = (i.u32()?, i.u32()?, i.u64()?);
        if u >= v {
            return Err(Error::Format("edge list is not canonical".into()));
        }
        edges.push((u, v, w));
    }
    let mut g = Graph::from_arcs(n, edges)?;
    if g.num_edges() != m {
        return Err(Error::Format("duplicate edges in the graph section".into()));
    }
    g.set_external_ids(ids)?;
    g.set_ingest_report(IngestReport {
        merge_conflicts: i.u64()?,
        self_loops: i.u64()?,
        merged_arcs: i.u64()?,
    });
    if i.u8()? == 1 {
        let mut c = Coordinates::new(n);
        for v in 0..n as VertexId {
            let (present, x, y) = (i.u8()?, i.i32()?, i.i32()?);
            if present == 1 {
                c.set(v, x, y);
            }
        }
        g.set_coordinates(c)?;
    }
    Ok(g)
}

fn write_hq(hq: &QueryHierarchy, o: &mut Out) {
    o.f64(hq.beta());
    o.len(hq.leaf_size());
    o.len(hq.nodes().len());
    for node in hq.nodes() {
        o.u64(node.bits);
        o.u8(node.depth);
        o.u32(node.parent.unwrap_or(u32::MAX));
        o.len(node.members.len());
        for &m in &node.members {
            o.u32(m);
        }
    }
    o.len(hq.num_vertices());
    for v in 0..hq.num_vertices() as VertexId {
        o.u32(hq.node_of(v));
        o.u32(hq.position(v));
        o.u32(hq.tau(v));
    }
}

fn read_hq(i: &mut In) -> Result<QueryHierarchy> {
    let beta = i.f64()?;
    let leaf_size = i.len(0)?;
    let count = i.len(21)?;
    let mut nodes = Vec::with_capacity(count);
    for _ in 0..count {
        let (bits, depth, parent) = (i.u64()?, i.u8()?, i.u32()?);
        let k = i.len(4)?;
        let members = (0..k).map(|_| i.u32()).collect::<Result<Vec<_>>>()?;
        nodes.push((bits, depth, parent, members));
    }
    let n = i.len(12)?;
    let mut b = QueryHierarchyBuilder::new(n);
    for (x, (bits, depth, parent, members)) in nodes.into_iter().enumerate() {
        let id = if parent == u32::MAX {
            b.add_root(members)?
        } else {
            if parent as usize >= x || depth == 0 {
                return Err(Error::Format("tree node precedes its parent".into()));
            }
            let side = if bits >> (depth - 1) & 1 == 1 {
                Side::Right
            } else {
                Side::Left
            };
            b.add_child(parent, side, members)?
        };
        if id as usize != x {
            return Err(Error::Format("tree node ids are not sequential".into()));
        }
    }
    let hq = b.finish(beta, leaf_size)?;
    for v in 0..n as VertexId {
        let (node, pos, tau) = (i.u32()?, i.u32()?, i.u32()?);
        if (node, pos, tau) != (hq.node_of(v), hq.position(v), hq.tau(v)) {
            return Err(Error::Format(format!(
                "vertex {v} disagrees with the tree layout"
            )));
        }
    }
    Ok(hq)
}

fn write_hu(hu: &UpdateHierarchy, o: &mut Out) {
    let n = hu.num_vertices();
    o.len(n);
    for v in 0..n as VertexId {
        let (t, w) = (hu.up_targets(v), hu.up_weights(v));
        o.u32(t.len() as u32);
        for (&a, &x) in t.iter().zip(w) {
            o.u32(a);
            o.u64(x);
        }
    }
    for v in 0..n as VertexId {
        let (_, ids) = hu.down(v);
        o.u32(ids.len() as u32);
        for &id in ids {
            o.u32(id);
        }
    }
}

fn read_hu(i: &mut In, hq: &QueryHierarchy) -> Result<UpdateHierarchy> {
    let n = i.len(8)?;
    let mut lists = Vec::with_capacity(n);
    for _ in 0..n {
        let k = i.u32()? as usize;
        let mut list = Vec::with_capacity(k.min(1 << 16));
        for _ in 0..k {
            list.push((i.u32()?, i.u64()?));
        }
        lists.push(list);
    }
    let hu = UpdateHierarchy::from_upward_lists(hq, lists)?;
    for v in 0..n as VertexId {
        let k = i.u32()? as usize;
        let ids = (0..k).map(|_| i.u32()).collect::<Result<Vec<_>>>()?;
        if ids != hu.down(v).1 {
            return Err(Error::Format(format!(
                "downward list of vertex {v} is inconsistent"
            )));
        }
    }
    Ok(hu)
}

fn write_labels(l: &Labelling, o: &mut Out) {
    o.len(l.offsets().len());
    for &x in l.offsets() {
        o.u64(x);
    }
    o.len(l.entries().len());
    o.0.reserve(l.entries().len() * 8);
    for &d in l.entries() {
        o.u64(d);
    }
}

fn read_labels(i: &mut In, hq: &QueryHierarchy) -> Result<Labelling> {
    let k = i.len(8)?;
    let offsets = (0..k).map(|_| i.u64()).collect::<Result<Vec<_>>>()?;
    let m = i.len(8)?;
    let entries: Vec<Distance> = i
        .take(m * 8)?
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Labelling::from_parts(hq, offsets, entries)
}

fn write_meta(m: &Metadata, o: &mut Out) {
    o.u64(m.seed);
    o.len(m.dataset.len());
    o.0.extend_from_slice(m.dataset.as_bytes());
}

fn read_meta(i: &mut In) -> Result<Metadata> {
    let seed = i.u64()?;
    let k = i.len(1)?;
    let dataset = String::from_utf8(i.take(k)?.to_vec())
        .map_err(|_| Error::Format("dataset id is not UTF-8".into()))?;
    Ok(Metadata { seed, dataset })
}

/// Serializes the whole index to bytes.
pub fn to_bytes(index: &DynamicIndex) -> Vec<u8> {
    let mut out = Out::default();
    out.0.extend_from_slice(MAGIC);
    out.u16(VERSION);
    out.u16(SECTIONS.len() as u16);
    for (tag, _) in SECTIONS {
        let mut body = Out::default();
        match tag {
            1 => write_graph(index.graph(), &mut body),
            2 => write_hq(index.query_hierarchy(), &mut body),
            3 => write_hu(index.update_hierarchy(), &mut body),
            4 => write_labels(index.labels(), &mut body),
            _ => write_meta(index.metadata(), &mut body),
        }
        out.u32(tag);
        out.len(body.0.len());
        let crc = crc32fast::hash(&body.0);
        out.0.extend_from_slice(&body.0);
        out.u32(crc);
    }
    out.0
}

/// Parses bytes written by [`to_bytes`], verifying every checksum.
pub fn from_bytes(bytes: &[u8]) -> Result<DynamicIndex> {
    let mut i = In::new(bytes);
    if i.take(4)
        .map_err(|_| Error::Format("file too short".into()))?
        != MAGIC
    {
        return Err(Error::Format("not an index file (bad magic)".into()));
    }
    let version = i.u16()?;
    if version != VERSION {
        return Err(Error::Version {
            found: version,
            expected: VERSION,
        });
    }
    let count = i.u16()? as usize;
    if count != SECTIONS.len() {
        return Err(Error::Format(format!(
            "expected {} sections, found {count}",
            SECTIONS.len()
        )));
    }
    let mut bodies = Vec::with_capacity(count);
    for (tag, name) in SECTIONS {
        let found = i.u32()?;
        if found != tag {
            return Err(Error::Format(format!(
                "expected section {tag} ({name}), found {found}"
            )));
        }
        let len = i.len(1)?;
        let body = i.take(len)?;
        let crc = i.u32()?;
        if crc32fast::hash(body) != crc {
            return Err(Error::Checksum(name));
        }
        bodies.push(body);
    }
    i.finish("file")?;

    let mut s = In::new(bodies[0]);
    let graph = read_graph(&mut s)?;
    s.finish("graph")?;
    let mut s = In::new(bodies[1]);
    let hq = read_hq(&mut s)?;
    s.finish("query hierarchy")?;
    let mut s = In::new(bodies[2]);
    let hu = read_hu(&mut s, &hq)?;
    s.finish("update hierarchy")?;
    let mut s = In::new(bodies[3]);
    let labels = read_labels(&mut s, &hq)?;
    s.finish("labelling")?;
    let mut s = In::new(bodies[4]);
    let meta = read_meta(&mut s)?;
    s.finish("metadata")?;
    DynamicIndex::from_parts(graph, hq, hu, labels, meta)
}

pub fn save(index: &DynamicIndex, path: impl AsRef<Path>) -> Result<()> {
    let bytes = to_bytes(index);
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(&bytes)?;
    f.flush()?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<DynamicIndex> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::graph::{UpdateBatch, WeightUpdate};
    use crate::hierarchy_q::PartitionConfig;
    use crate::index::BuildConfig;

    fn small() -> DynamicIndex {
        let mut edges = Vec::new();
        for i in 0..30u32 {
            edges.push((i, (i + 1) % 30, 1 + i as u64 % 5));
            edges.push((i, (i * 7 + 2) % 30, 9));
        }
        let mut g = Graph::from_arcs(30, edges).unwrap();
        g.set_coordinates(Coordinates::from_points(
            (0..30).map(|i| (i, i * i % 17)).collect(),
        ))
        .unwrap();
        let cfg = BuildConfig {
            partition: PartitionConfig {
                leaf_size: 2,
                ..Default::default()
            },
            meta: Metadata {
                seed: 7,
                dataset: "ring".into(),
            },
            ..Default::default()
        };
        DynamicIndex::build(g, &cfg).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let idx = small();
        let bytes = to_bytes(&idx);
        let back = from_bytes(&bytes).unwrap();
        assert_eq!(back, idx);
        assert_eq!(to_bytes(&back), bytes);
    }

    #[test]
    fn corrupted_byte_fails_checksum() {
        let mut bytes = to_bytes(&small());
        let k = bytes.len() - 20;
        bytes[k] ^= 0x40;
        assert!(matches!(from_bytes(&bytes), Err(Error::Checksum(_))));
    }

    #[test]
    fn version_mismatch_rejected() {
        let mut bytes = to_bytes(&small());
        bytes[4] = 9;
        assert!(matches!(
            from_bytes(&bytes),
            Err(Error::Version { found: 9, .. })
        ));
    }

    #[test]
    fn truncated_file_rejected() {
        let bytes = to_bytes(&small());
        assert!(from_bytes(&bytes[..bytes.len() / 2]).is_err());
        assert!(from_bytes(b"DH").is_err());
    }

    #[test]
    fn infinite_weights_survive() {
        let mut idx = small();
        let (u, v, _) = idx.graph().edges().next().unwrap();
        idx.apply_batch(
            &UpdateBatch::new([WeightUpdate::new(u, v, crate::graph::INFINITY)]),
            Execution::Sequential,
        )
        .unwrap();
        let back = from_bytes(&to_bytes(&idx)).unwrap();
        assert_eq!(back, idx);
    }
}
