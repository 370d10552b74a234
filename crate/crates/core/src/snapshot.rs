//! Versioned binary snapshots of a built oracle together with its graph.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! magic "DSORACLE" | version u32 = 1 | section*
//! section = tag [u8; 4] | length u64 | payload
//! ```
//!
//! Sections: `HEAD` (kind and build parameters), `GRPH` (edge list), `VCNT`
//! (vicinity lists), `PIVS` (pivots and closest-pivot data), then `PTAB`
//! (pivot rows, near-exact) or `TZSO` (Thorup–Zwick data, hierarchy).
//! Readers skip sections with unknown tags. Writing is deterministic: equal
//! oracles produce equal bytes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::bound::{DistanceOracle, StretchBound};
use crate::error::{ParamError, SnapshotError};
use crate::graph::{Graph, TreeEntry, VertexId, Weight};
use crate::hierarchy::HierarchyOracle;
use crate::near_exact::NearExactOracle;
use crate::params::Epsilon;
use crate::pivots::{ClosestPivot, PivotScheme, PivotTable};
use crate::tz::TzOracle;
use crate::vicinity::VicinityIndex;

pub const MAGIC: &[u8; 8] = b"DSORACLE";
pub const VERSION: u32 = 1;

pub const TAG_HEAD: [u8; 4] = *b"HEAD";
pub const TAG_GRAPH: [u8; 4] = *b"GRPH";
pub const TAG_VICINITY: [u8; 4] = *b"VCNT";
pub const TAG_PIVOTS: [u8; 4] = *b"PIVS";
pub const TAG_PIVOT_TABLE: [u8; 4] = *b"PTAB";
pub const TAG_TZ: [u8; 4] = *b"TZSO";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    NearExact,
    Hierarchy,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::NearExact => "near-exact",
            OracleKind::Hierarchy => "hierarchy",
        })
    }
}

impl FromStr for OracleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "near-exact" => Ok(OracleKind::NearExact),
            "hierarchy" => Ok(OracleKind::Hierarchy),
            _ => Err(format!("unknown oracle kind {s:?}; expected near-exact or hierarchy")),
        }
    }
}

/// Everything needed to rebuild an oracle from its graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildParams {
    pub kind: OracleKind,
    pub k_cut: usize,
    pub epsilon: Epsilon,
    /// Hierarchy depth; ignored by the near-exact oracle.
    pub k: usize,
    pub sampling_c: f64,
    pub seed: u64,
}

#[derive(Debug)]
pub enum AnyOracle {
    NearExact(NearExactOracle),
    Hierarchy(HierarchyOracle),
}

impl AnyOracle {
    pub fn build(g: &Graph, p: &BuildParams) -> Result<Self, ParamError> {
        Ok(match p.kind {
            OracleKind::NearExact => {
                AnyOracle::NearExact(NearExactOracle::build(g, p.k_cut, p.epsilon, p.sampling_c, p.seed)?)
            }
            OracleKind::Hierarchy => AnyOracle::Hierarchy(HierarchyOracle::build(
                g,
                p.k_cut,
                p.k,
                p.epsilon,
                p.sampling_c,
                p.seed,
            )?),
        })
    }

    pub fn kind(&self) -> OracleKind {
        match self {
            AnyOracle::NearExact(_) => OracleKind::NearExact,
            AnyOracle::Hierarchy(_) => OracleKind::Hierarchy,
        }
    }

    pub fn as_dyn(&self) -> &dyn DistanceOracle {
        match self {
            AnyOracle::NearExact(o) => o,
            AnyOracle::Hierarchy(o) => o,
        }
    }

    /// Work counter for one query: list entries relaxed by the near-exact
    /// oracle, pair-scan size for the hierarchy oracle.
    pub fn query_with_work(&self, s: VertexId, t: VertexId) -> (Weight, u64) {
        match self {
            AnyOracle::NearExact(o) => {
                let a = o.query_detailed(s, t);
                (a.distance, a.relaxations)
            }
            AnyOracle::Hierarchy(o) => {
                let a = o.query_detailed(s, t);
                (a.distance, a.relaxations)
            }
        }
    }
}

impl DistanceOracle for AnyOracle {
    fn n(&self) -> usize {
        self.as_dyn().n()
    }

    fn query(&self, s: VertexId, t: VertexId) -> Weight {
        self.as_dyn().query(s, t)
    }

    fn stretch(&self) -> StretchBound {
        self.as_dyn().stretch()
    }

    fn query_all(&self) -> Vec<Weight> {
        self.as_dyn().query_all()
    }
}

/// A graph and an oracle built over it.
#[derive(Debug)]
pub struct Snapshot {
    pub graph: Graph,
    pub params: BuildParams,
    pub oracle: AnyOracle,
}

impl Snapshot {
    pub fn build(graph: Graph, params: BuildParams) -> Result<Self, ParamError> {
        let oracle = AnyOracle::build(&graph, &params)?;
        Ok(Self {
            graph,
            params,
            oracle,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        save_snapshot(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SnapshotError> {
        load_snapshot(bytes)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<(), SnapshotError> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, SnapshotError> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// Location of one section inside a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionInfo {
    pub tag: [u8; 4],
    /// Byte offset of the payload.
    pub offset: usize,
    pub len: usize,
}

impl SectionInfo {
    pub fn tag_str(&self) -> String {
        String::from_utf8_lossy(&self.tag).into_owned()
    }
}

// ---------------------------------------------------------------- writing

#[derive(Default)]
struct Out(Vec<u8>);

impl Out {
    fn u8(&mut self, x: u8) {
        self.0.push(x);
    }
    fn u32(&mut self, x: u32) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn u64(&mut self, x: u64) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn usize(&mut self, x: usize) {
        self.u64(x as u64);
    }
    fn f64(&mut self, x: f64) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
}

fn section(out: &mut Out, tag: [u8; 4], body: Out) {
    out.0.extend_from_slice(&tag);
    out.u64(body.0.len() as u64);
    out.0.extend_from_slice(&body.0);
}

fn head_section(p: &BuildParams, n: usize) -> Out {
    let mut o = Out::default();
    o.u8(match p.kind {
        OracleKind::NearExact => 0,
        OracleKind::Hierarchy => 1,
    });
    o.usize(n);
    o.usize(p.k_cut);
    match p.epsilon.as_ratio() {
        Some((num, den)) => {
            o.u8(1);
            o.u64(num);
            o.u64(den);
        }
        None => {
            o.u8(0);
            o.f64(p.epsilon.value());
        }
    }
    o.usize(p.k);
    o.f64(p.sampling_c);
    o.u64(p.seed);
    o
}

fn graph_section(g: &Graph) -> Out {
    let mut o = Out::default();
    o.usize(g.n());
    o.usize(g.m());
    for (u, v, w) in g.edges() {
        o.u32(u);
        o.u32(v);
        o.f64(w);
    }
    o
}

fn vicinity_section(idx: &VicinityIndex) -> Out {
    let mut o = Out::default();
    o.usize(idx.k_cut());
    o.usize(idx.n());
    for v in 0..idx.n() as VertexId {
        let list = idx.list(v);
        o.usize(list.len());
        for e in list {
            o.u32(e.vertex);
            o.f64(e.dist);
            o.u32(e.parent);
        }
    }
    o
}

fn pivots_section(s: &PivotScheme) -> Out {
    let mut o = Out::default();
    o.usize(s.sampled());
    o.usize(s.augmented());
    o.usize(s.len());
    for &p in s.pivots() {
        o.u32(p);
    }
    o.usize(s.closest_all().len());
    for c in s.closest_all() {
        o.u32(c.pivot);
        o.f64(c.dist);
        o.u32(c.next_hop);
    }
    o
}

fn table_section(t: &PivotTable) -> Out {
    let mut o = Out::default();
    let (dist, next) = t.raw();
    o.usize(t.rows());
    o.usize(t.n());
    for &d in dist {
        o.f64(d);
    }
    for &x in next {
        o.u32(x);
    }
    o
}

fn tz_section(tz: &TzOracle) -> Out {
    let mut o = Out::default();
    o.usize(tz.k());
    o.usize(tz.pivots().len());
    for &t in tz.top_levels() {
        o.u8(t);
    }
    for &(w, d) in tz.raw_witnesses() {
        o.u32(w);
        o.f64(d);
    }
    for bunch in tz.raw_bunches() {
        o.usize(bunch.len());
        for &(c, d) in bunch {
            o.u32(c);
            o.f64(d);
        }
    }
    o
}

pub fn save_snapshot(snap: &Snapshot) -> Vec<u8> {
    let mut out = Out::default();
    out.0.extend_from_slice(MAGIC);
    out.u32(VERSION);
    section(&mut out, TAG_HEAD, head_section(&snap.params, snap.graph.n()));
    section(&mut out, TAG_GRAPH, graph_section(&snap.graph));
    match &snap.oracle {
        AnyOracle::NearExact(o) => {
            section(&mut out, TAG_VICINITY, vicinity_section(&o.idx));
            section(&mut out, TAG_PIVOTS, pivots_section(&o.pivots));
            section(&mut out, TAG_PIVOT_TABLE, table_section(&o.table));
        }
        AnyOracle::Hierarchy(o) => {
            section(&mut out, TAG_VICINITY, vicinity_section(&o.idx));
            section(&mut out, TAG_PIVOTS, pivots_section(&o.pivots));
            section(&mut out, TAG_TZ, tz_section(&o.tz));
        }
    }
    out.0
}

// ---------------------------------------------------------------- reading

struct In<'a> {
    buf: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> In<'a> {
    fn new(buf: &'a [u8], what: &'static str) -> Self {
        Self { buf, pos: 0, what }
    }
    fn take(&mut self, len: usize) -> Result<&'a [u8], SnapshotError> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.buf.len());
        let end = end.ok_or(SnapshotError::Truncated(self.what))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8, SnapshotError> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32, SnapshotError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, SnapshotError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64, SnapshotError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    /// A count whose items need at least `item_bytes` each; rejects counts the buffer cannot hold.
    fn count(&mut self, item_bytes: usize) -> Result<usize, SnapshotError> {
        let c = self.u64()?;
        let remaining = (self.buf.len() - self.pos) as u64;
        if c.saturating_mul(item_bytes.max(1) as u64) > remaining {
            return Err(SnapshotError::Truncated(self.what));
        }
        Ok(c as usize)
    }
    fn finish(&self) -> Result<(), SnapshotError> {
        if self.pos == self.buf.len() {
            Ok(())
        } else {
            Err(malformed(format!("{} trailing bytes in {}", self.buf.len() - self.pos, self.what)))
        }
    }
}

fn malformed(msg: impl Into<String>) -> SnapshotError {
    SnapshotError::Malformed(msg.into())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), SnapshotError> {
    if cond {
        Ok(())
    } else {
        Err(malformed(msg()))
    }
}

/// Validates the preamble and lists every section in file order.
pub fn sections(bytes: &[u8]) -> Result<Vec<SectionInfo>, SnapshotError> {
    let mut r = In::new(bytes, "header");
    if r.take(MAGIC.len()).map_err(|_| SnapshotError::BadMagic)? != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(SnapshotError::UnsupportedVersion(version));
    }
    let mut out = Vec::new();
    while r.pos < bytes.len() {
        r.what = "section header";
        let tag: [u8; 4] = r.take(4)?.try_into().unwrap();
        let len = r.u64()?;
        let offset = r.pos;
        r.what = "section payload";
        let len = usize::try_from(len).map_err(|_| SnapshotError::Truncated("section payload"))?;
        r.take(len)?;
        out.push(SectionInfo { tag, offset, len });
    }
    Ok(out)
}

fn find<'a>(
    bytes: &'a [u8],
    secs: &[SectionInfo],
    tag: [u8; 4],
    name: &'static str,
) -> Result<In<'a>, SnapshotError> {
    let s = secs
        .iter()
        .find(|s| s.tag == tag)
        .ok_or(SnapshotError::MissingSection(name))?;
    Ok(In::new(&bytes[s.offset..s.offset + s.len], name))
}

fn read_head(mut r: In<'_>) -> Result<(BuildParams, usize), SnapshotError> {
    let kind = match r.u8()? {
        0 => OracleKind::NearExact,
        1 => OracleKind::Hierarchy,
        x => return Err(malformed(format!("unknown oracle kind {x}"))),
    };
    let n = r.u64()? as usize;
    let k_cut = r.u64()? as usize;
    let epsilon = match r.u8()? {
        1 => {
            let (num, den) = (r.u64()?, r.u64()?);
            Epsilon::ratio(num, den)
        }
        0 => Epsilon::new(r.f64()?),
        x => return Err(malformed(format!("unknown epsilon encoding {x}"))),
    }
    .map_err(|e| malformed(e.to_string()))?;
    let k = r.u64()? as usize;
    let sampling_c = r.f64()?;
    let seed = r.u64()?;
    r.finish()?;
    Ok((
        BuildParams {
            kind,
            k_cut,
            epsilon,
            k,
            sampling_c,
            seed,
        },
        n,
    ))
}

fn read_graph(mut r: In<'_>) -> Result<Graph, SnapshotError> {
    let n = r.u64()? as usize;
    check(n <= u32::MAX as usize, || format!("vertex count {n} too large"))?;
    let m = r.count(16)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        edges.push((r.u32()?, r.u32()?, r.f64()?));
    }
    r.finish()?;
    Graph::from_edges(n, edges).map_err(|e| SnapshotError::Graph(e.into()))
}

fn read_vicinity(mut r: In<'_>, n: usize) -> Result<VicinityIndex, SnapshotError> {
    let k_cut = r.u64()? as usize;
    let count = r.count(8)?;
    check(count == n, || format!("vicinity covers {count} vertices, graph has {n}"))?;
    let mut lists = Vec::with_capacity(n);
    for v in 0..n {
        let len = r.count(16)?;
        check(len >= 1 && len <= k_cut, || format!("list of {v} has length {len}"))?;
        let mut list = Vec::with_capacity(len);
        for pos in 0..len {
            let e = TreeEntry {
                vertex: r.u32()?,
                dist: r.f64()?,
                parent: r.u32()?,
            };
            let parent_ok = if pos == 0 {
                e.parent == crate::graph::NO_VERTEX && e.vertex as usize == v
            } else {
                (e.parent as usize) < pos
            };
            check((e.vertex as usize) < n && parent_ok, || format!("bad entry {pos} in list of {v}"))?;
            list.push(e);
        }
        lists.push(list);
    }
    r.finish()?;
    Ok(VicinityIndex::from_lists(k_cut, lists))
}

fn read_pivots(mut r: In<'_>, n: usize, p: &BuildParams) -> Result<PivotScheme, SnapshotError> {
    let sampled = r.u64()? as usize;
    let augmented = r.u64()? as usize;
    let count = r.count(4)?;
    let mut pivots = Vec::with_capacity(count);
    for _ in 0..count {
        pivots.push(r.u32()?);
    }
    check(pivots.windows(2).all(|w| w[0] < w[1]), || "pivots not strictly increasing".into())?;
    check(pivots.last().map_or(true, |&x| (x as usize) < n), || "pivot out of range".into())?;
    let cn = r.count(16)?;
    check(cn == n, || format!("closest-pivot data covers {cn} vertices, graph has {n}"))?;
    let mut closest = Vec::with_capacity(n);
    for v in 0..n {
        let c = ClosestPivot {
            pivot: r.u32()?,
            dist: r.f64()?,
            next_hop: r.u32()?,
        };
        check(pivots.binary_search(&c.pivot).is_ok(), || format!("closest pivot of {v} is not a pivot"))?;
        check(
            c.next_hop == crate::graph::NO_VERTEX || (c.next_hop as usize) < n,
            || format!("bad first hop at {v}"),
        )?;
        closest.push(c);
    }
    r.finish()?;
    Ok(PivotScheme::from_parts(pivots, closest, sampled, augmented, p.sampling_c, p.seed))
}

fn read_table(mut r: In<'_>, n: usize, rows_expected: usize) -> Result<PivotTable, SnapshotError> {
    let rows = r.u64()? as usize;
    let tn = r.u64()? as usize;
    check(rows == rows_expected && tn == n, || format!("pivot table is {rows} x {tn}"))?;
    let cells = rows
        .checked_mul(n)
        .filter(|&c| c.saturating_mul(12) <= r.buf.len())
        .ok_or(SnapshotError::Truncated("pivot table"))?;
    let mut dist = Vec::with_capacity(cells);
    for _ in 0..cells {
        dist.push(r.f64()?);
    }
    let mut next = Vec::with_capacity(cells);
    for _ in 0..cells {
        let x = r.u32()?;
        check(x == crate::graph::NO_VERTEX || (x as usize) < n, || "bad first hop in pivot table".into())?;
        next.push(x);
    }
    r.finish()?;
    Ok(PivotTable::from_parts(n, dist, next))
}

fn read_tz(mut r: In<'_>, g: &Graph, pivots: &[VertexId]) -> Result<TzOracle, SnapshotError> {
    let k = r.u64()? as usize;
    check((1..=255).contains(&k), || format!("bad hierarchy depth {k}"))?;
    let b = r.count(1)?;
    check(b == pivots.len(), || format!("sub-oracle covers {b} pivots, expected {}", pivots.len()))?;
    let mut top = Vec::with_capacity(b);
    for _ in 0..b {
        let t = r.u8()?;
        check((t as usize) < k, || format!("level {t} out of range"))?;
        top.push(t);
    }
    let wn = b.checked_mul(k).ok_or(SnapshotError::Truncated("witnesses"))?;
    check(wn.saturating_mul(12) <= r.buf.len(), || "witness table too large".into())?;
    let mut witness = Vec::with_capacity(wn);
    for _ in 0..wn {
        let w = (r.u32()?, r.f64()?);
        check(w.0 == crate::graph::NO_VERTEX || pivots.binary_search(&w.0).is_ok(), || {
            "witness is not a pivot".into()
        })?;
        witness.push(w);
    }
    let mut bunches = Vec::with_capacity(b);
    for _ in 0..b {
        let len = r.count(12)?;
        let mut bunch = Vec::with_capacity(len);
        for _ in 0..len {
            bunch.push((r.u32()?, r.f64()?));
        }
        check(bunch.windows(2).all(|w| w[0].0 < w[1].0), || "bunch not sorted".into())?;
        bunches.push(bunch);
    }
    r.finish()?;
    let component = pivots.iter().map(|&p| g.component(p)).collect();
    Ok(TzOracle::from_raw(g.n(), k, pivots.to_vec(), component, top, witness, bunches))
}

pub fn load_snapshot(bytes: &[u8]) -> Result<Snapshot, SnapshotError> {
    let secs = sections(bytes)?;
    let (params, n) = read_head(find(bytes, &secs, TAG_HEAD, "HEAD")?)?;
    let graph = read_graph(find(bytes, &secs, TAG_GRAPH, "GRPH")?)?;
    check(graph.n() == n, || format!("header says n = {n}, graph has {}", graph.n()))?;
    check(params.k_cut >= 1 && params.k_cut <= n.max(1), || format!("bad K = {}", params.k_cut))?;
    let idx = read_vicinity(find(bytes, &secs, TAG_VICINITY, "VCNT")?, n)?;
    check(idx.k_cut() == params.k_cut, || "vicinity cutoff disagrees with header".into())?;
    let pivots = read_pivots(find(bytes, &secs, TAG_PIVOTS, "PIVS")?, n, &params)?;
    let oracle = match params.kind {
        OracleKind::NearExact => {
            let table = read_table(find(bytes, &secs, TAG_PIVOT_TABLE, "PTAB")?, n, pivots.len())?;
            AnyOracle::NearExact(NearExactOracle::from_parts(
                &graph,
                params.k_cut,
                params.epsilon,
                idx,
                pivots,
                table,
            ))
        }
        OracleKind::Hierarchy => {
            let tz = read_tz(find(bytes, &secs, TAG_TZ, "TZSO")?, &graph, pivots.pivots())?;
            check(tz.k() == params.k, || "sub-oracle depth disagrees with header".into())?;
            AnyOracle::Hierarchy(HierarchyOracle::from_parts(
                &graph,
                params.k_cut,
                params.k,
                params.epsilon,
                idx,
                pivots,
                tz,
            ))
        }
    };
    Ok(Snapshot {
        graph,
        params,
        oracle,
    })
}
