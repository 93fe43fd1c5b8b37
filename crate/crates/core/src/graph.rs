//! Temporal graph storage and edge-list I/O.
//!
//! Input is a whitespace-delimited text file with one `u v t` triple per line.
//! Lines starting with `#` or `%` are comments. Node ids are compacted to
//! `0..n` in order of first appearance and raw timestamps are replaced by
//! their 1-based rank among the distinct timestamps, so that strict temporal
//! order is preserved exactly.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};

/// Relabeled time label. `0` is reserved for the source appearance `(s, 0)`.
pub type Time = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub src: usize,
    pub dst: usize,
    pub time: Time,
}

/// A `(node, time)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAppearance {
    pub node: usize,
    pub time: Time,
}

impl VertexAppearance {
    pub fn new(node: usize, time: Time) -> Self {
        VertexAppearance { node, time }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Treat each line as a pair of opposite arcs.
    pub undirected: bool,
    /// Drop repeated `(u, v, t)` lines. Off by default: repeats are parallel edges.
    pub dedup: bool,
}

/// Counts reported by [`TemporalGraph::summarize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub lifetime: usize,
}

/// An immutable directed temporal graph.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    n: usize,
    edges: Vec<TemporalEdge>,
    lifetime: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    time_order: Vec<usize>,
    directed: bool,
    original_ids: Vec<u64>,
    raw_times: Vec<i64>,
    self_loops_dropped: usize,
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.lifetime == other.lifetime
            && self.out_adj == other.out_adj
            && self.in_adj == other.in_adj
            && self.directed == other.directed
    }
}

impl TemporalGraph {
    /// Builds a graph over nodes `0..n` from raw `(src, dst, time)` triples.
    ///
    /// Times are rank-relabeled and self-loops dropped, exactly as the loader does.
    /// With `undirected` set, each triple is stored in both orientations.
    pub fn from_edges<I>(n: usize, raw: I, undirected: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let raw: Vec<(usize, usize, i64)> = raw.into_iter().collect();
        if let Some(&(u, v, _)) = raw.iter().find(|&&(u, v, _)| u >= n || v >= n) {
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) out of range for n = {n}"
            )));
        }
        let ids = (0..n as u64).collect();
        Ok(Self::assemble(n, raw, undirected, ids))
    }

    fn assemble(
        n: usize,
        raw: Vec<(usize, usize, i64)>,
        undirected: bool,
        original_ids: Vec<u64>,
    ) -> Self {
        let total = raw.len();
        let kept: Vec<(usize, usize, i64)> = raw.into_iter().filter(|&(u, v, _)| u != v).collect();
        let self_loops_dropped = total - kept.len();

        let raw_times: Vec<i64> = kept
            .iter()
            .map(|e| e.2)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let rank =
            |t: i64| -> Time { (raw_times.binary_search(&t).expect("time present") + 1) as Time };

        let mut edges = Vec::with_capacity(if undirected {
            2 * kept.len()
        } else {
            kept.len()
        });
        for &(u, v, t) in &kept {
            let time = rank(t);
            edges.push(TemporalEdge {
                src: u,
                dst: v,
                time,
            });
            if undirected {
                edges.push(TemporalEdge {
                    src: v,
                    dst: u,
                    time,
                });
            }
        }

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out_adj[e.src].push(i);
            in_adj[e.dst].push(i);
        }
        for list in &mut out_adj {
            list.sort_by_key(|&i| (edges[i].time, edges[i].dst, i));
        }
        for list in &mut in_adj {
            list.sort_by_key(|&i| (edges[i].time, edges[i].src, i));
        }
        let mut time_order: Vec<usize> = (0..edges.len()).collect();
        time_order.sort_by_key(|&i| (edges[i].time, i));

        TemporalGraph {
            n,
            lifetime: raw_times.len(),
            edges,
            out_adj,
            in_adj,
            time_order,
            directed: !undirected,
            original_ids,
            raw_times,
            self_loops_dropped,
        }
    }

    /// Parses an edge list. See the module docs for the format.
    pub fn load<R: BufRead>(reader: R, opts: LoadOptions) -> Result<Self> {
        let mut ids: HashMap<u64, usize> = HashMap::new();
        let mut original_ids = Vec::new();
        let mut raw = Vec::new();
        let mut seen: HashSet<(u64, u64, i64)> = HashSet::new();
        let mut self_loops = 0;

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let parse_id = |s: &str| {
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("`{s}` is not a non-negative integer node id"),
                })
            };
            let u = parse_id(fields[0])?;
            let v = parse_id(fields[1])?;
            let t = fields[2].parse::<i64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("`{}` is not an integer timestamp", fields[2]),
            })?;
            if u == v {
                self_loops += 1;
                continue;
            }
            if opts.dedup && !seen.insert((u, v, t)) {
                continue;
            }
            let mut intern = |x: u64| {
                *ids.entry(x).or_insert_with(|| {
                    original_ids.push(x);
                    original_ids.len() - 1
                })
            };
            let (cu, cv) = (intern(u), intern(v));
            raw.push((cu, cv, t));
        }

        let n = original_ids.len();
        let mut g = Self::assemble(n, raw, opts.undirected, original_ids);
        g.self_loops_dropped = self_loops;
        Ok(g)
    }

    pub fn load_path(path: impl AsRef<std::path::Path>, opts: LoadOptions) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::load(std::io::BufReader::new(file), opts)
    }

    /// Writes the relabeled graph in the same text format the loader accepts.
    ///
    /// Undirected graphs are written with one line per stored pair; reload
    /// them with `undirected` set.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let step = if self.directed { 1 } else { 2 };
        for e in self.edges.iter().step_by(step) {
            writeln!(out, "{} {} {}", e.src, e.dst, e.time)?;
        }
        Ok(())
    }

    pub fn summarize(&self) -> GraphSummary {
        GraphSummary {
            nodes: self.n,
            edges: self.edges.len(),
            lifetime: self.lifetime,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn lifetime(&self) -> usize {
        self.lifetime
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> TemporalEdge {
        self.edges[index]
    }

    /// Out-edge indices of `u`, ascending by time.
    pub fn out_edges(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    /// In-edge indices of `v`, ascending by time.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Out-edges of `u` whose time is strictly greater than `t`.
    pub fn out_edges_after(&self, u: usize, t: Time) -> &[usize] {
        let list = &self.out_adj[u];
        let start = list.partition_point(|&i| self.edges[i].time <= t);
        &list[start..]
    }

    /// All edge indices sorted by time (ties in input order).
    pub fn edges_by_time(&self) -> &[usize] {
        &self.time_order
    }

    /// The id a node carried in the input file.
    pub fn original_id(&self, node: usize) -> u64 {
        self.original_ids[node]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    /// The raw timestamp a relabeled time stands for.
    pub fn raw_time(&self, time: Time) -> Option<i64> {
        (time as usize)
            .checked_sub(1)
            .and_then(|i| self.raw_times.get(i).copied())
    }
}
