use crate::graph::{TemporalGraph, Time, VertexAppearance};

use super::{
    source_record, target_set, AppearanceRecord, PathEngine, PathOptimality, PredEntry, Scope,
    TargetSet, TbfsResult,
};

/// Earliest strict arrival time at every node, `Some(0)` for the source.
///
/// With `stop_at` set, the sweep ends once every edge at that node's arrival
/// time has been seen, so only that entry is guaranteed final.
pub fn earliest_arrival(
    graph: &TemporalGraph,
    source: usize,
    stop_at: Option<usize>,
) -> Vec<Option<Time>> {
    let mut arrival = vec![None; graph.node_count()];
    arrival[source] = Some(0);
    for &e in graph.edges_by_time() {
        let edge = graph.edge(e);
        if let Some(z) = stop_at {
            if matches!(arrival[z], Some(a) if edge.time > a) {
                break;
            }
        }
        if arrival[edge.dst].is_none() && matches!(arrival[edge.src], Some(a) if a < edge.time) {
            arrival[edge.dst] = Some(edge.time);
        }
    }
    arrival
}

/// Single time-ordered sweep counting prefix-foremost paths.
///
/// Each reached node has exactly one appearance, at its foremost arrival time.
/// An edge `(u, v, t)` extends a prefix-foremost path iff `u` was reached
/// strictly before `t` and `t` is the foremost arrival time at `v`.
fn sweep(
    graph: &TemporalGraph,
    source: usize,
    stop_at: Option<usize>,
) -> (Vec<AppearanceRecord>, Vec<Option<usize>>) {
    let mut records = vec![source_record(source)];
    let mut record_of: Vec<Option<usize>> = vec![None; graph.node_count()];
    record_of[source] = Some(0);

    for &e in graph.edges_by_time() {
        let edge = graph.edge(e);
        if let Some(z) = stop_at {
            if matches!(record_of[z], Some(r) if edge.time > records[r].appearance.time) {
                break;
            }
        }
        if edge.dst == source {
            continue;
        }
        let Some(u) = record_of[edge.src] else {
            continue;
        };
        if records[u].appearance.time >= edge.time {
            continue;
        }
        match record_of[edge.dst] {
            None => {
                let hops = records[u].hops + 1;
                let sigma = records[u].sigma.clone();
                record_of[edge.dst] = Some(records.len());
                records.push(AppearanceRecord {
                    appearance: VertexAppearance::new(edge.dst, edge.time),
                    hops,
                    sigma,
                    predecessors: vec![PredEntry { record: u, edge: e }],
                });
            }
            Some(v) if records[v].appearance.time == edge.time => {
                let add = records[u].sigma.clone();
                let hops = records[u].hops + 1;
                let rec = &mut records[v];
                rec.sigma += add;
                rec.hops = rec.hops.min(hops);
                rec.predecessors.push(PredEntry { record: u, edge: e });
            }
            Some(_) => {}
        }
    }
    (records, record_of)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PrefixForemostEngine;

impl PathEngine for PrefixForemostEngine {
    fn optimality(&self) -> PathOptimality {
        PathOptimality::PrefixForemost
    }

    fn full(&self, graph: &TemporalGraph, source: usize) -> TbfsResult {
        let (records, record_of) = sweep(graph, source, None);
        let per_target = record_of
            .iter()
            .enumerate()
            .map(|(z, r)| match r {
                Some(r) if z != source => target_set(&records, vec![*r]),
                _ => TargetSet::default(),
            })
            .collect();
        TbfsResult::new(
            source,
            PathOptimality::PrefixForemost,
            Scope::Full,
            records,
            per_target,
        )
    }

    fn truncated(&self, graph: &TemporalGraph, source: usize, target: usize) -> TbfsResult {
        let (records, record_of) = sweep(graph, source, Some(target));
        let mut per_target = vec![TargetSet::default(); graph.node_count()];
        if let Some(r) = record_of[target] {
            per_target[target] = target_set(&records, vec![r]);
        }
        TbfsResult::new(
            source,
            PathOptimality::PrefixForemost,
            Scope::Pair(target),
            records,
            per_target,
        )
    }
}
