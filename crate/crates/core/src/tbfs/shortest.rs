use std::collections::HashMap;

use crate::graph::{TemporalGraph, Time, VertexAppearance};

use super::{
    appearances_by_node, earliest_arrival, source_record, target_set, AppearanceRecord, PathEngine,
    PathOptimality, PredEntry, Scope, TargetSet, TbfsResult,
};

/// Hop-layered BFS over vertex appearances.
///
/// Appearance `(w, t')` is a successor of `(v, t)` for every edge `(v, w, t')`
/// with `t' > t`. Edges later than `time_limit` are ignored. With `stop_at`
/// set, the search finishes the first layer that contains an appearance of
/// that node and does not expand it.
fn layered_bfs(
    graph: &TemporalGraph,
    source: usize,
    time_limit: Time,
    stop_at: Option<usize>,
) -> Vec<AppearanceRecord> {
    let mut records = vec![source_record(source)];
    let mut index: HashMap<VertexAppearance, usize> = HashMap::new();
    index.insert(records[0].appearance, 0);

    let mut layer = vec![0usize];
    let mut hops = 0u32;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &x in &layer {
            let VertexAppearance { node, time } = records[x].appearance;
            for &e in graph.out_edges_after(node, time) {
                let edge = graph.edge(e);
                if edge.time > time_limit {
                    break;
                }
                let key = VertexAppearance::new(edge.dst, edge.time);
                match index.get(&key) {
                    Some(&y) => {
                        if records[y].hops == hops + 1 {
                            let add = records[x].sigma.clone();
                            records[y].sigma += add;
                            records[y]
                                .predecessors
                                .push(PredEntry { record: x, edge: e });
                        }
                    }
                    None => {
                        let y = records.len();
                        records.push(AppearanceRecord {
                            appearance: key,
                            hops: hops + 1,
                            sigma: records[x].sigma.clone(),
                            predecessors: vec![PredEntry { record: x, edge: e }],
                        });
                        index.insert(key, y);
                        next.push(y);
                    }
                }
            }
        }
        next.sort_by_key(|&y| records[y].appearance);
        hops += 1;
        if let Some(z) = stop_at {
            if next.iter().any(|&y| records[y].appearance.node == z) {
                break;
            }
        }
        layer = next;
    }
    records
}

fn shortest_targets(records: &[AppearanceRecord], ids: &[usize]) -> Vec<usize> {
    let Some(best) = ids.iter().map(|&i| records[i].hops).min() else {
        return Vec::new();
    };
    ids.iter()
        .copied()
        .filter(|&i| records[i].hops == best)
        .collect()
}

fn foremost_target(records: &[AppearanceRecord], ids: &[usize]) -> Vec<usize> {
    ids.iter()
        .copied()
        .min_by_key(|&i| records[i].appearance.time)
        .into_iter()
        .collect()
}

/// Shortest temporal paths: minimum hops over every arrival time.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShortestEngine;

impl PathEngine for ShortestEngine {
    fn optimality(&self) -> PathOptimality {
        PathOptimality::Shortest
    }

    fn full(&self, graph: &TemporalGraph, source: usize) -> TbfsResult {
        let n = graph.node_count();
        let records = layered_bfs(graph, source, Time::MAX, None);
        let by_node = appearances_by_node(n, &records);
        let per_target = (0..n)
            .map(|z| {
                if z == source {
                    TargetSet::default()
                } else {
                    target_set(&records, shortest_targets(&records, &by_node[z]))
                }
            })
            .collect();
        TbfsResult::new(
            source,
            PathOptimality::Shortest,
            Scope::Full,
            records,
            per_target,
        )
    }

    fn truncated(&self, graph: &TemporalGraph, source: usize, target: usize) -> TbfsResult {
        let n = graph.node_count();
        let records = layered_bfs(graph, source, Time::MAX, Some(target));
        let by_node = appearances_by_node(n, &records);
        let mut per_target = vec![TargetSet::default(); n];
        per_target[target] = target_set(&records, shortest_targets(&records, &by_node[target]));
        TbfsResult::new(
            source,
            PathOptimality::Shortest,
            Scope::Pair(target),
            records,
            per_target,
        )
    }
}

/// Shortest-foremost paths: minimum hops among paths arriving at the
/// earliest reachable time.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShortestForemostEngine;

impl PathEngine for ShortestForemostEngine {
    fn optimality(&self) -> PathOptimality {
        PathOptimality::ShortestForemost
    }

    fn full(&self, graph: &TemporalGraph, source: usize) -> TbfsResult {
        let n = graph.node_count();
        let records = layered_bfs(graph, source, Time::MAX, None);
        let by_node = appearances_by_node(n, &records);
        let per_target = (0..n)
            .map(|z| {
                if z == source {
                    TargetSet::default()
                } else {
                    target_set(&records, foremost_target(&records, &by_node[z]))
                }
            })
            .collect();
        TbfsResult::new(
            source,
            PathOptimality::ShortestForemost,
            Scope::Full,
            records,
            per_target,
        )
    }

    fn truncated(&self, graph: &TemporalGraph, source: usize, target: usize) -> TbfsResult {
        let n = graph.node_count();
        let arrival = earliest_arrival(graph, source, Some(target));
        let mut per_target = vec![TargetSet::default(); n];
        let records = match arrival[target] {
            Some(t_star) => {
                let records = layered_bfs(graph, source, t_star, Some(target));
                let by_node = appearances_by_node(n, &records);
                per_target[target] =
                    target_set(&records, foremost_target(&records, &by_node[target]));
                records
            }
            None => vec![source_record(source)],
        };
        TbfsResult::new(
            source,
            PathOptimality::ShortestForemost,
            Scope::Pair(target),
            records,
            per_target,
        )
    }
}
