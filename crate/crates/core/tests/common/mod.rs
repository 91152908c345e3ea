//! Generators and brute-force oracles shared by the integration suites.
//! The oracles deliberately avoid the library's own graph code paths.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::index;
use rand::Rng;
use subjectnet::corpus::SLOTS;
use subjectnet::{Corpus, PaperRecord, SpanningTree, SubjectId, WeightedGraph};

pub fn sid(code: u8) -> SubjectId {
    SubjectId::new(code).unwrap()
}

/// Random valid corpus with up to `max_records` papers. Subjects are drawn
/// from the first `pool` codes so that small corpora still get dense
/// networks.
pub fn random_corpus<R: Rng>(rng: &mut R, max_records: usize, pool: usize) -> Corpus {
    let n = rng.random_range(0..=max_records);
    let records = (0..n)
        .map(|i| {
            let (w, m) = loop {
                let w = rng.random_range(0..4u32);
                let m = rng.random_range(0..4u32);
                if w + m > 0 {
                    break (w, m);
                }
            };
            let k = rng.random_range(0..=SLOTS.min(pool));
            let subjects: Vec<SubjectId> = index::sample(rng, pool, k)
                .into_iter()
                .map(|i| sid(i as u8 + 1))
                .collect();
            let year = rng.random_range(2010..=2015u16);
            PaperRecord::with_subjects(format!("p{i:04}"), year, w, m, &subjects).unwrap()
        })
        .collect();
    Corpus::new(records).unwrap()
}

/// Pairwise co-occurrence counts computed straight from the records.
pub fn cooccurrence_oracle<'a>(
    records: impl IntoIterator<Item = &'a PaperRecord>,
) -> BTreeMap<(u8, u8), u32> {
    let records: Vec<&PaperRecord> = records.into_iter().collect();
    let mut out = BTreeMap::new();
    for i in 1..=29u8 {
        for j in i + 1..=29u8 {
            let count = records
                .iter()
                .filter(|r| r.has_extra(sid(i)) && r.has_extra(sid(j)))
                .count() as u32;
            if count > 0 {
                out.insert((i, j), count);
            }
        }
    }
    out
}

/// Random connected graph on labels `0..n`: a random tree plus extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: u32, max_weight: u32) -> WeightedGraph<u32> {
    let mut edges = BTreeMap::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.insert((u, v), rng.random_range(1..=max_weight));
    }
    let density: f64 = rng.random_range(0.0..0.8);
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains_key(&(u, v)) && rng.random_bool(density) {
                edges.insert((u, v), rng.random_range(1..=max_weight));
            }
        }
    }
    WeightedGraph::from_edges(edges.into_iter().map(|((a, b), w)| (a, b, w))).unwrap()
}

/// Random labeled tree on `0..n` by random attachment.
pub fn random_tree<R: Rng>(rng: &mut R, n: u32) -> SpanningTree<u32> {
    let pairs: Vec<(u32, u32)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    SpanningTree::from_pairs(0..n, &pairs).unwrap()
}

fn hops(adj: &BTreeMap<u32, Vec<u32>>, start: u32) -> BTreeMap<u32, usize> {
    let mut dist = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for &v in &adj[&u] {
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(v) {
                slot.insert(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Diameter from BFS out of every node.
pub fn all_pairs_diameter(t: &SpanningTree<u32>) -> usize {
    let mut adj: BTreeMap<u32, Vec<u32>> = t.nodes().iter().map(|&n| (n, Vec::new())).collect();
    for e in t.edges() {
        adj.get_mut(&e.a).unwrap().push(e.b);
        adj.get_mut(&e.b).unwrap().push(e.a);
    }
    t.nodes()
        .iter()
        .map(|&s| hops(&adj, s).into_values().max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// Minimum total distance over every spanning tree, by enumerating all
/// `(n-1)`-edge subsets. Only for small graphs.
pub fn brute_force_mst_total(nodes: &[u32], edges: &[(u32, u32, f64)]) -> Option<f64> {
    let n = nodes.len();
    let m = edges.len();
    let k = n - 1;
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..k).collect();
    if k > m {
        return None;
    }
    loop {
        // union-find by relabeling
        let mut comp: BTreeMap<u32, u32> = nodes.iter().map(|&v| (v, v)).collect();
        let mut acyclic = true;
        for &i in &pick {
            let (a, b, _) = edges[i];
            let (ca, cb) = (comp[&a], comp[&b]);
            if ca == cb {
                acyclic = false;
                break;
            }
            for c in comp.values_mut() {
                if *c == cb {
                    *c = ca;
                }
            }
        }
        if acyclic {
            let mut ds: Vec<f64> = pick.iter().map(|&i| edges[i].2).collect();
            ds.sort_by(f64::total_cmp);
            let total: f64 = ds.into_iter().sum();
            best = Some(best.map_or(total, |b: f64| b.min(total)));
        }
        // next combination in lexicographic order
        let mut i = k;
        while i > 0 && pick[i - 1] == i - 1 + m - k {
            i -= 1;
        }
        if i == 0 {
            return best;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Connected components of the graph keeping only edges with distance
/// strictly below `cut`.
pub fn threshold_components(
    nodes: &[u32],
    edges: &[(u32, u32, f64)],
    cut: f64,
) -> BTreeSet<BTreeSet<u32>> {
    let mut comp: BTreeMap<u32, u32> = nodes.iter().map(|&v| (v, v)).collect();
    for &(a, b, d) in edges {
        if d < cut {
            let (ca, cb) = (comp[&a], comp[&b]);
            for c in comp.values_mut() {
                if *c == cb {
                    *c = ca;
                }
            }
        }
    }
    let mut groups: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for (v, c) in comp {
        groups.entry(c).or_default().insert(v);
    }
    groups.into_values().collect()
}
