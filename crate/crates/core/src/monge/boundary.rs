//! Boundary distance matrices of alignment graphs.
//!
//! Pairs that no monotone path connects would break the Monge property, so
//! the table stores distances in an augmented graph `G+W` where every edge
//! also exists reversed at cost `W`, with `W` larger than the total edge
//! weight. An entry below `W` is the true distance; anything else encodes
//! infinity.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::alignment::{sink_index, sink_vertex, source_vertex, AlignmentGraph};
use super::grid::{EdgeCost, EdgeModel, GridDag};
use crate::scalar::{Dist, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryDistanceMatrix<S> {
    rows: usize,
    cols: usize,
    threshold: S,
    table: Vec<S>,
}

/// How boundary tables are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BuildStrategy {
    /// Divide and conquer with monotone min-plus merges, `O(k^2 log k)` for a
    /// `k x k` block.
    #[default]
    DivideConquer,
    /// One Dijkstra run over `G+W` per source.
    Dijkstra,
}

impl<S: Scalar> BoundaryDistanceMatrix<S> {
    /// Number of sources, which equals the number of sinks.
    pub fn len(&self) -> usize {
        self.rows + self.cols - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The `W` of `G+W`.
    pub fn threshold(&self) -> &S {
        &self.threshold
    }

    /// Stored `G+W` distance from source `s` to sink `t`.
    pub fn get(&self, s: usize, t: usize) -> &S {
        &self.table[s * self.len() + t]
    }

    /// Distance in the alignment graph itself.
    pub fn recover(&self, s: usize, t: usize) -> Dist<S> {
        let v = self.get(s, t);
        if *v < self.threshold {
            Dist::Finite(v.clone())
        } else {
            Dist::Infinity
        }
    }

    pub fn source_vertex(&self, s: usize) -> (usize, usize) {
        source_vertex(self.rows, self.cols, s)
    }

    pub fn sink_vertex(&self, t: usize) -> (usize, usize) {
        sink_vertex(self.rows, self.cols, t)
    }

    pub fn entries(&self) -> usize {
        self.table.len()
    }

    /// Count of adjacent 2x2 minors violating the Monge inequality.
    pub fn monge_violations(&self) -> usize {
        super::smawk::monge_violations(self.len(), self.len(), |i, j| self.get(i, j).clone(), |a, b| a <= b)
    }
}

pub fn build_boundary_matrix<S: Scalar>(g: &AlignmentGraph<S>, strategy: BuildStrategy) -> BoundaryDistanceMatrix<S> {
    match strategy {
        BuildStrategy::DivideConquer => build_divide_conquer(g),
        BuildStrategy::Dijkstra => build_dijkstra(g),
    }
}

fn threshold_of<S: Scalar>(g: &AlignmentGraph<S>) -> S {
    (g.total_edge_weight() + S::from_i64(1)).stable_threshold()
}

/// Runs one grid solve for reachable pairs and two more on mirrored grids
/// for the pairs that need backward edges. From a left-column source to a
/// higher right-column sink the cheapest `G+W` path climbs with reversed
/// down edges and otherwise moves right; the top-row case mirrors it with
/// reversed right edges and downward moves.
fn build_divide_conquer<S: Scalar>(g: &AlignmentGraph<S>) -> BoundaryDistanceMatrix<S> {
    let (rows, cols) = (g.rows(), g.cols());
    let w = threshold_of(g);
    let len = rows + cols - 1;
    let direct = GridDag::new(rows, cols, g.weights(), EdgeModel::ALIGNMENT).solve_full();

    let climb = (rows > 1).then(|| {
        let flipped = g.flipped_rows();
        let model = EdgeModel { down: EdgeCost::Free, right: EdgeCost::Target, diagonal: EdgeCost::Absent };
        GridDag::new(rows, cols, &flipped, model).solve_sources(0..rows)
    });
    let sweep_left = (cols > 1).then(|| {
        let flipped = g.flipped_cols();
        let model = EdgeModel { down: EdgeCost::Target, right: EdgeCost::Free, diagonal: EdgeCost::Absent };
        GridDag::new(rows, cols, &flipped, model).solve_sources(rows - 1..len)
    });

    let mut table = Vec::with_capacity(len * len);
    for s in 0..len {
        let (rs, cs) = source_vertex(rows, cols, s);
        for t in 0..len {
            let (rt, ct) = sink_vertex(rows, cols, t);
            // Both orders coincide with the grid's own boundary order.
            if let Some(v) = direct.get(s, t) {
                table.push(v.clone());
                continue;
            }
            let v = if cs == 0 && ct == cols - 1 && rt < rs {
                let h = climb.as_ref().expect("rows > 1");
                let fs = h.rect.in_index(rows - 1 - rs, 0).unwrap();
                let ft = h.rect.out_index(rows - 1 - rt, cols - 1).unwrap();
                let base = h.get(fs, ft).expect("staircase exists").clone();
                w.clone() * S::from_usize(rs - rt) + base
            } else {
                debug_assert!(rs == 0 && rt == rows - 1 && ct < cs);
                let h = sweep_left.as_ref().expect("cols > 1");
                let fs = h.rect.in_index(0, cols - 1 - cs).unwrap();
                let ft = h.rect.out_index(rows - 1, cols - 1 - ct).unwrap();
                let base = h.get(fs, ft).expect("staircase exists").clone();
                w.clone() * S::from_usize(cs - ct) + base
            };
            table.push(v);
        }
    }
    BoundaryDistanceMatrix { rows, cols, threshold: w, table }
}

/// Dijkstra over `G+W`, one run per source.
fn build_dijkstra<S: Scalar>(g: &AlignmentGraph<S>) -> BoundaryDistanceMatrix<S> {
    let (rows, cols) = (g.rows(), g.cols());
    let w = threshold_of(g);
    let len = rows + cols - 1;
    let nv = rows * cols;
    let mut adj: Vec<Vec<(usize, S)>> = vec![Vec::new(); nv];
    for (a, b, wt) in g.edges() {
        let (ia, ib) = (a.0 * cols + a.1, b.0 * cols + b.1);
        adj[ia].push((ib, wt));
        adj[ib].push((ia, w.clone()));
    }
    let mut table = vec![S::zero(); len * len];
    let mut dist: Vec<Option<S>> = vec![None; nv];
    let mut done = vec![false; nv];
    for s in 0..len {
        dist.iter_mut().for_each(|d| *d = None);
        done.iter_mut().for_each(|d| *d = false);
        let (rs, cs) = source_vertex(rows, cols, s);
        let src = rs * cols + cs;
        dist[src] = Some(S::zero());
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((S::zero(), src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for (v, wt) in &adj[u] {
                let cand = d.clone() + wt.clone();
                if dist[*v].as_ref().is_none_or(|cur| cand < *cur) {
                    dist[*v] = Some(cand.clone());
                    heap.push(Reverse((cand, *v)));
                }
            }
        }
        for (u, d) in dist.iter().enumerate() {
            if let Some(t) = sink_index(rows, cols, (u / cols, u % cols)) {
                table[s * len + t] = d.clone().expect("G+W is strongly connected");
            }
        }
    }
    BoundaryDistanceMatrix { rows, cols, threshold: w, table }
}
