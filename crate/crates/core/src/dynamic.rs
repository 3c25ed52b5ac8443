//! The dynamic DTW structure: both curves are cut into subcurves, every
//! pair of subcurves owns a boundary distance matrix, and a query sweeps a
//! wavefront of exact prefix distances through the block grid.
//!
//! Blocks overlap by one row and one column. Block row `a` spans the last
//! vertex of subcurve `a - 1` through the last vertex of subcurve `a`, so
//! the sinks of one block are the sources of its neighbours and the
//! wavefront is handed over without gaps.

use std::collections::HashMap;

use crate::curve::{Curve, CurveEdit, EditKind, Side};
use crate::error::{Error, Result};
use crate::metric::{Metric, PointDistance};
use crate::monge::{build_boundary_matrix, minplus_apply, AlignmentGraph, BoundaryDistanceMatrix, BuildStrategy};
use crate::partition::{
    ChangeReport, EditShape, IncrementalBuild, PartitionPair, Rebuild, RebuildScheduler, SubcurveId, SubcurvePartition,
};
use crate::scalar::{Dist, Scalar};

/// True when `DTW_DEBUG_CHECKS=1` is set.
pub fn debug_checks_from_env() -> bool {
    std::env::var("DTW_DEBUG_CHECKS").is_ok_and(|v| v == "1")
}

/// Wavefront checks against the quadratic table only run up to this size.
const DEEP_CHECK_LIMIT: usize = 48;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RebuildMode {
    /// Full rebuild once the update budget is spent.
    #[default]
    Amortized,
    /// Two copies; the rebuild is spread over many updates.
    Deamortized,
}

#[derive(Clone, Copy, Debug)]
pub struct DynamicConfig {
    pub beta: f64,
    pub mode: RebuildMode,
    pub strategy: BuildStrategy,
    /// Verifies the Monge property of every built matrix and, on small
    /// inputs, every wavefront value.
    pub debug_checks: bool,
}

impl DynamicConfig {
    pub fn new(beta: f64) -> Self {
        DynamicConfig {
            beta,
            mode: RebuildMode::default(),
            strategy: BuildStrategy::default(),
            debug_checks: debug_checks_from_env(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub blocks_built: u64,
    pub full_rebuilds: u64,
    pub monge_checked: u64,
    pub monge_violations: u64,
}

/// Rows (or columns) of the grid covered by one block row (or column),
/// 0-based inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Band {
    id: SubcurveId,
    /// Vertex shared with the previous band.
    top: Option<u64>,
    lo: usize,
    hi: usize,
}

fn bands_for(part: &SubcurvePartition, ids: &[u64]) -> Vec<Band> {
    part.subcurves()
        .iter()
        .enumerate()
        .map(|(k, sub)| {
            let (a, b) = part.range(k);
            Band { id: sub.id, top: (k > 0).then(|| ids[a - 2]), lo: if k == 0 { a - 1 } else { a - 2 }, hi: b - 1 }
        })
        .collect()
}

type Matrix<S> = BoundaryDistanceMatrix<S>;

/// One complete copy: curves, partitions and the block grid.
#[derive(Clone)]
pub struct BlockStructure<S: Scalar, D> {
    p: Curve<S>,
    q: Curve<S>,
    p_ids: Vec<u64>,
    q_ids: Vec<u64>,
    next_vertex: u64,
    metric: D,
    cfg: DynamicConfig,
    parts: PartitionPair,
    rows: Vec<Band>,
    cols: Vec<Band>,
    blocks: Vec<Vec<Matrix<S>>>,
    entries: usize,
    stats: Stats,
}

impl<S: Scalar, D: PointDistance<S> + Clone> BlockStructure<S, D> {
    fn skeleton(
        p: Curve<S>,
        q: Curve<S>,
        p_ids: Vec<u64>,
        q_ids: Vec<u64>,
        next_vertex: u64,
        metric: D,
        cfg: DynamicConfig,
        first_id: SubcurveId,
    ) -> Result<Self> {
        let mut parts = PartitionPair::with_first_id(p.len(), q.len(), cfg.beta, first_id)?;
        if cfg.mode == RebuildMode::Deamortized {
            // A copy stays active for about 17m/32 updates under the
            // two-copy schedule, beyond the amortized m/2.
            let budget = parts.m0() + 8;
            parts = parts.with_budget(budget);
        }
        let rows = bands_for(&parts.p, &p_ids);
        let cols = bands_for(&parts.q, &q_ids);
        Ok(BlockStructure {
            p,
            q,
            p_ids,
            q_ids,
            next_vertex,
            metric,
            cfg,
            parts,
            rows,
            cols,
            blocks: Vec::new(),
            entries: 0,
            stats: Stats::default(),
        })
    }

    pub fn new(p: Curve<S>, q: Curve<S>, metric: D, cfg: DynamicConfig) -> Result<Self> {
        p.ensure_nonempty()?;
        q.ensure_nonempty()?;
        metric.validate()?;
        if p.dim() != q.dim() {
            return Err(Error::Dimension { expected: p.dim(), found: q.dim() });
        }
        let (n, m) = (p.len() as u64, q.len() as u64);
        let mut s = Self::skeleton(p, q, (0..n).collect(), (n..n + m).collect(), n + m, metric, cfg, 0)?;
        s.build_all();
        Ok(s)
    }

    fn build_block(&mut self, a: usize, b: usize) -> Matrix<S> {
        let (r, c) = (self.rows[a], self.cols[b]);
        let g = AlignmentGraph::from_points(&self.p.points()[r.lo..=r.hi], &self.q.points()[c.lo..=c.hi], &self.metric)
            .expect("validated curves");
        let m = build_boundary_matrix(&g, self.cfg.strategy);
        self.stats.blocks_built += 1;
        self.entries += m.entries();
        if self.cfg.debug_checks {
            self.stats.monge_checked += 1;
            self.stats.monge_violations += m.monge_violations() as u64;
        }
        m
    }

    fn drop_block(&mut self, m: &Matrix<S>) {
        self.entries -= m.entries();
    }

    fn build_all(&mut self) {
        self.entries = 0;
        self.blocks = Vec::with_capacity(self.rows.len());
        for a in 0..self.rows.len() {
            let row = (0..self.cols.len()).map(|b| self.build_block(a, b)).collect();
            self.blocks.push(row);
        }
    }

    fn rebuild_all(&mut self) -> Result<()> {
        let first = self.parts.next_id();
        let stats = self.stats;
        let fresh = Self::skeleton(
            self.p.clone(),
            self.q.clone(),
            std::mem::take(&mut self.p_ids),
            std::mem::take(&mut self.q_ids),
            self.next_vertex,
            self.metric.clone(),
            self.cfg,
            first,
        )?;
        *self = fresh;
        self.stats = stats;
        self.stats.full_rebuilds += 1;
        self.build_all();
        Ok(())
    }

    pub fn p(&self) -> &Curve<S> {
        &self.p
    }

    pub fn q(&self) -> &Curve<S> {
        &self.q
    }

    pub fn partitions(&self) -> &PartitionPair {
        &self.parts
    }

    /// Block grid dimensions.
    pub fn grid(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    /// Matrix entries currently held, tracked incrementally.
    pub fn stored_entries(&self) -> usize {
        self.entries
    }

    /// Recounts matrix entries from the grid itself.
    pub fn recount_entries(&self) -> usize {
        self.blocks.iter().flatten().map(Matrix::entries).sum()
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    fn validate(&self, edit: &CurveEdit<S>) -> Result<()> {
        let curve = match edit.side {
            Side::P => &self.p,
            Side::Q => &self.q,
        };
        let len = curve.len();
        let (index, point, limit) = match &edit.kind {
            EditKind::Insert(i, x) => (*i, Some(x), len + 1),
            EditKind::Delete(i) => (*i, None, len),
            EditKind::Substitute(i, x) => (*i, Some(x), len),
        };
        if index == 0 || index > limit {
            return Err(Error::Index { index, len });
        }
        if let Some(x) = point {
            if x.dim() != curve.dim() {
                return Err(Error::Dimension { expected: curve.dim(), found: x.dim() });
            }
        }
        if matches!(edit.kind, EditKind::Delete(_)) && len == 1 {
            return Err(Error::EmptyCurve);
        }
        Ok(())
    }

    /// Applies one edit and rebuilds the blocks it invalidated. Returns the
    /// partition report; it is empty after a full rebuild.
    pub fn apply_edit(&mut self, edit: &CurveEdit<S>) -> Result<ChangeReport> {
        self.validate(edit)?;
        let outcome = self.parts.apply(edit.side, EditShape::from(&edit.kind));
        if let Err(e) = &outcome {
            if *e != Error::RebuildRequired {
                return Err(e.clone());
            }
        }
        let fresh = self.next_vertex;
        self.next_vertex += 1;
        let (curve, ids) = match edit.side {
            Side::P => (&mut self.p, &mut self.p_ids),
            Side::Q => (&mut self.q, &mut self.q_ids),
        };
        curve.apply(&edit.kind)?;
        match &edit.kind {
            EditKind::Insert(i, _) => ids.insert(i - 1, fresh),
            EditKind::Delete(i) => {
                ids.remove(i - 1);
            }
            EditKind::Substitute(i, _) => ids[i - 1] = fresh,
        }
        match outcome {
            Ok(report) => {
                self.refresh(edit.side, &report);
                Ok(report)
            }
            Err(_) => {
                self.rebuild_all()?;
                Ok(ChangeReport::default())
            }
        }
    }

    /// Rebuilds every block whose band is new, changed, or now shares a
    /// different vertex with its predecessor.
    fn refresh(&mut self, side: Side, report: &ChangeReport) {
        let (part, ids, old) = match side {
            Side::P => (&self.parts.p, &self.p_ids, &self.rows),
            Side::Q => (&self.parts.q, &self.q_ids, &self.cols),
        };
        let bands = bands_for(part, ids);
        let index: HashMap<(SubcurveId, Option<u64>), usize> =
            old.iter().enumerate().map(|(i, b)| ((b.id, b.top), i)).collect();
        let source: Vec<Option<usize>> = bands
            .iter()
            .map(|b| if report.invalidates(b.id) { None } else { index.get(&(b.id, b.top)).copied() })
            .collect();

        let mut old_blocks: Vec<Vec<Option<Matrix<S>>>> =
            std::mem::take(&mut self.blocks).into_iter().map(|row| row.into_iter().map(Some).collect()).collect();
        match side {
            Side::P => self.rows = bands,
            Side::Q => self.cols = bands,
        }
        let (nr, nc) = (self.rows.len(), self.cols.len());
        let mut blocks = Vec::with_capacity(nr);
        for a in 0..nr {
            let mut row = Vec::with_capacity(nc);
            for b in 0..nc {
                let reuse = match side {
                    Side::P => source[a].map(|oa| (oa, b)),
                    Side::Q => source[b].map(|ob| (a, ob)),
                };
                let m = match reuse {
                    Some((oa, ob)) => old_blocks[oa][ob].take().expect("each block reused once"),
                    None => self.build_block(a, b),
                };
                row.push(m);
            }
            blocks.push(row);
        }
        for m in old_blocks.into_iter().flatten().flatten() {
            self.drop_block(&m);
        }
        self.blocks = blocks;
    }

    /// DTW of the current curves by a wavefront sweep over the block grid.
    pub fn query(&self) -> S {
        let (pp, qq) = (self.p.points(), self.q.points());
        let (n, m) = (pp.len(), qq.len());
        // Prefix distances along the first row and the first column.
        let mut first_row = Vec::with_capacity(m);
        let mut acc = S::zero();
        for y in qq {
            acc = acc + self.metric.eval(&pp[0], y);
            first_row.push(acc.clone());
        }
        let mut first_col = Vec::with_capacity(n);
        let mut acc = S::zero();
        for x in pp {
            acc = acc + self.metric.eval(x, &qq[0]);
            first_col.push(acc.clone());
        }
        let deep = self.cfg.debug_checks && n <= DEEP_CHECK_LIMIT && m <= DEEP_CHECK_LIMIT;
        let truth = deep.then(|| crate::oracle::monotone_table(&self.p, &self.q, &self.metric, (1, 1), (n, m)));

        // Wavefront pieces: the current top row of every block column and
        // the current left column of every block row.
        let mut tops: Vec<Vec<S>> = self.cols.iter().map(|c| first_row[c.lo..=c.hi].to_vec()).collect();
        let mut lefts: Vec<Vec<S>> = self.rows.iter().map(|r| first_col[r.lo..=r.hi].to_vec()).collect();
        let (nr, nc) = (self.rows.len(), self.cols.len());
        let mut x: Vec<Dist<S>> = Vec::new();
        for diag in 0..nr + nc - 1 {
            for a in diag.saturating_sub(nc - 1)..=diag.min(nr - 1) {
                let b = diag - a;
                let (rb, cb) = (self.rows[a], self.cols[b]);
                let (h, w) = (rb.hi - rb.lo, cb.hi - cb.lo);
                x.clear();
                x.extend(lefts[a].iter().rev().cloned().map(Dist::Finite));
                x.extend(tops[b][1..].iter().cloned().map(Dist::Finite));
                let y = minplus_apply(&x, &self.blocks[a][b]).expect("boundary lengths agree");
                let value = |t: usize| y[t].finite().cloned().expect("every sink is reachable");
                for (c, slot) in tops[b].iter_mut().enumerate() {
                    *slot = value(c);
                }
                for (r, slot) in lefts[a].iter_mut().enumerate() {
                    *slot = value(w + (h - r));
                }
                if let Some(t) = &truth {
                    for (c, v) in tops[b].iter().enumerate() {
                        assert_eq!(*v, t[rb.hi * m + cb.lo + c], "wavefront at ({}, {})", rb.hi, cb.lo + c);
                    }
                    for (r, v) in lefts[a].iter().enumerate() {
                        assert_eq!(*v, t[(rb.lo + r) * m + cb.hi], "wavefront at ({}, {})", rb.lo + r, cb.hi);
                    }
                }
            }
        }
        tops[nc - 1].last().cloned().expect("non-empty band")
    }
}

/// Incremental construction of a fresh copy, one block per work unit.
pub struct BlockBuilder<S: Scalar, D> {
    target: BlockStructure<S, D>,
    next: usize,
    total: usize,
}

impl<S: Scalar, D: PointDistance<S> + Clone> IncrementalBuild for BlockBuilder<S, D> {
    type Output = BlockStructure<S, D>;

    fn remaining(&self) -> usize {
        self.total - self.next
    }

    fn advance(&mut self, work: usize) {
        let nc = self.target.cols.len();
        for _ in 0..work.min(self.remaining()) {
            let (a, b) = (self.next / nc, self.next % nc);
            if b == 0 {
                self.target.blocks.push(Vec::with_capacity(nc));
            }
            let m = self.target.build_block(a, b);
            self.target.blocks[a].push(m);
            self.next += 1;
        }
    }

    fn finish(mut self) -> BlockStructure<S, D> {
        let left = self.remaining();
        self.advance(left);
        self.target
    }
}

impl<S: Scalar, D: PointDistance<S> + Clone> Rebuild for BlockStructure<S, D> {
    type Edit = CurveEdit<S>;
    type Report = ChangeReport;
    type Builder = BlockBuilder<S, D>;

    fn snapshot(&self) -> BlockBuilder<S, D> {
        let target = Self::skeleton(
            self.p.clone(),
            self.q.clone(),
            self.p_ids.clone(),
            self.q_ids.clone(),
            self.next_vertex,
            self.metric.clone(),
            self.cfg,
            self.parts.next_id(),
        )
        .expect("a live structure has valid curves");
        let total = target.rows.len() * target.cols.len();
        BlockBuilder { target, next: 0, total }
    }

    fn apply(&mut self, edit: &CurveEdit<S>) -> Result<ChangeReport> {
        self.apply_edit(edit)
    }

    fn scale(&self) -> usize {
        self.parts.m0()
    }
}

enum Engine<S: Scalar, D: PointDistance<S> + Clone> {
    Amortized(BlockStructure<S, D>),
    Deamortized(RebuildScheduler<BlockStructure<S, D>>),
}

/// DTW of two curves under insertions, deletions and substitutions.
pub struct DynamicDtw<S: Scalar, D: PointDistance<S> + Clone = Metric> {
    engine: Engine<S, D>,
}

impl<S: Scalar, D: PointDistance<S> + Clone> DynamicDtw<S, D> {
    /// Amortized structure with block size about `min(n, m)^beta`.
    pub fn new(p: Curve<S>, q: Curve<S>, metric: D, beta: f64) -> Result<Self> {
        Self::with_config(p, q, metric, DynamicConfig::new(beta))
    }

    pub fn with_config(p: Curve<S>, q: Curve<S>, metric: D, cfg: DynamicConfig) -> Result<Self> {
        let inner = BlockStructure::new(p, q, metric, cfg)?;
        let engine = match cfg.mode {
            RebuildMode::Amortized => Engine::Amortized(inner),
            RebuildMode::Deamortized => Engine::Deamortized(RebuildScheduler::new(inner)),
        };
        Ok(DynamicDtw { engine })
    }

    /// The copy that reflects every applied edit.
    pub fn active(&self) -> &BlockStructure<S, D> {
        match &self.engine {
            Engine::Amortized(s) => s,
            Engine::Deamortized(s) => s.active(),
        }
    }

    pub fn scheduler(&self) -> Option<&RebuildScheduler<BlockStructure<S, D>>> {
        match &self.engine {
            Engine::Deamortized(s) => Some(s),
            Engine::Amortized(_) => None,
        }
    }

    pub fn update(&mut self, edit: CurveEdit<S>) -> Result<ChangeReport> {
        match &mut self.engine {
            Engine::Amortized(s) => s.apply_edit(&edit),
            Engine::Deamortized(s) => {
                // Reject bad edits before they reach the queue.
                s.active().validate(&edit)?;
                s.step(edit)
            }
        }
    }

    pub fn query(&self) -> S {
        self.active().query()
    }

    pub fn p(&self) -> &Curve<S> {
        self.active().p()
    }

    pub fn q(&self) -> &Curve<S> {
        self.active().q()
    }

    /// Matrix entries held by every live copy.
    pub fn stored_entries(&self) -> usize {
        match &self.engine {
            Engine::Amortized(s) => s.stored_entries(),
            Engine::Deamortized(s) => {
                s.active().stored_entries() + s.shadow().map_or(0, BlockStructure::stored_entries)
            }
        }
    }

    pub fn stats(&self) -> Stats {
        self.active().stats()
    }
}
