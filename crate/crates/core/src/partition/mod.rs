//! Partitions of a curve into contiguous subcurves of size about `m0^beta`,
//! kept within constant factors of the target under edits.

mod scheduler;

pub use scheduler::{IncrementalBuild, Ready, Rebuild, RebuildScheduler, SchedulePhase};

use crate::curve::{EditKind, Side};
use crate::error::{Error, Result};

pub type SubcurveId = u64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionConfig {
    pub beta: f64,
    pub m0: usize,
}

impl PartitionConfig {
    pub fn new(beta: f64, m0: usize) -> Result<Self> {
        if !(0.0..=0.5).contains(&beta) {
            return Err(Error::InvalidParameter(format!("beta {beta} outside [0, 0.5]")));
        }
        if m0 == 0 {
            return Err(Error::InvalidParameter("m0 must be positive".into()));
        }
        Ok(PartitionConfig { beta, m0 })
    }

    /// `m0^beta` as a real number.
    pub fn scale(&self) -> f64 {
        (self.m0 as f64).powf(self.beta)
    }

    /// `ceil(m0^beta)`, robust against `powf` landing a hair above an integer.
    pub fn target(&self) -> usize {
        ((self.scale() - 1e-9).ceil() as usize).max(1)
    }

    /// Updates allowed before a rebuild is due.
    pub fn budget(&self) -> usize {
        (self.m0 / 2).max(1)
    }
}

/// A position-independent edit: what happened at which 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditShape {
    Insert(usize),
    Delete(usize),
    Substitute(usize),
}

impl<S> From<&EditKind<S>> for EditShape {
    fn from(e: &EditKind<S>) -> Self {
        match e {
            EditKind::Insert(i, _) => EditShape::Insert(*i),
            EditKind::Delete(i) => EditShape::Delete(*i),
            EditKind::Substitute(i, _) => EditShape::Substitute(*i),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subcurve {
    pub id: SubcurveId,
    pub len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChangeKind {
    /// Contents changed; the id survives.
    Modified,
    Created,
    Removed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Change {
    pub kind: ChangeKind,
    pub id: SubcurveId,
}

/// Subcurves invalidated by one edit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChangeReport {
    pub changes: Vec<Change>,
}

impl ChangeReport {
    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    /// True when `id` was created or modified, i.e. its blocks are stale.
    pub fn invalidates(&self, id: SubcurveId) -> bool {
        self.changes.iter().any(|c| c.id == id && c.kind != ChangeKind::Removed)
    }

    fn push(&mut self, kind: ChangeKind, id: SubcurveId) {
        self.changes.push(Change { kind, id });
    }
}

#[derive(Clone, Debug)]
pub struct SubcurvePartition {
    cfg: PartitionConfig,
    target: usize,
    budget: usize,
    subs: Vec<Subcurve>,
    /// 0-based start of every subcurve.
    starts: Vec<usize>,
    len: usize,
    next_id: SubcurveId,
    updates: usize,
}

impl SubcurvePartition {
    /// Greedy chunks of `2t`; an undersized tail is merged into its
    /// predecessor, and the merge is split at its median when too long.
    pub fn new(len: usize, cfg: PartitionConfig) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyCurve);
        }
        let t = cfg.target();
        let mut sizes = Vec::new();
        let mut left = len;
        while left > 0 {
            let take = left.min(2 * t);
            sizes.push(take);
            left -= take;
        }
        if sizes.len() > 1 && *sizes.last().unwrap() < t {
            let tail = sizes.pop().unwrap();
            let merged = sizes.pop().unwrap() + tail;
            if merged > 2 * t {
                sizes.push(merged / 2);
                sizes.push(merged - merged / 2);
            } else {
                sizes.push(merged);
            }
        }
        let subs: Vec<Subcurve> =
            sizes.iter().enumerate().map(|(i, &len)| Subcurve { id: i as SubcurveId, len }).collect();
        let mut part = SubcurvePartition {
            cfg,
            target: t,
            budget: cfg.budget(),
            next_id: subs.len() as SubcurveId,
            subs,
            starts: Vec::new(),
            len,
            updates: 0,
        };
        part.reindex();
        Ok(part)
    }

    /// Overrides the update budget.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Starts fresh ids at `first`, so that ids never repeat across rebuilds.
    pub(crate) fn with_first_id(mut self, first: SubcurveId) -> Self {
        for (i, s) in self.subs.iter_mut().enumerate() {
            s.id = first + i as SubcurveId;
        }
        self.next_id = first + self.subs.len() as SubcurveId;
        self
    }

    pub(crate) fn next_id(&self) -> SubcurveId {
        self.next_id
    }

    pub fn config(&self) -> PartitionConfig {
        self.cfg
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn subcurves(&self) -> &[Subcurve] {
        &self.subs
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.subs.iter().map(|s| s.len).collect()
    }

    pub fn updates_since_rebuild(&self) -> usize {
        self.updates
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// 1-based inclusive index range of subcurve `k`.
    pub fn range(&self, k: usize) -> (usize, usize) {
        (self.starts[k] + 1, self.starts[k] + self.subs[k].len)
    }

    /// 1-based last index of every subcurve.
    pub fn cut_points(&self) -> Vec<usize> {
        (0..self.subs.len()).map(|k| self.range(k).1).collect()
    }

    /// Subcurve holding the 1-based `index`.
    pub fn locate(&self, index: usize) -> Option<usize> {
        if index == 0 || index > self.len {
            return None;
        }
        Some(self.starts.partition_point(|&s| s < index) - 1)
    }

    fn reindex(&mut self) {
        self.starts.clear();
        let mut at = 0;
        for s in &self.subs {
            self.starts.push(at);
            at += s.len;
        }
        debug_assert_eq!(at, self.len);
    }

    fn fresh_id(&mut self) -> SubcurveId {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// Splits subcurve `k` at its median if it exceeds `2t`.
    fn maybe_split(&mut self, k: usize, report: &mut ChangeReport) {
        let len = self.subs[k].len;
        if len > 2 * self.target {
            let id = self.fresh_id();
            self.subs[k].len = len / 2;
            self.subs.insert(k + 1, Subcurve { id, len: len - len / 2 });
            report.push(ChangeKind::Created, id);
        }
    }

    pub fn update<S>(&mut self, edit: &EditKind<S>) -> Result<ChangeReport> {
        self.apply(EditShape::from(edit))
    }

    /// Applies one edit. Fails with [`Error::RebuildRequired`] once the
    /// budget is spent, leaving the partition untouched.
    pub fn apply(&mut self, edit: EditShape) -> Result<ChangeReport> {
        if self.updates >= self.budget {
            return Err(Error::RebuildRequired);
        }
        let mut report = ChangeReport::default();
        match edit {
            EditShape::Insert(i) => {
                if i == 0 || i > self.len + 1 {
                    return Err(Error::Index { index: i, len: self.len });
                }
                // Joins its successor's subcurve, or the last one at the end.
                let k = self.locate(i).unwrap_or(self.subs.len() - 1);
                self.subs[k].len += 1;
                self.len += 1;
                report.push(ChangeKind::Modified, self.subs[k].id);
                self.maybe_split(k, &mut report);
            }
            EditShape::Delete(i) => {
                let k = self.locate(i).ok_or(Error::Index { index: i, len: self.len })?;
                if self.len == 1 {
                    return Err(Error::EmptyCurve);
                }
                self.subs[k].len -= 1;
                self.len -= 1;
                if (self.subs[k].len as f64) < 0.5 * self.cfg.scale() && self.subs.len() > 1 {
                    let gone = self.subs.remove(k);
                    let j = if k > 0 { k - 1 } else { 0 };
                    self.subs[j].len += gone.len;
                    report.push(ChangeKind::Removed, gone.id);
                    report.push(ChangeKind::Modified, self.subs[j].id);
                    self.maybe_split(j, &mut report);
                } else {
                    report.push(ChangeKind::Modified, self.subs[k].id);
                }
            }
            EditShape::Substitute(i) => {
                let k = self.locate(i).ok_or(Error::Index { index: i, len: self.len })?;
                report.push(ChangeKind::Modified, self.subs[k].id);
            }
        }
        self.updates += 1;
        self.reindex();
        Ok(report)
    }

    /// Structural consistency; returns a description of the first problem.
    pub fn check(&self) -> std::result::Result<(), String> {
        let total: usize = self.subs.iter().map(|s| s.len).sum();
        if total != self.len {
            return Err(format!("sizes sum to {total}, length is {}", self.len));
        }
        if self.subs.iter().any(|s| s.len == 0) {
            return Err("empty subcurve".into());
        }
        let cuts = self.cut_points();
        if cuts.windows(2).any(|w| w[0] >= w[1]) || cuts.last() != Some(&self.len) {
            return Err(format!("bad cut points {cuts:?}"));
        }
        for idx in 1..=self.len {
            let k = self.locate(idx).unwrap();
            let (a, b) = self.range(k);
            if idx < a || idx > b {
                return Err(format!("index {idx} located in {k} = [{a}, {b}]"));
            }
        }
        let mut ids: Vec<SubcurveId> = self.subs.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.subs.len() {
            return Err("duplicate subcurve ids".into());
        }
        Ok(())
    }

    /// Whether every size lies in `[m^beta / 4, 4 m^beta]`.
    pub fn sizes_within(&self, m: usize) -> bool {
        if self.subs.len() == 1 {
            // A single subcurve may be undersized when the whole curve is.
            return true;
        }
        let x = (m as f64).powf(self.cfg.beta);
        self.subs.iter().all(|s| (s.len as f64) >= 0.25 * x && (s.len as f64) <= 4.0 * x)
    }
}

/// Partitions of both curves sharing one `m0`, the shorter length at the
/// last rebuild. Taking the shorter curve makes the roles of `P` and `Q`
/// interchangeable.
#[derive(Clone, Debug)]
pub struct PartitionPair {
    pub p: SubcurvePartition,
    pub q: SubcurvePartition,
}

impl PartitionPair {
    pub fn new(n: usize, m: usize, beta: f64) -> Result<Self> {
        Self::with_first_id(n, m, beta, 0)
    }

    pub(crate) fn with_first_id(n: usize, m: usize, beta: f64, first: SubcurveId) -> Result<Self> {
        let cfg = PartitionConfig::new(beta, n.min(m).max(1))?;
        let p = SubcurvePartition::new(n, cfg)?.with_first_id(first);
        let q = SubcurvePartition::new(m, cfg)?.with_first_id(p.next_id());
        Ok(PartitionPair { p, q })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.p.budget = budget;
        self.q.budget = budget;
        self
    }

    pub fn m0(&self) -> usize {
        self.p.cfg.m0
    }

    pub fn side(&self, side: Side) -> &SubcurvePartition {
        match side {
            Side::P => &self.p,
            Side::Q => &self.q,
        }
    }

    /// Applies an edit to one side. The budget counts edits to both sides.
    pub fn apply(&mut self, side: Side, edit: EditShape) -> Result<ChangeReport> {
        if self.p.updates + self.q.updates >= self.p.budget {
            return Err(Error::RebuildRequired);
        }
        match side {
            Side::P => self.p.apply(edit),
            Side::Q => self.q.apply(edit),
        }
    }

    pub fn updates_since_rebuild(&self) -> usize {
        self.p.updates + self.q.updates
    }

    pub(crate) fn next_id(&self) -> SubcurveId {
        self.q.next_id.max(self.p.next_id)
    }
}

/// Partition maintenance on its own, for scheduling experiments.
impl Rebuild for PartitionPair {
    type Edit = (Side, EditShape);
    type Report = ChangeReport;
    type Builder = Ready<PartitionPair>;

    fn snapshot(&self) -> Self::Builder {
        let beta = self.p.cfg.beta;
        let fresh =
            PartitionPair::with_first_id(self.p.len, self.q.len, beta, self.next_id()).expect("lengths stay positive");
        let budget = fresh.m0() + 8;
        Ready(fresh.with_budget(budget))
    }

    fn apply(&mut self, edit: &Self::Edit) -> Result<ChangeReport> {
        PartitionPair::apply(self, edit.0, edit.1)
    }

    fn scale(&self) -> usize {
        self.m0()
    }
}

pub fn init_partition<S: crate::scalar::Scalar>(
    curve: &crate::curve::Curve<S>,
    cfg: PartitionConfig,
) -> Result<SubcurvePartition> {
    SubcurvePartition::new(curve.len(), cfg)
}
