//! Boundary-to-boundary distances in a grid DAG by divide and conquer.
//!
//! A rectangle is split along its longer side; the two halves share the
//! separator line. Every path that crosses the separator touches it, so the
//! combined table is the entrywise minimum of the halves' own tables and the
//! min-plus product through the separator. That product is a column-minima
//! problem on a Monge matrix once unreachable pairs get penalties that keep
//! the Monge inequalities intact.

use crate::scalar::Scalar;

/// What traversing an edge of one direction costs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EdgeCost {
    Target,
    Free,
    Absent,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct EdgeModel {
    pub down: EdgeCost,
    pub right: EdgeCost,
    pub diagonal: EdgeCost,
}

impl EdgeModel {
    pub const ALIGNMENT: EdgeModel =
        EdgeModel { down: EdgeCost::Target, right: EdgeCost::Target, diagonal: EdgeCost::Target };
}

/// Inclusive rectangle of a grid, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Rect {
    pub r0: usize,
    pub r1: usize,
    pub c0: usize,
    pub c1: usize,
}

impl Rect {
    pub fn boundary_len(&self) -> usize {
        (self.r1 - self.r0) + (self.c1 - self.c0) + 1
    }

    fn contains(&self, r: usize, c: usize) -> bool {
        (self.r0..=self.r1).contains(&r) && (self.c0..=self.c1).contains(&c)
    }

    /// Left column bottom to top, then the top row.
    pub fn in_index(&self, r: usize, c: usize) -> Option<usize> {
        if !self.contains(r, c) {
            None
        } else if c == self.c0 {
            Some(self.r1 - r)
        } else if r == self.r0 {
            Some(self.r1 - self.r0 + c - self.c0)
        } else {
            None
        }
    }

    /// Bottom row left to right, then the right column bottom to top.
    pub fn out_index(&self, r: usize, c: usize) -> Option<usize> {
        if !self.contains(r, c) {
            None
        } else if r == self.r1 {
            Some(c - self.c0)
        } else if c == self.c1 {
            Some(self.c1 - self.c0 + self.r1 - r)
        } else {
            None
        }
    }

    pub fn in_vertex(&self, k: usize) -> (usize, usize) {
        let h = self.r1 - self.r0;
        if k <= h {
            (self.r1 - k, self.c0)
        } else {
            (self.r0, self.c0 + k - h)
        }
    }

    pub fn out_vertex(&self, k: usize) -> (usize, usize) {
        let w = self.c1 - self.c0;
        if k <= w {
            (self.r1, self.c0 + k)
        } else {
            (self.r1 - (k - w), self.c1)
        }
    }
}

/// Distances from every source to every sink of a rectangle, row-major by
/// source. Source weights are not counted. Since every engine keeps the
/// down and right edges, a sink is reachable exactly when it lies weakly
/// below and to the right of the source; other entries hold zero and are
/// never read.
pub(crate) struct Table<S> {
    pub rect: Rect,
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Table<S> {
    pub fn reachable(&self, s: usize, t: usize) -> bool {
        let (rs, cs) = self.rect.in_vertex(s);
        let (rt, ct) = self.rect.out_vertex(t);
        rt >= rs && ct >= cs
    }

    pub fn get(&self, s: usize, t: usize) -> Option<&S> {
        self.reachable(s, t).then(|| &self.data[s * self.n + t])
    }
}

enum Split {
    Row(usize),
    Col(usize),
}

pub(crate) struct GridDag<'a, S> {
    cols: usize,
    rows: usize,
    weights: &'a [S],
    model: EdgeModel,
    /// Exceeds every monotone path cost.
    slope: S,
    /// Penalty per unit of distance to the reachable range.
    big: S,
    leaf_area: usize,
}

const LEAF_AREA: usize = 4096;

impl<'a, S: Scalar> GridDag<'a, S> {
    pub fn new(rows: usize, cols: usize, weights: &'a [S], model: EdgeModel) -> Self {
        assert_eq!(weights.len(), rows * cols);
        assert!(model.down != EdgeCost::Absent && model.right != EdgeCost::Absent);
        let total = weights.iter().fold(S::zero(), |acc, w| acc + w.clone());
        let slope = total + S::from_i64(1);
        let big = slope.clone() * S::from_usize(rows + cols + 3);
        GridDag { rows, cols, weights, model, slope, big, leaf_area: LEAF_AREA }
    }

    #[cfg(test)]
    fn with_leaf_area(mut self, area: usize) -> Self {
        self.leaf_area = area.max(1);
        self
    }

    pub fn solve_full(&self) -> Table<S> {
        self.solve(Rect { r0: 0, r1: self.rows - 1, c0: 0, c1: self.cols - 1 })
    }

    fn solve(&self, rect: Rect) -> Table<S> {
        let h = rect.r1 - rect.r0 + 1;
        let w = rect.c1 - rect.c0 + 1;
        if h * w <= self.leaf_area || (h < 3 && w < 3) {
            return self.leaf(rect);
        }
        if h >= w {
            let mid = rect.r0 + (h - 1) / 2;
            let a = self.solve(Rect { r1: mid, ..rect });
            let b = self.solve(Rect { r0: mid, ..rect });
            self.combine(rect, a, b, Split::Row(mid))
        } else {
            let mid = rect.c0 + (w - 1) / 2;
            let a = self.solve(Rect { c1: mid, ..rect });
            let b = self.solve(Rect { c0: mid, ..rect });
            self.combine(rect, a, b, Split::Col(mid))
        }
    }

    /// Like [`GridDag::solve_full`], but rows of sources outside `sources`
    /// may be left unfilled when that saves work.
    pub fn solve_sources(&self, sources: std::ops::Range<usize>) -> Table<S> {
        let rect = Rect { r0: 0, r1: self.rows - 1, c0: 0, c1: self.cols - 1 };
        if self.rows * self.cols <= self.leaf_area {
            self.leaf_some(rect, sources)
        } else {
            self.solve(rect)
        }
    }

    /// One forward sweep per source.
    fn leaf(&self, rect: Rect) -> Table<S> {
        self.leaf_some(rect, 0..rect.boundary_len())
    }

    fn leaf_some(&self, rect: Rect, sources: std::ops::Range<usize>) -> Table<S> {
        let n = rect.boundary_len();
        let w = rect.c1 - rect.c0 + 1;
        let h = rect.r1 - rect.r0 + 1;
        let local: Vec<S> = (rect.r0..=rect.r1)
            .flat_map(|r| self.weights[r * self.cols + rect.c0..=r * self.cols + rect.c1].iter().cloned())
            .collect();
        let zeros = vec![S::zero(); h * w];
        let pick = |kind: EdgeCost| if kind == EdgeCost::Target { &local } else { &zeros };
        let (wd, wr, wg) = (pick(self.model.down), pick(self.model.right), pick(self.model.diagonal));
        let with_diag = self.model.diagonal != EdgeCost::Absent;

        let mut data = vec![S::zero(); n * n];
        let mut buf: Vec<S> = vec![S::zero(); h * w];
        for k in sources {
            let (rs, cs) = rect.in_vertex(k);
            let (r, c) = (rs - rect.r0, cs - rect.c0);
            let first = &mut buf[r * w..(r + 1) * w];
            first[c] = S::zero();
            for j in c + 1..w {
                first[j] = first[j - 1].clone() + wr[r * w + j].clone();
            }
            for i in r + 1..h {
                let (above, below) = buf.split_at_mut(i * w);
                let prev = &above[(i - 1) * w..];
                let cur = &mut below[..w];
                let (wd, wr, wg) = (&wd[i * w..(i + 1) * w], &wr[i * w..(i + 1) * w], &wg[i * w..(i + 1) * w]);
                cur[c] = prev[c].clone() + wd[c].clone();
                for j in c + 1..w {
                    let mut best = prev[j].clone() + wd[j].clone();
                    let left = cur[j - 1].clone() + wr[j].clone();
                    if left < best {
                        best = left;
                    }
                    if with_diag {
                        let d = prev[j - 1].clone() + wg[j].clone();
                        if d < best {
                            best = d;
                        }
                    }
                    cur[j] = best;
                }
            }
            let out = &mut data[k * n..(k + 1) * n];
            let t_hi = (w - 1) + (h - 1 - r);
            for (t, slot) in out.iter_mut().enumerate().take(t_hi + 1).skip(c) {
                let (rt, ct) = rect.out_vertex(t);
                *slot = buf[(rt - rect.r0) * w + (ct - rect.c0)].clone();
            }
        }
        Table { rect, n, data }
    }

    fn combine(&self, rect: Rect, a: Table<S>, b: Table<S>, split: Split) -> Table<S> {
        let n = rect.boundary_len();
        let sep: Vec<(usize, usize)> = match split {
            Split::Row(h) => (rect.c0..=rect.c1).map(|c| (h, c)).collect(),
            Split::Col(h) => (rect.r0..=rect.r1).rev().map(|r| (r, h)).collect(),
        };
        let a_cols: Vec<usize> = sep.iter().map(|&(r, c)| a.rect.out_index(r, c).expect("separator")).collect();
        let b_rows: Vec<usize> = sep.iter().map(|&(r, c)| b.rect.in_index(r, c).expect("separator")).collect();
        let nb = b.n;
        let b_sinks: Vec<(usize, usize)> = (0..nb).map(|t| b.rect.out_vertex(t)).collect();

        // Reachable separator range for every sink of B.
        let mut lo = vec![usize::MAX; nb];
        let mut hi = vec![0usize; nb];
        for (v, &(rv, cv)) in sep.iter().enumerate() {
            for (t, &(rt, ct)) in b_sinks.iter().enumerate() {
                if rt >= rv && ct >= cv {
                    lo[t] = lo[t].min(v);
                    hi[t] = hi[t].max(v);
                }
            }
        }
        // Unreachable entries sit in one corner; the penalty grows with the
        // distance to the reachable range and tilts with the sink index so
        // the completed matrix stays Monge.
        // Stored transposed, sink-major, so the argmin scans run along memory.
        let nv = sep.len();
        let mut pbt: Vec<S> = Vec::with_capacity(nv * nb);
        for t in 0..nb {
            for (v, &br) in b_rows.iter().enumerate() {
                pbt.push(if lo[t] == usize::MAX {
                    self.big.clone() * S::from_usize(nv + 1)
                } else if v > hi[t] {
                    self.big.clone() * S::from_usize(v - hi[t]) - self.slope.clone() * S::from_usize(t)
                } else if v < lo[t] {
                    self.big.clone() * S::from_usize(lo[t] - v) - self.slope.clone() * S::from_usize(nb - 1 - t)
                } else {
                    b.data[br * nb + t].clone()
                });
            }
        }
        let limit = self.slope.clone() + self.slope.clone();

        let out_a: Vec<Option<usize>> =
            (0..n).map(|t| rect.out_vertex(t)).map(|(r, c)| a.rect.out_index(r, c)).collect();
        let out_b: Vec<Option<usize>> =
            (0..n).map(|t| rect.out_vertex(t)).map(|(r, c)| b.rect.out_index(r, c)).collect();
        let src_a: Vec<Option<usize>> = (0..n).map(|k| rect.in_vertex(k)).map(|(r, c)| a.rect.in_index(r, c)).collect();
        let src_b: Vec<Option<usize>> = (0..n).map(|k| rect.in_vertex(k)).map(|(r, c)| b.rect.in_index(r, c)).collect();

        // Sources inside A form a contiguous run. Their rows against the
        // separator get the same corner penalties as B, so the argmin of the
        // product moves monotonically in both the source and the sink.
        let ka0 = src_a.iter().position(Option::is_some).unwrap_or(n);
        let na = src_a[ka0..].iter().take_while(|x| x.is_some()).count();
        let mut alo = vec![usize::MAX; nv];
        let mut ahi = vec![0usize; nv];
        for i in 0..na {
            let (rs, cs) = rect.in_vertex(ka0 + i);
            for (v, &(rv, cv)) in sep.iter().enumerate() {
                if rv >= rs && cv >= cs {
                    alo[v] = alo[v].min(i);
                    ahi[v] = ahi[v].max(i);
                }
            }
        }
        let mut pa: Vec<S> = Vec::with_capacity(na * nv);
        for i in 0..na {
            let ia = src_a[ka0 + i].expect("source in A");
            let row = &a.data[ia * a.n..(ia + 1) * a.n];
            for v in 0..nv {
                pa.push(if alo[v] == usize::MAX {
                    self.big.clone() * S::from_usize(na + 1)
                } else if i > ahi[v] {
                    self.big.clone() * S::from_usize(i - ahi[v]) - self.slope.clone() * S::from_usize(v)
                } else if i < alo[v] {
                    self.big.clone() * S::from_usize(alo[v] - i) - self.slope.clone() * S::from_usize(nv - 1 - v)
                } else {
                    row[a_cols[v]].clone()
                });
            }
        }

        // The product row of each A source is min over v of pa[i][v] + pb[v][t];
        // the leftmost argmin is bounded by its neighbours along the
        // anti-diagonal, so sources are processed in order.
        let mut opt_prev = vec![0usize; nb];
        let mut opt_cur = vec![0usize; nb];
        let mut prow: Vec<S> = vec![S::zero(); nb];

        let mut data = vec![S::zero(); n * n];
        for k in 0..n {
            let (rs, cs) = rect.in_vertex(k);
            let ia = src_a[k];
            let ib = src_b[k];
            if ia.is_some() {
                let i = k - ka0;
                let arow = &pa[i * nv..(i + 1) * nv];
                for t in (0..nb).rev() {
                    let lo = if i == 0 { 0 } else { opt_prev[t] };
                    let hi = if t + 1 == nb { nv - 1 } else { opt_cur[t + 1] };
                    let col = &pbt[t * nv..(t + 1) * nv];
                    let mut best_v = lo;
                    let mut best = arow[lo].clone() + col[lo].clone();
                    for v in lo + 1..=hi {
                        let x = arow[v].clone() + col[v].clone();
                        if x < best {
                            best = x;
                            best_v = v;
                        }
                    }
                    opt_cur[t] = best_v;
                    prow[t] = best;
                }
                std::mem::swap(&mut opt_prev, &mut opt_cur);
            }
            let prow = ia.map(|_| &prow[..]);
            let arow = ia.map(|i| &a.data[i * a.n..(i + 1) * a.n]);
            let brow = ib.map(|i| &b.data[i * nb..(i + 1) * nb]);
            // Reachable sinks are a contiguous run of the output order.
            let t_lo = cs - rect.c0;
            let t_hi = (rect.c1 - rect.c0) + (rect.r1 - rs);
            let row = &mut data[k * n..(k + 1) * n];
            for t in t_lo..=t_hi {
                let mut best: Option<S> = None;
                if let Some(tb) = out_b[t] {
                    if let Some(br) = brow {
                        best = Some(br[tb].clone());
                    }
                    if let Some(pr) = prow {
                        let v = &pr[tb];
                        if *v < limit && best.as_ref().is_none_or(|b| v < b) {
                            best = Some(v.clone());
                        }
                    }
                }
                if let (Some(ta), Some(ar)) = (out_a[t], arow) {
                    let v = &ar[ta];
                    if best.as_ref().is_none_or(|b| v < b) {
                        best = Some(v.clone());
                    }
                }
                row[t] = best.expect("a reachable sink has a route");
            }
        }
        Table { rect, n, data }
    }
}
