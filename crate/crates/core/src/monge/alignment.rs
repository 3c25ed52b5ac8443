//! The alignment graph of two point sequences: vertices are index pairs,
//! edges step down, right or diagonally, and every edge costs the ground
//! distance at its target vertex.

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::metric::{Point, PointDistance};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentGraph<S> {
    rows: usize,
    cols: usize,
    weights: Vec<S>,
}

/// Edge directions of the alignment graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Down,
    Right,
    Diagonal,
}

impl<S: Scalar> AlignmentGraph<S> {
    /// Graph over `p x q`; row `r` belongs to `p[r]`, column `c` to `q[c]`.
    pub fn from_points<D: PointDistance<S> + ?Sized>(p: &[Point<S>], q: &[Point<S>], metric: &D) -> Result<Self> {
        if p.is_empty() || q.is_empty() {
            return Err(Error::EmptyCurve);
        }
        metric.validate()?;
        let dim = p[0].dim();
        if let Some(bad) = p.iter().chain(q).find(|x| x.dim() != dim) {
            return Err(Error::Dimension { expected: dim, found: bad.dim() });
        }
        let mut weights = Vec::with_capacity(p.len() * q.len());
        for a in p {
            for b in q {
                weights.push(metric.eval(a, b));
            }
        }
        Ok(AlignmentGraph { rows: p.len(), cols: q.len(), weights })
    }

    pub fn from_curves<D: PointDistance<S> + ?Sized>(p: &Curve<S>, q: &Curve<S>, metric: &D) -> Result<Self> {
        Self::from_points(p.points(), q.points(), metric)
    }

    /// Builds a graph from a row-major grid of vertex weights.
    pub fn from_weights(rows: usize, cols: usize, weights: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyCurve);
        }
        if weights.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: weights.len() });
        }
        Ok(AlignmentGraph { rows, cols, weights })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major vertex weights.
    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Ground distance at a 0-based vertex.
    pub fn weight(&self, r: usize, c: usize) -> &S {
        &self.weights[r * self.cols + c]
    }

    /// Target of a step from `(r, c)`, if it stays inside the grid.
    pub fn step(&self, (r, c): (usize, usize), step: Step) -> Option<(usize, usize)> {
        let (nr, nc) = match step {
            Step::Down => (r + 1, c),
            Step::Right => (r, c + 1),
            Step::Diagonal => (r + 1, c + 1),
        };
        (nr < self.rows && nc < self.cols).then_some((nr, nc))
    }

    /// Every edge as `(from, to, weight)`.
    pub fn edges(&self) -> Vec<((usize, usize), (usize, usize), S)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                for step in [Step::Down, Step::Right, Step::Diagonal] {
                    if let Some(t) = self.step((r, c), step) {
                        out.push(((r, c), t, self.weight(t.0, t.1).clone()));
                    }
                }
            }
        }
        out
    }

    /// Sum of all edge weights; a vertex counts once per incoming edge.
    pub fn total_edge_weight(&self) -> S {
        let mut total = S::zero();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let indeg = usize::from(r > 0) + usize::from(c > 0) + usize::from(r > 0 && c > 0);
                if indeg > 0 {
                    total = total + self.weight(r, c).clone() * S::from_usize(indeg);
                }
            }
        }
        total
    }

    /// Sum of vertex weights, an upper bound on any monotone path cost.
    pub fn total_vertex_weight(&self) -> S {
        self.weights.iter().fold(S::zero(), |acc, w| acc + w.clone())
    }

    /// Flips the row order.
    pub(crate) fn flipped_rows(&self) -> Vec<S> {
        (0..self.rows).rev().flat_map(|r| self.weights[r * self.cols..(r + 1) * self.cols].iter().cloned()).collect()
    }

    /// Flips the column order.
    pub(crate) fn flipped_cols(&self) -> Vec<S> {
        (0..self.rows).flat_map(|r| self.weights[r * self.cols..(r + 1) * self.cols].iter().rev().cloned()).collect()
    }
}

/// Boundary sources, left column bottom to top then the rest of the top
/// row left to right. 0-based local coordinates.
pub fn source_vertex(rows: usize, cols: usize, k: usize) -> (usize, usize) {
    debug_assert!(k < rows + cols - 1);
    if k < rows {
        (rows - 1 - k, 0)
    } else {
        (0, k - rows + 1)
    }
}

/// Boundary sinks, bottom row left to right then the rest of the right
/// column bottom to top.
pub fn sink_vertex(rows: usize, cols: usize, k: usize) -> (usize, usize) {
    debug_assert!(k < rows + cols - 1);
    if k < cols {
        (rows - 1, k)
    } else {
        (rows - 1 - (k - cols + 1), cols - 1)
    }
}

pub fn source_index(rows: usize, cols: usize, (r, c): (usize, usize)) -> Option<usize> {
    if r >= rows || c >= cols {
        None
    } else if c == 0 {
        Some(rows - 1 - r)
    } else if r == 0 {
        Some(rows - 1 + c)
    } else {
        None
    }
}

pub fn sink_index(rows: usize, cols: usize, (r, c): (usize, usize)) -> Option<usize> {
    if r >= rows || c >= cols {
        None
    } else if r == rows - 1 {
        Some(c)
    } else if c == cols - 1 {
        Some(cols - 1 + (rows - 1 - r))
    } else {
        None
    }
}
