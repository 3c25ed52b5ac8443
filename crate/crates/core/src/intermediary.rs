//! The Intermediary grid problem and its gadget-curve reduction to DTW.
//!
//! Rows, columns and updates are indexed from zero here, matching the
//! problem statement. Curve vertices are 0-based in the range helpers and
//! 1-based in the emitted [`CurveEdit`]s, like every other edit.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::curve::{Curve, CurveEdit, Side};
use crate::error::{Error, Result};
use crate::metric::Point;
use crate::scalar::{Dist, Exact};

/// Points per gadget curve: eight stars, four interior points, eight stars.
pub const GADGET_LEN: usize = 20;
const STARS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntermediaryInstance {
    r: Vec<u64>,
    c: Vec<u64>,
    d: Vec<u64>,
    b: Vec<bool>,
    u: BigInt,
    sqrt_u: BigInt,
}

/// `n_r * n_c * (max d * max r * max c)^2`, which `U` must exceed.
pub fn u_lower_bound(r: &[u64], c: &[u64], d: &[u64]) -> BigInt {
    let max = |v: &[u64]| BigInt::from(v.iter().copied().max().unwrap_or(0));
    let prod = max(d) * max(r) * max(c);
    BigInt::from(r.len()) * BigInt::from(c.len()) * &prod * &prod
}

/// Smallest perfect square strictly above [`u_lower_bound`].
pub fn minimal_u(r: &[u64], c: &[u64], d: &[u64]) -> BigInt {
    let root = u_lower_bound(r, c, d).sqrt() + 1u32;
    &root * &root
}

impl IntermediaryInstance {
    pub fn new(r: Vec<u64>, c: Vec<u64>, d: Vec<u64>, b: Vec<bool>, u: BigInt) -> Result<Self> {
        if r.is_empty() || c.is_empty() {
            return Err(Error::InvalidInstance("the grid needs at least one row and one column".into()));
        }
        if d.len() != r.len() {
            return Err(Error::InvalidInstance(format!("{} weights for {} rows", d.len(), r.len())));
        }
        if b.len() != c.len() {
            return Err(Error::InvalidInstance(format!("{} booleans for {} columns", b.len(), c.len())));
        }
        let bound = u_lower_bound(&r, &c, &d);
        if u <= bound {
            return Err(Error::InvalidInstance(format!("U = {u} does not exceed {bound}")));
        }
        let sqrt_u = u.sqrt();
        if &sqrt_u * &sqrt_u != u {
            return Err(Error::InvalidInstance(format!("U = {u} is not a perfect square")));
        }
        Ok(IntermediaryInstance { r, c, d, b, u, sqrt_u })
    }

    /// An instance with the smallest admissible `U`.
    pub fn with_minimal_u(r: Vec<u64>, c: Vec<u64>, d: Vec<u64>, b: Vec<bool>) -> Result<Self> {
        let u = minimal_u(&r, &c, &d);
        Self::new(r, c, d, b, u)
    }

    pub fn n_r(&self) -> usize {
        self.r.len()
    }

    pub fn n_c(&self) -> usize {
        self.c.len()
    }

    pub fn row_ids(&self) -> &[u64] {
        &self.r
    }

    pub fn col_ids(&self) -> &[u64] {
        &self.c
    }

    pub fn weights(&self) -> &[u64] {
        &self.d
    }

    pub fn booleans(&self) -> &[bool] {
        &self.b
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn sqrt_u(&self) -> &BigInt {
        &self.sqrt_u
    }

    /// Sets `b_j := x`.
    pub fn update(&mut self, j: usize, x: bool) -> Result<()> {
        let len = self.b.len();
        let slot = self.b.get_mut(j).ok_or(Error::Index { index: j, len })?;
        *slot = x;
        Ok(())
    }

    fn diagonal(&self, i: usize, j: usize) -> BigInt {
        if self.r[i] == self.c[j] {
            BigInt::from(if self.b[j] { self.d[i] } else { 0 })
        } else {
            self.sqrt_u.clone()
        }
    }

    fn infinity_threshold(&self) -> BigInt {
        &self.u * BigInt::from(self.n_r().abs_diff(self.n_c())) + &self.sqrt_u
    }

    /// Shortest `(0, 0) -> (n_r - 1, n_c - 1)` path by dynamic programming,
    /// or infinity once it reaches `U |n_r - n_c| + sqrt(U)`.
    pub fn solve_direct(&self) -> Dist<Exact> {
        let (nr, nc) = (self.n_r(), self.n_c());
        let mut prev: Vec<BigInt> = Vec::with_capacity(nc);
        for j in 0..nc {
            prev.push(&self.u * BigInt::from(j));
        }
        for i in 1..nr {
            let mut cur: Vec<BigInt> = Vec::with_capacity(nc);
            cur.push(&prev[0] + &self.u);
            for j in 1..nc {
                let best =
                    (&prev[j] + &self.u).min(&cur[j - 1] + &self.u).min(&prev[j - 1] + self.diagonal(i - 1, j - 1));
                cur.push(best);
            }
            prev = cur;
        }
        let v = prev.pop().expect("at least one column");
        if v >= self.infinity_threshold() {
            Dist::Infinity
        } else {
            Dist::Finite(Exact::from_bigint(v))
        }
    }

    /// `P` and `Q` for the current instance.
    pub fn build_curves(&self) -> GadgetCurves {
        let p = (0..self.n_r()).flat_map(|i| gadget(self.star(), self.alpha(i)));
        let q = (0..self.n_c()).flat_map(|j| gadget(self.star(), self.beta(j)));
        GadgetCurves {
            p: Curve::from_scalars(p).expect("at least one row"),
            q: Curve::from_scalars(q).expect("at least one column"),
        }
    }

    fn pow_u(&self, e: u32) -> BigInt {
        num_traits::pow(self.u.clone(), e as usize)
    }

    /// The point `-U^5`.
    pub fn star(&self) -> Exact {
        Exact::from_bigint(-self.pow_u(5))
    }

    /// Interior points of `alpha_i`.
    pub fn alpha(&self, i: usize) -> [Exact; 4] {
        let (u3, u4) = (self.pow_u(3), self.pow_u(4));
        let r2 = BigInt::from(2 * self.r[i]) * &u3;
        let q = |base: BigInt, plus: bool| {
            let d = BigInt::from(self.d[i]);
            let numer = base * 4 + if plus { d } else { -d };
            Exact::new_ratio(numer, BigInt::from(4)).expect("non-zero denominator")
        };
        [q(&u4 + &r2, true), q(&u4 * 2 + &r2, false), q(&u4 * 3 - &r2, true), q(&u4 * 4 - &r2, false)]
    }

    /// Interior points of `beta_j`.
    pub fn beta(&self, j: usize) -> [Exact; 4] {
        let (u3, u4) = (self.pow_u(3), self.pow_u(4));
        let c2 = BigInt::from(2 * self.c[j]) * &u3;
        // (-1)^{b_j} U
        let sign_u = if self.b[j] { -self.u.clone() } else { self.u.clone() };
        [
            Exact::from_bigint(&u4 + &c2 - &self.u),
            Exact::from_bigint(&u4 * 2 + &c2 + &self.u),
            Exact::from_bigint(&u4 * 3 - &c2 + &sign_u),
            Exact::from_bigint(&u4 * 4 - &c2 - &sign_u),
        ]
    }

    /// Cost of crossing between horizontally or vertically adjacent blocks.
    pub fn straight_cost(&self) -> BigInt {
        self.pow_u(5) * 4 + self.pow_u(4) * 10
    }

    /// Cost of crossing the gadget `R_ij` diagonally when `r_i = c_j`.
    pub fn matched_diagonal_cost(&self, i: usize, j: usize) -> BigInt {
        &self.u * 4 + BigInt::from(if self.b[j] { self.d[i] } else { 0 })
    }
}

fn gadget(star: Exact, inner: [Exact; 4]) -> impl Iterator<Item = Exact> {
    let stars = std::iter::repeat_n(star, STARS);
    stars.clone().chain(inner).chain(stars)
}

/// The curves `P` (rows) and `Q` (columns) of the reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetCurves {
    pub p: Curve<Exact>,
    pub q: Curve<Exact>,
}

impl GadgetCurves {
    /// 0-based vertices of `alpha_i` in `P`.
    pub fn row_range(i: usize) -> Range<usize> {
        i * GADGET_LEN..(i + 1) * GADGET_LEN
    }

    /// 0-based vertices of `beta_j` in `Q`.
    pub fn column_range(j: usize) -> Range<usize> {
        j * GADGET_LEN..(j + 1) * GADGET_LEN
    }

    /// Substitutions of the four interior vertices of `beta_j`, bringing
    /// `Q` in line with `inst`.
    pub fn column_edits(inst: &IntermediaryInstance, j: usize) -> Result<Vec<CurveEdit<Exact>>> {
        if j >= inst.n_c() {
            return Err(Error::Index { index: j, len: inst.n_c() });
        }
        let start = Self::column_range(j).start + STARS;
        Ok(inst
            .beta(j)
            .into_iter()
            .enumerate()
            .map(|(k, v)| CurveEdit::substitute(Side::Q, start + k + 1, Point::scalar(v)))
            .collect())
    }

    /// Applies [`GadgetCurves::column_edits`] after `inst` has been updated
    /// in column `j`, returning the edits for replay elsewhere.
    pub fn apply_update(&mut self, inst: &IntermediaryInstance, j: usize) -> Result<Vec<CurveEdit<Exact>>> {
        let edits = Self::column_edits(inst, j)?;
        for e in &edits {
            self.q.apply(&e.kind)?;
        }
        Ok(edits)
    }
}

/// Reads the Intermediary answer off `DTW(P, Q)`.
///
/// The optimal traversal crosses `|n_r - n_c|` block boundaries straight at
/// `4U^5 + 10U^4` each and `min(n_r, n_c)` gadgets diagonally at
/// `4U + d_i b_j` each, while the grid path pays `U` per straight edge.
pub fn recover_answer(dtw: &Exact, inst: &IntermediaryInstance) -> Result<Dist<Exact>> {
    let k = BigInt::from(inst.n_r().abs_diff(inst.n_c()));
    let straight = &k * inst.straight_cost();
    let value =
        dtw.to_bigint().ok_or_else(|| Error::ReductionInconsistency(format!("DTW value {dtw} is not an integer")))?;
    if value >= &straight + inst.pow_u(3) {
        return Ok(Dist::Infinity);
    }
    let diag = BigInt::from(inst.n_r().min(inst.n_c())) * inst.u() * 4;
    let answer = value - straight - diag + k * inst.u();
    if answer < BigInt::zero() {
        return Err(Error::ReductionInconsistency(format!("recovered negative value {answer}")));
    }
    Ok(Dist::Finite(Exact::from_bigint(answer)))
}

/// Vertex colors inside a gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    /// Both points are stars.
    Orange,
    /// Exactly one point is a star.
    White,
    /// `alpha_i^k` against `beta_j^k`.
    Grey,
    Yellow,
}

/// Position inside a gadget curve: `None` for a star, else `1..=4`.
fn interior_slot(index: usize) -> Option<usize> {
    let k = index % GADGET_LEN;
    (STARS..STARS + 4).contains(&k).then(|| k - STARS + 1)
}

/// Color of the vertex pairing `P[p_index]` with `Q[q_index]`, 0-based.
pub fn vertex_color(p_index: usize, q_index: usize) -> Color {
    match (interior_slot(p_index), interior_slot(q_index)) {
        (None, None) => Color::Orange,
        (None, Some(_)) | (Some(_), None) => Color::White,
        (Some(a), Some(b)) if a == b => Color::Grey,
        _ => Color::Yellow,
    }
}

/// Whether the vertex lies on the outer rows or columns of its gadget.
pub fn is_gadget_boundary(p_index: usize, q_index: usize) -> bool {
    let edge = |x: usize| matches!(x % GADGET_LEN, 0 | 19);
    edge(p_index) || edge(q_index)
}

/// Random instance within the given limits, with the minimal `U`.
pub fn random_instance<R: rand::Rng + ?Sized>(
    rng: &mut R,
    max_side: usize,
    max_id: u64,
    max_weight: u64,
) -> IntermediaryInstance {
    let n_r = rng.gen_range(1..=max_side);
    let n_c = rng.gen_range(1..=max_side);
    let r = (0..n_r).map(|_| rng.gen_range(0..=max_id)).collect();
    let c = (0..n_c).map(|_| rng.gen_range(0..=max_id)).collect();
    let d = (0..n_r).map(|_| rng.gen_range(0..=max_weight)).collect();
    let b = (0..n_c).map(|_| rng.gen_bool(0.5)).collect();
    IntermediaryInstance::with_minimal_u(r, c, d, b).expect("generated instances are valid")
}
