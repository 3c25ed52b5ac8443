//! Quadratic dynamic programs over the full grid. These are the ground truth
//! every faster structure in the crate is tested against.

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::metric::PointDistance;
use crate::scalar::{Dist, Scalar};

/// A monotone sequence of 1-based index pairs from `(1, 1)` to `(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Traversal {
    pub steps: Vec<(usize, usize)>,
}

impl Traversal {
    /// Checks the start, end and step shape.
    pub fn is_valid(&self, n: usize, m: usize) -> bool {
        let Some(&first) = self.steps.first() else {
            return false;
        };
        let last = *self.steps.last().unwrap();
        first == (1, 1)
            && last == (n, m)
            && self.steps.windows(2).all(|w| {
                let (a, b) = (w[0], w[1]);
                b.0 >= a.0 && b.1 >= a.1 && matches!((b.0 - a.0, b.1 - a.1), (1, 0) | (0, 1) | (1, 1))
            })
    }

    pub fn cost<S: Scalar, D: PointDistance<S> + ?Sized>(&self, p: &Curve<S>, q: &Curve<S>, metric: &D) -> S {
        self.steps.iter().fold(S::zero(), |acc, &(i, j)| acc + metric.eval(&p.points()[i - 1], &q.points()[j - 1]))
    }
}

fn check_pair<S: Scalar, D: PointDistance<S> + ?Sized>(p: &Curve<S>, q: &Curve<S>, metric: &D) -> Result<()> {
    p.ensure_nonempty()?;
    q.ensure_nonempty()?;
    metric.validate()?;
    if p.dim() != q.dim() {
        return Err(Error::Dimension { expected: p.dim(), found: q.dim() });
    }
    Ok(())
}

/// DTW distance with one rolling row of memory.
pub fn dtw<S: Scalar, D: PointDistance<S> + ?Sized>(p: &Curve<S>, q: &Curve<S>, metric: &D) -> Result<S> {
    check_pair(p, q, metric)?;
    let (pp, qq) = (p.points(), q.points());
    let m = qq.len();
    let mut row: Vec<S> = Vec::with_capacity(m);
    let mut acc = S::zero();
    for y in qq {
        acc = acc + metric.eval(&pp[0], y);
        row.push(acc.clone());
    }
    for x in &pp[1..] {
        // `diag` holds the previous row's value at column j - 1.
        let mut diag = row[0].clone();
        row[0] = row[0].clone() + metric.eval(x, &qq[0]);
        for j in 1..m {
            let up = row[j].clone();
            let best = up.clone().min(diag).min(row[j - 1].clone());
            row[j] = best + metric.eval(x, &qq[j]);
            diag = up;
        }
    }
    Ok(row.pop().expect("non-empty"))
}

/// DTW distance together with an optimal traversal. Ties prefer the
/// diagonal predecessor, then the vertical one, then the horizontal one.
pub fn dtw_witness<S: Scalar, D: PointDistance<S> + ?Sized>(
    p: &Curve<S>,
    q: &Curve<S>,
    metric: &D,
) -> Result<(S, Traversal)> {
    check_pair(p, q, metric)?;
    let (pp, qq) = (p.points(), q.points());
    let (n, m) = (pp.len(), qq.len());
    let mut table: Vec<S> = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let w = metric.eval(&pp[i], &qq[j]);
            let prev = [
                (i > 0 && j > 0).then(|| &table[(i - 1) * m + j - 1]),
                (i > 0).then(|| &table[(i - 1) * m + j]),
                (j > 0).then(|| &table[i * m + j - 1]),
            ];
            let best = prev.into_iter().flatten().min().cloned();
            table.push(match best {
                Some(b) => b + w,
                None => w,
            });
        }
    }
    let mut steps = vec![(n, m)];
    let (mut i, mut j) = (n - 1, m - 1);
    while (i, j) != (0, 0) {
        let mut cands: Vec<(usize, usize)> = Vec::with_capacity(3);
        if i > 0 && j > 0 {
            cands.push((i - 1, j - 1));
        }
        if i > 0 {
            cands.push((i - 1, j));
        }
        if j > 0 {
            cands.push((i, j - 1));
        }
        // `min_by_key` keeps the first minimum, which encodes the tie order.
        let &(pi, pj) = cands.iter().min_by_key(|&&(a, b)| &table[a * m + b]).unwrap();
        i = pi;
        j = pj;
        steps.push((i + 1, j + 1));
    }
    steps.reverse();
    Ok((table[n * m - 1].clone(), Traversal { steps }))
}

/// Cost of the cheapest monotone path between two 1-based grid vertices,
/// counting the weights of both endpoints.
pub fn monotone_distance<S: Scalar, D: PointDistance<S> + ?Sized>(
    p: &Curve<S>,
    q: &Curve<S>,
    metric: &D,
    src: (usize, usize),
    dst: (usize, usize),
) -> Result<Dist<S>> {
    check_pair(p, q, metric)?;
    let (n, m) = (p.len(), q.len());
    for &(i, j) in &[src, dst] {
        if i == 0 || i > n {
            return Err(Error::Index { index: i, len: n });
        }
        if j == 0 || j > m {
            return Err(Error::Index { index: j, len: m });
        }
    }
    if dst.0 < src.0 || dst.1 < src.1 {
        return Ok(Dist::Infinity);
    }
    Ok(Dist::Finite(monotone_table(p, q, metric, src, dst).pop().unwrap()))
}

/// Monotone distances from `src` to every vertex of the rectangle spanned by
/// `src` and `dst`, row-major. Indices are 1-based and assumed valid.
pub(crate) fn monotone_table<S: Scalar, D: PointDistance<S> + ?Sized>(
    p: &Curve<S>,
    q: &Curve<S>,
    metric: &D,
    src: (usize, usize),
    dst: (usize, usize),
) -> Vec<S> {
    let (pp, qq) = (p.points(), q.points());
    let rows = dst.0 - src.0 + 1;
    let cols = dst.1 - src.1 + 1;
    let mut t: Vec<S> = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let w = metric.eval(&pp[src.0 - 1 + r], &qq[src.1 - 1 + c]);
            let prev = [
                (r > 0 && c > 0).then(|| &t[(r - 1) * cols + c - 1]),
                (r > 0).then(|| &t[(r - 1) * cols + c]),
                (c > 0).then(|| &t[r * cols + c - 1]),
            ];
            let best = prev.into_iter().flatten().min().cloned();
            t.push(match best {
                Some(b) => b + w,
                None => w,
            });
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Metric;
    use crate::scalar::{exact, Exact, Float};
    use proptest::prelude::*;

    fn c(v: &[i64]) -> Curve<Exact> {
        Curve::from_scalars(v.iter().map(|&x| exact(x))).unwrap()
    }

    /// Enumerates every traversal recursively; exponential, tiny inputs only.
    fn brute_dtw(p: &[i64], q: &[i64]) -> i64 {
        fn go(p: &[i64], q: &[i64], i: usize, j: usize) -> i64 {
            let w = (p[i] - q[j]).abs();
            if i == p.len() - 1 && j == q.len() - 1 {
                return w;
            }
            let mut best = i64::MAX;
            if i + 1 < p.len() {
                best = best.min(go(p, q, i + 1, j));
            }
            if j + 1 < q.len() {
                best = best.min(go(p, q, i, j + 1));
            }
            if i + 1 < p.len() && j + 1 < q.len() {
                best = best.min(go(p, q, i + 1, j + 1));
            }
            w + best
        }
        go(p, q, 0, 0)
    }

    #[test]
    fn dtw_examples() {
        let p = c(&[3, 1, 4, 1, 5]);
        assert_eq!(dtw(&p, &p, &Metric::L1).unwrap(), exact(0));
        assert_eq!(dtw(&c(&[0]), &c(&[0, 1, 2]), &Metric::L1).unwrap(), exact(3));
        assert_eq!(dtw(&c(&[0, 2]), &c(&[2]), &Metric::L1).unwrap(), exact(2));
    }

    #[test]
    fn dtw_errors() {
        let empty = Curve::<Exact>::with_dim(1, vec![]).unwrap();
        assert_eq!(dtw(&empty, &c(&[1]), &Metric::L1), Err(Error::EmptyCurve));
        assert_eq!(dtw(&c(&[1]), &c(&[1]), &Metric::L2), Err(Error::UnsupportedMetric("L2")));
    }

    #[test]
    fn witness_examples() {
        let (v, t) = dtw_witness(&c(&[5]), &c(&[5]), &Metric::L1).unwrap();
        assert_eq!((v, t.steps), (exact(0), vec![(1, 1)]));
        let (v, t) = dtw_witness(&c(&[0]), &c(&[0, 1, 2]), &Metric::L1).unwrap();
        assert_eq!((v, t.steps), (exact(3), vec![(1, 1), (1, 2), (1, 3)]));
        let (v, t) = dtw_witness(&c(&[0, 2]), &c(&[2]), &Metric::L1).unwrap();
        assert_eq!((v, t.steps), (exact(2), vec![(1, 1), (2, 1)]));
    }

    #[test]
    fn monotone_examples() {
        let p = c(&[1, 4]);
        let q = c(&[2, 7]);
        let m = Metric::L1;
        assert_eq!(monotone_distance(&p, &q, &m, (2, 1), (2, 1)).unwrap(), Dist::Finite(exact(2)));
        assert_eq!(monotone_distance(&p, &q, &m, (2, 1), (1, 2)).unwrap(), Dist::Infinity);
        // weights w11=1 w12=6 w21=2 w22=3; diagonal path wins: 1 + 3.
        assert_eq!(monotone_distance(&p, &q, &m, (1, 1), (2, 2)).unwrap(), Dist::Finite(exact(4)));
        assert!(monotone_distance(&p, &q, &m, (3, 1), (1, 1)).is_err());
    }

    #[test]
    fn float_witness_cost_matches() {
        let p = Curve::from_scalars([0.5, 1.25, 3.0].map(|x| Float::new(x).unwrap())).unwrap();
        let q = Curve::from_scalars([1.0, 2.0].map(|x| Float::new(x).unwrap())).unwrap();
        let (v, t) = dtw_witness(&p, &q, &Metric::L1).unwrap();
        assert!((t.cost(&p, &q, &Metric::L1).get() - v.get()).abs() <= 1e-9 * v.get().max(1.0));
    }

    proptest! {
        #[test]
        fn dtw_matches_enumeration(
            p in proptest::collection::vec(-9i64..10, 1..6),
            q in proptest::collection::vec(-9i64..10, 1..6),
        ) {
            let expected = brute_dtw(&p, &q);
            prop_assert_eq!(dtw(&c(&p), &c(&q), &Metric::L1).unwrap(), exact(expected));
        }

        #[test]
        fn dtw_properties(
            p in proptest::collection::vec(-20i64..20, 1..12),
            q in proptest::collection::vec(-20i64..20, 1..12),
        ) {
            let (pc, qc) = (c(&p), c(&q));
            let v = dtw(&pc, &qc, &Metric::L1).unwrap();
            prop_assert_eq!(&v, &dtw(&qc, &pc, &Metric::L1).unwrap());
            let full = monotone_distance(&pc, &qc, &Metric::L1, (1, 1), (p.len(), q.len())).unwrap();
            prop_assert_eq!(Dist::Finite(v.clone()), full);
            let (wv, t) = dtw_witness(&pc, &qc, &Metric::L1).unwrap();
            prop_assert_eq!(&wv, &v);
            prop_assert!(t.is_valid(p.len(), q.len()));
            prop_assert_eq!(t.cost(&pc, &qc, &Metric::L1), v);
        }
    }
}
