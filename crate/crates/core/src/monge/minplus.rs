//! Min-plus products of a vector with a boundary distance matrix.

use super::boundary::BoundaryDistanceMatrix;
use super::smawk::smawk_column_minima;
use crate::error::{Error, Result};
use crate::scalar::{Dist, Scalar};

/// `y[t] = min_s x[s] + D[s][t]` where `D` holds alignment-graph distances.
///
/// Infinite inputs are replaced by a value `W'` above every finite input
/// plus `W`, and entries are read as `G+W'` distances, which keeps the
/// matrix Monge. Any minimum at or above `W'` is infinite.
pub fn minplus_apply<S: Scalar>(x: &[Dist<S>], m: &BoundaryDistanceMatrix<S>) -> Result<Vec<Dist<S>>> {
    let len = m.len();
    if x.len() != len {
        return Err(Error::Dimension { expected: len, found: x.len() });
    }
    let Some(max_x) = x.iter().filter_map(Dist::finite).max() else {
        return Ok(vec![Dist::Infinity; len]);
    };
    let w = m.threshold();
    let w2 = S::from_i64(1) + w.clone() + max_x.clone();
    let lift = w2.clone() - w.clone();
    let xs: Vec<S> = x.iter().map(|d| d.finite().cloned().unwrap_or_else(|| w2.clone())).collect();
    let mins = smawk_column_minima(len, len, |s, t| {
        let v = m.get(s, t);
        if v < w {
            return xs[s].clone() + v.clone();
        }
        xs[s].clone() + v.clone() + lift.clone() * v.floor_div(w)
    });
    Ok(mins.into_iter().map(|(_, v)| if v < w2 { Dist::Finite(v) } else { Dist::Infinity }).collect())
}

/// Quadratic reference for [`minplus_apply`].
pub fn minplus_naive<S: Scalar>(x: &[Dist<S>], m: &BoundaryDistanceMatrix<S>) -> Result<Vec<Dist<S>>> {
    let len = m.len();
    if x.len() != len {
        return Err(Error::Dimension { expected: len, found: x.len() });
    }
    Ok((0..len).map(|t| (0..len).map(|s| x[s].plus_dist(&m.recover(s, t))).min().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Metric, Point};
    use crate::monge::{build_boundary_matrix, AlignmentGraph, BuildStrategy};
    use crate::scalar::{exact, Exact};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pts(v: &[i64]) -> Vec<Point<Exact>> {
        v.iter().map(|&x| Point::scalar(exact(x))).collect()
    }

    #[test]
    fn small_block() {
        let g = AlignmentGraph::from_points(&pts(&[0, 5]), &pts(&[0]), &Metric::L1).unwrap();
        let m = build_boundary_matrix(&g, BuildStrategy::DivideConquer);
        let y = minplus_apply(&[Dist::Infinity, Dist::Finite(exact(1))], &m).unwrap();
        assert_eq!(y, vec![Dist::Finite(exact(6)), Dist::Finite(exact(1))]);
        let y = minplus_apply(&[Dist::Finite(exact(2)), Dist::Infinity], &m).unwrap();
        assert_eq!(y, vec![Dist::Finite(exact(2)), Dist::Infinity]);
        let y = minplus_apply(&[Dist::Infinity, Dist::Infinity], &m).unwrap();
        assert_eq!(y, vec![Dist::Infinity, Dist::Infinity]);
        assert!(minplus_apply(&[Dist::Infinity], &m).is_err());
    }

    #[test]
    fn matches_naive_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let (n, m) = (rng.gen_range(1..10), rng.gen_range(1..10));
            let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..10)).collect();
            let q: Vec<i64> = (0..m).map(|_| rng.gen_range(-9..10)).collect();
            let g = AlignmentGraph::from_points(&pts(&p), &pts(&q), &Metric::L1).unwrap();
            let mat = build_boundary_matrix(&g, BuildStrategy::DivideConquer);
            let x: Vec<Dist<Exact>> = (0..mat.len())
                .map(|_| if rng.gen_bool(0.3) { Dist::Infinity } else { Dist::Finite(exact(rng.gen_range(0..200))) })
                .collect();
            assert_eq!(minplus_apply(&x, &mat).unwrap(), minplus_naive(&x, &mat).unwrap());
        }
    }
}
