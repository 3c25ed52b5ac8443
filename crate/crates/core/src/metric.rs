//! Points and ground distances.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Dimension { expected: 1, found: 0 });
        }
        Ok(Point { coords })
    }

    /// A point on the real line.
    pub fn scalar(v: S) -> Self {
        Point { coords: vec![v] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }
}

impl<S: Scalar> From<S> for Point<S> {
    fn from(v: S) -> Self {
        Point::scalar(v)
    }
}

/// A ground distance between points. Implementations must be symmetric,
/// non-negative and zero on identical points. Callers guarantee equal
/// dimensions before calling [`PointDistance::eval`].
pub trait PointDistance<S: Scalar>: Send + Sync {
    fn eval(&self, p: &Point<S>, q: &Point<S>) -> S;

    /// Rejects configurations the backend cannot evaluate exactly.
    fn validate(&self) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    #[default]
    L1,
    L2,
    Linf,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::L1 => "L1",
            Metric::L2 => "L2",
            Metric::Linf => "Linf",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Metric::L1),
            "l2" => Ok(Metric::L2),
            "linf" | "l-inf" | "max" => Ok(Metric::Linf),
            _ => Err(Error::Parse(format!("unknown metric {s:?}"))),
        }
    }
}

impl<S: Scalar> PointDistance<S> for Metric {
    #[inline]
    fn eval(&self, p: &Point<S>, q: &Point<S>) -> S {
        let (a, b) = (p.coords(), q.coords());
        if a.len() == 1 {
            // Every norm agrees on the real line.
            return (a[0].clone() - b[0].clone()).abs();
        }
        let diffs = a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).abs());
        match self {
            Metric::L1 => diffs.fold(S::zero(), |acc, d| acc + d),
            Metric::Linf => diffs.fold(S::zero(), |acc, d| acc.max(d)),
            Metric::L2 => {
                let sq = diffs.fold(S::zero(), |acc, d| acc + d.clone() * d);
                sq.sqrt().expect("L2 rejected by validate in exact mode")
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if *self == Metric::L2 && S::EXACT {
            return Err(Error::UnsupportedMetric("L2"));
        }
        Ok(())
    }
}

/// Checked distance between two points.
pub fn distance<S: Scalar, D: PointDistance<S> + ?Sized>(metric: &D, p: &Point<S>, q: &Point<S>) -> Result<S> {
    metric.validate()?;
    if p.dim() != q.dim() {
        return Err(Error::Dimension { expected: p.dim(), found: q.dim() });
    }
    Ok(metric.eval(p, q))
}
