//! Curves and the edits applied to them. Indices are 1-based at the API
//! boundary and 0-based internally.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::Point;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve<S> {
    dim: usize,
    points: Vec<Point<S>>,
}

impl<S: Scalar> Curve<S> {
    pub fn new(points: Vec<Point<S>>) -> Result<Self> {
        let dim = points.first().map(Point::dim).ok_or(Error::EmptyCurve)?;
        Self::with_dim(dim, points)
    }

    /// A possibly empty curve of fixed dimension.
    pub fn with_dim(dim: usize, points: Vec<Point<S>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::Dimension { expected: dim, found: p.dim() });
        }
        Ok(Curve { dim, points })
    }

    /// A curve on the real line.
    pub fn from_scalars(values: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(values.into_iter().map(Point::scalar).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point<S>] {
        &self.points
    }

    /// 1-based access.
    pub fn get(&self, index: usize) -> Option<&Point<S>> {
        index.checked_sub(1).and_then(|i| self.points.get(i))
    }

    pub fn ensure_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyCurve)
        } else {
            Ok(())
        }
    }

    pub fn apply(&mut self, edit: &EditKind<S>) -> Result<()> {
        let len = self.points.len();
        match edit {
            EditKind::Insert(i, p) => {
                self.check_dim(p)?;
                if *i == 0 || *i > len + 1 {
                    return Err(Error::Index { index: *i, len });
                }
                self.points.insert(i - 1, p.clone());
            }
            EditKind::Delete(i) => {
                if *i == 0 || *i > len {
                    return Err(Error::Index { index: *i, len });
                }
                self.points.remove(i - 1);
            }
            EditKind::Substitute(i, p) => {
                self.check_dim(p)?;
                if *i == 0 || *i > len {
                    return Err(Error::Index { index: *i, len });
                }
                self.points[i - 1] = p.clone();
            }
        }
        Ok(())
    }

    fn check_dim(&self, p: &Point<S>) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: p.dim() });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    P,
    Q,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::P => "P",
            Side::Q => "Q",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditKind<S> {
    Insert(usize, Point<S>),
    Delete(usize),
    Substitute(usize, Point<S>),
}

impl<S> EditKind<S> {
    pub fn index(&self) -> usize {
        match self {
            EditKind::Insert(i, _) | EditKind::Delete(i) | EditKind::Substitute(i, _) => *i,
        }
    }

    /// Length change caused by this edit.
    pub fn delta(&self) -> isize {
        match self {
            EditKind::Insert(..) => 1,
            EditKind::Delete(_) => -1,
            EditKind::Substitute(..) => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEdit<S> {
    pub side: Side,
    pub kind: EditKind<S>,
}

impl<S: Scalar> CurveEdit<S> {
    pub fn insert(side: Side, index: usize, p: Point<S>) -> Self {
        CurveEdit { side, kind: EditKind::Insert(index, p) }
    }

    pub fn delete(side: Side, index: usize) -> Self {
        CurveEdit { side, kind: EditKind::Delete(index) }
    }

    pub fn substitute(side: Side, index: usize, p: Point<S>) -> Self {
        CurveEdit { side, kind: EditKind::Substitute(index, p) }
    }
}

impl<S: Scalar> fmt::Display for CurveEdit<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = |p: &Point<S>| p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        match &self.kind {
            EditKind::Insert(i, p) => write!(f, "insert {} {} {}", self.side, i, coords(p)),
            EditKind::Delete(i) => write!(f, "delete {} {}", self.side, i),
            EditKind::Substitute(i, p) => write!(f, "substitute {} {} {}", self.side, i, coords(p)),
        }
    }
}

/// Applies `edit` to a copy of `curve`.
pub fn apply_edit<S: Scalar>(curve: &Curve<S>, edit: &EditKind<S>) -> Result<Curve<S>> {
    let mut out = curve.clone();
    out.apply(edit)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{exact, Exact};
    use proptest::prelude::*;

    fn c(v: &[i64]) -> Curve<Exact> {
        Curve::from_scalars(v.iter().map(|&x| exact(x))).unwrap()
    }

    fn pt(v: i64) -> Point<Exact> {
        Point::scalar(exact(v))
    }

    #[test]
    fn edit_examples() {
        assert_eq!(apply_edit(&c(&[0, 1, 2]), &EditKind::Delete(2)).unwrap(), c(&[0, 2]));
        assert_eq!(apply_edit(&c(&[0, 2]), &EditKind::Insert(2, pt(1))).unwrap(), c(&[0, 1, 2]));
        assert_eq!(apply_edit(&c(&[0, 1]), &EditKind::Substitute(1, pt(9))).unwrap(), c(&[9, 1]));
        assert_eq!(apply_edit(&c(&[0, 1]), &EditKind::Insert(3, pt(9))).unwrap(), c(&[0, 1, 9]));
    }

    #[test]
    fn edit_errors() {
        let base = c(&[0, 1]);
        assert_eq!(apply_edit(&base, &EditKind::Delete(3)), Err(Error::Index { index: 3, len: 2 }));
        assert!(apply_edit(&base, &EditKind::Delete(0)).is_err());
        assert!(apply_edit(&base, &EditKind::Insert(4, pt(1))).is_err());
        let p2 = Point::new(vec![exact(1), exact(2)]).unwrap();
        assert!(matches!(apply_edit(&base, &EditKind::Substitute(1, p2)), Err(Error::Dimension { .. })));
        assert!(Curve::<Exact>::new(vec![]).is_err());
    }

    proptest! {
        #[test]
        fn substitute_is_delete_then_insert(
            values in proptest::collection::vec(-50i64..50, 1..20),
            idx in 0usize..20,
            x in -50i64..50,
        ) {
            let base = c(&values);
            let i = idx % values.len() + 1;
            let via_sub = apply_edit(&base, &EditKind::Substitute(i, pt(x))).unwrap();
            let mid = apply_edit(&base, &EditKind::Delete(i)).unwrap();
            let via_pair = apply_edit(&mid, &EditKind::Insert(i, pt(x))).unwrap();
            prop_assert_eq!(via_sub, via_pair);
        }
    }
}
