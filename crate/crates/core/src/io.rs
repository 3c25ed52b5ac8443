//! Text formats: JSON-lines curve files and Intermediary instance files.
//!
//! A curve file holds one point per line, `{"side":"P","coords":[...]}`.
//! Exact coordinates are strings such as `"3"` or `"-7/4"`; float files
//! use plain JSON numbers. Both spellings are accepted on input.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curve::{Curve, Side};
use crate::error::{Error, Result};
use crate::intermediary::IntermediaryInstance;
use crate::metric::Point;
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize)]
struct PointLine {
    side: Side,
    coords: Vec<Value>,
}

fn parse_coord<S: Scalar>(v: &Value, line: usize) -> Result<S> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::Parse(format!("line {line}: bad coordinate {other}"))),
    };
    S::parse_str(&text).map_err(|e| Error::Parse(format!("line {line}: {e}")))
}

/// Parses a curve file. Points of each side keep their file order; lines
/// may interleave sides. Blank lines are skipped.
pub fn parse_curves<S: Scalar>(text: &str) -> Result<(Vec<Point<S>>, Vec<Point<S>>)> {
    let (mut p, mut q) = (Vec::new(), Vec::new());
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let rec: PointLine = serde_json::from_str(raw).map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
        let coords = rec.coords.iter().map(|v| parse_coord(v, line)).collect::<Result<Vec<S>>>()?;
        let point = Point::new(coords).map_err(|_| Error::Parse(format!("line {line}: no coordinates")))?;
        match rec.side {
            Side::P => p.push(point),
            Side::Q => q.push(point),
        }
    }
    Ok((p, q))
}

/// Parses both curves and checks that they are non-empty and share a
/// dimension.
pub fn read_curve_pair<S: Scalar>(text: &str) -> Result<(Curve<S>, Curve<S>)> {
    let (p, q) = parse_curves(text)?;
    let (p, q) = (Curve::new(p)?, Curve::new(q)?);
    if p.dim() != q.dim() {
        return Err(Error::Dimension { expected: p.dim(), found: q.dim() });
    }
    Ok((p, q))
}

fn coord_value<S: Scalar>(v: &S) -> Value {
    if S::EXACT {
        Value::String(v.to_string())
    } else {
        serde_json::Number::from_f64(v.to_f64()).map(Value::Number).unwrap_or(Value::Null)
    }
}

/// Writes the points of one side, one JSON object per line.
pub fn write_curve<S: Scalar>(side: Side, curve: &Curve<S>) -> String {
    let mut out = String::new();
    for point in curve.points() {
        let rec = PointLine { side, coords: point.coords().iter().map(coord_value).collect() };
        out.push_str(&serde_json::to_string(&rec).expect("serializable"));
        out.push('\n');
    }
    out
}

pub fn write_curve_pair<S: Scalar>(p: &Curve<S>, q: &Curve<S>) -> String {
    write_curve(Side::P, p) + &write_curve(Side::Q, q)
}

/// On-disk shape of an Intermediary instance.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub n_r: usize,
    pub n_c: usize,
    pub r: Vec<u64>,
    pub c: Vec<u64>,
    pub d: Vec<u64>,
    pub b: Vec<bool>,
    #[serde(rename = "U")]
    pub u: String,
}

impl InstanceFile {
    pub fn from_instance(inst: &IntermediaryInstance) -> Self {
        InstanceFile {
            n_r: inst.n_r(),
            n_c: inst.n_c(),
            r: inst.row_ids().to_vec(),
            c: inst.col_ids().to_vec(),
            d: inst.weights().to_vec(),
            b: inst.booleans().to_vec(),
            u: inst.u().to_string(),
        }
    }

    pub fn into_instance(self) -> Result<IntermediaryInstance> {
        if self.r.len() != self.n_r || self.c.len() != self.n_c {
            return Err(Error::InvalidInstance(format!(
                "declared {}x{} grid, found {} row and {} column identifiers",
                self.n_r,
                self.n_c,
                self.r.len(),
                self.c.len()
            )));
        }
        let u: BigInt = self
            .u
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInstance(format!("U is not a decimal integer: {:?}", self.u)))?;
        IntermediaryInstance::new(self.r, self.c, self.d, self.b, u)
    }
}

pub fn parse_instance(text: &str) -> Result<IntermediaryInstance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_instance()
}

pub fn write_instance(inst: &IntermediaryInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("serializable")
}
