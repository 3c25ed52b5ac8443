//! Differential fuzzing against the quadratic oracle, and timing sweeps.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, CurveEdit, EditKind, Side};
use crate::dynamic::{DynamicConfig, DynamicDtw, RebuildMode};
use crate::error::{Error, Result};
use crate::metric::{Metric, Point};
use crate::oracle::dtw;
use crate::scalar::{Exact, Float, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FuzzOp {
    Edit(CurveEdit<Exact>),
    Query,
}

/// A replayable fuzz run: starting curves, structure settings, operations.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzCase {
    pub beta: f64,
    pub mode: RebuildMode,
    pub p: Curve<Exact>,
    pub q: Curve<Exact>,
    pub ops: Vec<FuzzOp>,
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub ops: usize,
    pub max_len: usize,
    pub beta: f64,
    pub seed: u64,
    pub mode: RebuildMode,
    /// Coordinates are drawn from `-range..=range`.
    pub range: i64,
}

impl FuzzConfig {
    pub fn new(ops: usize, max_len: usize, beta: f64, seed: u64) -> Self {
        FuzzConfig { ops, max_len, beta, seed, mode: RebuildMode::Amortized, range: 50 }
    }
}

fn random_point(rng: &mut ChaCha8Rng, range: i64) -> Point<Exact> {
    Point::scalar(Exact::from_i64(rng.gen_range(-range..=range)))
}

fn random_edit(rng: &mut ChaCha8Rng, p_len: usize, q_len: usize, max_len: usize, range: i64) -> CurveEdit<Exact> {
    let side = if rng.gen_bool(0.5) { Side::P } else { Side::Q };
    let len = if side == Side::P { p_len } else { q_len };
    let mut kind = rng.gen_range(0..3);
    if kind == 0 && len >= max_len {
        kind = 2;
    }
    if kind == 1 && len <= 1 {
        kind = 2;
    }
    match kind {
        0 => CurveEdit::insert(side, rng.gen_range(1..=len + 1), random_point(rng, range)),
        1 => CurveEdit::delete(side, rng.gen_range(1..=len)),
        _ => CurveEdit::substitute(side, rng.gen_range(1..=len), random_point(rng, range)),
    }
}

/// Random starting curves and `cfg.ops` operations, half of them queries.
pub fn generate_case(cfg: &FuzzConfig) -> FuzzCase {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_len = cfg.max_len.max(1);
    let curve = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=max_len);
        Curve::new((0..len).map(|_| random_point(rng, cfg.range)).collect()).expect("non-empty")
    };
    let (p, q) = (curve(&mut rng), curve(&mut rng));
    let (mut p_len, mut q_len) = (p.len(), q.len());
    let mut ops = Vec::with_capacity(cfg.ops);
    for _ in 0..cfg.ops {
        if rng.gen_bool(0.5) {
            ops.push(FuzzOp::Query);
            continue;
        }
        let edit = random_edit(&mut rng, p_len, q_len, max_len, cfg.range);
        let len = if edit.side == Side::P { &mut p_len } else { &mut q_len };
        *len = (*len as isize + edit.kind.delta()) as usize;
        ops.push(FuzzOp::Edit(edit));
    }
    FuzzCase { beta: cfg.beta, mode: cfg.mode, p, q, ops }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseOutcome {
    Pass {
        checks: usize,
    },
    /// The query at operation `op` (0-based) disagreed with the oracle.
    Mismatch {
        op: usize,
        expected: Exact,
        got: Exact,
    },
    /// Operation `op` was rejected, e.g. an index past the end.
    Invalid {
        op: usize,
        error: Error,
    },
}

impl CaseOutcome {
    pub fn is_mismatch(&self) -> bool {
        matches!(self, CaseOutcome::Mismatch { .. })
    }
}

/// Replays `case` on the dynamic structure, comparing every query with the
/// oracle on the current curves.
pub fn run_case(case: &FuzzCase, debug_checks: bool) -> CaseOutcome {
    let cfg = DynamicConfig { beta: case.beta, mode: case.mode, debug_checks, ..DynamicConfig::new(case.beta) };
    let mut dd = match DynamicDtw::with_config(case.p.clone(), case.q.clone(), Metric::L1, cfg) {
        Ok(d) => d,
        Err(error) => return CaseOutcome::Invalid { op: 0, error },
    };
    let mut checks = 0;
    for (op, step) in case.ops.iter().enumerate() {
        match step {
            FuzzOp::Edit(e) => {
                if let Err(error) = dd.update(e.clone()) {
                    return CaseOutcome::Invalid { op, error };
                }
            }
            FuzzOp::Query => {
                let got = dd.query();
                let expected = dtw(dd.p(), dd.q(), &Metric::L1).expect("valid curves");
                if got != expected {
                    return CaseOutcome::Mismatch { op, expected, got };
                }
                checks += 1;
            }
        }
    }
    CaseOutcome::Pass { checks }
}

/// Greedy shrinking: drops operations in shrinking chunks, then starting
/// points, keeping only candidates for which `fails` still holds.
pub fn minimize_with(case: &FuzzCase, fails: impl Fn(&FuzzCase) -> bool) -> FuzzCase {
    let mut best = case.clone();
    let mut chunk = best.ops.len().max(1);
    while chunk >= 1 {
        let mut start = 0;
        while start < best.ops.len() {
            let mut cand = best.clone();
            let end = (start + chunk).min(cand.ops.len());
            cand.ops.drain(start..end);
            if fails(&cand) {
                best = cand;
            } else {
                start += chunk;
            }
        }
        if chunk == 1 {
            break;
        }
        chunk /= 2;
    }
    for side in [Side::P, Side::Q] {
        let mut i = 0;
        loop {
            let curve = if side == Side::P { &best.p } else { &best.q };
            if i >= curve.len() || curve.len() == 1 {
                break;
            }
            let mut cand = best.clone();
            let target = if side == Side::P { &mut cand.p } else { &mut cand.q };
            target.apply(&EditKind::Delete(i + 1)).expect("index in range");
            if fails(&cand) {
                best = cand;
            } else {
                i += 1;
            }
        }
    }
    best
}

/// Shrinks a case whose replay mismatches the oracle.
pub fn minimize(case: &FuzzCase, debug_checks: bool) -> FuzzCase {
    minimize_with(case, |c| run_case(c, debug_checks).is_mismatch())
}

fn mode_name(mode: RebuildMode) -> &'static str {
    match mode {
        RebuildMode::Amortized => "amortized",
        RebuildMode::Deamortized => "deamortized",
    }
}

fn points_text(curve: &Curve<Exact>) -> String {
    curve
        .points()
        .iter()
        .map(|p| p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for FuzzCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "beta {}", self.beta)?;
        writeln!(f, "mode {}", mode_name(self.mode))?;
        writeln!(f, "P {}", points_text(&self.p))?;
        writeln!(f, "Q {}", points_text(&self.q))?;
        for op in &self.ops {
            match op {
                FuzzOp::Edit(e) => writeln!(f, "{e}")?,
                FuzzOp::Query => writeln!(f, "query")?,
            }
        }
        Ok(())
    }
}

fn parse_point(text: &str) -> Result<Point<Exact>> {
    Point::new(text.split(',').map(Exact::parse_str).collect::<Result<Vec<_>>>()?)
}

fn parse_side(text: &str) -> Result<Side> {
    match text {
        "P" => Ok(Side::P),
        "Q" => Ok(Side::Q),
        _ => Err(Error::Parse(format!("unknown side {text:?}"))),
    }
}

impl std::str::FromStr for FuzzCase {
    type Err = Error;

    /// Reads the format written by `Display`; `#` starts a comment line.
    fn from_str(text: &str) -> Result<Self> {
        let mut beta = None;
        let mut mode = RebuildMode::Amortized;
        let (mut p, mut q) = (None, None);
        let mut ops = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", k + 1));
            let words: Vec<&str> = line.split_whitespace().collect();
            let index = |w: &str| w.parse::<usize>().map_err(|_| bad("bad index"));
            match words.as_slice() {
                ["beta", b] => beta = Some(b.parse::<f64>().map_err(|_| bad("bad beta"))?),
                ["mode", "amortized"] => mode = RebuildMode::Amortized,
                ["mode", "deamortized"] => mode = RebuildMode::Deamortized,
                ["P", pts @ ..] => p = Some(Curve::new(pts.iter().map(|s| parse_point(s)).collect::<Result<_>>()?)?),
                ["Q", pts @ ..] => q = Some(Curve::new(pts.iter().map(|s| parse_point(s)).collect::<Result<_>>()?)?),
                ["query"] => ops.push(FuzzOp::Query),
                ["insert", s, i, x] => {
                    ops.push(FuzzOp::Edit(CurveEdit::insert(parse_side(s)?, index(i)?, parse_point(x)?)))
                }
                ["delete", s, i] => ops.push(FuzzOp::Edit(CurveEdit::delete(parse_side(s)?, index(i)?))),
                ["substitute", s, i, x] => {
                    ops.push(FuzzOp::Edit(CurveEdit::substitute(parse_side(s)?, index(i)?, parse_point(x)?)))
                }
                _ => return Err(bad("unrecognized line")),
            }
        }
        Ok(FuzzCase {
            beta: beta.ok_or_else(|| Error::Parse("missing beta".into()))?,
            mode,
            p: p.ok_or_else(|| Error::Parse("missing P".into()))?,
            q: q.ok_or_else(|| Error::Parse("missing Q".into()))?,
            ops,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchOp {
    Build,
    Update,
    Query,
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchOp::Build => "build",
            BenchOp::Update => "update",
            BenchOp::Query => "query",
        })
    }
}

/// One timing sample. `update` and `query` are per-operation means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub op: BenchOp,
    pub wall_time_ns: u64,
    pub trial: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub betas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub updates: usize,
    pub queries: usize,
    pub mode: RebuildMode,
}

impl BenchConfig {
    pub fn new(sizes: Vec<usize>, betas: Vec<f64>, trials: usize, seed: u64) -> Self {
        BenchConfig { sizes, betas, trials, seed, updates: 8, queries: 2, mode: RebuildMode::Amortized }
    }
}

/// Seed of one trial, derived from the sweep seed so runs are reproducible.
pub fn trial_seed(seed: u64, n: usize, beta: f64, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32) ^ beta.to_bits() ^ trial as u64);
    rng.gen()
}

fn float_curve(rng: &mut ChaCha8Rng, n: usize) -> Curve<Float> {
    Curve::from_scalars((0..n).map(|_| Float::new(rng.gen_range(0.0..100.0)).expect("finite"))).expect("n > 0")
}

fn float_edit(rng: &mut ChaCha8Rng, k: usize, p_len: usize, q_len: usize) -> CurveEdit<Float> {
    let side = if rng.gen_bool(0.5) { Side::P } else { Side::Q };
    let len = if side == Side::P { p_len } else { q_len };
    let x = Point::scalar(Float::new(rng.gen_range(0.0..100.0)).expect("finite"));
    // Inserts and deletes alternate, so lengths stay near n.
    match k % 3 {
        0 => CurveEdit::substitute(side, rng.gen_range(1..=len), x),
        1 => CurveEdit::insert(side, rng.gen_range(1..=len + 1), x),
        _ if len > 1 => CurveEdit::delete(side, rng.gen_range(1..=len)),
        _ => CurveEdit::substitute(side, 1, x),
    }
}

/// Times build, update and query on random float curves with `n = m`.
/// Each finished record is also handed to `sink` as soon as it exists.
pub fn run_bench(cfg: &BenchConfig, mut sink: impl FnMut(&BenchRecord)) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &beta in &cfg.betas {
        for &n in &cfg.sizes {
            for trial in 0..cfg.trials {
                let seed = trial_seed(cfg.seed, n, beta, trial);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (p, q) = (float_curve(&mut rng, n), float_curve(&mut rng, n));
                let dcfg = DynamicConfig { mode: cfg.mode, debug_checks: false, ..DynamicConfig::new(beta) };
                let start = Instant::now();
                let mut dd = DynamicDtw::with_config(p, q, Metric::L1, dcfg)?;
                let build = start.elapsed();
                let start = Instant::now();
                for k in 0..cfg.updates {
                    let e = float_edit(&mut rng, k, dd.p().len(), dd.q().len());
                    dd.update(e)?;
                }
                let update = start.elapsed() / cfg.updates.max(1) as u32;
                let start = Instant::now();
                for _ in 0..cfg.queries {
                    std::hint::black_box(dd.query());
                }
                let query = start.elapsed() / cfg.queries.max(1) as u32;
                for (op, t) in [(BenchOp::Build, build), (BenchOp::Update, update), (BenchOp::Query, query)] {
                    let rec = BenchRecord { n, m: n, beta, op, wall_time_ns: t.as_nanos().max(1) as u64, trial, seed };
                    sink(&rec);
                    out.push(rec);
                }
            }
        }
    }
    Ok(out)
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let k = values.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2.0
    }
}

/// Slope per `(beta, op)` over the per-size medians.
pub fn bench_slopes(records: &[BenchRecord]) -> Vec<(f64, BenchOp, Option<f64>)> {
    let mut keys: Vec<(f64, BenchOp)> = Vec::new();
    for r in records {
        if !keys.iter().any(|&(b, o)| b == r.beta && o == r.op) {
            keys.push((r.beta, r.op));
        }
    }
    keys.into_iter()
        .map(|(beta, op)| {
            let mut sizes: Vec<usize> = records.iter().filter(|r| r.beta == beta && r.op == op).map(|r| r.n).collect();
            sizes.sort_unstable();
            sizes.dedup();
            let pts: Vec<(f64, f64)> = sizes
                .iter()
                .map(|&n| {
                    let mut ts: Vec<f64> = records
                        .iter()
                        .filter(|r| r.beta == beta && r.op == op && r.n == n)
                        .map(|r| r.wall_time_ns as f64)
                        .collect();
                    (n as f64, median(&mut ts))
                })
                .collect();
            (beta, op, fit_loglog_slope(&pts))
        })
        .collect()
}
