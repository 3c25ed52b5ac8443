use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dyndtw::dynamic::debug_checks_from_env;
use dyndtw::harness::{self, BenchConfig, BenchRecord, CaseOutcome, FuzzCase, FuzzConfig};
use dyndtw::intermediary::{random_instance, recover_answer, IntermediaryInstance};
use dyndtw::io::{parse_instance, read_curve_pair, write_curve};
use dyndtw::{dtw, dtw_witness, Curve, DynamicConfig, DynamicDtw, Exact, Float, Metric, RebuildMode, Scalar, Side};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "dyndtw", version, about = "Dynamic time warping under edits")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Arith {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Amortized,
    Deamortized,
}

impl From<Mode> for RebuildMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Amortized => RebuildMode::Amortized,
            Mode::Deamortized => RebuildMode::Deamortized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Curves,
    Verify,
}

#[derive(Subcommand)]
enum Command {
    /// DTW of two curves read from JSON-lines files.
    Static {
        /// One file holding both sides, or one file per side.
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long, default_value = "l1")]
        metric: Metric,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Arith,
        /// Also print an optimal traversal.
        #[arg(long)]
        witness: bool,
    },
    /// Random edits and queries checked against the quadratic oracle.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        ops: usize,
        #[arg(long, default_value_t = 32)]
        max_len: usize,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "amortized")]
        mode: Mode,
        /// Replay a case file, such as one printed after a mismatch.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Write the generated case to this file.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Timing sweep in float mode, written as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        beta_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        updates: usize,
        #[arg(long, default_value_t = 2)]
        queries: usize,
        #[arg(long, value_enum, default_value = "amortized")]
        mode: Mode,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gadget curves of an Intermediary instance, or a round-trip check.
    Reduce {
        /// Instance file; may be omitted with --random.
        instance: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "verify")]
        emit: Emit,
        /// Directory for P.jsonl and Q.jsonl; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Column flips applied after the initial check.
        #[arg(long, default_value_t = 0)]
        updates: usize,
        /// Verify this many generated instances instead of a file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
    },
    /// Shortest path of an Intermediary instance by direct DP.
    IntermediarySolve { instance: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

type CmdResult = Result<ExitCode, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Static { files, metric, mode, witness } => {
            let mut text = String::new();
            for f in &files {
                text.push_str(&read(f)?);
                text.push('\n');
            }
            match mode {
                Arith::Exact => static_dtw::<Exact>(&text, metric, witness),
                Arith::Float => static_dtw::<Float>(&text, metric, witness),
            }
        }
        Command::Fuzz { ops, max_len, beta, seed, mode, replay, log } => {
            let case = match replay {
                Some(path) => read(&path)?.parse::<FuzzCase>().map_err(|e| e.to_string())?,
                None => {
                    let mut cfg = FuzzConfig::new(ops, max_len, beta, seed);
                    cfg.mode = mode.into();
                    harness::generate_case(&cfg)
                }
            };
            if let Some(path) = log {
                fs::write(&path, case.to_string()).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            fuzz(&case)
        }
        Command::Bench { beta_list, sizes, trials, seed, updates, queries, mode, out } => {
            if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes.contains(&0) {
                return Err("sizes must be positive and ascending".into());
            }
            let cfg = BenchConfig { sizes, betas: beta_list, trials, seed, updates, queries, mode: mode.into() };
            bench(&cfg, out.as_deref())
        }
        Command::Reduce { instance, emit, out, updates, random, seed, beta } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let instances: Vec<IntermediaryInstance> = match (instance, random) {
                (Some(path), None) => vec![parse_instance(&read(&path)?).map_err(|e| e.to_string())?],
                (None, Some(k)) => (0..k).map(|_| random_instance(&mut rng, 6, 4, 8)).collect(),
                _ => return Err("give either an instance file or --random".into()),
            };
            match emit {
                Emit::Curves => {
                    let [inst] = instances.as_slice() else {
                        return Err("--emit curves takes a single instance file".into());
                    };
                    emit_curves(inst, out.as_deref())
                }
                Emit::Verify => verify(instances, updates, beta, &mut rng),
            }
        }
        Command::IntermediarySolve { instance } => {
            let inst = parse_instance(&read(&instance)?).map_err(|e| e.to_string())?;
            println!("{}", inst.solve_direct());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn static_dtw<S: Scalar>(text: &str, metric: Metric, witness: bool) -> CmdResult {
    let (p, q) = read_curve_pair::<S>(text).map_err(|e| e.to_string())?;
    if witness {
        let (v, t) = dtw_witness(&p, &q, &metric).map_err(|e| e.to_string())?;
        println!("{v}");
        let steps: Vec<String> = t.steps.iter().map(|(i, j)| format!("({i},{j})")).collect();
        println!("{}", steps.join(" "));
    } else {
        println!("{}", dtw(&p, &q, &metric).map_err(|e| e.to_string())?);
    }
    Ok(ExitCode::SUCCESS)
}

fn fuzz(case: &FuzzCase) -> CmdResult {
    let debug = debug_checks_from_env();
    match harness::run_case(case, debug) {
        CaseOutcome::Pass { checks } => {
            println!("{checks} checks");
            Ok(ExitCode::SUCCESS)
        }
        CaseOutcome::Invalid { op, error } => Err(format!("operation {op}: {error}")),
        CaseOutcome::Mismatch { op, expected, got } => {
            eprintln!("mismatch at operation {op}: oracle {expected}, structure {got}");
            let small = harness::minimize(case, debug);
            eprintln!("minimized to {} operations; replay with --replay", small.ops.len());
            print!("{small}");
            Ok(ExitCode::from(EXIT_MISMATCH))
        }
    }
}

fn bench(cfg: &BenchConfig, out: Option<&Path>) -> CmdResult {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    let mut failed = None;
    let records = harness::run_bench(cfg, |r: &BenchRecord| {
        if failed.is_none() {
            if let Err(e) = writer.serialize(r).and_then(|_| Ok(writer.flush()?)) {
                failed = Some(e.to_string());
            }
        }
    })
    .map_err(|e| e.to_string())?;
    if let Some(e) = failed {
        return Err(format!("writing CSV: {e}"));
    }
    drop(writer);
    let mut summary = String::from("# slope of log(time) against log(n)\n");
    for (beta, op, slope) in harness::bench_slopes(&records) {
        let s = slope.map_or("n/a".to_string(), |s| format!("{s:.3}"));
        summary.push_str(&format!("beta={beta} op={op} slope={s}\n"));
    }
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_curves(inst: &IntermediaryInstance, out: Option<&Path>) -> CmdResult {
    let curves = inst.build_curves();
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            for (name, side, curve) in [("P.jsonl", Side::P, &curves.p), ("Q.jsonl", Side::Q, &curves.q)] {
                let path = dir.join(name);
                fs::write(&path, write_curve(side, curve)).map_err(|e| format!("{}: {e}", path.display()))?;
            }
        }
        None => print!("{}{}", write_curve(Side::P, &curves.p), write_curve(Side::Q, &curves.q)),
    }
    Ok(ExitCode::SUCCESS)
}

/// One round-trip check: direct answer against the answer recovered from
/// both the static and the dynamic DTW value.
fn check_step(
    inst: &IntermediaryInstance,
    p: &Curve<Exact>,
    q: &Curve<Exact>,
    dd: &DynamicDtw<Exact, Metric>,
) -> (bool, String) {
    let direct = inst.solve_direct();
    let value = dtw(p, q, &Metric::L1).expect("gadget curves are valid");
    let dynamic = dd.query();
    let show = |r: &dyndtw::Result<dyndtw::Dist<Exact>>| match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error ({e})"),
    };
    let from_static = recover_answer(&value, inst);
    let from_dynamic = recover_answer(&dynamic, inst);
    let engine = if dynamic == value { "agree" } else { "disagree" };
    let ok = dynamic == value && from_static.as_ref().ok() == Some(&direct);
    (ok, format!("direct={direct} recovered={} dynamic={} engine={engine}", show(&from_static), show(&from_dynamic)))
}

fn verify(instances: Vec<IntermediaryInstance>, updates: usize, beta: f64, rng: &mut ChaCha8Rng) -> CmdResult {
    let (mut passed, mut total) = (0usize, 0usize);
    for (k, mut inst) in instances.into_iter().enumerate() {
        println!("# instance {k}: {}x{} U={}", inst.n_r(), inst.n_c(), inst.u());
        let mut curves = inst.build_curves();
        let cfg = DynamicConfig { debug_checks: debug_checks_from_env(), ..DynamicConfig::new(beta) };
        let mut dd =
            DynamicDtw::with_config(curves.p.clone(), curves.q.clone(), Metric::L1, cfg).map_err(|e| e.to_string())?;
        for step in 0..=updates {
            if step > 0 {
                let j = rng.gen_range(0..inst.n_c());
                let x = rng.gen_bool(0.5);
                inst.update(j, x).map_err(|e| e.to_string())?;
                for e in curves.apply_update(&inst, j).map_err(|e| e.to_string())? {
                    dd.update(e).map_err(|e| e.to_string())?;
                }
            }
            let (ok, detail) = check_step(&inst, &curves.p, &curves.q, &dd);
            println!("step {step}: {} {detail}", if ok { "PASS" } else { "FAIL" });
            total += 1;
            passed += ok as usize;
        }
    }
    println!("{passed}/{total} steps passed");
    Ok(if passed == total { ExitCode::SUCCESS } else { ExitCode::from(EXIT_MISMATCH) })
}
