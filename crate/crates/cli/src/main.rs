mod bench;
mod demo;
mod report;
mod run;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use factorlab::coppersmith::measure_envelope;
use factorlab::fermat::{format_decimal, ratio_grid};
use factorlab::instances::balanced_semiprime;
use factorlab::Nat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use bench::{run_bench, BenchConfig, Profile};
use run::{parse_nat, parse_ratio, run_method, Method, MethodParams, UsageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Parser)]
#[command(name = "factorlab", version, about = "Difference-of-squares, residue and lattice factoring experiments")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor one N with a chosen method.
    Factor {
        #[arg(long, value_parser = parse_nat)]
        n: Nat,
        #[arg(long, value_enum, default_value = "standard")]
        method: Method,
        #[command(flatten)]
        params: MethodParams,
    },
    /// Run a method over a seeded population of semiprimes.
    Bench {
        #[arg(long, value_enum, default_value = "standard")]
        method: Method,
        #[arg(long, value_enum, default_value = "gap")]
        profile: Profile,
        /// Size of N in bits.
        #[arg(long, default_value_t = 48)]
        bits: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Construction ratio q/p for the ratio profile.
        #[arg(long, default_value = "2")]
        ratio: String,
        #[command(flatten)]
        params: MethodParams,
    },
    /// Print the grid r_i = lower + i (upper - lower) / count with s_i = 1 / r_i.
    Grid {
        #[arg(long, default_value = "1")]
        lower: String,
        #[arg(long, default_value = "2")]
        upper: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        places: u32,
    },
    /// Measure how far the lattice solver reaches on hints p0 with |p - p0| <= X.
    Lattice {
        #[arg(long, default_value_t = 64)]
        bits: u64,
        #[arg(long, default_value_t = 12)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        min_log2: u32,
        #[arg(long, default_value_t = 18)]
        max_log2: u32,
        #[arg(long, default_value_t = 2)]
        step: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Walk through the triangular scan on a small N.
    Demo {
        #[arg(long, value_parser = parse_nat, default_value = "2599")]
        n: Nat,
    },
}

fn emit(format: Format, text: String, json: serde_json::Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::JsonLines => println!("{json}"),
    }
}

fn factor(format: Format, n: &Nat, method: Method, params: &MethodParams) -> Result<i32, UsageError> {
    let report = run_method(method, n, params, BTreeMap::new())?;
    match format {
        Format::Text => println!("{}", report.text()),
        Format::JsonLines => println!("{}", report.json()),
    }
    Ok(report.outcome.exit_code())
}

fn bench(format: Format, cfg: BenchConfig) -> Result<i32, UsageError> {
    let (reports, summary) = run_bench(&cfg)?;
    for r in &reports {
        match format {
            Format::Text => println!("{}", r.text()),
            Format::JsonLines => println!("{}", r.json()),
        }
    }
    emit(format, summary.text(), json!({ "summary": summary }));
    Ok(0)
}

fn grid(format: Format, lower: &str, upper: &str, count: usize, places: u32) -> Result<i32, UsageError> {
    let lower = parse_ratio(lower).map_err(UsageError)?;
    let upper = parse_ratio(upper).map_err(UsageError)?;
    let entries = ratio_grid(&lower, &upper, count).map_err(|e| UsageError(e.to_string()))?;
    if format == Format::Text {
        println!("{:>5}  {:>14}  {:>14}", "i", "r_i", "s_i");
    }
    for e in entries {
        let (r, s) = (format_decimal(&e.r, places), format_decimal(&e.s, places));
        emit(
            format,
            format!("{:>5}  {:>14}  {:>14}", e.index, r, s),
            json!({ "i": e.index.to_string(), "r": r, "s": s }),
        );
    }
    Ok(0)
}

struct LatticeArgs {
    bits: u64,
    count: usize,
    min_log2: u32,
    max_log2: u32,
    step: u32,
    seed: u64,
}

fn lattice(format: Format, a: LatticeArgs) -> Result<i32, UsageError> {
    if a.bits < 16 || a.step == 0 || a.min_log2 > a.max_log2 || a.max_log2 >= 62 {
        return Err(UsageError("need --bits >= 16, --step > 0 and --min-log2 <= --max-log2 < 62".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let instances: Vec<(Nat, Nat)> = (0..a.count).map(|_| balanced_semiprime(a.bits, &mut rng)).collect();
    let log2_bounds: Vec<u32> = (a.min_log2..=a.max_log2).step_by(a.step as usize).collect();
    let offsets: Vec<Vec<i64>> = log2_bounds
        .iter()
        .map(|&b| instances.iter().map(|_| rng.gen_range(-(1i64 << b)..=(1i64 << b))).collect())
        .collect();
    let rows = measure_envelope(&instances, &log2_bounds, &offsets);
    if format == Format::Text {
        println!("hint error |p - p0| <= X on {}-bit N; certified means (XY)^3 <= W^2 holds for the box", a.bits);
        println!("the cube-root range is measured here, not guaranteed");
        println!("{:>6}  {:>9}  {:>9}  {:>12}  {:>4}  {:>10}", "log2 X", "instances", "certified", "lattice-only", "full", "mean boxes");
    }
    for r in &rows {
        emit(
            format,
            format!(
                "{:>6}  {:>9}  {:>9}  {:>12}  {:>4}  {:>10.1}",
                r.log2_x, r.instances, r.certified, r.lattice_only, r.full, r.mean_boxes
            ),
            json!({
                "log2_x": r.log2_x.to_string(),
                "instances": r.instances.to_string(),
                "certified": r.certified.to_string(),
                "lattice_only": r.lattice_only.to_string(),
                "full": r.full.to_string(),
                "mean_boxes": format!("{:.1}", r.mean_boxes),
            }),
        );
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32, UsageError> {
    let format = cli.format;
    match cli.command {
        Command::Factor { n, method, params } => factor(format, &n, method, &params),
        Command::Bench { method, profile, bits, count, seed, ratio, params } => bench(
            format,
            BenchConfig { method, profile, bits, count, seed, ratio, params },
        ),
        Command::Grid { lower, upper, count, places } => grid(format, &lower, &upper, count, places),
        Command::Lattice { bits, count, min_log2, max_log2, step, seed } => {
            lattice(format, LatticeArgs { bits, count, min_log2, max_log2, step, seed })
        }
        Command::Demo { n } => {
            let text = demo::walkthrough(&n).map_err(UsageError)?;
            emit(format, text.trim_end().to_string(), json!({ "n": n.to_string(), "walkthrough": text }));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
