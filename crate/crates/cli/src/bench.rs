//! Seeded benchmark populations.

use std::collections::BTreeMap;

use clap::ValueEnum;
use factorlab::instances::{balanced_semiprime, close_semiprime, ratio_semiprime};
use factorlab::Nat;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{Outcome, RunReport};
use crate::run::{parse_ratio, run_method, Method, MethodParams, UsageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// `q - p <= 4 N^(1/4)`
    Gap,
    /// `q` the first prime above `ratio * p`
    Ratio,
    /// `p < q < 2p`
    Balanced,
}

impl Profile {
    fn name(self) -> &'static str {
        match self {
            Profile::Gap => "gap",
            Profile::Ratio => "ratio",
            Profile::Balanced => "balanced",
        }
    }
}

pub struct BenchConfig {
    pub method: Method,
    pub profile: Profile,
    pub bits: u64,
    pub count: usize,
    pub seed: u64,
    /// Construction ratio for the ratio profile, `num/den`.
    pub ratio: String,
    pub params: MethodParams,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub method: String,
    pub profile: String,
    pub count: String,
    pub factored: String,
    pub success_rate: String,
    pub median_steps: String,
    pub mean_steps: String,
}

impl Summary {
    pub fn text(&self) -> String {
        format!(
            "summary: {} on {} instances of profile {}: {} factored (rate {}), median steps {}, mean steps {}",
            self.method, self.count, self.profile, self.factored, self.success_rate, self.median_steps, self.mean_steps
        )
    }
}

fn small_ratio(text: &str) -> Result<(u32, u32), UsageError> {
    let r = parse_ratio(text).map_err(UsageError)?;
    match (r.numer().to_u32(), r.denom().to_u32()) {
        (Some(a), Some(b)) if a >= b && a > 0 => Ok((a, b)),
        _ => Err(UsageError(format!("construction ratio {text:?} must be a fraction >= 1 with small terms"))),
    }
}

fn instance(profile: Profile, bits: u64, ratio: (u32, u32), rng: &mut ChaCha8Rng) -> (Nat, Nat) {
    match profile {
        Profile::Gap => close_semiprime(bits / 2, rng),
        Profile::Ratio => ratio_semiprime(bits / 2, ratio.0, ratio.1, rng),
        Profile::Balanced => balanced_semiprime(bits, rng),
    }
}

/// Side information each method needs, derived from the known factors.
fn side_information(method: Method, p: &Nat, q: &Nat, base: &MethodParams, ratio: &str) -> Result<MethodParams, UsageError> {
    let n = p * q;
    let mut params = base.clone();
    match method {
        Method::Standard | Method::Triangular | Method::Residue | Method::Theorem4 => {}
        Method::Ratio => {
            if params.r.is_none() {
                params.r = Some(ratio.to_string());
            }
        }
        Method::LandryPepin => {
            let m = params.m.unwrap_or(1000);
            let m2 = params.m2.unwrap_or(m);
            params.m = Some(m);
            params.m2 = Some(m2);
            params.c = Some((p % m).to_u64().expect("residue fits"));
            params.d = Some((q % m2).to_u64().expect("residue fits"));
        }
        Method::CoppersmithMsb => {
            // keep the top quarter of N's bits of p; P0 is the middle of the open interval
            let known = params.k.map(u64::from).unwrap_or(n.bits() / 4);
            let unknown = p.bits().saturating_sub(known).max(1);
            let x_bound = Nat::one() << (unknown - 1);
            params.p0 = Some(((p >> unknown) << unknown) + &x_bound);
            params.x_bound = Some(x_bound);
        }
        Method::CoppersmithLsb => {
            let k = params.k.unwrap_or((n.bits() / 4) as u32);
            params.k = Some(k);
            params.low_bits = Some(p % (Nat::one() << k));
        }
        Method::Trivariate => {
            return Err(UsageError("bench does not construct trivariate hints; use factor".into()));
        }
    }
    Ok(params)
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("FACTORLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Generates instances sequentially from the seed, then solves them in
/// parallel. Reports come back in generation order.
pub fn run_bench(cfg: &BenchConfig) -> Result<(Vec<RunReport>, Summary), UsageError> {
    if cfg.bits < 8 {
        return Err(UsageError("--bits must be at least 8".into()));
    }
    let ratio = small_ratio(&cfg.ratio)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut jobs = Vec::with_capacity(cfg.count);
    for index in 0..cfg.count {
        let (p, q) = instance(cfg.profile, cfg.bits, ratio, &mut rng);
        let params = side_information(cfg.method, &p, &q, &cfg.params, &cfg.ratio)?;
        let mut labels = BTreeMap::new();
        labels.insert("profile".to_string(), cfg.profile.name().to_string());
        labels.insert("index".to_string(), index.to_string());
        labels.insert("seed".to_string(), cfg.seed.to_string());
        labels.insert("p".to_string(), p.to_string());
        labels.insert("q".to_string(), q.to_string());
        jobs.push((&p * &q, params, labels));
    }
    let reports: Vec<Result<RunReport, UsageError>> = thread_pool().install(|| {
        jobs.into_par_iter()
            .map(|(n, params, labels)| run_method(cfg.method, &n, &params, labels))
            .collect()
    });
    let reports: Vec<RunReport> = reports.into_iter().collect::<Result<_, _>>()?;
    let summary = summarize(cfg, &reports);
    Ok((reports, summary))
}

fn summarize(cfg: &BenchConfig, reports: &[RunReport]) -> Summary {
    let factored = reports.iter().filter(|r| r.outcome == Outcome::Factored).count();
    let mut steps: Vec<Nat> = reports
        .iter()
        .filter(|r| r.outcome == Outcome::Factored)
        .filter_map(|r| r.steps.as_ref()?.parse().ok())
        .collect();
    steps.sort();
    let (median, mean) = if steps.is_empty() {
        ("-".to_string(), "-".to_string())
    } else {
        let total: Nat = steps.iter().sum();
        // mean to two decimals, exactly
        let scaled: Nat = (total * 100u32 + steps.len() / 2) / steps.len();
        let mean = format!("{}.{:02}", &scaled / 100u32, (&scaled % 100u32).to_u32().unwrap());
        (steps[(steps.len() - 1) / 2].to_string(), mean)
    };
    let rate = if reports.is_empty() {
        "-".to_string()
    } else {
        format!("{:.3}", factored as f64 / reports.len() as f64)
    };
    Summary {
        method: cfg.method.name().to_string(),
        profile: cfg.profile.name().to_string(),
        count: reports.len().to_string(),
        factored: factored.to_string(),
        success_rate: rate,
        median_steps: median,
        mean_steps: mean,
    }
}
