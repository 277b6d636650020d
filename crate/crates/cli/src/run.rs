//! Method dispatch for single factoring runs.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, ValueEnum};
use factorlab::arith::isqrt;
use factorlab::coppersmith::{
    solve_lsb_known, solve_msb_known, solve_trivariate, theorem4_driver, BivariateOutcome, CoppersmithError,
    TrivariateProblem,
};
use factorlab::fermat::{fermat_ratio, fermat_standard, fermat_triangular, parse_decimal, FermatError, FermatResult, SearchBudget};
use factorlab::residue::{algorithm_one, landry_pepin, ResidueError};
use factorlab::Nat;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::report::{Outcome, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Standard,
    Triangular,
    Ratio,
    Residue,
    LandryPepin,
    CoppersmithMsb,
    CoppersmithLsb,
    Trivariate,
    Theorem4,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Standard => "standard",
            Method::Triangular => "triangular",
            Method::Ratio => "ratio",
            Method::Residue => "residue",
            Method::LandryPepin => "landry-pepin",
            Method::CoppersmithMsb => "coppersmith-msb",
            Method::CoppersmithLsb => "coppersmith-lsb",
            Method::Trivariate => "trivariate",
            Method::Theorem4 => "theorem4",
        }
    }
}

pub fn parse_nat(s: &str) -> Result<Nat, String> {
    s.trim().parse::<Nat>().map_err(|_| format!("{s:?} is not a non-negative integer"))
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad lower end in {s:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad upper end in {s:?}"))?;
    Ok((lo, hi))
}

pub fn parse_u64_range(s: &str) -> Result<(u64, u64), String> {
    parse_pair(s)
}

pub fn parse_i64_range(s: &str) -> Result<(i64, i64), String> {
    parse_pair(s)
}

/// A decimal such as `1.5` or a fraction such as `3/2`.
pub fn parse_ratio(text: &str) -> Result<BigRational, String> {
    let value = match text.split_once('/') {
        Some((a, b)) => {
            let a = parse_decimal(a).map_err(|e| e.to_string())?;
            let b = parse_decimal(b).map_err(|e| e.to_string())?;
            if b.is_zero() {
                return Err(format!("zero denominator in {text:?}"));
            }
            a / b
        }
        None => parse_decimal(text).map_err(|e| e.to_string())?,
    };
    Ok(value)
}

/// Method parameters; each method reads the ones it needs.
#[derive(Debug, Clone, Default, Args)]
pub struct MethodParams {
    /// Ratio estimate q/p as a decimal or fraction, for `ratio`.
    #[arg(long)]
    pub r: Option<String>,
    /// Modulus for the residue methods.
    #[arg(long)]
    pub m: Option<u64>,
    /// Second modulus for `landry-pepin` (defaults to --m).
    #[arg(long)]
    pub m2: Option<u64>,
    /// Residue of p.
    #[arg(long)]
    pub c: Option<u64>,
    /// Residue of q.
    #[arg(long)]
    pub d: Option<u64>,
    /// Approximation of p.
    #[arg(long, value_parser = parse_nat)]
    pub p0: Option<Nat>,
    /// Known low bits of p, as an integer.
    #[arg(long, value_parser = parse_nat)]
    pub low_bits: Option<Nat>,
    /// Number of known bits of p: low bits for coppersmith-lsb, high bits in
    /// coppersmith-msb benches.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_parser = parse_nat)]
    pub x_bound: Option<Nat>,
    #[arg(long, value_parser = parse_nat)]
    pub y_bound: Option<Nat>,
    /// Multiplier M with q close to M z, for `trivariate`.
    #[arg(long, value_parser = parse_nat)]
    pub multiplier: Option<Nat>,
    /// Range LO:HI of z, for `trivariate`.
    #[arg(long, value_parser = parse_u64_range)]
    pub z_range: Option<(u64, u64)>,
    /// Range LO:HI of the offset a, for `trivariate`.
    #[arg(long, value_parser = parse_i64_range, allow_hyphen_values = true)]
    pub a_range: Option<(i64, i64)>,
    /// Step budget for the difference-of-squares scans.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Last index t scanned by `landry-pepin` and `residue`.
    #[arg(long)]
    pub t_bound: Option<u64>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

fn need<T: Clone>(value: &Option<T>, flag: &str, method: Method) -> Result<T, UsageError> {
    value
        .clone()
        .ok_or_else(|| UsageError(format!("method {} needs --{flag}", method.name())))
}

fn budget(params: &MethodParams) -> SearchBudget {
    params.budget.map(SearchBudget::new).unwrap_or_default()
}

fn record_fermat(report: &mut RunReport, result: Result<FermatResult, FermatError>) -> Result<(), UsageError> {
    match result {
        Ok(r) => {
            report.steps = Some(r.steps.to_string());
            report.factored(&r.p, &r.q);
        }
        Err(FermatError::Exhausted { steps }) | Err(FermatError::MultiplierCollision { steps }) => {
            report.steps = Some(steps.to_string());
            report.failed(Outcome::Exhausted, format!("no factor within {steps} steps"));
        }
        Err(FermatError::TrivialOnly { steps }) => {
            report.steps = Some(steps.to_string());
            report.failed(Outcome::Exhausted, "only the trivial representation exists; N looks prime");
        }
        Err(e) => return Err(UsageError(e.to_string())),
    }
    Ok(())
}

/// `ceil(3 sqrt(N) max(c, d) / (m n))`: the scaled-sum index bound.
pub fn default_t_bound(n: &Nat, m: u64, m2: u64, c: u64, d: u64) -> u64 {
    let root = isqrt(n) + 1u32;
    let top: Nat = root * 3u32 * c.max(d).max(1);
    let den = Nat::from(m) * m2;
    ((top + &den - 1u32) / den).to_u64().unwrap_or(u64::MAX)
}

fn record_solver(report: &mut RunReport, result: Result<BivariateOutcome, CoppersmithError>) -> Result<(), UsageError> {
    match result {
        Ok(outcome) => {
            report.steps = Some(outcome.lattice_runs.to_string());
            report.lattice_dim = Some(outcome.lattice_dim.to_string());
            report.certified = Some(outcome.certified);
            report.params.insert("boxes".into(), outcome.boxes.to_string());
            match outcome.solutions.iter().find(|s| !s.is_trivial()) {
                Some(s) => report.factored(&s.p, &s.q),
                None => report.failed(Outcome::NoRoot, "only trivial roots in the box"),
            }
        }
        Err(e) => record_solver_error(report, e)?,
    }
    Ok(())
}

fn record_solver_error(report: &mut RunReport, e: CoppersmithError) -> Result<(), UsageError> {
    match e {
        CoppersmithError::NoRoot => report.failed(Outcome::NoRoot, e.to_string()),
        CoppersmithError::Exhausted | CoppersmithError::NoIndependentPolynomial | CoppersmithError::BoxBudget(_) => {
            report.failed(Outcome::Exhausted, e.to_string())
        }
        other => return Err(UsageError(other.to_string())),
    }
    Ok(())
}

fn run_residue(report: &mut RunReport, n: &Nat, params: &MethodParams) -> Result<(), UsageError> {
    let m = need(&params.m, "m", Method::Residue)?;
    let pairs = match algorithm_one(n, m) {
        Ok(set) => set,
        Err(ResidueError::GcdFactorFound(g)) if g < *n => {
            report.steps = Some("0".into());
            report.factored(&g, &(n / &g));
            return Ok(());
        }
        Err(e) => return Err(UsageError(e.to_string())),
    };
    report.params.insert("candidate_pairs".into(), pairs.len().to_string());
    let mut scanned = 0u64;
    for pair in pairs.iter() {
        let orders = if pair.c == pair.d { vec![(pair.c, pair.d)] } else { vec![(pair.c, pair.d), (pair.d, pair.c)] };
        for (c, d) in orders {
            let t_bound = params.t_bound.unwrap_or_else(|| default_t_bound(n, m, m, c, d));
            match landry_pepin(n, m, m, c, d, t_bound) {
                Ok(hit) => {
                    scanned += hit.t + 1;
                    report.steps = Some(scanned.to_string());
                    report.params.insert("pair".into(), format!("{c},{d}"));
                    report.factored(&hit.p, &hit.q);
                    return Ok(());
                }
                Err(ResidueError::Exhausted { .. }) => scanned += t_bound + 1,
                Err(e) => return Err(UsageError(e.to_string())),
            }
        }
    }
    report.steps = Some(scanned.to_string());
    report.failed(Outcome::Exhausted, format!("no candidate pair of {} yielded a factor", pairs.len()));
    Ok(())
}

fn run_landry_pepin(report: &mut RunReport, n: &Nat, params: &MethodParams) -> Result<(), UsageError> {
    let method = Method::LandryPepin;
    let m = need(&params.m, "m", method)?;
    let m2 = params.m2.unwrap_or(m);
    let c = need(&params.c, "c", method)?;
    let d = need(&params.d, "d", method)?;
    let t_bound = params.t_bound.unwrap_or_else(|| default_t_bound(n, m, m2, c, d));
    report.params.insert("t_bound".into(), t_bound.to_string());
    match landry_pepin(n, m, m2, c, d, t_bound) {
        Ok(hit) => {
            report.steps = Some((hit.t + 1).to_string());
            report.params.insert("t".into(), hit.t.to_string());
            report.factored(&hit.p, &hit.q);
        }
        Err(ResidueError::Exhausted { t_bound }) => {
            report.steps = Some((t_bound + 1).to_string());
            report.failed(Outcome::Exhausted, format!("no factor for t <= {t_bound}"));
        }
        Err(ResidueError::GcdFactorFound(g)) if g < *n => report.factored(&g, &(n / &g)),
        Err(e) => return Err(UsageError(e.to_string())),
    }
    Ok(())
}

fn run_trivariate(report: &mut RunReport, n: &Nat, params: &MethodParams) -> Result<(), UsageError> {
    let method = Method::Trivariate;
    let prob = TrivariateProblem {
        n: n.clone(),
        p0: need(&params.p0, "p0", method)?,
        multiplier: need(&params.multiplier, "multiplier", method)?,
        a_range: params.a_range.unwrap_or((0, 0)),
        z_range: need(&params.z_range, "z-range", method)?,
        x_bound: need(&params.x_bound, "x-bound", method)?,
        y_bound: need(&params.y_bound, "y-bound", method)?,
    };
    match solve_trivariate(&prob) {
        Ok(sols) => {
            let s = sols.iter().find(|s| !s.is_trivial()).expect("winner is nontrivial");
            report.params.insert("z0".into(), s.z0.unwrap_or_default().to_string());
            report.factored(&s.p, &s.q);
        }
        Err(e) => record_solver_error(report, e)?,
    }
    Ok(())
}

fn run_theorem4(report: &mut RunReport, n: &Nat, params: &MethodParams) -> Result<(), UsageError> {
    let m = match params.m {
        Some(m) => m,
        None => (isqrt(&isqrt(n)) + 1u32).to_u64().ok_or_else(|| UsageError("N too large for the default m".into()))?,
    };
    report.params.insert("m".into(), m.to_string());
    match theorem4_driver(n, m) {
        Ok(hit) => {
            if let Some(pair) = hit.pair {
                report.params.insert("pair".into(), format!("{},{}", pair.c, pair.d));
            }
            let p = match &hit.solution {
                Some(s) => s.p.clone(),
                None => hit.factors.parts.first().map(|part| part.factor.clone()).unwrap_or_else(Nat::one),
            };
            report.factored(&p, &(n / &p));
        }
        Err(e) => record_solver_error(report, e)?,
    }
    Ok(())
}

fn insert_params(map: &mut BTreeMap<String, String>, params: &MethodParams) {
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            map.insert(k.to_string(), v);
        }
    };
    put("r", params.r.clone());
    put("m", params.m.map(|v| v.to_string()));
    put("m2", params.m2.map(|v| v.to_string()));
    put("c", params.c.map(|v| v.to_string()));
    put("d", params.d.map(|v| v.to_string()));
    put("p0", params.p0.as_ref().map(|v| v.to_string()));
    put("low_bits", params.low_bits.as_ref().map(|v| v.to_string()));
    put("k", params.k.map(|v| v.to_string()));
    put("x_bound", params.x_bound.as_ref().map(|v| v.to_string()));
    put("y_bound", params.y_bound.as_ref().map(|v| v.to_string()));
    put("multiplier", params.multiplier.as_ref().map(|v| v.to_string()));
    put("z_range", params.z_range.map(|(a, b)| format!("{a}:{b}")));
    put("a_range", params.a_range.map(|(a, b)| format!("{a}:{b}")));
    put("budget", params.budget.map(|v| v.to_string()));
    put("t_bound", params.t_bound.map(|v| v.to_string()));
}

/// Runs one method on `n`. `labels` are extra params echoed in the report.
pub fn run_method(
    method: Method,
    n: &Nat,
    params: &MethodParams,
    labels: BTreeMap<String, String>,
) -> Result<RunReport, UsageError> {
    let mut map = labels;
    insert_params(&mut map, params);
    let mut report = RunReport::new(n, method.name(), map);
    let start = Instant::now();
    match method {
        Method::Standard => record_fermat(&mut report, fermat_standard(n, budget(params)))?,
        Method::Triangular => record_fermat(&mut report, fermat_triangular(n, budget(params)))?,
        Method::Ratio => {
            let text = need(&params.r, "r", method)?;
            let ratio = parse_ratio(&text).map_err(UsageError)?;
            record_fermat(&mut report, fermat_ratio(n, &ratio, budget(params)))?
        }
        Method::Residue => run_residue(&mut report, n, params)?,
        Method::LandryPepin => run_landry_pepin(&mut report, n, params)?,
        Method::CoppersmithMsb => {
            let p0 = need(&params.p0, "p0", method)?;
            let x_bound = params.x_bound.clone().unwrap_or_else(|| isqrt(&isqrt(n)));
            report.params.insert("x_bound".into(), x_bound.to_string());
            record_solver(&mut report, solve_msb_known(n, &p0, &x_bound))?
        }
        Method::CoppersmithLsb => {
            let bits = need(&params.low_bits, "low-bits", method)?;
            let k = need(&params.k, "k", method)?;
            record_solver(&mut report, solve_lsb_known(n, &bits, k))?
        }
        Method::Trivariate => run_trivariate(&mut report, n, params)?,
        Method::Theorem4 => run_theorem4(&mut report, n, params)?,
    }
    report.set_time(start.elapsed());
    Ok(report)
}
