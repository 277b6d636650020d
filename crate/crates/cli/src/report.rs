use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use factorlab::Nat;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Factored,
    Exhausted,
    NoRoot,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Factored => "factored",
            Outcome::Exhausted => "exhausted",
            Outcome::NoRoot => "no-root",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Factored => 0,
            Outcome::Exhausted | Outcome::NoRoot => 2,
        }
    }
}

/// One run. Numbers are decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub n: String,
    pub method: String,
    pub params: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub factors: Vec<String>,
    pub steps: Option<String>,
    pub lattice_dim: Option<String>,
    pub certified: Option<bool>,
    pub time_ms: String,
    #[serde(skip)]
    pub reason: Option<String>,
}

impl RunReport {
    pub fn new(n: &Nat, method: &str, params: BTreeMap<String, String>) -> Self {
        RunReport {
            n: n.to_string(),
            method: method.to_string(),
            params,
            outcome: Outcome::Exhausted,
            factors: Vec::new(),
            steps: None,
            lattice_dim: None,
            certified: None,
            time_ms: String::new(),
            reason: None,
        }
    }

    /// Records a factor pair after checking it multiplies back to `N`.
    pub fn factored(&mut self, p: &Nat, q: &Nat) {
        let n: Nat = self.n.parse().expect("n is a decimal string");
        assert_eq!(&(p * q), &n, "factor pair does not multiply to N");
        assert!(*p > Nat::from(1u32) && *q > Nat::from(1u32), "trivial factor pair");
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        self.outcome = Outcome::Factored;
        self.factors = vec![p.to_string(), q.to_string()];
    }

    pub fn failed(&mut self, outcome: Outcome, reason: impl Into<String>) {
        self.outcome = outcome;
        self.reason = Some(reason.into());
    }

    pub fn set_time(&mut self, elapsed: Duration) {
        self.time_ms = format!("{:.3}", elapsed.as_secs_f64() * 1e3);
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        match self.outcome {
            Outcome::Factored => write!(out, "{} = {}", self.n, self.factors.join(" * ")),
            other => write!(out, "{}: {}", self.n, other.label()),
        }
        .unwrap();
        let mut extras = vec![self.method.clone()];
        if let Some(steps) = &self.steps {
            extras.push(format!("steps {steps}"));
        }
        if let Some(dim) = &self.lattice_dim {
            extras.push(format!("lattice dim {dim}"));
        }
        if let Some(c) = self.certified {
            extras.push(if c { "certified".into() } else { "uncertified".into() });
        }
        extras.push(format!("{} ms", self.time_ms));
        write!(out, " [{}]", extras.join(", ")).unwrap();
        if let Some(reason) = &self.reason {
            write!(out, "\n  reason: {reason}").unwrap();
        }
        if !self.params.is_empty() {
            let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(out, "\n  params: {}", params.join(" ")).unwrap();
        }
        out
    }
}
