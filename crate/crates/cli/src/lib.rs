//! Check registry and report plumbing for the `loopspin` command-line tool.
//!
//! Every check is a pure function of `(parameters, seed)` producing a
//! [`CheckReport`]; rerunning with the same inputs reproduces the payload
//! byte-for-byte except for `wall_time_ms`.

mod checks;

pub use checks::CHECK_NAMES;

use serde::Serialize;
use std::time::Instant;

/// Schema tag carried by every report.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug)]
pub enum CliError {
    /// Unknown check name or invalid parameters (usage error, exit 2).
    Usage(String),
    /// A module signalled a structural inconsistency (exit 3).
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Flat parameter bag shared by all checks; each check reads what it needs
/// and echoes only those fields into its report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sobolev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
}

/// One measured residual with its gate.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

/// One exact (boolean) check.
#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub name: String,
    pub pass: bool,
}

/// The report emitted for a single check run.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub schema: &'static str,
    pub check: String,
    pub params: CheckParams,
    pub seed: u64,
    pub residuals: Vec<Residual>,
    pub flags: Vec<Flag>,
    pub pass: bool,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    pub wall_time_ms: u64,
}

/// Accumulator used by the check implementations.
#[derive(Default)]
pub(crate) struct Outcome {
    residuals: Vec<Residual>,
    flags: Vec<Flag>,
    details: serde_json::Value,
}

impl Outcome {
    pub(crate) fn residual(&mut self, name: &str, value: f64, tolerance: f64) {
        self.residuals.push(Residual {
            name: name.to_string(),
            value,
            tolerance,
        });
    }

    pub(crate) fn flag(&mut self, name: &str, pass: bool) {
        self.flags.push(Flag {
            name: name.to_string(),
            pass,
        });
    }

    pub(crate) fn details(&mut self, value: serde_json::Value) {
        self.details = value;
    }

    fn seal(self, check: &str, params: CheckParams, seed: u64, elapsed_ms: u64) -> CheckReport {
        let pass = self.residuals.iter().all(|r| r.value <= r.tolerance)
            && self.flags.iter().all(|f| f.pass);
        CheckReport {
            schema: SCHEMA_VERSION,
            check: check.to_string(),
            params,
            seed,
            residuals: self.residuals,
            flags: self.flags,
            pass,
            details: self.details,
            wall_time_ms: elapsed_ms,
        }
    }
}

/// Run a registered check by name.
pub fn run_check(name: &str, params: &CheckParams, seed: u64) -> Result<CheckReport, CliError> {
    let start = Instant::now();
    let (outcome, echoed) = checks::dispatch(name, params, seed)?;
    let elapsed = start.elapsed().as_millis() as u64;
    Ok(outcome.seal(name, echoed, seed, elapsed))
}

/// Suite profile: `quick` finishes in well under a minute, `full` adds the
/// large truncations and the SU(3) path runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(CliError::Usage(format!("unknown profile '{other}'"))),
        }
    }
}

/// A suite entry: a check with pinned parameters.
#[derive(Clone, Debug)]
pub struct RegisteredCheck {
    pub name: &'static str,
    pub params: CheckParams,
    /// Present in the quick profile (full runs everything).
    pub quick: bool,
}

fn p() -> CheckParams {
    CheckParams::default()
}

/// The registered acceptance set, in fixed report order.
pub fn registry() -> Vec<RegisteredCheck> {
    let mut list = Vec::new();
    let mut add = |name: &'static str, params: CheckParams, quick: bool| {
        list.push(RegisteredCheck {
            name,
            params,
            quick,
        });
    };

    for algebra in ["A1", "A2", "A3", "B2", "G2"] {
        let mut params = p();
        params.algebra = Some(algebra.into());
        add("weyl-denominator", params, true);
    }
    for (algebra, max_len) in [("A1", 8usize), ("A2", 8)] {
        let mut params = p();
        params.algebra = Some(algebra.into());
        params.max_len = Some(max_len);
        add("shifted-weight-sum", params, true);
    }
    for algebra in ["A1", "A2", "A3", "B2", "B3", "G2"] {
        let mut params = p();
        params.algebra = Some(algebra.into());
        add("dual-coxeter", params, true);
    }

    for dim in [2usize, 6] {
        let mut params = p();
        params.dim = Some(dim);
        add("clifford-relations", params, true);
    }
    for dim in [2usize, 4, 6, 8] {
        let mut params = p();
        params.dim = Some(dim);
        params.instances = Some(13);
        add("implementer", params, true);
    }
    for dim in [4usize, 6, 8] {
        let mut params = p();
        params.dim = Some(dim);
        add("intertwiner-parity", params, true);
    }
    for algebra in ["A1", "A2", "B2"] {
        let mut params = p();
        params.algebra = Some(algebra.into());
        params.instances = Some(10);
        add("commweil", params, true);
    }
    add("subspace-factorization", p(), true);

    {
        let mut params = p();
        params.dim = Some(40);
        params.t_steps = Some(11);
        params.instances = Some(100);
        add("interp-cs", params, true);
    }
    {
        let mut params = p();
        params.dim = Some(20);
        params.t_steps = Some(11);
        params.instances = Some(100);
        add("polar-retraction", params, true);
    }
    for (name, dim) in [
        ("metric-isometry", 8usize),
        ("hs-equivalence", 8),
        ("restricted-norm", 6),
    ] {
        let mut params = p();
        params.dim = Some(dim);
        params.instances = Some(20);
        add(name, params, true);
    }

    for (modes, quick) in [(16usize, true), (32, false), (64, false)] {
        let mut params = p();
        params.algebra = Some("A1".into());
        params.modes = Some(modes);
        params.eps = Some(1.0);
        add("loop-operators", params, quick);
    }
    {
        let mut params = p();
        params.algebra = Some("A2".into());
        params.modes = Some(12);
        params.eps = Some(1.0);
        add("loop-operators", params, false);
    }
    {
        let mut params = p();
        params.algebra = Some("A1".into());
        params.sobolev = Some(1.0);
        add("sobolev-transition", params, true);
    }
    for algebra in ["A1", "A2"] {
        let mut params = p();
        params.algebra = Some(algebra.into());
        params.modes = Some(24);
        params.instances = Some(50);
        add("kp-cocycle", params, true);
    }
    {
        let mut params = p();
        params.algebra = Some("A1".into());
        params.modes = Some(8);
        add("coadjoint-form", params, true);
    }
    {
        let mut params = p();
        params.algebra = Some("A1".into());
        params.modes = Some(12);
        add("projections", params, true);
    }

    // Path-fibration identity sweeps: SU(2) in both profiles, SU(3) and the
    // twisted runs in full.
    {
        let mut params = p();
        params.group = Some("SU2".into());
        params.samples = Some(100);
        params.fd_step = Some(1e-3);
        params.instances = Some(3);
        add("dvarpi", params, true);
    }
    {
        let mut params = p();
        params.group = Some("SU2".into());
        params.samples = Some(200);
        params.fd_step = Some(1e-3);
        params.instances = Some(20);
        add("dvarpi", params, false);
    }
    {
        let mut params = p();
        params.group = Some("SU3".into());
        params.samples = Some(200);
        params.fd_step = Some(1e-3);
        params.instances = Some(5);
        add("dvarpi", params, false);
    }
    for (group, m, count, quick) in [("SU2", 100usize, 3usize, true), ("SU2", 200, 20, false), ("SU3", 200, 5, false)] {
        let mut params = p();
        params.group = Some(group.into());
        params.samples = Some(m);
        params.fd_step = Some(1e-3);
        params.instances = Some(count);
        add("contraction-loop", params, quick);
        let mut params = p();
        params.group = Some(group.into());
        params.samples = Some(m);
        params.fd_step = Some(1e-2);
        params.instances = Some(count);
        add("contraction-group", params, quick);
    }
    for (group, kappa, quick) in [("SU2", "inner", true), ("SU3", "inner", false), ("SU3", "outer", false)] {
        let mut params = p();
        params.group = Some(group.into());
        params.kappa = Some(kappa.into());
        params.samples = Some(150);
        params.fd_step = Some(1e-2);
        add("varpi-twisted", params, quick);
    }
    {
        let mut params = p();
        params.group = Some("SU2".into());
        params.samples = Some(80);
        add("varpi-invariance", params, true);
    }

    list
}

/// Aggregate result of a suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub profile: String,
    pub seed: u64,
    pub reports: Vec<CheckReport>,
    pub pass: bool,
    pub failed: Vec<String>,
}

/// Run the registered set for a profile. Members execute in parallel;
/// report order is the registration order. Each member gets a seed derived
/// from the suite seed and its registration index.
pub fn run_suite(profile: Profile, seed: u64) -> Result<SuiteReport, CliError> {
    use rayon::prelude::*;
    let entries: Vec<(usize, RegisteredCheck)> = registry()
        .into_iter()
        .filter(|c| profile == Profile::Full || c.quick)
        .enumerate()
        .collect();
    let results: Vec<Result<CheckReport, CliError>> = entries
        .par_iter()
        .map(|(index, entry)| {
            let member_seed =
                seed.wrapping_add((*index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            run_check(entry.name, &entry.params, member_seed)
        })
        .collect();
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        reports.push(r?);
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {}", r.check, serde_json::to_string(&r.params).unwrap_or_default()))
        .collect();
    Ok(SuiteReport {
        schema: SCHEMA_VERSION,
        profile: match profile {
            Profile::Quick => "quick".into(),
            Profile::Full => "full".into(),
        },
        seed,
        reports,
        pass: failed.is_empty(),
        failed,
    })
}

/// Serialize a report with the volatile timing field zeroed, for
/// determinism comparisons.
pub fn stable_payload(report: &CheckReport) -> String {
    let mut clone = report.clone();
    clone.wall_time_ms = 0;
    serde_json::to_string(&clone).expect("reports serialize")
}
