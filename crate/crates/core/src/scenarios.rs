//! JSON experiment configurations and the built-in named scenarios.
//!
//! Distributions inside a configuration are written in the expression
//! language, e.g. `"candidate": "frechet(1)"`.

use serde::{Deserialize, Serialize};

use crate::distfn::{DistFn, EvalGrid, MaxConvolution};
use crate::error::{Error, Result};
use crate::expr;
use crate::limit_lab::{
    self, ConjectureReport, ConvergenceReport, CounterexampleReport, KnSchedule, SequenceSpec, TableRow,
    TheoremCheck, DEFAULT_LEVY_RESOLUTION, DEFAULT_THRESHOLD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// One run of `F_n^{op k_n}` against `candidate`.
    Run,
    /// Boolean convergence to `candidate` implies free convergence to `B_1^M(candidate)`.
    LimitTheorem,
    /// Free convergence to `candidate` implies Boolean convergence to `1/(2 - candidate)`.
    Converse,
    /// Classical convergence to `candidate` iff Boolean convergence to `boolean_candidate`.
    BooleanClassical,
    /// Classical convergence to `candidate` implies free convergence to `Λ∨(candidate)`.
    ClassicalFree,
    /// The truncated-Pareto sequence with index `alpha`.
    Counterexample,
    /// Free powers against `candidate`, Boolean powers on and off its support.
    Conjecture,
}

/// A sequence description whose distributions are expression strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceConfig {
    BoolRoot { target: String },
    FreeRoot { target: String },
    ClassicalRoot { target: String },
    TruncatedFreeRoot { target: String },
    CpPrelimit { lambda: f64, base: String },
    RemarkTruncatedPareto { alpha: f64 },
    RemarkF1 { target: String },
    RemarkF2 { target: String },
}

impl SequenceConfig {
    pub fn build(&self) -> Result<SequenceSpec> {
        let ev = |text: &str, field: &str| expr::evaluate(text).map_err(|e| e.at(format!("sequence.{field}")));
        Ok(match self {
            SequenceConfig::BoolRoot { target } => SequenceSpec::BoolRoot(ev(target, "target")?),
            SequenceConfig::FreeRoot { target } => SequenceSpec::FreeRoot(ev(target, "target")?),
            SequenceConfig::ClassicalRoot { target } => SequenceSpec::ClassicalRoot(ev(target, "target")?),
            SequenceConfig::TruncatedFreeRoot { target } => SequenceSpec::TruncatedFreeRoot(ev(target, "target")?),
            SequenceConfig::CpPrelimit { lambda, base } => SequenceSpec::CpPrelimit {
                lambda: *lambda,
                base: ev(base, "base")?,
            },
            SequenceConfig::RemarkTruncatedPareto { alpha } => SequenceSpec::RemarkTruncatedPareto { alpha: *alpha },
            SequenceConfig::RemarkF1 { target } => SequenceSpec::RemarkF1(ev(target, "target")?),
            SequenceConfig::RemarkF2 { target } => SequenceSpec::RemarkF2(ev(target, "target")?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    #[serde(default)]
    pub log: bool,
}

impl GridConfig {
    pub fn build(&self) -> Result<EvalGrid> {
        if self.log {
            EvalGrid::logarithmic(self.lo, self.hi, self.n)
        } else {
            EvalGrid::linear(self.lo, self.hi, self.n)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceConfig>,
    /// Indices `n`; defaults to `10, 31, 100, 316, 1000, 3162`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u64>>,
    /// Powers `k_n`, one per index; defaults to `k_n = n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convolution: Option<MaxConvolution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boolean_candidate: Option<String>,
    /// Defaults to a mixed linear/logarithmic grid covering the candidates' supports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levy_resolution: Option<f64>,
}

fn missing(field: &str, mode: Mode) -> Error {
    Error::Config(format!("field '{field}' is required in mode {}", mode_name(mode)))
}

fn mode_name(mode: Mode) -> String {
    serde_json::to_value(mode)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid experiment configuration: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configurations always serialize")
    }

    fn with_mode(mode: Mode) -> ExperimentConfig {
        ExperimentConfig {
            mode,
            sequence: None,
            schedule: None,
            k: None,
            convolution: None,
            candidate: None,
            boolean_candidate: None,
            grid: None,
            threshold: None,
            alpha: None,
            levy_resolution: None,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(DEFAULT_THRESHOLD)
    }

    pub fn schedule(&self) -> Result<KnSchedule> {
        let indices = self.schedule.clone().unwrap_or_else(|| limit_lab::DEFAULT_INDICES.to_vec());
        match &self.k {
            None => KnSchedule::identity(&indices),
            Some(k) if k.len() == indices.len() => KnSchedule::new(indices.into_iter().zip(k.iter().copied()).collect()),
            Some(k) => Err(Error::Config(format!(
                "'k' has {} entries but 'schedule' has {}",
                k.len(),
                indices.len()
            ))),
        }
    }

    fn sequence_spec(&self) -> Result<SequenceSpec> {
        self.sequence.as_ref().ok_or_else(|| missing("sequence", self.mode))?.build()
    }

    fn expression(&self, field: &str, text: Option<&String>) -> Result<DistFn> {
        let text = text.ok_or_else(|| missing(field, self.mode))?;
        expr::evaluate(text).map_err(|e| e.at(field))
    }

    fn candidate(&self) -> Result<DistFn> {
        self.expression("candidate", self.candidate.as_ref())
    }

    fn grid_for(&self, fs: &[DistFn]) -> Result<EvalGrid> {
        match &self.grid {
            Some(g) => g.build(),
            None => Ok(EvalGrid::covering(fs)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ExperimentReport {
    Run(ConvergenceReport),
    LimitTheorem(TheoremCheck),
    Converse(TheoremCheck),
    BooleanClassical(TheoremCheck),
    ClassicalFree(TheoremCheck),
    Counterexample(CounterexampleReport),
    Conjecture(ConjectureReport),
}

impl ExperimentReport {
    /// Whether the experiment showed what it was designed to show.
    pub fn passed(&self) -> bool {
        match self {
            ExperimentReport::Run(r) => r.converged(),
            ExperimentReport::LimitTheorem(c)
            | ExperimentReport::Converse(c)
            | ExperimentReport::BooleanClassical(c)
            | ExperimentReport::ClassicalFree(c) => c.implication_holds,
            ExperimentReport::Counterexample(c) => c.free.converged() && c.limits_disagree,
            ExperimentReport::Conjecture(c) => c.free.converged() && c.boolean_on_support.converged(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let threshold = config.threshold();
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::Config(format!("threshold must be > 0, got {threshold}")));
    }
    let schedule = config.schedule()?;
    Ok(match config.mode {
        Mode::Run => {
            let spec = config.sequence_spec()?;
            let conv = config.convolution.ok_or_else(|| missing("convolution", config.mode))?;
            let candidate = config.candidate()?;
            let grid = config.grid_for(std::slice::from_ref(&candidate))?;
            let resolution = config.levy_resolution.unwrap_or(DEFAULT_LEVY_RESOLUTION);
            ExperimentReport::Run(limit_lab::run_limit_with(
                &spec, &schedule, conv, &candidate, &grid, threshold, resolution,
            )?)
        }
        Mode::LimitTheorem => {
            let (spec, f) = (config.sequence_spec()?, config.candidate()?);
            let grid = config.grid_for(std::slice::from_ref(&f))?;
            ExperimentReport::LimitTheorem(limit_lab::theorem_limit_check(&spec, &schedule, &f, &grid, threshold)?)
        }
        Mode::Converse => {
            let (spec, f) = (config.sequence_spec()?, config.candidate()?);
            let grid = config.grid_for(std::slice::from_ref(&f))?;
            ExperimentReport::Converse(limit_lab::theorem_converse_check(&spec, &schedule, &f, &grid, threshold)?)
        }
        Mode::BooleanClassical => {
            let spec = config.sequence_spec()?;
            let classical = config.candidate()?;
            let boolean = config.expression("boolean_candidate", config.boolean_candidate.as_ref())?;
            let grid = config.grid_for(&[classical.clone(), boolean.clone()])?;
            ExperimentReport::BooleanClassical(limit_lab::theorem_boolean_classical_check(
                &spec, &schedule, &classical, &boolean, &grid, threshold,
            )?)
        }
        Mode::ClassicalFree => {
            let (spec, f) = (config.sequence_spec()?, config.candidate()?);
            let grid = config.grid_for(std::slice::from_ref(&f))?;
            ExperimentReport::ClassicalFree(limit_lab::theorem_classical_free_check(
                &spec, &schedule, &f, &grid, threshold,
            )?)
        }
        Mode::Counterexample => {
            let alpha = config.alpha.ok_or_else(|| missing("alpha", config.mode))?;
            let pareto = crate::families::pareto(alpha)?;
            let grid = config.grid_for(&[pareto])?;
            ExperimentReport::Counterexample(limit_lab::counterexample_remark(alpha, &schedule, &grid, threshold)?)
        }
        Mode::Conjecture => {
            let (spec, f) = (config.sequence_spec()?, config.candidate()?);
            let grid = config.grid_for(std::slice::from_ref(&f))?;
            ExperimentReport::Conjecture(limit_lab::conjecture_probe(&spec, &schedule, &f, &grid, threshold)?)
        }
    })
}

/// Per-index rows `(n, x, F_n^{op k_n}(x), candidate(x))`; mode `run` only.
pub fn experiment_table(config: &ExperimentConfig) -> Result<Vec<TableRow>> {
    if config.mode != Mode::Run {
        return Err(Error::Config("per-index tables are produced in mode run only".into()));
    }
    let spec = config.sequence_spec()?;
    let conv = config.convolution.ok_or_else(|| missing("convolution", config.mode))?;
    let candidate = config.candidate()?;
    let grid = config.grid_for(std::slice::from_ref(&candidate))?;
    limit_lab::index_table(&spec, &config.schedule()?, conv, &candidate, &grid)
}

pub fn table_to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n,x,power,candidate\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.x, r.power, r.candidate));
    }
    out
}

fn run(sequence: SequenceConfig, conv: MaxConvolution, candidate: &str) -> ExperimentConfig {
    ExperimentConfig {
        sequence: Some(sequence),
        convolution: Some(conv),
        candidate: Some(candidate.into()),
        ..ExperimentConfig::with_mode(Mode::Run)
    }
}

fn check(mode: Mode, sequence: SequenceConfig, candidate: &str) -> ExperimentConfig {
    ExperimentConfig {
        sequence: Some(sequence),
        candidate: Some(candidate.into()),
        ..ExperimentConfig::with_mode(mode)
    }
}

fn boolean_classical(sequence: SequenceConfig, classical: &str, boolean: &str) -> ExperimentConfig {
    ExperimentConfig {
        boolean_candidate: Some(boolean.into()),
        ..check(Mode::BooleanClassical, sequence, classical)
    }
}

fn bool_root(target: &str) -> SequenceConfig {
    SequenceConfig::BoolRoot { target: target.into() }
}

fn free_root(target: &str) -> SequenceConfig {
    SequenceConfig::FreeRoot { target: target.into() }
}

fn cp_prelimit(lambda: f64, base: &str) -> SequenceConfig {
    SequenceConfig::CpPrelimit {
        lambda,
        base: base.into(),
    }
}

pub const SCENARIO_NAMES: [&str; 18] = [
    "bool-root-dagum-classical",
    "bool-root-dagum-boolean",
    "bool-root-dagum-free",
    "cp-prelimit-classical",
    "cp-prelimit-free",
    "truncated-free-root-gumbel",
    "free-boolean-dagum",
    "free-boolean-dirac",
    "converse-cp",
    "converse-dirac",
    "bp-boolean-classical-dagum",
    "bp-boolean-classical-frechet",
    "bp-boolean-classical-cp",
    "bp-boolean-classical-dirac",
    "classical-free-frechet",
    "remark-counterexample",
    "conjecture-f1",
    "conjecture-f2",
];

/// The configuration of a built-in scenario.
pub fn scenario(name: &str) -> Result<ExperimentConfig> {
    use MaxConvolution::*;
    Ok(match name {
        "bool-root-dagum-classical" => run(bool_root("dagum(1, 1)"), Classical, "frechet(1)"),
        "bool-root-dagum-boolean" => run(bool_root("dagum(1, 1)"), Boolean, "dagum(1, 1)"),
        "bool-root-dagum-free" => run(bool_root("dagum(1, 1)"), Free, "pareto(1)"),
        "cp-prelimit-classical" => run(cp_prelimit(1.0, "frechet(1)"), Classical, "cpc(1, frechet(1))"),
        "cp-prelimit-free" => run(cp_prelimit(1.0, "frechet(1)"), Free, "cpf(1, frechet(1))"),
        "truncated-free-root-gumbel" => run(
            SequenceConfig::TruncatedFreeRoot {
                target: "gumbel()".into(),
            },
            Free,
            "gumbel()",
        ),
        "free-boolean-dagum" => check(Mode::LimitTheorem, bool_root("dagum(1, 2)"), "dagum(1, 2)"),
        "free-boolean-dirac" => check(Mode::LimitTheorem, bool_root("dirac(1)"), "dirac(1)"),
        "converse-cp" => check(Mode::Converse, free_root("cpf(0.5, frechet(1))"), "cpf(0.5, frechet(1))"),
        "converse-dirac" => check(Mode::Converse, free_root("dirac(0)"), "dirac(0)"),
        "bp-boolean-classical-dagum" => boolean_classical(bool_root("dagum(1, 1)"), "frechet(1)", "dagum(1, 1)"),
        "bp-boolean-classical-frechet" => boolean_classical(
            SequenceConfig::ClassicalRoot {
                target: "frechet(2)".into(),
            },
            "frechet(2)",
            "dagum(1, 2)",
        ),
        "bp-boolean-classical-cp" => boolean_classical(
            cp_prelimit(0.5, "frechet(1)"),
            "cpc(0.5, frechet(1))",
            "tobool(cpc(0.5, frechet(1)))",
        ),
        "bp-boolean-classical-dirac" => boolean_classical(bool_root("dirac(1)"), "dirac(1)", "dirac(1)"),
        "classical-free-frechet" => check(
            Mode::ClassicalFree,
            SequenceConfig::ClassicalRoot {
                target: "frechet(2)".into(),
            },
            "frechet(2)",
        ),
        "remark-counterexample" => ExperimentConfig {
            alpha: Some(1.0),
            ..ExperimentConfig::with_mode(Mode::Counterexample)
        },
        "conjecture-f1" => check(
            Mode::Conjecture,
            SequenceConfig::RemarkF1 {
                target: "pareto(1)".into(),
            },
            "pareto(1)",
        ),
        "conjecture-f2" => check(
            Mode::Conjecture,
            SequenceConfig::RemarkF2 {
                target: "pareto(1)".into(),
            },
            "pareto(1)",
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown scenario '{other}'; known scenarios: {}",
                SCENARIO_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_scenario_resolves_and_round_trips() {
        for name in SCENARIO_NAMES {
            let cfg = scenario(name).unwrap();
            assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg, "{name}");
        }
        assert!(matches!(scenario("nope"), Err(Error::Config(_))));
    }

    #[test]
    fn malformed_configs_are_config_errors() {
        for text in ["{", r#"{"mode": "sideways"}"#, r#"{"mode": "run", "extra": 1}"#] {
            let err = ExperimentConfig::from_json(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
        }
        let cfg = ExperimentConfig::from_json(r#"{"mode": "run"}"#).unwrap();
        assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
        let cfg = ExperimentConfig::from_json(r#"{"mode": "run", "schedule": [1, 2], "k": [1]}"#).unwrap();
        assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn small_run_from_json() {
        let cfg = ExperimentConfig::from_json(
            r#"{"mode": "run", "sequence": {"kind": "bool_root", "target": "dagum(1,1)"},
                "schedule": [10, 100, 1000], "convolution": "boolean", "candidate": "dagum(1,1)",
                "grid": {"lo": 0.01, "hi": 50, "n": 200}}"#,
        )
        .unwrap();
        let report = run_experiment(&cfg).unwrap();
        assert!(report.passed());
        let rows = experiment_table(&cfg).unwrap();
        assert_eq!(rows.len(), 600);
        assert!(table_to_csv(&rows).starts_with("n,x,power,candidate\n10,0.01,"));
    }
}
