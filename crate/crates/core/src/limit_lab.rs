//! Sequence constructors and convergence experiments for max-convolution
//! limit theorems.
//!
//! Every experiment evaluates `F_n^{op k_n}` for a few scheduled indices and
//! measures its distance to a candidate limit on the continuity points of
//! that candidate.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distfn::{
    bool_nth_root, free_nth_root, levy_distance, map, power, sup_distance, DistFn, EvalGrid, MaxConvolution,
    Transport,
};
use crate::error::{Error, Result};
use crate::families;
use crate::transforms;

pub const DEFAULT_INDICES: [u64; 6] = [10, 31, 100, 316, 1000, 3162];
pub const DEFAULT_THRESHOLD: f64 = 1e-2;
pub const DEFAULT_LEVY_RESOLUTION: f64 = 1e-3;
/// Slack when comparing consecutive distances for monotone trends.
const TREND_SLACK: f64 = 1e-12;
/// Points of `{F = 0}` sampled by the conjecture probe.
const ZERO_SET_SAMPLES: usize = 5;

/// A named sequence `n ↦ F_n`.
#[derive(Debug, Clone)]
pub enum SequenceSpec {
    /// `F_n = F^{∪∨ 1/n}`.
    BoolRoot(DistFn),
    /// `F_n = (1/n)F + (1 - 1/n)` on `[α(F), ∞)`, `0` below.
    FreeRoot(DistFn),
    /// `F_n = F^{1/n}`.
    ClassicalRoot(DistFn),
    /// `F_n = (1/n)F + (1 - 1/n)` on `[-n, ∞)`, `0` below; needs no `α(F) > -∞`.
    TruncatedFreeRoot(DistFn),
    /// `F_N = (1 - λ/N) 1_{[0,∞)} + (λ/N) G`.
    CpPrelimit { lambda: f64, base: DistFn },
    /// `F_n(x) = P_α(n^{1/α} x)` for `x >= 1`, `0` below.
    RemarkTruncatedPareto { alpha: f64 },
    /// `1 - 1/n + F/n` on `[α(F), ∞)`, the ramp `(1 - 1/n) x / α(F)` on `[0, α(F))`.
    RemarkF1(DistFn),
    /// `1 - 1/n + F/n` on `[α(F), ∞)`, the constant `1 - 1/n` on `[0, α(F))`.
    RemarkF2(DistFn),
}

impl SequenceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SequenceSpec::BoolRoot(_) => "bool_root",
            SequenceSpec::FreeRoot(_) => "free_root",
            SequenceSpec::ClassicalRoot(_) => "classical_root",
            SequenceSpec::TruncatedFreeRoot(_) => "truncated_free_root",
            SequenceSpec::CpPrelimit { .. } => "cp_prelimit",
            SequenceSpec::RemarkTruncatedPareto { .. } => "remark_truncated_pareto",
            SequenceSpec::RemarkF1(_) => "remark_f1",
            SequenceSpec::RemarkF2(_) => "remark_f2",
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::CpPrelimit { lambda, .. } => write!(f, "cp_prelimit(λ={lambda})"),
            SequenceSpec::RemarkTruncatedPareto { alpha } => write!(f, "remark_truncated_pareto(α={alpha})"),
            other => f.write_str(other.kind()),
        }
    }
}

/// Positive `n`-th element of the sequence.
pub fn build_sequence(spec: &SequenceSpec, n: u64) -> Result<DistFn> {
    if n == 0 {
        return Err(Error::parameter("sequence index must be >= 1"));
    }
    let inv = 1.0 / n as f64;
    match spec {
        SequenceSpec::BoolRoot(f) => bool_nth_root(f, n),
        SequenceSpec::FreeRoot(f) => free_nth_root(f, n),
        SequenceSpec::ClassicalRoot(f) => {
            if n == 1 {
                Ok(f.clone())
            } else {
                power(MaxConvolution::Classical, f, inv)
            }
        }
        SequenceSpec::TruncatedFreeRoot(f) => {
            let cut = -(n as f64);
            DistFn::mixture(vec![(1.0 - inv, DistFn::dirac(cut)?), (inv, f.clone())])?.truncate_below(cut)
        }
        SequenceSpec::CpPrelimit { lambda, base } => families::cp_prelimit(*lambda, base, n),
        SequenceSpec::RemarkTruncatedPareto { alpha } => families::pareto(*alpha)?
            .affine((n as f64).powf(1.0 / alpha), 0.0)?
            .truncate_below(1.0),
        SequenceSpec::RemarkF1(f) => {
            let a = remark_alpha(f)?;
            let ramp = families::beta_law(1.0)?.affine(1.0 / a, -1.0)?;
            DistFn::mixture(vec![(1.0 - inv, ramp), (inv, f.clone())])
        }
        SequenceSpec::RemarkF2(f) => {
            remark_alpha(f)?;
            DistFn::mixture(vec![(1.0 - inv, DistFn::dirac(0.0)?), (inv, f.clone())])
        }
    }
}

fn remark_alpha(f: &DistFn) -> Result<f64> {
    let a = f.alpha();
    if !f.class().is_positive() || !(a.is_finite() && a > 0.0) {
        return Err(Error::Hypothesis(format!(
            "the ramp and plateau sequences need F ∈ Δ₊ with 0 < α(F) < ∞, got α(F) = {a} in {}",
            f.class()
        )));
    }
    Ok(a)
}

/// Scheduled pairs `(n, k_n)` with strictly increasing `n` and `k_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnSchedule {
    entries: Vec<(u64, u64)>,
}

impl KnSchedule {
    pub fn new(entries: Vec<(u64, u64)>) -> Result<KnSchedule> {
        if entries.is_empty() {
            return Err(Error::parameter("schedule needs at least one index"));
        }
        if entries.iter().any(|&(n, k)| n == 0 || k == 0) {
            return Err(Error::parameter("schedule indices and powers must be positive"));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1) {
            return Err(Error::parameter("schedule must be strictly increasing in n and in k_n"));
        }
        Ok(KnSchedule { entries })
    }

    /// `k_n = n`.
    pub fn identity(indices: &[u64]) -> Result<KnSchedule> {
        KnSchedule::new(indices.iter().map(|&n| (n, n)).collect())
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn last_index(&self) -> u64 {
        self.entries.last().map(|e| e.0).unwrap_or(0)
    }
}

impl Default for KnSchedule {
    fn default() -> Self {
        KnSchedule::identity(&DEFAULT_INDICES).expect("default indices are increasing")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    Diverged,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converged => "converged",
            Verdict::Diverged => "diverged",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexPoint {
    pub n: u64,
    pub k: u64,
    pub sup_distance: f64,
    pub levy_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub sequence: String,
    pub convolution: MaxConvolution,
    pub points: Vec<IndexPoint>,
    /// Least-squares slope of `log sup_distance` against `log n` over the
    /// last half of the schedule; `None` with fewer than two positive distances.
    pub decay_slope: Option<f64>,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    pub fn last_distance(&self) -> f64 {
        self.points.last().map(|p| p.sup_distance).unwrap_or(f64::NAN)
    }

    pub fn converged(&self) -> bool {
        self.verdict == Verdict::Converged
    }
}

/// Converged: last distance below threshold and nonincreasing over the last
/// three indices. Diverged: last distance at or above threshold and
/// nondecreasing over the last three. Inconclusive otherwise.
pub fn verdict(distances: &[f64], threshold: f64) -> Verdict {
    if distances.len() < 3 || distances.iter().any(|d| d.is_nan()) {
        return Verdict::Inconclusive;
    }
    let tail = &distances[distances.len() - 3..];
    let last = tail[2];
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] + TREND_SLACK);
    let nondecreasing = tail.windows(2).all(|w| w[1] + TREND_SLACK >= w[0]);
    if last < threshold && nonincreasing {
        Verdict::Converged
    } else if last >= threshold && nondecreasing {
        Verdict::Diverged
    } else {
        Verdict::Inconclusive
    }
}

/// Slope of `log d` against `log n` over the last half of the points.
pub fn decay_slope(points: &[(u64, f64)]) -> Option<f64> {
    let start = points.len() / 2;
    let usable: Vec<(f64, f64)> = points[start..]
        .iter()
        .filter(|(_, d)| *d > 0.0 && d.is_finite())
        .map(|&(n, d)| ((n as f64).ln(), d.ln()))
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let m = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / m;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `F_n^{op k_n}` for one scheduled pair.
pub fn powered_term(spec: &SequenceSpec, conv: MaxConvolution, n: u64, k: u64) -> Result<DistFn> {
    let f = build_sequence(spec, n)?;
    if k == 1 {
        return Ok(f);
    }
    power(conv, &f, k as f64)
}

/// Runs the experiment with the default Lévy resolution.
pub fn run_limit(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    conv: MaxConvolution,
    candidate: &DistFn,
    grid: &EvalGrid,
    threshold: f64,
) -> Result<ConvergenceReport> {
    run_limit_with(spec, schedule, conv, candidate, grid, threshold, DEFAULT_LEVY_RESOLUTION)
}

pub fn run_limit_with(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    conv: MaxConvolution,
    candidate: &DistFn,
    grid: &EvalGrid,
    threshold: f64,
    levy_resolution: f64,
) -> Result<ConvergenceReport> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::parameter(format!("threshold must be > 0, got {threshold}")));
    }
    let points = schedule
        .entries()
        .par_iter()
        .map(|&(n, k)| {
            let term = powered_term(spec, conv, n, k)?;
            Ok(IndexPoint {
                n,
                k,
                sup_distance: sup_distance(&term, candidate, grid)?,
                levy_distance: levy_distance(&term, candidate, levy_resolution)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let distances: Vec<f64> = points.iter().map(|p| p.sup_distance).collect();
    let slope_input: Vec<(u64, f64)> = points.iter().map(|p| (p.n, p.sup_distance)).collect();
    let report = ConvergenceReport {
        sequence: spec.to_string(),
        convolution: conv,
        decay_slope: decay_slope(&slope_input),
        verdict: verdict(&distances, threshold),
        threshold,
        points,
    };
    log::info!(
        "{} under {} powers: last distance {:.3e}, {}",
        report.sequence,
        conv,
        report.last_distance(),
        report.verdict
    );
    Ok(report)
}

/// One row of the per-index table: `(n, x, F_n^{op k_n}(x), candidate(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u64,
    pub x: f64,
    pub power: f64,
    pub candidate: f64,
}

/// Values of every scheduled power and of the candidate on the grid's
/// continuity points.
pub fn index_table(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    conv: MaxConvolution,
    candidate: &DistFn,
    grid: &EvalGrid,
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for &(n, k) in schedule.entries() {
        let term = powered_term(spec, conv, n, k)?;
        for x in grid.continuity_points(candidate.discontinuities()) {
            rows.push(TableRow {
                n,
                x,
                power: term.value(x),
                candidate: candidate.value(x),
            });
        }
    }
    Ok(rows)
}

/// A hypothesis run paired with a conclusion run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub hypothesis: ConvergenceReport,
    pub conclusion: ConvergenceReport,
    /// Whether the checked statement held on this instance.
    pub implication_holds: bool,
    /// For the Boolean–classical check: sup distance between `𝒳(G)` and `F`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing_gap: Option<f64>,
}

fn implication(hypothesis: &ConvergenceReport, conclusion: &ConvergenceReport) -> bool {
    !hypothesis.converged() || conclusion.converged()
}

/// Boolean powers against `F`, free powers against `B_1^M(F)`: Boolean
/// convergence must carry over to the free side.
pub fn theorem_limit_check(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    f: &DistFn,
    grid: &EvalGrid,
    threshold: f64,
) -> Result<TheoremCheck> {
    let b1 = transforms::bn_at(f, 1.0)?;
    let hypothesis = run_limit(spec, schedule, MaxConvolution::Boolean, f, grid, threshold)?;
    let conclusion = run_limit(spec, schedule, MaxConvolution::Free, &b1, grid, threshold)?;
    Ok(TheoremCheck {
        implication_holds: implication(&hypothesis, &conclusion),
        hypothesis,
        conclusion,
        pairing_gap: None,
    })
}

/// Classical powers against `F`, free powers against `Λ∨(F)`.
pub fn theorem_classical_free_check(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    f: &DistFn,
    grid: &EvalGrid,
    threshold: f64,
) -> Result<TheoremCheck> {
    let image = map(Transport::LambdaVee, f)?;
    let hypothesis = run_limit(spec, schedule, MaxConvolution::Classical, f, grid, threshold)?;
    let conclusion = run_limit(spec, schedule, MaxConvolution::Free, &image, grid, threshold)?;
    Ok(TheoremCheck {
        implication_holds: implication(&hypothesis, &conclusion),
        hypothesis,
        conclusion,
        pairing_gap: None,
    })
}

/// `G = 1/(2 - F)` on `[0, ∞)`, `0` below, built as `½ 1_{[0,∞)} + ½ F^{∪∨2}`.
pub fn converse_limit(f: &DistFn) -> Result<DistFn> {
    if !f.class().is_positive() {
        return Err(Error::class(format!(
            "the converse limit is defined for F ∈ Δ₊, got an argument in {}",
            f.class()
        )));
    }
    DistFn::mixture(vec![
        (0.5, DistFn::dirac(0.0)?),
        (0.5, power(MaxConvolution::Boolean, f, 2.0)?),
    ])
}

/// Free powers against `F`, Boolean powers against `1/(2 - F)`; requires `F(0) > 0`.
pub fn theorem_converse_check(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    f: &DistFn,
    grid: &EvalGrid,
    threshold: f64,
) -> Result<TheoremCheck> {
    let at_zero = f.value(0.0);
    if at_zero <= 1e-12 {
        return Err(Error::Hypothesis(format!(
            "the converse statement needs F > 0 on [0, ∞), but F(0) = {at_zero}"
        )));
    }
    let g = converse_limit(f)?;
    let hypothesis = run_limit(spec, schedule, MaxConvolution::Free, f, grid, threshold)?;
    let conclusion = run_limit(spec, schedule, MaxConvolution::Boolean, &g, grid, threshold)?;
    Ok(TheoremCheck {
        implication_holds: implication(&hypothesis, &conclusion),
        hypothesis,
        conclusion,
        pairing_gap: None,
    })
}

/// Classical powers against `F`, Boolean powers against `G`. The verdicts
/// must agree and, when both converge, `𝒳(G)` must match `F`.
pub fn theorem_boolean_classical_check(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    classical_limit: &DistFn,
    boolean_limit: &DistFn,
    grid: &EvalGrid,
    threshold: f64,
) -> Result<TheoremCheck> {
    let hypothesis = run_limit(spec, schedule, MaxConvolution::Classical, classical_limit, grid, threshold)?;
    let conclusion = run_limit(spec, schedule, MaxConvolution::Boolean, boolean_limit, grid, threshold)?;
    let image = transforms::boolean_to_classical(boolean_limit)?;
    let gap = sup_distance(&image, classical_limit, grid)?;
    let agree = hypothesis.verdict == conclusion.verdict;
    let paired = !(hypothesis.converged() && conclusion.converged()) || gap <= threshold;
    Ok(TheoremCheck {
        implication_holds: agree && paired,
        hypothesis,
        conclusion,
        pairing_gap: Some(gap),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub alpha: f64,
    /// Free powers against `P_α`.
    pub free: ConvergenceReport,
    /// Boolean powers against `D_α 1_{[1,∞)}`.
    pub boolean: ConvergenceReport,
    /// Sup distance between the last Boolean power and the untruncated `D_α`.
    pub untruncated_gap: f64,
    /// The Boolean limit at `x = 1/2`.
    pub limit_at_half: f64,
    /// `D_α(1/2)`.
    pub dagum_at_half: f64,
    pub limits_disagree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

pub const DISAGREEMENT_FLAG: &str = "limits disagree with untruncated D_α";

/// Free convergence to `B_1^M(D_α) = P_α` without Boolean convergence to `D_α`.
pub fn counterexample_remark(
    alpha: f64,
    schedule: &KnSchedule,
    grid: &EvalGrid,
    threshold: f64,
) -> Result<CounterexampleReport> {
    let spec = SequenceSpec::RemarkTruncatedPareto { alpha };
    let pareto = families::pareto(alpha)?;
    let dagum = families::dagum(1.0, alpha)?;
    let truncated = dagum.truncate_below(1.0)?;
    let free = run_limit(&spec, schedule, MaxConvolution::Free, &pareto, grid, threshold)?;
    let boolean = run_limit(&spec, schedule, MaxConvolution::Boolean, &truncated, grid, threshold)?;
    let &(n, k) = schedule.entries().last().expect("non-empty schedule");
    let last = powered_term(&spec, MaxConvolution::Boolean, n, k)?;
    let untruncated_gap = sup_distance(&last, &dagum, grid)?;
    let limits_disagree = untruncated_gap > threshold;
    Ok(CounterexampleReport {
        alpha,
        free,
        boolean,
        untruncated_gap,
        limit_at_half: truncated.value(0.5),
        dagum_at_half: dagum.value(0.5),
        limits_disagree,
        flag: limits_disagree.then(|| DISAGREEMENT_FLAG.to_string()),
    })
}

/// Boolean powers at one point of `{F = 0}`, per scheduled index; no verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSetSample {
    pub x: f64,
    pub values: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    /// Free powers against `F`.
    pub free: ConvergenceReport,
    /// Boolean powers against `1/(2 - F)` on the grid points where `F > 0`.
    pub boolean_on_support: ConvergenceReport,
    /// For the ramp and plateau sequences, Boolean powers against their known limit on the whole grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boolean_full_line: Option<ConvergenceReport>,
    pub zero_set: Vec<ZeroSetSample>,
}

/// The Boolean limit of the ramp and plateau sequences: `1/(2 - F)` from
/// `α(F)` on, and below it `0` (first sequence) or `1/2` on `[0, α(F))` (second).
pub fn remark_boolean_limit(spec: &SequenceSpec) -> Result<Option<DistFn>> {
    match spec {
        SequenceSpec::RemarkF1(f) => {
            let a = remark_alpha(f)?;
            Ok(Some(converse_limit(f)?.truncate_below(a)?))
        }
        SequenceSpec::RemarkF2(f) => {
            remark_alpha(f)?;
            Ok(Some(converse_limit(f)?))
        }
        _ => Ok(None),
    }
}

/// Runs the free powers against `f`, the Boolean powers against `1/(2 - f)`
/// on `{f > 0}`, and samples the Boolean powers on `{f = 0} ∩ [0, ∞)`.
pub fn conjecture_probe(
    spec: &SequenceSpec,
    schedule: &KnSchedule,
    f: &DistFn,
    grid: &EvalGrid,
    threshold: f64,
) -> Result<ConjectureReport> {
    let free = run_limit(spec, schedule, MaxConvolution::Free, f, grid, threshold)?;
    let g = converse_limit(f)?;
    let support: Vec<f64> = grid.points().iter().copied().filter(|&x| f.value(x) > 0.0).collect();
    let support_grid = EvalGrid::new(support, grid.exclusion_radius())
        .map_err(|_| Error::Hypothesis("F vanishes on every grid point".into()))?;
    let boolean_on_support = run_limit(spec, schedule, MaxConvolution::Boolean, &g, &support_grid, threshold)?;
    let boolean_full_line = match remark_boolean_limit(spec)? {
        Some(limit) => Some(run_limit(spec, schedule, MaxConvolution::Boolean, &limit, grid, threshold)?),
        None => None,
    };

    let zeros: Vec<f64> = grid
        .continuity_points(g.discontinuities())
        .filter(|&x| x >= 0.0 && f.value(x) == 0.0)
        .collect();
    let picks: Vec<f64> = if zeros.len() <= ZERO_SET_SAMPLES {
        zeros
    } else {
        (0..ZERO_SET_SAMPLES)
            .map(|i| zeros[i * (zeros.len() - 1) / (ZERO_SET_SAMPLES - 1)])
            .collect()
    };
    let terms = schedule
        .entries()
        .iter()
        .map(|&(n, k)| Ok((n, powered_term(spec, MaxConvolution::Boolean, n, k)?)))
        .collect::<Result<Vec<_>>>()?;
    let zero_set = picks
        .into_iter()
        .map(|x| ZeroSetSample {
            x,
            values: terms.iter().map(|(n, t)| (*n, t.value(x))).collect(),
        })
        .collect();
    Ok(ConjectureReport {
        free,
        boolean_on_support,
        boolean_full_line,
        zero_set,
    })
}
