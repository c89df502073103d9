//! Distribution functions as immutable expression DAGs.
//!
//! Every operation in the algebra acts pointwise on `F(x)`, so a distribution
//! function is stored as a tree of leaves (parametric laws, empirical steps,
//! point masses) and pointwise combinators. Evaluation walks the tree; nothing
//! is ever inverted or integrated.

mod empirical;
mod grid;
mod metric;
mod serial;
mod support;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Family;
use crate::scalar::{kernel, UnitValue};

pub use empirical::EmpiricalStep;
pub use grid::{EvalGrid, DEFAULT_EXCLUSION_RADIUS, DEFAULT_GRID_POINTS, GRID_BOUND};
pub use metric::{levy_distance, sup_distance};
pub use support::{BISECTION_MAX_ITER, BISECTION_TOLERANCE, BRACKET_CAP};

/// Which subset of distribution functions a `DistFn` is known to belong to.
///
/// Ordered from least to most specific: `Real` (Δ, all of ℝ), `Positive`
/// (Δ₊, `F(x) = 0` for `x < 0`), `StrictlyPositive` (Δ₊⁽⁰⁾, additionally
/// `F(0) = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainClass {
    Real,
    Positive,
    StrictlyPositive,
}

impl DomainClass {
    pub fn is_positive(self) -> bool {
        self >= DomainClass::Positive
    }

    /// Class of a function vanishing on `(-∞, point)`.
    fn vanishing_below(point: f64) -> DomainClass {
        if point > 0.0 {
            DomainClass::StrictlyPositive
        } else if point == 0.0 {
            DomainClass::Positive
        } else {
            DomainClass::Real
        }
    }
}

impl fmt::Display for DomainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainClass::Real => "Δ",
            DomainClass::Positive => "Δ₊",
            DomainClass::StrictlyPositive => "Δ₊⁽⁰⁾",
        })
    }
}

/// The three max-convolutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxConvolution {
    Classical,
    Free,
    #[serde(alias = "bool")]
    Boolean,
}

impl MaxConvolution {
    pub const ALL: [MaxConvolution; 3] = [
        MaxConvolution::Classical,
        MaxConvolution::Free,
        MaxConvolution::Boolean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MaxConvolution::Classical => "classical",
            MaxConvolution::Free => "free",
            MaxConvolution::Boolean => "boolean",
        }
    }

    fn check_exponent(self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::domain(format!("{} power exponent must be finite, got {t}", self.name())));
        }
        let ok = match self {
            MaxConvolution::Classical | MaxConvolution::Boolean => t > 0.0,
            MaxConvolution::Free => t >= 1.0,
        };
        if ok {
            Ok(())
        } else {
            let bound = match self {
                MaxConvolution::Free => ">= 1",
                _ => "> 0",
            };
            Err(Error::domain(format!("{} power exponent must be {bound}, got {t}", self.name())))
        }
    }
}

impl fmt::Display for MaxConvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The pointwise transport maps `Λ∨`, `𝒳` and `𝒳⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transport {
    LambdaVee,
    Chi,
    ChiInv,
}

/// A scalar map applied to every value of a child distribution function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum UnaryMap {
    Power {
        convolution: MaxConvolution,
        exponent: f64,
    },
    LambdaVee,
    Chi,
    ChiInv,
    /// `(2 - 1/u)_+`, the fused form of the time-one Belinschi–Nica map.
    BnUnitTime,
}

impl From<Transport> for UnaryMap {
    fn from(t: Transport) -> Self {
        match t {
            Transport::LambdaVee => UnaryMap::LambdaVee,
            Transport::Chi => UnaryMap::Chi,
            Transport::ChiInv => UnaryMap::ChiInv,
        }
    }
}

/// `F(x)` together with `1 - F(x)` and `log F(x)`, each carried in the form
/// that keeps its own precision: survival deep in the right tail, the
/// logarithm deep in the left tail.
#[derive(Debug, Clone, Copy)]
struct Parts {
    value: f64,
    survival: f64,
    log: f64,
}

impl Parts {
    const ZERO: Parts = Parts {
        value: 0.0,
        survival: 1.0,
        log: f64::NEG_INFINITY,
    };
    const ONE: Parts = Parts {
        value: 1.0,
        survival: 0.0,
        log: 0.0,
    };

    fn from_value(value: f64) -> Parts {
        Parts {
            value,
            survival: 1.0 - value,
            log: value.ln(),
        }
    }

    /// `-log F`, from whichever channel is better conditioned.
    fn neg_log(self) -> f64 {
        if self.survival < 0.5 {
            -(-self.survival).ln_1p()
        } else {
            -self.log
        }
    }

    fn clamped(self) -> Parts {
        Parts {
            value: kernel::clamp(self.value),
            survival: kernel::clamp(self.survival),
            log: if self.log.is_nan() { f64::NEG_INFINITY } else { self.log.min(0.0) },
        }
    }
}

/// `log(e^a + e^b)`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

impl MaxConvolution {
    fn combine_parts(self, a: Parts, b: Parts) -> Parts {
        match self {
            MaxConvolution::Classical => Parts {
                value: a.value * b.value,
                survival: a.survival + b.survival - a.survival * b.survival,
                log: a.log + b.log,
            },
            MaxConvolution::Free => {
                let value = kernel::free_max(a.value, b.value);
                Parts {
                    value,
                    survival: (a.survival + b.survival).min(1.0),
                    log: value.ln(),
                }
            }
            MaxConvolution::Boolean => {
                if a.log == f64::NEG_INFINITY || b.log == f64::NEG_INFINITY {
                    return Parts::ZERO;
                }
                let (u, v) = (a.value, b.value);
                let denom = u + v - u * v;
                // log(u + v(1-u)) without underflow when both are tiny
                let log_denom = log_add_exp(a.log, b.log + (-u).ln_1p());
                Parts {
                    value: if denom > 0.0 { u * v / denom } else { (a.log + b.log - log_denom).exp() },
                    survival: if denom > 0.0 { (u * b.survival + v * a.survival) / denom } else { 1.0 },
                    log: a.log + b.log - log_denom,
                }
            }
        }
    }
}

impl UnaryMap {
    fn apply(self, c: Parts) -> Parts {
        if c.log == f64::NEG_INFINITY {
            return Parts::ZERO;
        }
        match self {
            UnaryMap::Power {
                convolution,
                exponent: t,
            } => match convolution {
                MaxConvolution::Classical => {
                    let log = -t * c.neg_log();
                    Parts {
                        value: log.exp(),
                        survival: -log.exp_m1(),
                        log,
                    }
                }
                MaxConvolution::Free => {
                    let value = kernel::free_power(c.value, t);
                    Parts {
                        value,
                        survival: (t * c.survival).min(1.0),
                        log: value.ln(),
                    }
                }
                MaxConvolution::Boolean => {
                    let d = t - (t - 1.0) * c.value;
                    Parts {
                        value: c.value / d,
                        survival: t * c.survival / (1.0 + (t - 1.0) * c.survival),
                        log: c.log - d.ln(),
                    }
                }
            },
            UnaryMap::LambdaVee => {
                let nl = c.neg_log();
                let value = (1.0 - nl).max(0.0);
                Parts {
                    value,
                    survival: nl.min(1.0),
                    log: value.ln(),
                }
            }
            UnaryMap::Chi => {
                let log = -c.survival / c.value;
                if !log.is_finite() {
                    return Parts::ZERO;
                }
                Parts {
                    value: log.exp(),
                    survival: -log.exp_m1(),
                    log,
                }
            }
            UnaryMap::ChiInv => {
                let nl = c.neg_log();
                if nl.is_infinite() {
                    return Parts::ZERO;
                }
                Parts {
                    value: 1.0 / (1.0 + nl),
                    survival: nl / (1.0 + nl),
                    log: -nl.ln_1p(),
                }
            }
            UnaryMap::BnUnitTime => {
                let r = c.survival / c.value;
                let value = (1.0 - r).max(0.0);
                Parts {
                    value,
                    survival: r.min(1.0),
                    log: value.ln(),
                }
            }
        }
    }

    fn validate(self, child: &DistFn) -> Result<()> {
        let needs_positive = match self {
            UnaryMap::Power {
                convolution,
                exponent,
            } => {
                convolution.check_exponent(exponent)?;
                convolution == MaxConvolution::Boolean
            }
            UnaryMap::LambdaVee => false,
            UnaryMap::Chi | UnaryMap::ChiInv | UnaryMap::BnUnitTime => true,
        };
        if needs_positive && !child.class().is_positive() {
            return Err(Error::class(format!(
                "{} requires an argument in Δ₊, got one in {}",
                self.describe(),
                child.class()
            )));
        }
        Ok(())
    }

    fn describe(self) -> String {
        match self {
            UnaryMap::Power {
                convolution,
                exponent,
            } => format!("{convolution} power {exponent}"),
            UnaryMap::LambdaVee => "Λ∨".into(),
            UnaryMap::Chi => "𝒳".into(),
            UnaryMap::ChiInv => "𝒳⁻¹".into(),
            UnaryMap::BnUnitTime => "B₁".into(),
        }
    }

    /// Maps that may create a kink (or a jump, for discontinuous input)
    /// where the result leaves zero.
    fn creates_zero_crossing(self) -> bool {
        match self {
            UnaryMap::Power {
                convolution: MaxConvolution::Free,
                exponent,
            } => exponent > 1.0,
            UnaryMap::LambdaVee | UnaryMap::BnUnitTime => true,
            _ => false,
        }
    }
}

/// A weighted component of a mixture node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub dist: DistFn,
}

/// One node of the expression DAG.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Parametric(Family),
    Empirical(EmpiricalStep),
    /// Unit step at `at`.
    Dirac { at: f64 },
    /// `x ↦ child(scale·x + shift)`.
    AffineRescale {
        child: DistFn,
        scale: f64,
        shift: f64,
    },
    /// `0` for `x < cut`, `child(x)` otherwise.
    TruncateBelow { child: DistFn, cut: f64 },
    Pointwise1 { map: UnaryMap, child: DistFn },
    Pointwise2 {
        op: MaxConvolution,
        left: DistFn,
        right: DistFn,
    },
    /// Pointwise convex combination.
    Mixture { components: Vec<Component> },
}

#[derive(Debug)]
struct Inner {
    node: Node,
    class: DomainClass,
    discontinuities: Vec<f64>,
}

/// An immutable, cheaply clonable distribution function.
#[derive(Clone)]
pub struct DistFn(Arc<Inner>);

impl fmt::Debug for DistFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistFn")
            .field("class", &self.0.class)
            .field("node", &self.0.node)
            .finish()
    }
}

impl DistFn {
    /// Validates `node`, derives its class tag and discontinuity list.
    pub fn from_node(node: Node) -> Result<DistFn> {
        let (class, mut discs) = match &node {
            Node::Parametric(family) => {
                family.validate()?;
                (family.class(), family.discontinuities())
            }
            Node::Empirical(step) => (
                DomainClass::vanishing_below(step.points()[0]),
                step.points().to_vec(),
            ),
            Node::Dirac { at } => {
                if !at.is_finite() {
                    return Err(Error::parameter(format!("point mass location must be finite, got {at}")));
                }
                (DomainClass::vanishing_below(*at), vec![*at])
            }
            Node::AffineRescale {
                child,
                scale,
                shift,
            } => {
                if !(scale.is_finite() && *scale > 0.0) || !shift.is_finite() {
                    return Err(Error::parameter(format!(
                        "affine rescale needs finite scale > 0 and finite shift, got scale {scale}, shift {shift}"
                    )));
                }
                let moved = DomainClass::vanishing_below((child.alpha() - shift) / scale);
                let class = if *shift == 0.0 {
                    moved.max(child.class())
                } else {
                    moved
                };
                let discs = child
                    .discontinuities()
                    .iter()
                    .map(|d| (d - shift) / scale)
                    .collect();
                (class, discs)
            }
            Node::TruncateBelow { child, cut } => {
                if !cut.is_finite() {
                    return Err(Error::parameter(format!("truncation point must be finite, got {cut}")));
                }
                let class = child.class().max(DomainClass::vanishing_below(*cut));
                let mut discs: Vec<f64> = child
                    .discontinuities()
                    .iter()
                    .copied()
                    .filter(|d| d >= cut)
                    .collect();
                discs.push(*cut);
                (class, discs)
            }
            Node::Pointwise1 { map, child } => {
                map.validate(child)?;
                (child.class(), child.discontinuities().to_vec())
            }
            Node::Pointwise2 { op, left, right } => {
                if *op == MaxConvolution::Boolean
                    && !(left.class().is_positive() && right.class().is_positive())
                {
                    return Err(Error::class(format!(
                        "Boolean max-convolution is defined on Δ₊ only, got operands in {} and {}",
                        left.class(),
                        right.class()
                    )));
                }
                let mut discs = left.discontinuities().to_vec();
                discs.extend_from_slice(right.discontinuities());
                (left.class().max(right.class()), discs)
            }
            Node::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::parameter("mixture needs at least one component"));
                }
                let mut total = 0.0;
                for c in components {
                    if !(c.weight.is_finite() && c.weight > 0.0) {
                        return Err(Error::parameter(format!("mixture weights must be > 0, got {}", c.weight)));
                    }
                    total += c.weight;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::parameter(format!("mixture weights must sum to 1, got {total}")));
                }
                let class = components
                    .iter()
                    .map(|c| c.dist.class())
                    .min()
                    .unwrap_or(DomainClass::Real);
                let discs = components
                    .iter()
                    .flat_map(|c| c.dist.discontinuities().iter().copied())
                    .collect();
                (class, discs)
            }
        };

        let zero_crossing = match &node {
            Node::Pointwise1 { map, .. } => map.creates_zero_crossing(),
            Node::Pointwise2 { op, .. } => *op == MaxConvolution::Free,
            _ => false,
        };
        normalize_points(&mut discs);
        let mut dist = DistFn(Arc::new(Inner {
            node,
            class,
            discontinuities: discs,
        }));
        if zero_crossing {
            let a = dist.alpha();
            if a.is_finite() {
                let inner = Arc::get_mut(&mut dist.0).expect("freshly built node is uniquely owned");
                inner.discontinuities.push(a);
                normalize_points(&mut inner.discontinuities);
            }
        }
        Ok(dist)
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn class(&self) -> DomainClass {
        self.0.class
    }

    /// Known jump locations (plus conservatively declared kinks), sorted.
    pub fn discontinuities(&self) -> &[f64] {
        &self.0.discontinuities
    }

    /// Whether two handles share the same node.
    pub fn ptr_eq(&self, other: &DistFn) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn eval(&self, x: f64) -> UnitValue {
        UnitValue::clamped(self.value(x))
    }

    /// `F(x)` as a raw `f64` in `[0, 1]`.
    pub fn value(&self, x: f64) -> f64 {
        self.parts(x).value
    }

    /// `1 - F(x)`, propagated through the DAG in complementary form so that
    /// tails far below machine epsilon keep their relative accuracy.
    pub fn survival(&self, x: f64) -> f64 {
        self.parts(x).survival
    }

    /// `log F(x)`, accurate where `F(x)` itself underflows.
    pub fn log_value(&self, x: f64) -> f64 {
        self.parts(x).log
    }

    fn parts(&self, x: f64) -> Parts {
        let p = match &self.0.node {
            Node::Parametric(family) => Parts {
                value: family.value(x),
                survival: family.survival(x),
                log: family.log_value(x),
            },
            Node::Empirical(step) => Parts {
                value: step.value(x),
                survival: step.survival(x),
                log: step.value(x).ln(),
            },
            Node::Dirac { at } => {
                if x >= *at {
                    Parts::ONE
                } else {
                    Parts::ZERO
                }
            }
            Node::AffineRescale {
                child,
                scale,
                shift,
            } => child.parts(scale * x + shift),
            Node::TruncateBelow { child, cut } => {
                if x < *cut {
                    Parts::ZERO
                } else {
                    child.parts(x)
                }
            }
            Node::Pointwise1 { map, child } => map.apply(child.parts(x)),
            Node::Pointwise2 { op, left, right } => op.combine_parts(left.parts(x), right.parts(x)),
            Node::Mixture { components } => {
                let mut acc = Parts {
                    value: 0.0,
                    survival: 0.0,
                    log: f64::NEG_INFINITY,
                };
                for c in components {
                    let p = c.dist.parts(x);
                    acc.value += c.weight * p.value;
                    acc.survival += c.weight * p.survival;
                    acc.log = log_add_exp(acc.log, c.weight.ln() + p.log);
                }
                acc
            }
        };
        if x.is_nan() {
            return Parts::from_value(f64::NAN).clamped();
        }
        p.clamped()
    }

    /// Unit step at `at`.
    pub fn dirac(at: f64) -> Result<DistFn> {
        DistFn::from_node(Node::Dirac { at })
    }

    pub fn empirical(step: EmpiricalStep) -> Result<DistFn> {
        DistFn::from_node(Node::Empirical(step))
    }

    /// `x ↦ F(scale·x + shift)`.
    pub fn affine(&self, scale: f64, shift: f64) -> Result<DistFn> {
        DistFn::from_node(Node::AffineRescale {
            child: self.clone(),
            scale,
            shift,
        })
    }

    /// `0` below `cut`, `F` from `cut` on.
    pub fn truncate_below(&self, cut: f64) -> Result<DistFn> {
        DistFn::from_node(Node::TruncateBelow {
            child: self.clone(),
            cut,
        })
    }

    /// Pointwise convex combination. Zero-weight components are dropped.
    pub fn mixture(components: Vec<(f64, DistFn)>) -> Result<DistFn> {
        let mut kept: Vec<Component> = components
            .into_iter()
            .filter(|(w, _)| *w != 0.0)
            .map(|(weight, dist)| Component { weight, dist })
            .collect();
        if kept.len() == 1 && (kept[0].weight - 1.0).abs() <= 1e-12 {
            return Ok(kept.pop().map(|c| c.dist).expect("one component"));
        }
        DistFn::from_node(Node::Mixture { components: kept })
    }

    pub fn alpha(&self) -> f64 {
        support::alpha(self)
    }

    pub fn omega(&self) -> f64 {
        support::omega(self)
    }

    /// `α(F)` by bisection on the monotone evaluation, ignoring closed forms.
    pub fn alpha_numeric(&self) -> f64 {
        support::bisect_alpha(self)
    }

    /// `ω(F)` by bisection on the monotone evaluation, ignoring closed forms.
    pub fn omega_numeric(&self) -> f64 {
        support::bisect_omega(self)
    }

    fn as_dirac(&self) -> Option<f64> {
        match self.node() {
            Node::Dirac { at } => Some(*at),
            _ => None,
        }
    }
}

fn normalize_points(points: &mut Vec<f64>) {
    points.retain(|p| p.is_finite());
    points.sort_by(f64::total_cmp);
    points.dedup();
}

/// `F op G`, pointwise.
pub fn combine(op: MaxConvolution, f: &DistFn, g: &DistFn) -> Result<DistFn> {
    DistFn::from_node(Node::Pointwise2 {
        op,
        left: f.clone(),
        right: g.clone(),
    })
}

/// Convolution power of `f`.
///
/// Free powers need `t >= 1`; Boolean powers need `f ∈ Δ₊` and `t >= 0`, with
/// `t = 0` giving the unit step at `α(f)`; classical powers need `t > 0`.
pub fn power(op: MaxConvolution, f: &DistFn, t: f64) -> Result<DistFn> {
    if op == MaxConvolution::Boolean && t == 0.0 {
        if !f.class().is_positive() {
            return Err(Error::class(format!(
                "Boolean power requires an argument in Δ₊, got one in {}",
                f.class()
            )));
        }
        return DistFn::dirac(f.alpha());
    }
    DistFn::from_node(Node::Pointwise1 {
        map: UnaryMap::Power {
            convolution: op,
            exponent: t,
        },
        child: f.clone(),
    })
}

/// Applies `Λ∨`, `𝒳` or `𝒳⁻¹` pointwise. `𝒳` and `𝒳⁻¹` require `f ∈ Δ₊`.
pub fn map(transport: Transport, f: &DistFn) -> Result<DistFn> {
    DistFn::from_node(Node::Pointwise1 {
        map: transport.into(),
        child: f.clone(),
    })
}

/// Freely max-infinitely divisible iff `α(F) > -∞`.
pub fn is_freely_max_id(f: &DistFn) -> bool {
    f.alpha() > f64::NEG_INFINITY
}

/// Free regular max-infinite divisibility on Δ₊⁽⁰⁾: iff `α(F) > 0`.
pub fn is_free_regular_max_id(f: &DistFn) -> Result<bool> {
    if f.class() != DomainClass::StrictlyPositive {
        return Err(Error::class(format!(
            "free regular max-infinite divisibility is defined on Δ₊⁽⁰⁾, got an argument in {}",
            f.class()
        )));
    }
    Ok(f.alpha() > 0.0)
}

/// The free `n`-th root `(1/n)F + (1 - 1/n)` on `[α(F), ∞)`, `0` below.
pub fn free_nth_root(f: &DistFn, n: u64) -> Result<DistFn> {
    if n == 0 {
        return Err(Error::parameter("root order must be >= 1"));
    }
    let a = f.alpha();
    if !a.is_finite() {
        return Err(Error::domain(format!(
            "free roots exist only when α(F) > -∞, got α(F) = {a}"
        )));
    }
    if n == 1 || f.as_dirac().is_some() {
        return Ok(f.clone());
    }
    let inv = 1.0 / n as f64;
    // F vanishes below α(F), so the point mass supplies the constant branch.
    DistFn::mixture(vec![(1.0 - inv, DistFn::dirac(a)?), (inv, f.clone())])
}

/// The Boolean `n`-th root `F / (1/n - (1/n - 1)F)`.
pub fn bool_nth_root(f: &DistFn, n: u64) -> Result<DistFn> {
    if n == 0 {
        return Err(Error::parameter("root order must be >= 1"));
    }
    if !f.class().is_positive() {
        return Err(Error::class(format!(
            "Boolean roots are defined on Δ₊, got an argument in {}",
            f.class()
        )));
    }
    if n == 1 || f.as_dirac().is_some() {
        return Ok(f.clone());
    }
    power(MaxConvolution::Boolean, f, 1.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eval_examples() {
        let d0 = DistFn::dirac(0.0).unwrap();
        assert_eq!(d0.eval(-1.0).get(), 0.0);
        assert_eq!(d0.eval(0.0).get(), 1.0);
        let p1 = families::pareto(1.0).unwrap();
        assert!(close(p1.affine(2.0, 0.0).unwrap().value(1.0), 0.5, 1e-15));
        let free2 = combine(MaxConvolution::Free, &p1, &p1).unwrap();
        let pow2 = power(MaxConvolution::Free, &p1, 2.0).unwrap();
        for x in [0.5, 1.5, 4.0, 30.0] {
            assert!(close(free2.value(x), pow2.value(x), 1e-15));
        }
        assert!(close(free2.value(4.0), 0.5, 1e-15));
    }

    #[test]
    fn combine_examples() {
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let b = combine(MaxConvolution::Boolean, &d1, &d1).unwrap();
        assert!(close(b.value(1.0), 1.0 / 3.0, 1e-15));
        let one = DistFn::dirac(-1e6).unwrap();
        let g = families::gumbel();
        let c = combine(MaxConvolution::Classical, &g, &one).unwrap();
        for x in [-3.0, 0.0, 2.0] {
            assert_eq!(c.value(x), g.value(x));
        }
        let err = combine(MaxConvolution::Boolean, &g, &d1).unwrap_err();
        assert!(matches!(err, Error::Class(_)));
    }

    #[test]
    fn combine_class_is_most_specific() {
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let step = DistFn::dirac(0.0).unwrap();
        assert_eq!(step.class(), DomainClass::Positive);
        for op in MaxConvolution::ALL {
            let c = combine(op, &d1, &step).unwrap();
            assert_eq!(c.class(), DomainClass::StrictlyPositive);
        }
    }

    #[test]
    fn power_examples() {
        let phi1 = families::frechet(1.0).unwrap();
        let x = 1.0 / 2f64.ln();
        let p = power(MaxConvolution::Free, &phi1, 2.0).unwrap();
        assert!(close(p.value(x), 0.0, 1e-12));
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let b = power(MaxConvolution::Boolean, &d1, 2.0).unwrap();
        assert!(close(b.value(1.0), 1.0 / 3.0, 1e-15));
        let c = power(MaxConvolution::Classical, &phi1, 1.0).unwrap();
        assert!(close(c.value(2.5), phi1.value(2.5), 1e-15));
        assert!(matches!(power(MaxConvolution::Free, &phi1, 0.5), Err(Error::Domain(_))));
        assert!(matches!(
            power(MaxConvolution::Boolean, &families::gumbel(), 2.0),
            Err(Error::Class(_))
        ));
        let zero = power(MaxConvolution::Boolean, &families::pareto(1.0).unwrap(), 0.0).unwrap();
        assert_eq!(zero.value(0.999), 0.0);
        assert_eq!(zero.value(1.0), 1.0);
    }

    #[test]
    fn map_examples() {
        let lg = map(Transport::LambdaVee, &families::gumbel()).unwrap();
        assert!(close(lg.value(0.0), 0.0, 1e-15));
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let chi = map(Transport::Chi, &d1).unwrap();
        assert!(close(chi.value(1.0), (-1.0f64).exp(), 1e-15));
        let back = map(Transport::ChiInv, &chi).unwrap();
        for x in [0.1, 1.0, 7.0] {
            assert!(close(back.value(x), d1.value(x), 1e-14));
        }
        assert!(matches!(map(Transport::Chi, &families::gumbel()), Err(Error::Class(_))));
    }

    #[test]
    fn alpha_examples() {
        for a in [0.5, 1.0, 3.0] {
            assert_eq!(families::pareto(a).unwrap().alpha(), 1.0);
        }
        assert_eq!(families::gumbel().alpha(), f64::NEG_INFINITY);
        let p = power(MaxConvolution::Free, &families::frechet(1.0).unwrap(), 2.0).unwrap();
        assert!(close(p.alpha(), 1.0 / 2f64.ln(), 1e-9));
        assert!(p.discontinuities().iter().any(|d| close(*d, 1.0 / 2f64.ln(), 1e-9)));
    }

    #[test]
    fn freely_max_id_predicates() {
        assert!(is_freely_max_id(&families::pareto(2.0).unwrap()));
        assert!(!is_freely_max_id(&families::gumbel()));
        assert!(is_freely_max_id(&map(Transport::LambdaVee, &families::gumbel()).unwrap()));
        assert!(is_free_regular_max_id(&families::pareto(2.0).unwrap()).unwrap());
        assert!(!is_free_regular_max_id(&families::frechet(2.0).unwrap()).unwrap());
        assert!(matches!(
            is_free_regular_max_id(&families::gumbel()),
            Err(Error::Class(_))
        ));
    }

    #[test]
    fn free_root_examples() {
        let p1 = families::pareto(1.0).unwrap();
        let g = free_nth_root(&p1, 2).unwrap();
        assert!(close(g.value(2.0), 0.75, 1e-15));
        assert_eq!(g.value(0.9), 0.0);
        let back = power(MaxConvolution::Free, &g, 2.0).unwrap();
        assert!(close(back.value(2.0), 0.5, 1e-15));
        assert!(free_nth_root(&p1, 1).unwrap().ptr_eq(&p1));
        let d = DistFn::dirac(3.0).unwrap();
        assert!(free_nth_root(&d, 7).unwrap().ptr_eq(&d));
        assert!(matches!(free_nth_root(&families::gumbel(), 3), Err(Error::Domain(_))));
    }

    #[test]
    fn bool_root_examples() {
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let r = bool_nth_root(&d1, 2).unwrap();
        assert!(close(r.value(1.0), 2.0 / 3.0, 1e-15));
        let back = power(MaxConvolution::Boolean, &r, 2.0).unwrap();
        assert!(close(back.value(1.0), 0.5, 1e-15));
        assert!(bool_nth_root(&d1, 1).unwrap().ptr_eq(&d1));
        let d = DistFn::dirac(2.0).unwrap();
        assert!(bool_nth_root(&d, 4).unwrap().ptr_eq(&d));
        assert!(matches!(bool_nth_root(&families::gumbel(), 2), Err(Error::Class(_))));
    }

    #[test]
    fn class_tags_are_sound() {
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let cases = vec![
            d1.clone(),
            d1.affine(1.0, -0.5).unwrap(),
            families::gumbel().truncate_below(0.0).unwrap(),
            families::gumbel().truncate_below(0.3).unwrap(),
            power(MaxConvolution::Free, &d1, 3.0).unwrap(),
            DistFn::mixture(vec![(0.5, DistFn::dirac(0.0).unwrap()), (0.5, d1.clone())]).unwrap(),
        ];
        for f in cases {
            if f.class().is_positive() {
                assert_eq!(f.value(-0.5), 0.0);
            }
            if f.class() == DomainClass::StrictlyPositive {
                assert_eq!(f.value(0.0), 0.0);
            }
        }
    }

    #[test]
    fn survival_matches_complement_in_the_bulk() {
        let d2 = families::dagum(1.0, 2.0).unwrap();
        let f = combine(
            MaxConvolution::Boolean,
            &power(MaxConvolution::Free, &d2, 2.5).unwrap(),
            &map(Transport::ChiInv, &families::frechet(1.0).unwrap()).unwrap(),
        )
        .unwrap();
        for x in [0.3, 1.0, 2.0, 10.0] {
            assert!(close(f.survival(x), 1.0 - f.value(x), 1e-13));
        }
        // deep in the tail the complement keeps relative accuracy
        let x = 1e9;
        let s = power(MaxConvolution::Classical, &d2, 3.0).unwrap().survival(x);
        assert!(((s / (3.0 * d2.survival(x))) - 1.0).abs() < 1e-12);
    }
}
