//! Closed-form parametric laws: the classical and free extreme-value
//! families, the Dagum family and the max compound-Poisson laws.

use serde::{Deserialize, Serialize};

use crate::distfn::{DistFn, DomainClass, Node};
use crate::error::{Error, Result};

/// A parametric leaf.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    /// `exp(-e^{-x})`.
    Gumbel,
    /// `Φ_α(x) = exp(-x^{-α})` for `x > 0`.
    Frechet { alpha: f64 },
    /// `exp(-(-x)^α)` for `x < 0`, `1` for `x >= 0`.
    Weibull { alpha: f64 },
    /// `(1 - e^{-x})_+`.
    FreeExponential,
    /// `P_α(x) = (1 - x^{-α})_+`.
    Pareto { alpha: f64 },
    /// `(1 - |x|^α)_+` for `x <= 0`, `1` for `x > 0`.
    BetaLaw { alpha: f64 },
    /// `D_{λ,α}(x) = 1 / (1 + λ x^{-α})` for `x > 0`.
    Dagum { lambda: f64, alpha: f64 },
    /// `Π^∨_{λ,G}(x) = exp(-λ(1 - G(x)))` for `x >= 0`.
    CompoundPoissonClassical { lambda: f64, base: DistFn },
    /// `Π^{⊡∨}_{λ,G}(x) = (1 - λ(1 - G(x)))_+` for `x >= 0`.
    CompoundPoissonFree { lambda: f64, base: DistFn },
}

fn check_index(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(format!("index α must be a finite number > 0, got {alpha}")))
    }
}

fn check_rate(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(format!("compound-Poisson rate λ must be finite and >= 0, got {lambda}")))
    }
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match self {
            Family::Gumbel | Family::FreeExponential => Ok(()),
            Family::Frechet { alpha }
            | Family::Weibull { alpha }
            | Family::Pareto { alpha }
            | Family::BetaLaw { alpha } => check_index(*alpha),
            Family::Dagum { lambda, alpha } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(Error::parameter(format!("Dagum λ must be a finite number > 0, got {lambda}")));
                }
                check_index(*alpha)
            }
            Family::CompoundPoissonClassical { lambda, .. }
            | Family::CompoundPoissonFree { lambda, .. } => check_rate(*lambda),
        }
    }

    pub fn class(&self) -> DomainClass {
        match self {
            Family::Gumbel | Family::Weibull { .. } | Family::FreeExponential | Family::BetaLaw { .. } => {
                DomainClass::Real
            }
            Family::Frechet { .. } | Family::Pareto { .. } | Family::Dagum { .. } => {
                DomainClass::StrictlyPositive
            }
            Family::CompoundPoissonClassical { .. } | Family::CompoundPoissonFree { .. } => {
                DomainClass::Positive
            }
        }
    }

    pub fn discontinuities(&self) -> Vec<f64> {
        match self {
            Family::CompoundPoissonClassical { base, .. } | Family::CompoundPoissonFree { base, .. } => {
                let mut d: Vec<f64> = base
                    .discontinuities()
                    .iter()
                    .copied()
                    .filter(|x| *x >= 0.0)
                    .collect();
                d.push(0.0);
                d
            }
            _ => Vec::new(),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match self {
            Family::Gumbel => (-(-x).exp()).exp(),
            Family::Frechet { alpha } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-x.powf(-alpha)).exp()
                }
            }
            Family::Weibull { alpha } => {
                if x >= 0.0 {
                    1.0
                } else {
                    (-(-x).powf(*alpha)).exp()
                }
            }
            Family::FreeExponential => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            Family::Pareto { alpha } => {
                if x <= 1.0 {
                    0.0
                } else {
                    1.0 - x.powf(-alpha)
                }
            }
            Family::BetaLaw { alpha } => {
                if x > 0.0 {
                    1.0
                } else {
                    (1.0 - (-x).powf(*alpha)).max(0.0)
                }
            }
            Family::Dagum { lambda, alpha } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let r = lambda * x.powf(-alpha);
                if r.is_infinite() {
                    0.0
                } else {
                    1.0 / (1.0 + r)
                }
            }
            Family::CompoundPoissonClassical { lambda, base } => {
                if x < 0.0 {
                    0.0
                } else {
                    (-lambda * base.survival(x)).exp()
                }
            }
            Family::CompoundPoissonFree { lambda, base } => {
                if x < 0.0 {
                    0.0
                } else {
                    (1.0 - lambda * base.survival(x)).max(0.0)
                }
            }
        }
    }

    /// `1 - value(x)` in closed form.
    pub fn survival(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match self {
            Family::Gumbel => -(-(-x).exp()).exp_m1(),
            Family::Frechet { alpha } => {
                if x <= 0.0 {
                    1.0
                } else {
                    -(-x.powf(-alpha)).exp_m1()
                }
            }
            Family::Weibull { alpha } => {
                if x >= 0.0 {
                    0.0
                } else {
                    -(-(-x).powf(*alpha)).exp_m1()
                }
            }
            Family::FreeExponential => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-x).exp()
                }
            }
            Family::Pareto { alpha } => {
                if x <= 1.0 {
                    1.0
                } else {
                    x.powf(-alpha)
                }
            }
            Family::BetaLaw { alpha } => {
                if x > 0.0 {
                    0.0
                } else {
                    (-x).powf(*alpha).min(1.0)
                }
            }
            Family::Dagum { lambda, alpha } => {
                if x <= 0.0 {
                    return 1.0;
                }
                let r = lambda * x.powf(-alpha);
                if r.is_infinite() {
                    1.0
                } else {
                    r / (1.0 + r)
                }
            }
            Family::CompoundPoissonClassical { lambda, base } => {
                if x < 0.0 {
                    1.0
                } else {
                    -(-lambda * base.survival(x)).exp_m1()
                }
            }
            Family::CompoundPoissonFree { lambda, base } => {
                if x < 0.0 {
                    1.0
                } else {
                    (lambda * base.survival(x)).min(1.0)
                }
            }
        }
    }

    /// `log value(x)`, in closed form where `value` underflows.
    pub fn log_value(&self, x: f64) -> f64 {
        match self {
            Family::Gumbel => -(-x).exp(),
            Family::Frechet { alpha } if x > 0.0 => -x.powf(-alpha),
            Family::Weibull { alpha } if x < 0.0 => -(-x).powf(*alpha),
            Family::Dagum { lambda, alpha } if x > 0.0 => {
                let r = lambda * x.powf(-alpha);
                -r.ln_1p()
            }
            Family::CompoundPoissonClassical { lambda, base } if x >= 0.0 => -lambda * base.survival(x),
            _ => self.value(x).ln(),
        }
    }

    /// `α(F)` when it has a closed form.
    pub fn alpha(&self) -> Option<f64> {
        match self {
            Family::Gumbel | Family::Weibull { .. } => Some(f64::NEG_INFINITY),
            Family::Frechet { .. } | Family::FreeExponential | Family::Dagum { .. } => Some(0.0),
            Family::Pareto { .. } => Some(1.0),
            Family::BetaLaw { .. } => Some(-1.0),
            Family::CompoundPoissonClassical { .. } => Some(0.0),
            Family::CompoundPoissonFree { lambda, .. } => (*lambda < 1.0).then_some(0.0),
        }
    }

    /// `ω(F)` when it has a closed form.
    pub fn omega(&self) -> Option<f64> {
        match self {
            Family::Gumbel
            | Family::Frechet { .. }
            | Family::FreeExponential
            | Family::Pareto { .. }
            | Family::Dagum { .. } => Some(f64::INFINITY),
            Family::Weibull { .. } | Family::BetaLaw { .. } => Some(0.0),
            Family::CompoundPoissonClassical { lambda, base }
            | Family::CompoundPoissonFree { lambda, base } => {
                if *lambda == 0.0 {
                    Some(0.0)
                } else {
                    Some(base.omega().max(0.0))
                }
            }
        }
    }
}

/// Builds the leaf for `family` after validating its parameters.
pub fn make(family: Family) -> Result<DistFn> {
    if let Family::CompoundPoissonClassical { base, .. } | Family::CompoundPoissonFree { base, .. } = &family {
        warn_if_atom_at_zero(base);
    }
    DistFn::from_node(Node::Parametric(family))
}

fn warn_if_atom_at_zero(base: &DistFn) {
    let jump = base.value(0.0) - base.value(-1e-9);
    if jump > 1e-9 || base.discontinuities().contains(&0.0) {
        log::warn!(
            "compound-Poisson base law has an atom at 0 (jump {jump:.3e}); the closed form is evaluated regardless"
        );
    }
}

pub fn gumbel() -> DistFn {
    make(Family::Gumbel).expect("Gumbel has no parameters")
}

pub fn frechet(alpha: f64) -> Result<DistFn> {
    make(Family::Frechet { alpha })
}

pub fn weibull(alpha: f64) -> Result<DistFn> {
    make(Family::Weibull { alpha })
}

pub fn free_exponential() -> DistFn {
    make(Family::FreeExponential).expect("free exponential law has no parameters")
}

pub fn pareto(alpha: f64) -> Result<DistFn> {
    make(Family::Pareto { alpha })
}

pub fn beta_law(alpha: f64) -> Result<DistFn> {
    make(Family::BetaLaw { alpha })
}

pub fn dagum(lambda: f64, alpha: f64) -> Result<DistFn> {
    make(Family::Dagum { lambda, alpha })
}

pub fn cp_classical(lambda: f64, base: &DistFn) -> Result<DistFn> {
    make(Family::CompoundPoissonClassical {
        lambda,
        base: base.clone(),
    })
}

pub fn cp_free(lambda: f64, base: &DistFn) -> Result<DistFn> {
    make(Family::CompoundPoissonFree {
        lambda,
        base: base.clone(),
    })
}

/// `F_N = (1 - λ/N) 1_{[0,∞)} + (λ/N) G`, whose `N`-fold classical and free
/// powers approach the two compound-Poisson laws.
pub fn cp_prelimit(lambda: f64, base: &DistFn, n: u64) -> Result<DistFn> {
    check_rate(lambda)?;
    if n == 0 || (n as f64) < lambda {
        return Err(Error::parameter(format!("pre-limit index N must be >= max(λ, 1), got N = {n}, λ = {lambda}")));
    }
    warn_if_atom_at_zero(base);
    let w = lambda / n as f64;
    DistFn::mixture(vec![(1.0 - w, DistFn::dirac(0.0)?), (w, base.clone())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::{map, power, MaxConvolution, Transport};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn make_examples() {
        assert!(close(frechet(1.0).unwrap().value(1.0), (-1.0f64).exp(), 1e-15));
        assert!(close(pareto(1.0).unwrap().value(2.0), 0.5, 1e-15));
        assert!(close(dagum(1.0, 1.0).unwrap().value(1.0), 0.5, 1e-15));
        let f = cp_free(0.0, &frechet(1.0).unwrap()).unwrap();
        for x in [0.0, 0.5, 3.0] {
            assert_eq!(f.value(x), 1.0);
        }
    }

    #[test]
    fn parameters_are_checked() {
        assert!(matches!(frechet(0.0), Err(Error::Parameter(_))));
        assert!(matches!(pareto(-1.0), Err(Error::Parameter(_))));
        assert!(matches!(dagum(0.0, 1.0), Err(Error::Parameter(_))));
        assert!(matches!(cp_classical(-0.5, &gumbel()), Err(Error::Parameter(_))));
        assert!(matches!(weibull(f64::NAN), Err(Error::Parameter(_))));
    }

    #[test]
    fn class_table() {
        assert_eq!(gumbel().class(), DomainClass::Real);
        assert_eq!(weibull(2.0).unwrap().class(), DomainClass::Real);
        assert_eq!(free_exponential().class(), DomainClass::Real);
        assert_eq!(beta_law(1.0).unwrap().class(), DomainClass::Real);
        for f in [frechet(1.0).unwrap(), pareto(1.0).unwrap(), dagum(2.0, 1.0).unwrap()] {
            assert_eq!(f.class(), DomainClass::StrictlyPositive);
        }
        let g = frechet(1.0).unwrap();
        assert_eq!(cp_classical(1.0, &g).unwrap().class(), DomainClass::Positive);
        assert_eq!(cp_free(1.0, &g).unwrap().class(), DomainClass::Positive);
    }

    #[test]
    fn prelimit_examples() {
        let g = frechet(1.0).unwrap();
        let f1 = cp_prelimit(1.0, &g, 1).unwrap();
        for x in [0.1, 1.0, 5.0] {
            assert_eq!(f1.value(x), g.value(x));
        }
        let f2 = cp_prelimit(1.0, &g, 2).unwrap();
        assert!(close(f2.value(1.0), 0.5 + 0.5 * (-1.0f64).exp(), 1e-15));
        let f0 = cp_prelimit(0.0, &g, 5).unwrap();
        assert_eq!(f0.value(0.0), 1.0);
        assert_eq!(f0.value(-0.1), 0.0);
        assert!(matches!(cp_prelimit(3.0, &g, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn survival_is_exact_complement() {
        let laws = [
            gumbel(),
            frechet(1.5).unwrap(),
            weibull(2.0).unwrap(),
            free_exponential(),
            pareto(0.5).unwrap(),
            beta_law(3.0).unwrap(),
            dagum(2.0, 1.0).unwrap(),
            cp_classical(0.7, &frechet(1.0).unwrap()).unwrap(),
            cp_free(1.5, &frechet(1.0).unwrap()).unwrap(),
        ];
        for f in &laws {
            for x in [-2.0, -0.5, 0.0, 0.3, 1.0, 2.5, 40.0] {
                assert!(close(f.value(x) + f.survival(x), 1.0, 1e-14));
            }
        }
    }

    #[test]
    fn endpoints_match_bisection() {
        // laws whose values do not underflow next to their endpoints
        let laws = [
            weibull(1.0).unwrap(),
            free_exponential(),
            pareto(0.5).unwrap(),
            beta_law(1.0).unwrap(),
            dagum(2.0, 1.0).unwrap(),
            cp_classical(0.7, &beta_law(1.0).unwrap().affine(1.0, -2.0).unwrap()).unwrap(),
            cp_free(0.5, &dagum(1.0, 1.0).unwrap()).unwrap(),
        ];
        for f in &laws {
            let (a, w) = (f.alpha(), f.omega());
            if a.is_finite() {
                assert!(close(a, f.alpha_numeric(), 1e-9), "{f:?}");
            }
            if w.is_finite() {
                assert!(close(w, f.omega_numeric(), 1e-7), "{f:?}");
            }
        }
    }

    #[test]
    fn free_cp_is_lambda_of_classical() {
        let g = frechet(1.0).unwrap();
        for lambda in [0.5, 1.0, 2.0] {
            let free = cp_free(lambda, &g).unwrap();
            let via = map(Transport::LambdaVee, &cp_classical(lambda, &g).unwrap()).unwrap();
            for x in [0.0, 0.2, 1.0, 3.0, 50.0] {
                assert!(close(free.value(x), via.value(x), 1e-14));
            }
        }
    }

    #[test]
    fn stability_of_pareto_under_free_powers() {
        for alpha in [0.5, 1.0, 2.0] {
            let p = pareto(alpha).unwrap();
            for n in [2.0, 5.0] {
                let lhs = power(MaxConvolution::Free, &p, n).unwrap();
                let rhs = p.affine(n.powf(-1.0 / alpha), 0.0).unwrap();
                for x in [0.5, 1.5, 3.0, 10.0, 1e3] {
                    assert!(close(lhs.value(x), rhs.value(x), 1e-12));
                }
            }
        }
    }
}
