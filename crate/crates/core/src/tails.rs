//! Survival functions, regular-variation index estimates and the Fréchet
//! domain-of-attraction classifier.

use serde::{Deserialize, Serialize};

use crate::distfn::{power, DistFn, MaxConvolution};
use crate::error::{Error, Result};
use crate::transforms;

pub const DEFAULT_PROBES: [f64; 5] = [1e2, 1e3, 1e4, 1e5, 1e6];
pub const DEFAULT_RATIO_BASE: f64 = 2.0;
/// Largest spread of the last three index estimates accepted as "stable".
pub const STABILITY_RESIDUAL: f64 = 0.05;

/// `1 - F(x)`.
pub fn survival(f: &DistFn, x: f64) -> f64 {
    f.survival(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// Survival regularly varying with index `-alpha`: attracted to `Φ_α`
    /// classically, to `P_α` freely and to `D_α` in the Boolean sense.
    FrechetDomain { alpha: f64 },
    NotClassified { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub t: f64,
    pub probes: Vec<f64>,
    /// `survival(t·x) / survival(x)` per probe.
    pub ratios: Vec<f64>,
    /// `-log(ratio) / log t` per probe.
    pub estimates: Vec<f64>,
    /// The estimate at the largest probe.
    pub index: Option<f64>,
    /// Spread (max - min) of the last three estimates.
    pub residual: Option<f64>,
    pub classification: Classification,
}

impl TailReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,ratio,estimate\n");
        for ((x, r), e) in self.probes.iter().zip(&self.ratios).zip(&self.estimates) {
            out.push_str(&format!("{x},{r},{e}\n"));
        }
        out
    }
}

fn check_probes(t: f64, probes: &[f64]) -> Result<()> {
    if !(t.is_finite() && t > 1.0) {
        return Err(Error::parameter(format!("ratio base t must be > 1, got {t}")));
    }
    if probes.is_empty() {
        return Err(Error::parameter("at least one probe point is needed"));
    }
    if probes.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(Error::parameter("probe points must be finite and > 0"));
    }
    if probes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::parameter("probe points must be strictly increasing"));
    }
    Ok(())
}

fn positive_survival(f: &DistFn, x: f64) -> Result<f64> {
    let s = f.survival(x);
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::TailVanished { x })
    }
}

/// Per-probe index estimates `-log(S(tx)/S(x)) / log t`.
pub fn rv_index(f: &DistFn, t: f64, probes: &[f64]) -> Result<TailReport> {
    check_probes(t, probes)?;
    let mut ratios = Vec::with_capacity(probes.len());
    for &x in probes {
        let s = positive_survival(f, x)?;
        let st = positive_survival(f, t * x)?;
        ratios.push(st / s);
    }
    let estimates: Vec<f64> = ratios.iter().map(|r| -r.ln() / t.ln()).collect();
    let tail = &estimates[estimates.len().saturating_sub(3)..];
    let residual = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - tail.iter().copied().fold(f64::INFINITY, f64::min);
    let index = *estimates.last().expect("at least one probe");
    let classification = if !(index.is_finite() && index > 0.0) {
        Classification::NotClassified {
            reason: format!("index estimate {index} is not a positive finite number"),
        }
    } else if !(residual < STABILITY_RESIDUAL) {
        Classification::NotClassified {
            reason: format!("index estimates do not stabilize (spread {residual:.3e} over the last probes)"),
        }
    } else {
        Classification::FrechetDomain { alpha: index }
    };
    Ok(TailReport {
        t,
        probes: probes.to_vec(),
        ratios,
        estimates,
        index: Some(index),
        residual: Some(residual),
        classification,
    })
}

/// Like [`rv_index`], but a vanishing tail is reported as `NotClassified`
/// instead of an error, since a bounded support is not in any Fréchet domain.
pub fn classify_domain(f: &DistFn, t: f64, probes: &[f64]) -> Result<TailReport> {
    match rv_index(f, t, probes) {
        Err(Error::TailVanished { x }) => Ok(TailReport {
            t,
            probes: probes.to_vec(),
            ratios: Vec::new(),
            estimates: Vec::new(),
            index: None,
            residual: None,
            classification: Classification::NotClassified {
                reason: format!("survival function vanishes at x = {x}"),
            },
        }),
        other => other,
    }
}

/// `survival(F^{op t}, x) / (t · survival(F, x))` per probe.
pub fn tail_equivalence(f: &DistFn, conv: MaxConvolution, t: f64, probes: &[f64]) -> Result<Vec<(f64, f64)>> {
    let p = power(conv, f, t)?;
    probes
        .iter()
        .map(|&x| {
            let s = positive_survival(f, x)?;
            Ok((x, p.survival(x) / (t * s)))
        })
        .collect()
}

/// `survival(B_t^M(F), x) / survival(F, x)` per probe.
pub fn bn_tail_ratios(f: &DistFn, t: f64, probes: &[f64]) -> Result<Vec<(f64, f64)>> {
    let b = transforms::bn_at(f, t)?;
    probes
        .iter()
        .map(|&x| {
            let s = positive_survival(f, x)?;
            Ok((x, b.survival(x) / s))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn survival_examples() {
        assert_eq!(survival(&families::dagum(1.0, 1.0).unwrap(), 1.0), 0.5);
        assert_eq!(survival(&families::beta_law(2.0).unwrap(), 0.5), 0.0);
        let s = survival(&families::frechet(1.0).unwrap(), 1e4);
        assert!((s + (-1e-4f64).exp_m1()).abs() < 1e-18);
    }

    #[test]
    fn rv_index_examples() {
        let d2 = families::dagum(1.0, 2.0).unwrap();
        let r = rv_index(&d2, 2.0, &[1e1, 1e2, 1e3]).unwrap();
        assert!((r.index.unwrap() - 2.0).abs() < 1e-3);
        let phi = families::frechet(1.0).unwrap();
        let r = rv_index(&phi, 2.0, &DEFAULT_PROBES).unwrap();
        assert!((r.index.unwrap() - 1.0).abs() < 1e-3);
        assert_eq!(
            rv_index(&DistFn::dirac(3.0).unwrap(), 2.0, &DEFAULT_PROBES),
            Err(Error::TailVanished { x: 1e2 })
        );
        assert!(rv_index(&phi, 1.0, &DEFAULT_PROBES).is_err());
        assert!(rv_index(&phi, 2.0, &[10.0, 5.0]).is_err());
    }

    #[test]
    fn tail_equivalence_examples() {
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let r = tail_equivalence(&d1, MaxConvolution::Free, 3.0, &[1e3]).unwrap();
        assert_eq!(r[0].1, 1.0);
        let phi = families::frechet(1.0).unwrap();
        let r = tail_equivalence(&phi, MaxConvolution::Classical, 2.0, &[1e3]).unwrap();
        assert!((r[0].1 - (1.0 + phi.value(1e3)) / 2.0).abs() < 1e-12);
        let r = tail_equivalence(&d1, MaxConvolution::Boolean, 2.0, &[1e3]).unwrap();
        assert!((r[0].1 - 1.0 / (2.0 - d1.value(1e3))).abs() < 1e-12);
    }

    #[test]
    fn classifier_examples() {
        let r = classify_domain(&families::dagum(1.0, 2.0).unwrap(), 2.0, &DEFAULT_PROBES).unwrap();
        assert!(matches!(r.classification, Classification::FrechetDomain { alpha } if (alpha - 2.0).abs() < 1e-3));
        let r = classify_domain(&families::pareto(1.5).unwrap(), 2.0, &DEFAULT_PROBES).unwrap();
        assert!(matches!(r.classification, Classification::FrechetDomain { alpha } if (alpha - 1.5).abs() < 1e-12));
        for probes in [&DEFAULT_PROBES[..], &[1.0, 2.0, 4.0, 8.0, 16.0][..]] {
            let r = classify_domain(&families::gumbel(), 2.0, probes).unwrap();
            assert!(matches!(r.classification, Classification::NotClassified { .. }));
        }
    }

    #[test]
    fn bn_preserves_tails() {
        let d = families::dagum(1.0, 1.5).unwrap();
        let r = bn_tail_ratios(&d, 2.0, &[1e4, 1e5, 1e6]).unwrap();
        assert!((r[2].1 - 1.0).abs() < 1e-6);
    }
}
