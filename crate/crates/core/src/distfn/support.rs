//! Support endpoints `α(F) = sup{F = 0}` and `ω(F) = inf{F = 1}`.

use super::{DistFn, MaxConvolution, Node, UnaryMap};

/// Absolute tolerance of the endpoint bisection, in `x`.
pub const BISECTION_TOLERANCE: f64 = 1e-10;
/// Iteration cap of the endpoint bisection.
pub const BISECTION_MAX_ITER: usize = 200;
/// Brackets are searched up to `±BRACKET_CAP`; beyond that the endpoint is infinite.
pub const BRACKET_CAP: f64 = 1e9;

pub(crate) fn alpha(f: &DistFn) -> f64 {
    match f.node() {
        Node::Parametric(family) => family.alpha().unwrap_or_else(|| bisect_alpha(f)),
        Node::Empirical(step) => step.points()[0],
        Node::Dirac { at } => *at,
        Node::AffineRescale {
            child,
            scale,
            shift,
        } => (alpha(child) - shift) / scale,
        Node::TruncateBelow { child, cut } => alpha(child).max(*cut),
        Node::Pointwise1 { map, child } => match map {
            UnaryMap::Power {
                convolution: MaxConvolution::Free,
                exponent,
            } if *exponent > 1.0 => bisect_alpha(f),
            UnaryMap::LambdaVee | UnaryMap::BnUnitTime => bisect_alpha(f),
            _ => alpha(child),
        },
        Node::Pointwise2 { op, left, right } => match op {
            MaxConvolution::Free => bisect_alpha(f),
            _ => alpha(left).max(alpha(right)),
        },
        Node::Mixture { components } => components
            .iter()
            .map(|c| alpha(&c.dist))
            .fold(f64::INFINITY, f64::min),
    }
}

pub(crate) fn omega(f: &DistFn) -> f64 {
    match f.node() {
        Node::Parametric(family) => family.omega().unwrap_or_else(|| bisect_omega(f)),
        Node::Empirical(step) => *step.points().last().expect("non-empty sample"),
        Node::Dirac { at } => *at,
        Node::AffineRescale {
            child,
            scale,
            shift,
        } => (omega(child) - shift) / scale,
        Node::TruncateBelow { child, cut } => omega(child).max(*cut),
        // every scalar map and operation reaches 1 exactly when its inputs do
        Node::Pointwise1 { child, .. } => omega(child),
        Node::Pointwise2 { left, right, .. } => omega(left).max(omega(right)),
        Node::Mixture { components } => components
            .iter()
            .map(|c| omega(&c.dist))
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Returns the lower end of the final bracket, a point where `F` still vanishes.
pub(crate) fn bisect_alpha(f: &DistFn) -> f64 {
    let zero = |x: f64| f.value(x) <= 0.0;
    let mut lo = -1.0;
    while !zero(lo) {
        lo *= 2.0;
        if lo < -BRACKET_CAP {
            return f64::NEG_INFINITY;
        }
    }
    let mut hi = 1.0;
    while zero(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return f64::INFINITY;
        }
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if zero(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Returns the upper end of the final bracket, a point where `F` already equals 1.
pub(crate) fn bisect_omega(f: &DistFn) -> f64 {
    let one = |x: f64| f.value(x) >= 1.0;
    let mut hi = 1.0;
    while !one(hi) {
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return f64::INFINITY;
        }
    }
    let mut lo = -1.0;
    while one(lo) {
        hi = lo;
        lo *= 2.0;
        if lo < -BRACKET_CAP {
            return f64::NEG_INFINITY;
        }
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if one(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::{power, MaxConvolution};
    use crate::families;

    #[test]
    fn structural_and_numeric_endpoints_agree() {
        let d = families::dagum(1.0, 2.0).unwrap();
        let cases = vec![
            d.affine(2.0, -3.0).unwrap(),
            d.truncate_below(0.7).unwrap(),
            power(MaxConvolution::Boolean, &d.truncate_below(0.5).unwrap(), 3.0).unwrap(),
            families::beta_law(2.0).unwrap().affine(0.5, 1.0).unwrap(),
            families::weibull(1.0).unwrap().affine(1.0, -4.0).unwrap(),
        ];
        for f in cases {
            let (a, w) = (f.alpha(), f.omega());
            if a.is_finite() {
                assert!((a - bisect_alpha(&f)).abs() < 1e-9, "{f:?}");
            }
            if w.is_finite() {
                // values approach 1 quadratically, so float saturation shifts ω by ~1e-8
                assert!((w - bisect_omega(&f)).abs() < 1e-7, "{f:?}");
            }
        }
    }

    #[test]
    fn unresolved_brackets_are_infinite() {
        let wide = families::dagum(1.0, 1.0).unwrap().affine(1.0, 2e9).unwrap();
        assert_eq!(bisect_alpha(&wide), f64::NEG_INFINITY);
        assert_eq!(bisect_omega(&families::frechet(1.0).unwrap()), f64::INFINITY);
        let far = crate::distfn::DistFn::dirac(5e9).unwrap();
        assert_eq!(bisect_alpha(&far), f64::INFINITY);
    }

    #[test]
    fn endpoint_probes_straddle_the_support() {
        let f = power(MaxConvolution::Free, &families::frechet(2.0).unwrap(), 3.0).unwrap();
        let a = f.alpha();
        assert_eq!(f.value(a - 1e-6), 0.0);
        assert!(f.value(a + 1e-6) > 0.0);
    }
}
