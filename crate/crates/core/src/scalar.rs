//! Pointwise algebra on `[0, 1]`.
//!
//! Every convolution, power and transport map acting on distribution functions
//! is the lift of one of the scalar operations below: the value `F(x)` is fed
//! through the operation independently at each `x`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values within this distance outside `[0, 1]` are clamped onto the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    /// Accepts `value` in `[0, 1]`, clamping anything within
    /// [`BOUNDARY_TOLERANCE`] of the boundary.
    pub fn new(value: f64) -> Result<Self> {
        if !(-BOUNDARY_TOLERANCE..=1.0 + BOUNDARY_TOLERANCE).contains(&value) {
            return Err(Error::domain(format!("{value} is not in [0, 1]")));
        }
        Ok(UnitValue(value.clamp(0.0, 1.0)))
    }

    /// Clamps an internally computed result onto `[0, 1]`.
    pub(crate) fn clamped(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        UnitValue(kernel::clamp(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for UnitValue {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        UnitValue::new(value)
    }
}

impl From<UnitValue> for f64 {
    fn from(u: UnitValue) -> f64 {
        u.0
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Unchecked `f64` kernels shared by the scalar API and the DAG evaluator.
///
/// Inputs are assumed to lie in `[0, 1]` and parameters to be validated.
pub(crate) mod kernel {
    pub fn clamp(v: f64) -> f64 {
        if v.is_nan() {
            0.0
        } else {
            v.clamp(0.0, 1.0)
        }
    }

    pub fn classical_max(u: f64, v: f64) -> f64 {
        u * v
    }

    pub fn free_max(u: f64, v: f64) -> f64 {
        if u >= 1.0 {
            v
        } else if v >= 1.0 {
            u
        } else {
            (u + v - 1.0).max(0.0)
        }
    }

    pub fn bool_max(u: f64, v: f64) -> f64 {
        if u <= 0.0 || v <= 0.0 {
            0.0
        } else {
            u * v / (u + v - u * v)
        }
    }

    pub fn classical_power(u: f64, t: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            u.powf(t)
        }
    }

    pub fn free_power(u: f64, t: f64) -> f64 {
        (t * u - (t - 1.0)).max(0.0)
    }

    pub fn bool_power(u: f64, t: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            u / (t - (t - 1.0) * u)
        }
    }

    pub fn lambda_vee(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            (1.0 + u.ln()).max(0.0)
        }
    }

    pub fn chi(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            (1.0 - 1.0 / u).exp()
        }
    }

    pub fn chi_inv(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            1.0 / (1.0 - u.ln())
        }
    }

    /// `(2 - 1/u)_+`, the closed form of the max-Belinschi–Nica map at time one.
    #[cfg(test)]
    pub fn bn_unit_time(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            (2.0 - 1.0 / u).max(0.0)
        }
    }
}

/// Classical max-convolution `uv`.
pub fn classical_max(u: UnitValue, v: UnitValue) -> UnitValue {
    UnitValue::clamped(kernel::classical_max(u.0, v.0))
}

/// Free max-convolution `max(u + v - 1, 0)`.
pub fn free_max(u: UnitValue, v: UnitValue) -> UnitValue {
    UnitValue::clamped(kernel::free_max(u.0, v.0))
}

/// Boolean max-convolution `uv / (u + v - uv)`, with `0` absorbing.
pub fn bool_max(u: UnitValue, v: UnitValue) -> UnitValue {
    UnitValue::clamped(kernel::bool_max(u.0, v.0))
}

fn check_finite(t: f64, what: &str) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} exponent must be finite, got {t}")))
    }
}

/// Free max-convolution power `(tu - (t - 1))_+`, defined as a distribution
/// function only for `t >= 1`.
pub fn free_power(u: UnitValue, t: f64) -> Result<UnitValue> {
    check_finite(t, "free power")?;
    if t < 1.0 {
        return Err(Error::domain(format!("free power exponent must be >= 1, got {t}")));
    }
    Ok(UnitValue::clamped(kernel::free_power(u.0, t)))
}

/// Free power for any real `t`.
///
/// The result is clamped to `[0, 1]`; for `t < 1` the lifted map does not
/// produce a distribution function.
pub fn free_power_unchecked(u: UnitValue, t: f64) -> UnitValue {
    UnitValue::clamped(kernel::free_power(u.0, t))
}

/// Boolean max-convolution power `u / (t - (t - 1)u)` for `t > 0`.
pub fn bool_power(u: UnitValue, t: f64) -> Result<UnitValue> {
    check_finite(t, "Boolean power")?;
    if t <= 0.0 {
        return Err(Error::domain(format!("Boolean power exponent must be > 0, got {t}")));
    }
    Ok(UnitValue::clamped(kernel::bool_power(u.0, t)))
}

/// Classical power `u^t` for `t > 0`.
pub fn classical_power(u: UnitValue, t: f64) -> Result<UnitValue> {
    check_finite(t, "classical power")?;
    if t <= 0.0 {
        return Err(Error::domain(format!("classical power exponent must be > 0, got {t}")));
    }
    Ok(UnitValue::clamped(kernel::classical_power(u.0, t)))
}

/// `(1 + log u)_+`, with `0 ↦ 0`. Turns products into free max-convolutions.
pub fn lambda_vee(u: UnitValue) -> UnitValue {
    UnitValue::clamped(kernel::lambda_vee(u.0))
}

/// `exp(1 - 1/u)`, with `0 ↦ 0`. Turns Boolean max-convolutions into products.
pub fn chi(u: UnitValue) -> UnitValue {
    UnitValue::clamped(kernel::chi(u.0))
}

/// `1 / (1 - log u)`, with `0 ↦ 0`. Inverse of [`chi`].
pub fn chi_inv(u: UnitValue) -> UnitValue {
    UnitValue::clamped(kernel::chi_inv(u.0))
}

/// Max-Belinschi–Nica map at time `t`: the Boolean `1/(1+t)` power of the
/// free `1+t` power.
pub fn bn_scalar(u: UnitValue, t: f64) -> Result<UnitValue> {
    check_finite(t, "Belinschi–Nica time")?;
    if t < 0.0 {
        return Err(Error::domain(format!("Belinschi–Nica time must be >= 0, got {t}")));
    }
    let free = kernel::free_power(u.0, 1.0 + t);
    Ok(UnitValue::clamped(kernel::bool_power(kernel::clamp(free), 1.0 / (1.0 + t))))
}

/// Exchange of free and Boolean exponents: for `p >= 1` and `q > 1 - 1/p`,
/// returns `(p', q')` such that the Boolean `q` power of the free `p` power
/// equals the free `p'` power of the Boolean `q'` power.
pub fn pq_exchange(p: f64, q: f64) -> Result<(f64, f64)> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::domain(format!("exponents must be finite, got p = {p}, q = {q}")));
    }
    if p < 1.0 {
        return Err(Error::domain(format!("p must be >= 1, got {p}")));
    }
    if q <= 1.0 - 1.0 / p {
        return Err(Error::domain(format!("q must exceed 1 - 1/p = {}, got {q}", 1.0 - 1.0 / p)));
    }
    let q_prime = 1.0 - p + p * q;
    Ok((p * q / q_prime, q_prime))
}

/// Inverse of [`pq_exchange`]: recovers `(p, q)` from `(p', q')`.
pub fn pq_exchange_inverse(p_prime: f64, q_prime: f64) -> Result<(f64, f64)> {
    if !(p_prime >= 1.0) || !(q_prime > 0.0) || !p_prime.is_finite() || !q_prime.is_finite() {
        return Err(Error::domain(format!(
            "need p' >= 1 and q' > 0, got p' = {p_prime}, q' = {q_prime}"
        )));
    }
    let p = 1.0 - q_prime + p_prime * q_prime;
    Ok((p, p_prime * q_prime / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(x: f64) -> UnitValue {
        UnitValue::new(x).unwrap()
    }

    fn close(a: UnitValue, b: f64, tol: f64) -> bool {
        (a.get() - b).abs() <= tol
    }

    #[test]
    fn unit_value_clamps_near_boundary_and_rejects_far() {
        assert_eq!(UnitValue::new(-5e-13).unwrap().get(), 0.0);
        assert_eq!(UnitValue::new(1.0 + 5e-13).unwrap().get(), 1.0);
        assert!(UnitValue::new(-1e-9).is_err());
        assert!(UnitValue::new(1.1).is_err());
        assert!(UnitValue::new(f64::NAN).is_err());
    }

    #[test]
    fn convolution_examples() {
        assert!(close(free_max(u(0.7), u(0.6)), 0.3, 1e-12));
        assert_eq!(free_max(u(0.3), u(0.4)).get(), 0.0);
        assert!(close(bool_max(u(0.5), u(0.5)), 1.0 / 3.0, 1e-12));
        assert_eq!(bool_max(u(0.0), u(0.8)).get(), 0.0);
        assert!(close(classical_max(u(0.5), u(0.5)), 0.25, 1e-12));
        for v in [0.0, 0.2, 0.9, 1.0] {
            assert_eq!(free_max(UnitValue::ONE, u(v)).get(), v);
            assert!(close(bool_max(UnitValue::ONE, u(v)), v, 1e-15));
            assert_eq!(classical_max(UnitValue::ONE, u(v)).get(), v);
        }
    }

    #[test]
    fn power_examples() {
        assert!(close(free_power(u(0.9), 2.0).unwrap(), 0.8, 1e-12));
        assert_eq!(free_power(u(0.4), 2.0).unwrap().get(), 0.0);
        assert!(matches!(free_power(u(0.4), 0.5), Err(Error::Domain(_))));
        assert!(close(bool_power(u(0.5), 2.0).unwrap(), 1.0 / 3.0, 1e-12));
        assert!(close(bool_power(u(1.0), 7.3).unwrap(), 1.0, 1e-15));
        assert!(bool_power(u(0.5), 0.0).is_err());
        assert!(close(classical_power(u(0.25), 0.5).unwrap(), 0.5, 1e-15));
        assert_eq!(classical_power(u(0.0), 3.0).unwrap().get(), 0.0);
        assert!(classical_power(u(0.5), -1.0).is_err());
        for x in [0.0, 0.3, 1.0] {
            assert_eq!(free_power(u(x), 1.0).unwrap().get(), x);
            assert!(close(bool_power(u(x), 1.0).unwrap(), x, 1e-15));
            assert!(close(classical_power(u(x), 1.0).unwrap(), x, 1e-15));
        }
    }

    #[test]
    fn map_examples() {
        assert!(close(lambda_vee(u((-1.0f64).exp())), 0.0, 1e-12));
        assert_eq!(lambda_vee(UnitValue::ONE).get(), 1.0);
        assert!(close(lambda_vee(u((-0.5f64).exp())), 0.5, 1e-12));
        assert_eq!(lambda_vee(UnitValue::ZERO).get(), 0.0);
        assert!(close(chi(u(0.5)), (-1.0f64).exp(), 1e-15));
        assert!(close(chi_inv(u((-1.0f64).exp())), 0.5, 1e-15));
        assert_eq!(chi(UnitValue::ZERO).get(), 0.0);
        assert_eq!(chi(UnitValue::ONE).get(), 1.0);
        assert_eq!(chi_inv(UnitValue::ZERO).get(), 0.0);
    }

    #[test]
    fn bn_examples() {
        assert!(close(bn_scalar(u(0.9), 1.0).unwrap(), 8.0 / 9.0, 1e-12));
        let two_steps = bn_scalar(bn_scalar(u(0.9), 1.0).unwrap(), 1.0).unwrap();
        assert!(close(bn_scalar(u(0.9), 2.0).unwrap(), 0.875, 1e-12));
        assert!(close(two_steps, 2.0 - 9.0 / 8.0, 1e-12));
        assert_eq!(bn_scalar(UnitValue::ZERO, 3.0).unwrap().get(), 0.0);
        assert!(bn_scalar(u(0.5), -0.1).is_err());
        assert!(close(bn_scalar(u(0.37), 0.0).unwrap(), 0.37, 1e-15));
    }

    #[test]
    fn pq_exchange_examples() {
        assert_eq!(pq_exchange(2.0, 0.75).unwrap(), (3.0, 0.5));
        assert_eq!(pq_exchange(2.7, 1.0).unwrap(), (2.7, 1.0));
        let (p1, q1) = pq_exchange(1.0, 0.4).unwrap();
        assert!((p1 - 1.0).abs() < 1e-15 && (q1 - 0.4).abs() < 1e-15);
        // boundary q = 1 - 1/p is excluded
        assert!(pq_exchange(2.0, 0.5).is_err());
        assert!(pq_exchange(0.9, 1.0).is_err());
    }

    fn unit() -> impl Strategy<Value = UnitValue> {
        prop_oneof![
            Just(UnitValue::ZERO),
            Just(UnitValue::ONE),
            (0.0f64..=1.0).prop_map(|x| UnitValue::new(x).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn operations_are_monotone(a in unit(), b in unit(), v in unit(), t in 1.0f64..10.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(free_max(lo, v) <= free_max(hi, v));
            prop_assert!(bool_max(lo, v) <= bool_max(hi, v));
            prop_assert!(classical_max(lo, v) <= classical_max(hi, v));
            prop_assert!(free_power(lo, t).unwrap() <= free_power(hi, t).unwrap());
            prop_assert!(bool_power(lo, t).unwrap() <= bool_power(hi, t).unwrap());
            prop_assert!(lambda_vee(lo) <= lambda_vee(hi));
            prop_assert!(chi(lo) <= chi(hi));
            prop_assert!(chi_inv(lo) <= chi_inv(hi));
        }

        #[test]
        fn exchange_identity_holds(x in unit(), p in 1.0f64..6.0, slack in 1e-3f64..3.0) {
            let q = 1.0 - 1.0 / p + slack;
            let (pp, qq) = pq_exchange(p, q).unwrap();
            prop_assert!(pp >= 1.0 - 1e-12 && qq > 0.0);
            let lhs = bool_power(free_power(x, p).unwrap(), q).unwrap();
            let rhs = free_power(bool_power(x, qq).unwrap(), pp).unwrap();
            prop_assert!((lhs.get() - rhs.get()).abs() <= 1e-10);
            let (p2, q2) = pq_exchange_inverse(pp, qq).unwrap();
            prop_assert!((p2 - p).abs() <= 1e-10 * p && (q2 - q).abs() <= 1e-10 * q.abs().max(1.0));
        }

        #[test]
        fn bn_semigroup_and_factorization(x in unit(), t in 0.0f64..4.0, s in 0.0f64..4.0) {
            let lhs = bn_scalar(bn_scalar(x, t).unwrap(), s).unwrap();
            let rhs = bn_scalar(x, t + s).unwrap();
            prop_assert!((lhs.get() - rhs.get()).abs() <= 1e-10);
            let fused = kernel::bn_unit_time(x.get());
            prop_assert!((bn_scalar(x, 1.0).unwrap().get() - fused).abs() <= 1e-12);
            prop_assert!((lambda_vee(chi(x)).get() - fused).abs() <= 1e-12);
        }
    }
}
