//! The max-Belinschi–Nica semigroup, the max-Bercovici–Pata bijections and
//! the free/Boolean power exchange, as operators on distribution functions.

use serde::{Deserialize, Serialize};

use crate::distfn::{map, power, sup_distance, DistFn, EvalGrid, MaxConvolution, Node, Transport, UnaryMap};
use crate::error::{Error, Result};
use crate::scalar;

/// Time parameter of `B_t^M`, `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BnParameter(f64);

impl BnParameter {
    pub fn new(t: f64) -> Result<BnParameter> {
        if t.is_finite() && t >= 0.0 {
            Ok(BnParameter(t))
        } else {
            Err(Error::domain(format!("Belinschi–Nica time must be finite and >= 0, got {t}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BnParameter {
    type Error = Error;

    fn try_from(t: f64) -> Result<Self> {
        BnParameter::new(t)
    }
}

impl From<BnParameter> for f64 {
    fn from(t: BnParameter) -> f64 {
        t.0
    }
}

/// `B_t^M(F) = (F^{⊡∨(1+t)})^{∪∨ 1/(1+t)}`, kept as the composed DAG.
pub fn bn(f: &DistFn, t: BnParameter) -> Result<DistFn> {
    require_positive(f, "B_t^M")?;
    let s = 1.0 + t.get();
    power(MaxConvolution::Boolean, &power(MaxConvolution::Free, f, s)?, 1.0 / s)
}

/// Shorthand for `bn(f, BnParameter::new(t)?)`.
pub fn bn_at(f: &DistFn, t: f64) -> Result<DistFn> {
    bn(f, BnParameter::new(t)?)
}

/// `B_1^M(F) = (2 - 1/F)_+` as a single pointwise node.
pub fn bn_unit_time_fused(f: &DistFn) -> Result<DistFn> {
    DistFn::from_node(Node::Pointwise1 {
        map: UnaryMap::BnUnitTime,
        child: f.clone(),
    })
}

/// `H = 𝒳(F)`, the `Δ₊` witness with `B_1^M(F) = Λ∨(H)`, so that `B_1^M(F) ∈ Θ₊`.
pub fn theta_plus_witness(f: &DistFn) -> Result<DistFn> {
    map(Transport::Chi, f)
}

/// For `G = Λ∨(H)` with `H ∈ Δ₊`, returns `F = 1/(1 - log H)` with `B_1^M(F) = G`.
pub fn b1_preimage(h: &DistFn) -> Result<DistFn> {
    map(Transport::ChiInv, h)
}

/// `𝒳(G)`: Boolean max-stable side to the classical side.
pub fn boolean_to_classical(g: &DistFn) -> Result<DistFn> {
    map(Transport::Chi, g)
}

/// `𝒳⁻¹(F)`: classical side to the Boolean side.
pub fn classical_to_boolean(f: &DistFn) -> Result<DistFn> {
    map(Transport::ChiInv, f)
}

/// Sup distance between `(F^{⊡∨p})^{∪∨q}` and `(F^{∪∨q'})^{⊡∨p'}`.
pub fn exchange_check(f: &DistFn, p: f64, q: f64, grid: &EvalGrid) -> Result<f64> {
    require_positive(f, "the exchange identity")?;
    let (p2, q2) = scalar::pq_exchange(p, q)?;
    let lhs = power(MaxConvolution::Boolean, &power(MaxConvolution::Free, f, p)?, q)?;
    let rhs = power(MaxConvolution::Free, &power(MaxConvolution::Boolean, f, q2)?, p2)?;
    sup_distance(&lhs, &rhs, grid)
}

fn require_positive(f: &DistFn, what: &str) -> Result<()> {
    if f.class().is_positive() {
        Ok(())
    } else {
        Err(Error::class(format!("{what} is defined on Δ₊, got an argument in {}", f.class())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::{combine, is_free_regular_max_id};
    use crate::families;

    fn grid() -> EvalGrid {
        EvalGrid::mixed(-1.0, 200.0, 801)
    }

    #[test]
    fn bn_examples() {
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let b = bn_at(&d1, 1.0).unwrap();
        assert!((b.value(2.0) - 0.5).abs() < 1e-15);
        let p1 = families::pareto(1.0).unwrap();
        assert!(sup_distance(&b, &p1, &grid()).unwrap() <= 1e-12);
        let id = bn_at(&d1, 0.0).unwrap();
        assert!(sup_distance(&id, &d1, &grid()).unwrap() == 0.0);
        for t in [0.5, 1.0, 2.0] {
            let bt = bn_at(&d1, t).unwrap();
            let free = power(MaxConvolution::Free, &d1, 1.0 + t).unwrap();
            assert!((bt.alpha() - free.alpha()).abs() < 1e-9);
            assert!(is_free_regular_max_id(&bt).unwrap());
        }
        assert!(matches!(bn_at(&d1, -0.1), Err(Error::Domain(_))));
        assert!(matches!(bn_at(&families::gumbel(), 1.0), Err(Error::Class(_))));
    }

    #[test]
    fn fused_unit_time_matches_composition_and_factorization() {
        let f = families::cp_classical(0.8, &families::frechet(2.0).unwrap()).unwrap();
        let composed = bn_at(&f, 1.0).unwrap();
        let fused = bn_unit_time_fused(&f).unwrap();
        let factored = map(Transport::LambdaVee, &theta_plus_witness(&f).unwrap()).unwrap();
        assert!(sup_distance(&composed, &fused, &grid()).unwrap() <= 1e-12);
        assert!(sup_distance(&composed, &factored, &grid()).unwrap() <= 1e-12);
    }

    #[test]
    fn preimage_hits_its_target() {
        let h = families::frechet(1.0).unwrap();
        let target = map(Transport::LambdaVee, &h).unwrap();
        let f = b1_preimage(&h).unwrap();
        assert!(sup_distance(&bn_at(&f, 1.0).unwrap(), &target, &grid()).unwrap() <= 1e-12);
    }

    #[test]
    fn bijection_examples() {
        for a in [0.5, 1.0, 2.0] {
            let d = families::dagum(1.0, a).unwrap();
            let phi = families::frechet(a).unwrap();
            assert!(sup_distance(&boolean_to_classical(&d).unwrap(), &phi, &grid()).unwrap() <= 1e-12);
            assert!(sup_distance(&classical_to_boolean(&phi).unwrap(), &d, &grid()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn exchange_examples() {
        let d1 = families::dagum(1.0, 1.0).unwrap();
        assert!(exchange_check(&d1, 2.0, 0.75, &grid()).unwrap() <= 1e-10);
        assert_eq!(exchange_check(&families::frechet(3.0).unwrap(), 1.0, 1.0, &grid()).unwrap(), 0.0);
        let shifted = families::pareto(1.0).unwrap().affine(1.0, 1.0).unwrap();
        assert!(shifted.class().is_positive());
        assert!(exchange_check(&shifted, 1.5, 0.9, &grid()).unwrap() <= 1e-10);
        assert!(matches!(exchange_check(&d1, 2.0, 0.5, &grid()), Err(Error::Domain(_))));
    }

    #[test]
    fn unit_time_is_a_homomorphism() {
        let f = families::dagum(2.0, 1.0).unwrap();
        let g = families::frechet(0.7).unwrap();
        let lhs = bn_at(&combine(MaxConvolution::Boolean, &f, &g).unwrap(), 1.0).unwrap();
        let rhs = combine(
            MaxConvolution::Free,
            &bn_at(&f, 1.0).unwrap(),
            &bn_at(&g, 1.0).unwrap(),
        )
        .unwrap();
        assert!(sup_distance(&lhs, &rhs, &grid()).unwrap() <= 1e-12);
    }
}
