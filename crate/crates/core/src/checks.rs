//! The identity suite behind `maxalg check`: algebraic laws of the scalar
//! operations, the homomorphisms, the semigroups, the exchange identity, the
//! extreme-value pairings and the root constructors, each reported with its
//! largest observed deviation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distfn::{
    bool_nth_root, free_nth_root, is_freely_max_id, map, power, sup_distance, DistFn, EvalGrid, MaxConvolution,
    Transport,
};
use crate::error::{Error, Result};
use crate::families;
use crate::scalar::{self, UnitValue};
use crate::transforms;

pub const DEFAULT_SEED: u64 = 0x6d61_7861_6c67;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub seed: u64,
    /// Random `(u, v, w)` triples for the convolution laws.
    pub scalar_samples: usize,
    /// Random `(u, t, s)` triples for the power laws.
    pub power_samples: usize,
    /// Name of an identity whose left-hand side gets perturbed; a test hook.
    pub inject_fault: Option<String>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: DEFAULT_SEED,
            scalar_samples: 100_000,
            power_samples: 10_000,
            inject_fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub seed: u64,
    pub identities: Vec<IdentityResult>,
    pub all_passed: bool,
}

impl CheckSummary {
    pub fn failed(&self) -> impl Iterator<Item = &IdentityResult> {
        self.identities.iter().filter(|r| !r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|r| r.name == name)
    }
}

/// Size of the perturbation applied by fault injection.
const FAULT: f64 = 1e-3;

pub const IDENTITY_NAMES: [&str; 29] = [
    "scalar.classical.associativity",
    "scalar.classical.commutativity",
    "scalar.classical.unit",
    "scalar.free.associativity",
    "scalar.free.commutativity",
    "scalar.free.unit",
    "scalar.boolean.associativity",
    "scalar.boolean.commutativity",
    "scalar.boolean.unit",
    "scalar.lambda_vee.homomorphism",
    "scalar.chi.homomorphism",
    "scalar.chi.inverse",
    "scalar.free_power.additivity",
    "scalar.free_power.composition",
    "scalar.bool_power.additivity",
    "scalar.bool_power.composition",
    "scalar.pq_exchange.example",
    "exchange.identity",
    "bn.semigroup",
    "bn.unit_time_factorization",
    "bn.dagum_to_pareto",
    "evd.lambda_vee.gumbel",
    "evd.lambda_vee.frechet",
    "evd.lambda_vee.weibull",
    "evd.chi.dagum_frechet",
    "evd.chi_inv.frechet_dagum",
    "roots.free",
    "roots.boolean",
    "divisibility.free_max_id",
];

struct Suite {
    fault: Option<String>,
    results: Vec<IdentityResult>,
}

impl Suite {
    /// Perturbation to add to a left-hand side of `name`.
    fn bias(&self, name: &str) -> f64 {
        if self.fault.as_deref() == Some(name) {
            FAULT
        } else {
            0.0
        }
    }

    fn record(&mut self, name: &str, max_deviation: f64, tolerance: f64) {
        self.results.push(IdentityResult {
            name: name.to_string(),
            max_deviation,
            tolerance,
            passed: max_deviation <= tolerance,
        });
    }

    /// Records `max |lhs - rhs|` over the samples.
    fn scalar<I: Iterator<Item = (f64, f64)>>(&mut self, name: &str, tolerance: f64, pairs: I) {
        let b = self.bias(name);
        let dev = pairs.map(|(l, r)| (l + b - r).abs()).fold(0.0, f64::max);
        self.record(name, dev, tolerance);
    }

    fn distance(&mut self, name: &str, tolerance: f64, pairs: &[(DistFn, DistFn)], grid: &EvalGrid) -> Result<()> {
        let mut dev: f64 = 0.0;
        for (l, r) in pairs {
            dev = dev.max(sup_distance(l, r, grid)?);
        }
        self.record(name, dev + self.bias(name), tolerance);
        Ok(())
    }
}

fn unit(rng: &mut ChaCha8Rng) -> UnitValue {
    UnitValue::new(rng.random::<f64>()).expect("[0, 1) sample")
}

pub fn run_checks(options: &CheckOptions) -> Result<CheckSummary> {
    if let Some(f) = &options.inject_fault {
        if !IDENTITY_NAMES.contains(&f.as_str()) {
            return Err(Error::Config(format!("unknown identity '{f}' for fault injection")));
        }
    }
    let mut suite = Suite {
        fault: options.inject_fault.clone(),
        results: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    scalar_laws(&mut suite, &mut rng, options.scalar_samples);
    power_laws(&mut suite, &mut rng, options.power_samples)?;
    distribution_identities(&mut suite)?;
    let all_passed = suite.results.iter().all(|r| r.passed);
    Ok(CheckSummary {
        seed: options.seed,
        identities: suite.results,
        all_passed,
    })
}

fn scalar_laws(suite: &mut Suite, rng: &mut ChaCha8Rng, samples: usize) {
    let triples: Vec<(UnitValue, UnitValue, UnitValue)> =
        (0..samples).map(|_| (unit(rng), unit(rng), unit(rng))).collect();
    type Op = fn(UnitValue, UnitValue) -> UnitValue;
    let ops: [(&str, Op); 3] = [
        ("classical", scalar::classical_max),
        ("free", scalar::free_max),
        ("boolean", scalar::bool_max),
    ];
    for (label, op) in ops {
        suite.scalar(
            &format!("scalar.{label}.associativity"),
            1e-12,
            triples
                .iter()
                .map(|&(u, v, w)| (op(op(u, v), w).get(), op(u, op(v, w)).get())),
        );
        suite.scalar(
            &format!("scalar.{label}.commutativity"),
            1e-12,
            triples.iter().map(|&(u, v, _)| (op(u, v).get(), op(v, u).get())),
        );
        suite.scalar(
            &format!("scalar.{label}.unit"),
            1e-12,
            triples.iter().map(|&(u, _, _)| (op(u, UnitValue::ONE).get(), u.get())),
        );
    }
    suite.scalar(
        "scalar.lambda_vee.homomorphism",
        1e-12,
        triples.iter().map(|&(u, v, _)| {
            let lhs = scalar::lambda_vee(scalar::classical_max(u, v));
            (lhs.get(), scalar::free_max(scalar::lambda_vee(u), scalar::lambda_vee(v)).get())
        }),
    );
    suite.scalar(
        "scalar.chi.homomorphism",
        1e-12,
        triples.iter().map(|&(u, v, _)| {
            let lhs = scalar::chi(scalar::bool_max(u, v));
            (lhs.get(), scalar::classical_max(scalar::chi(u), scalar::chi(v)).get())
        }),
    );
    suite.scalar(
        "scalar.chi.inverse",
        1e-12,
        triples.iter().map(|&(u, _, _)| (scalar::chi(scalar::chi_inv(u)).get(), u.get())),
    );
}

fn power_laws(suite: &mut Suite, rng: &mut ChaCha8Rng, samples: usize) -> Result<()> {
    let free: Vec<(UnitValue, f64, f64)> = (0..samples)
        .map(|_| (unit(rng), rng.random_range(1.0..=10.0), rng.random_range(1.0..=10.0)))
        .collect();
    // (0, 10]: 1 - [0, 1) scaled
    let boolean: Vec<(UnitValue, f64, f64)> = (0..samples)
        .map(|_| {
            let t = 10.0 * (1.0 - rng.random::<f64>());
            let s = 10.0 * (1.0 - rng.random::<f64>());
            (unit(rng), t, s)
        })
        .collect();
    let fp = |u, t| scalar::free_power(u, t);
    let bp = |u, t| scalar::bool_power(u, t);
    let mut collect = |name: &str, pairs: Vec<(f64, f64)>| suite.scalar(name, 1e-12, pairs.into_iter());

    let mut add = Vec::new();
    let mut comp = Vec::new();
    for &(u, t, s) in &free {
        add.push((scalar::free_max(fp(u, t)?, fp(u, s)?).get(), fp(u, t + s)?.get()));
        comp.push((fp(fp(u, t)?, s)?.get(), fp(u, t * s)?.get()));
    }
    collect("scalar.free_power.additivity", add);
    collect("scalar.free_power.composition", comp);

    let mut add = Vec::new();
    let mut comp = Vec::new();
    for &(u, t, s) in &boolean {
        add.push((scalar::bool_max(bp(u, t)?, bp(u, s)?).get(), bp(u, t + s)?.get()));
        comp.push((bp(bp(u, t)?, s)?.get(), bp(u, t * s)?.get()));
    }
    collect("scalar.bool_power.additivity", add);
    collect("scalar.bool_power.composition", comp);

    let (p, q) = scalar::pq_exchange(2.0, 0.75)?;
    suite.scalar("scalar.pq_exchange.example", 0.0, [(p, 3.0), (q, 0.5)].into_iter());
    Ok(())
}

fn distribution_identities(suite: &mut Suite) -> Result<()> {
    let grid = EvalGrid::mixed(-1.0, 1e3, 2001);
    let d1 = families::dagum(1.0, 1.0)?;
    let d2 = families::dagum(1.0, 2.0)?;
    let cp = families::cp_free(0.5, &families::frechet(1.0)?)?;
    let positive = [d1.clone(), d2.clone(), cp.clone()];

    let b = suite.bias("exchange.identity");
    let mut dev: f64 = 0.0;
    for f in &positive {
        for (p, q) in [(2.0, 0.75), (1.5, 0.9), (3.0, 0.7)] {
            dev = dev.max(transforms::exchange_check(f, p, q, &grid)?);
        }
    }
    suite.record("exchange.identity", dev + b, 1e-10);

    let mut pairs = Vec::new();
    for f in &positive {
        for t in [0.5, 1.0, 2.0] {
            for s in [0.5, 1.0, 2.0] {
                pairs.push((transforms::bn_at(&transforms::bn_at(f, t)?, s)?, transforms::bn_at(f, t + s)?));
            }
        }
    }
    suite.distance("bn.semigroup", 1e-10, &pairs, &grid)?;

    let pairs = positive
        .iter()
        .map(|f| {
            let chi = map(Transport::Chi, f)?;
            Ok((transforms::bn_at(f, 1.0)?, map(Transport::LambdaVee, &chi)?))
        })
        .collect::<Result<Vec<_>>>()?;
    suite.distance("bn.unit_time_factorization", 1e-12, &pairs, &grid)?;

    let alphas = [0.5, 1.0, 2.0];
    let pairs = alphas
        .iter()
        .map(|&a| Ok((transforms::bn_at(&families::dagum(1.0, a)?, 1.0)?, families::pareto(a)?)))
        .collect::<Result<Vec<_>>>()?;
    suite.distance("bn.dagum_to_pareto", 1e-12, &pairs, &grid)?;

    let lv = |f: &DistFn| map(Transport::LambdaVee, f);
    let pairs = vec![(lv(&families::gumbel())?, families::free_exponential())];
    suite.distance("evd.lambda_vee.gumbel", 1e-12, &pairs, &grid)?;
    let pairs = alphas
        .iter()
        .map(|&a| Ok((lv(&families::frechet(a)?)?, families::pareto(a)?)))
        .collect::<Result<Vec<_>>>()?;
    suite.distance("evd.lambda_vee.frechet", 1e-12, &pairs, &grid)?;
    let pairs = alphas
        .iter()
        .map(|&a| Ok((lv(&families::weibull(a)?)?, families::beta_law(a)?)))
        .collect::<Result<Vec<_>>>()?;
    suite.distance("evd.lambda_vee.weibull", 1e-12, &pairs, &grid)?;
    let pairs = alphas
        .iter()
        .map(|&a| Ok((map(Transport::Chi, &families::dagum(1.0, a)?)?, families::frechet(a)?)))
        .collect::<Result<Vec<_>>>()?;
    suite.distance("evd.chi.dagum_frechet", 1e-12, &pairs, &grid)?;
    let pairs = alphas
        .iter()
        .map(|&a| Ok((map(Transport::ChiInv, &families::frechet(a)?)?, families::dagum(1.0, a)?)))
        .collect::<Result<Vec<_>>>()?;
    suite.distance("evd.chi_inv.frechet_dagum", 1e-12, &pairs, &grid)?;

    let targets = [d1, families::pareto(1.0)?, cp];
    let mut free_pairs = Vec::new();
    let mut bool_pairs = Vec::new();
    for f in &targets {
        for n in 1..=64u64 {
            let k = n as f64;
            free_pairs.push((power(MaxConvolution::Free, &free_nth_root(f, n)?, k)?, f.clone()));
            bool_pairs.push((power(MaxConvolution::Boolean, &bool_nth_root(f, n)?, k)?, f.clone()));
        }
    }
    suite.distance("roots.free", 1e-10, &free_pairs, &grid)?;
    suite.distance("roots.boolean", 1e-10, &bool_pairs, &grid)?;

    let mut divisible = vec![
        families::frechet(1.0)?,
        families::pareto(1.0)?,
        families::beta_law(2.0)?,
        families::dagum(1.0, 1.0)?,
        families::cp_classical(1.0, &families::frechet(1.0)?)?,
        families::cp_free(0.5, &families::frechet(1.0)?)?,
    ];
    for f in [families::gumbel(), families::frechet(2.0)?, families::weibull(1.0)?] {
        divisible.push(lv(&f)?);
    }
    let misclassified = divisible.iter().filter(|f| !is_freely_max_id(f)).count()
        + usize::from(is_freely_max_id(&families::gumbel()));
    let b = suite.bias("divisibility.free_max_id");
    suite.record("divisibility.free_max_id", misclassified as f64 + b, 0.0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(fault: Option<&str>) -> CheckSummary {
        run_checks(&CheckOptions {
            scalar_samples: 2000,
            power_samples: 500,
            inject_fault: fault.map(str::to_string),
            ..CheckOptions::default()
        })
        .unwrap()
    }

    #[test]
    fn every_identity_is_reported_and_passes() {
        let s = quick(None);
        let names: Vec<&str> = s.identities.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, IDENTITY_NAMES);
        assert!(s.all_passed, "{:?}", s.failed().collect::<Vec<_>>());
    }

    #[test]
    fn injected_fault_fails_only_its_identity() {
        let s = quick(Some("bn.semigroup"));
        let failed: Vec<&str> = s.failed().map(|r| r.name.as_str()).collect();
        assert_eq!(failed, ["bn.semigroup"]);
        assert!(!s.all_passed);
        assert!(run_checks(&CheckOptions {
            inject_fault: Some("nope".into()),
            ..CheckOptions::default()
        })
        .is_err());
    }
}
