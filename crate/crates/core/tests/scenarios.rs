use maxalg::scenarios::{run_experiment, scenario, ExperimentReport, SCENARIO_NAMES};

#[test]
fn every_builtin_scenario_passes() {
    for name in SCENARIO_NAMES {
        let report = run_experiment(&scenario(name).unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"));
        let summary = match &report {
            ExperimentReport::Run(r) => format!("{:?} last {:.3e} slope {:?}", r.verdict, r.last_distance(), r.decay_slope),
            ExperimentReport::LimitTheorem(c)
            | ExperimentReport::Converse(c)
            | ExperimentReport::BooleanClassical(c)
            | ExperimentReport::ClassicalFree(c) => format!(
                "{:?} {:.3e} / {:?} {:.3e} gap {:?}",
                c.hypothesis.verdict,
                c.hypothesis.last_distance(),
                c.conclusion.verdict,
                c.conclusion.last_distance(),
                c.pairing_gap
            ),
            ExperimentReport::Counterexample(c) => format!("free {:.3e} flag {:?}", c.free.last_distance(), c.flag),
            ExperimentReport::Conjecture(c) => format!(
                "free {:?} support {:?} {:.3e}",
                c.free.verdict,
                c.boolean_on_support.verdict,
                c.boolean_on_support.last_distance()
            ),
        };
        println!("{name}: {summary}");
        assert!(report.passed(), "{name}: {summary}");
    }
}
