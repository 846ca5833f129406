//! Named experiment recipes, each a ready-made config.

use invset_core::interval::SetSpec;

use crate::config::{CohenParams, Command, Expectations, ExperimentConfig, FilterSpec, SimulationParams, SpectralParams};

pub const NAMES: [&str; 3] = ["example-4-1", "shannon", "thm1-onethird"];

fn base(description: &str) -> ExperimentConfig {
    ExperimentConfig {
        command: Command::Pipeline,
        description: Some(description.into()),
        filter: None,
        set: None,
        simulation: None,
        spectral: None,
        cohen: None,
        expect: None,
        output: None,
    }
}

fn points(p: &[&str]) -> SetSpec {
    SetSpec { points: Some(p.iter().map(|s| s.to_string()).collect()), ..Default::default() }
}

pub fn recipe(name: &str) -> Option<ExperimentConfig> {
    match name {
        "example-4-1" => Some(ExperimentConfig {
            filter: Some(FilterSpec::builtin("cos3")),
            set: Some(points(&["1/3", "2/3"])),
            expect: Some(Expectations { exits: Some("{1/6, 5/6}".into()), barriers: Some("{1/3, 2/3}".into()) }),
            ..base("cos²(3πξ) leaves the 2-cycle {1/3, 2/3} of ξ ↦ 2ξ mod 1 invariant; its exits are {1/6, 5/6}")
        }),
        "shannon" => Some(ExperimentConfig {
            filter: Some(FilterSpec::builtin("shannon")),
            set: Some(SetSpec {
                intervals: Some(vec![
                    vec!["0".into(), "1/4".into(), "closed-open".into()],
                    vec!["3/4".into(), "1".into(), "closed".into()],
                ]),
                ..Default::default()
            }),
            expect: Some(Expectations { exits: Some("[3/8, 5/8)".into()), barriers: None }),
            cohen: Some(CohenParams { t: vec![["-1/2".into(), "1/2".into()]], j_max: 30, grid: 4096 }),
            ..base("The Shannon filter, the indicator of B = [0,1/4) ∪ [3/4,1], with exits [3/8, 5/8) and the congruence set [-1/2, 1/2]")
        }),
        "thm1-onethird" => Some(ExperimentConfig {
            filter: Some(FilterSpec { construct: Some("log-modulus".into()), ..Default::default() }),
            set: Some(points(&["1/3", "2/3"])),
            spectral: Some(SpectralParams { x0: "1/3".into(), k_max: 64, t_max: 64, expect_exact_zero: true }),
            simulation: Some(SimulationParams { x0: "1/3".into(), paths: 16, steps: 32, seed: 1, eps: "1/1048576".into() }),
            ..base("A QMF filter with a log-type modulus built for B = {1/3, 2/3}; every product term at 1/3 vanishes exactly")
        }),
        _ => None,
    }
}
