//! Experiment configuration files (TOML). Every rational is a string such as `"1/3"`.

use std::path::Path;

use invset_core::filter::{construct_prop_4_2, construct_thm_1, ThmParams};
use invset_core::interval::SetSpec;
use invset_core::rational::parse_rational;
use invset_core::{ClosedSet1D, Rational, TransitionFn};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Every section present is executed.
    Pipeline,
    AnalyzeSet,
    BuildFilter,
    EvalProduct,
    Simulate,
    Cohen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Free-form description copied into the summary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohen: Option<CohenParams>,
    /// Values the run must reproduce exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectations>,
    /// Output directory, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// Expected renderings of derived sets, compared as strings such as `"{1/6, 5/6}"`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exits: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barriers: Option<String>,
}

/// Exactly one of `builtin`, `construct` or `file`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// `"distance"` or `"log-modulus"`, built for the config's `set`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construct: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationParams {
    pub x0: String,
    pub paths: usize,
    pub steps: u32,
    pub seed: u64,
    #[serde(default = "default_eps")]
    pub eps: String,
}

fn default_eps() -> String {
    "1/1048576".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralParams {
    pub x0: String,
    pub k_max: u32,
    #[serde(default = "default_t_max")]
    pub t_max: u32,
    /// Require every term to vanish exactly.
    #[serde(default)]
    pub expect_exact_zero: bool,
}

fn default_t_max() -> u32 {
    64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohenParams {
    /// Closed intervals `[lo, hi]` making up the congruence set.
    pub t: Vec<[String; 2]>,
    pub j_max: u32,
    #[serde(default = "default_grid")]
    pub grid: u32,
}

fn default_grid() -> u32 {
    4096
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks that the sections the command needs are present and that rationals parse.
    pub fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(CliError::Config(format!("command {:?} needs a [{what}] section", self.command)))
            }
        };
        match self.command {
            Command::Pipeline => {}
            Command::AnalyzeSet => need(self.set.is_some(), "set")?,
            Command::BuildFilter => need(self.filter.is_some(), "filter")?,
            Command::EvalProduct => {
                need(self.filter.is_some(), "filter")?;
                need(self.spectral.is_some(), "spectral")?;
            }
            Command::Simulate => {
                need(self.filter.is_some(), "filter")?;
                need(self.simulation.is_some(), "simulation")?;
            }
            Command::Cohen => {
                need(self.filter.is_some(), "filter")?;
                need(self.cohen.is_some(), "cohen")?;
            }
        }
        if self.expect.is_some() {
            need(self.set.is_some(), "set")?;
        }
        if let Some(f) = &self.filter {
            let n = [f.builtin.is_some(), f.construct.is_some(), f.file.is_some()].iter().filter(|&&b| b).count();
            if n != 1 {
                return Err(CliError::Config("[filter] needs exactly one of builtin, construct, file".into()));
            }
            if f.construct.is_some() && self.set.is_none() {
                return Err(CliError::Config("[filter] construct needs a [set] section".into()));
            }
            if let Some(e) = &f.epsilon {
                field("filter.epsilon", e)?;
            }
        }
        if let Some(s) = &self.simulation {
            field("simulation.x0", &s.x0)?;
            field("simulation.eps", &s.eps)?;
        }
        if let Some(s) = &self.spectral {
            field("spectral.x0", &s.x0)?;
        }
        if let Some(c) = &self.cohen {
            for [lo, hi] in &c.t {
                field("cohen.t", lo)?;
                field("cohen.t", hi)?;
            }
        }
        Ok(())
    }
}

/// Parses a rational config field, naming it in the error.
pub fn field(name: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| CliError::Config(format!("{name}: {e}")))
}

impl FilterSpec {
    pub fn builtin(name: &str) -> Self {
        FilterSpec { builtin: Some(name.into()), ..Default::default() }
    }

    /// Resolves to a transition function; `set` is required for constructed filters.
    pub fn build(&self, set: Option<&ClosedSet1D>, base: &Path) -> Result<TransitionFn> {
        if let Some(name) = &self.builtin {
            return Ok(TransitionFn::builtin(name)?);
        }
        if let Some(file) = &self.file {
            let path = base.join(file);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
            return Ok(TransitionFn::from_json(&text)?);
        }
        let method = self.construct.as_deref().unwrap_or_default();
        let set = set.ok_or_else(|| CliError::Config("constructed filter without a set".into()))?;
        match method {
            "distance" => Ok(construct_prop_4_2(set)?),
            "log-modulus" => {
                let params = ThmParams {
                    epsilon: self.epsilon.as_deref().map(|e| field("filter.epsilon", e)).transpose()?,
                    k: self.k,
                };
                Ok(construct_thm_1(set, &params)?)
            }
            other => Err(CliError::Config(format!("filter.construct: unknown method {other:?}"))),
        }
    }
}

/// Interprets a filter argument: a builtin name, or a path to a filter JSON file.
pub fn filter_from_arg(arg: &str) -> Result<TransitionFn> {
    match TransitionFn::builtin(arg) {
        Ok(p) => Ok(p),
        Err(_) if Path::new(arg).exists() => {
            let text = std::fs::read_to_string(arg).map_err(|e| CliError::Io(arg.into(), e))?;
            Ok(TransitionFn::from_json(&text)?)
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
command = "pipeline"
description = "cos3 with the pair {1/3, 2/3}"

[filter]
builtin = "cos3"

[set]
points = ["1/3", "2/3"]

[simulation]
x0 = "1/3"
paths = 10
steps = 20
seed = 7

[spectral]
x0 = "1/3"
k_max = 8
"#;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig::from_toml(SAMPLE).unwrap();
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.simulation.unwrap().eps, "1/1048576");
    }

    #[test]
    fn rejects_bad_input() {
        let err = ExperimentConfig::from_toml("command = \"simulate\"\n").unwrap_err();
        assert!(err.to_string().contains("simulation") || err.to_string().contains("filter"));
        let err = ExperimentConfig::from_toml("command = \"pipeline\"\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        // A bare float never reaches the rational parser.
        let bad = SAMPLE.replace("x0 = \"1/3\"\npaths", "x0 = 0.3\npaths");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err();
        assert!(err.to_string().contains("x0"), "{err}");
        let bad = SAMPLE.replace("x0 = \"1/3\"\npaths", "x0 = \"1/0\"\npaths");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err();
        assert!(err.to_string().contains("simulation.x0"), "{err}");
    }
}
