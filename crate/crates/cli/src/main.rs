use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use invset_cli::config::{field, filter_from_arg, ExperimentConfig};
use invset_cli::run::{congruence_set, paths_csv, product_csv};
use invset_cli::verify::{criterion_ids, verify_one, Level};
use invset_cli::{init_threads, recipes, run, CliError};
use invset_core::filter::{cohen_check, construct_prop_4_2, construct_thm_1, ThmParams};
use invset_core::gfun::{construct_thm_1_2, strict_g};
use invset_core::interval::{check_lemma_4_3, exit_and_barrier, SetSpec};
use invset_core::sampler::absorption_estimate;
use invset_core::spectral::phi_hat_terms;
use invset_core::symbolic::{check_prop_2_2, GeneratorFamily, GeneratorRule, SubshiftInput};
use invset_core::SftSubshift;
use serde_json::json;

/// Invariant sets of the doubling map, the filters and g-functions that realize them, and
/// the checks around them. Worker count comes from INVSET_THREADS.
#[derive(Parser)]
#[command(name = "invset", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct SubshiftArgs {
    /// Comma-separated forbidden words, e.g. 00,11.
    #[arg(long, value_delimiter = ',', conflicts_with = "generator")]
    forbidden: Vec<String>,
    /// Largest symbol J of the alphabet {0..J}.
    #[arg(long, default_value_t = 1)]
    alphabet: u8,
    /// Infinite forbidden family, truncated at --truncation.
    #[arg(long, requires = "truncation")]
    generator: Option<String>,
    #[arg(long)]
    truncation: Option<usize>,
}

impl SubshiftArgs {
    fn input(&self) -> Result<SubshiftInput> {
        match &self.generator {
            Some(name) => {
                let rule = GeneratorRule::parse(name)?;
                Ok(SubshiftInput::Family(GeneratorFamily::new(rule, self.truncation.unwrap_or_default())))
            }
            None => {
                if self.forbidden.is_empty() {
                    bail!("give --forbidden or --generator");
                }
                Ok(SubshiftInput::Finite(SftSubshift::from_strs(self.alphabet, &self.forbidden)?))
            }
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exit set, barrier set and finite-type properties of a subshift.
    AnalyzeSubshift {
        #[command(flatten)]
        sub: SubshiftArgs,
        /// Length of the exit words listed.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Exits, barriers and separation of a subset of [0,1], given as a TOML table literal
    /// such as 'points = ["1/3", "2/3"]'.
    AnalyzeSet {
        #[arg(long)]
        set: String,
    },
    /// Builds an invariant filter for a set and writes it as JSON.
    BuildFilter {
        #[arg(long)]
        set: String,
        /// distance or log-modulus.
        #[arg(long, default_value = "log-modulus")]
        method: String,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds a g-function with the subshift as invariant set and writes it as JSON.
    BuildG {
        #[command(flatten)]
        sub: SubshiftArgs,
        /// Also require g bounded away from 0 on the subshift.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brackets of the infinite product at x0 + k for |k| <= k-max, as CSV.
    EvalProduct {
        /// Builtin name or filter JSON file.
        #[arg(long)]
        filter: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 64)]
        k_max: u32,
        #[arg(long, default_value_t = 64)]
        t_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo paths of the random walk driven by a filter, as CSV.
    Simulate {
        #[arg(long)]
        filter: String,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        #[arg(long, default_value_t = 1000)]
        steps: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "1/1048576")]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohen's condition on a congruence set given as closed intervals lo,hi.
    Cohen {
        #[arg(long)]
        filter: String,
        #[arg(long = "t", value_name = "LO,HI", required = true, allow_hyphen_values = true)]
        t: Vec<String>,
        #[arg(long, default_value_t = 30)]
        j_max: u32,
        #[arg(long, default_value_t = 4096)]
        grid: u32,
    },
    /// Runs the acceptance criteria.
    Verify {
        #[arg(long, default_value = "quick")]
        level: Level,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
    /// Runs an experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs or prints a named recipe.
    Recipe {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the recipe's config instead of running it.
        #[arg(long)]
        print_config: bool,
    },
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_set(text: &str) -> Result<SetSpec> {
    toml::from_str(text).map_err(|e| CliError::Config(format!("--set: {e}")).into())
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Runs a subcommand; `Ok(false)` means a requested check failed.
fn dispatch(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::AnalyzeSubshift { sub, depth } => {
            let input = sub.input()?;
            let k = input.subshift()?;
            let report = check_prop_2_2(&input)?;
            let exit_words: Vec<String> = k
                .exit_set()
                .initial_words(depth)
                .iter()
                .map(|w| w.iter().map(|d| char::from(b'0' + d)).collect())
                .collect();
            print_json(&json!({
                "alphabet": k.alphabet_bound(),
                "forbidden": k.forbidden().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                "window": k.window(),
                "live_states": k.num_live_states(),
                "shift_onto": k.is_shift_onto(),
                "exit_words": exit_words,
                "report": report,
            }))?;
            Ok(true)
        }
        Cmd::AnalyzeSet { set } => {
            let b = parse_set(&set)?.build()?;
            let (exits, barriers) = exit_and_barrier(&b)?;
            let report = check_lemma_4_3(&b)?;
            print_json(&json!({
                "set": b.to_string(),
                "exits": exits.to_string(),
                "barriers": barriers.to_string(),
                "properties": report,
            }))?;
            Ok(true)
        }
        Cmd::BuildFilter { set, method, epsilon, k, out } => {
            let b = parse_set(&set)?.build()?;
            let p = match method.as_str() {
                "distance" => construct_prop_4_2(&b)?,
                "log-modulus" => {
                    let epsilon = epsilon.as_deref().map(|e| field("--epsilon", e)).transpose()?;
                    construct_thm_1(&b, &ThmParams { epsilon, k })?
                }
                other => bail!("unknown method {other:?} (distance or log-modulus)"),
            };
            let step1 = p.regions().filter(|r| r.epsilon.is_some()).map(|r| r.step1_report(r.depth));
            if let Some(s) = &step1 {
                eprintln!("step-1 clauses: {s:?}");
            }
            emit(out.as_deref(), &(p.to_json()? + "\n"))?;
            Ok(step1.map_or(true, |s| s.all()))
        }
        Cmd::BuildG { sub, strict, out } => {
            let input = sub.input()?;
            let g = if strict {
                let s = strict_g(&input)?;
                eprintln!("lower bound on K: {}", s.lower_bound);
                s.g
            } else {
                construct_thm_1_2(&input.subshift()?)?
            };
            emit(out.as_deref(), &(g.to_json()? + "\n"))?;
            Ok(true)
        }
        Cmd::EvalProduct { filter, x0, k_max, t_max, out } => {
            let p = filter_from_arg(&filter)?;
            let x0 = field("--x0", &x0)?;
            emit(out.as_deref(), &product_csv(&phi_hat_terms(&p, &x0, k_max, t_max)))?;
            Ok(true)
        }
        Cmd::Simulate { filter, x0, paths, steps, seed, eps, out } => {
            let p = filter_from_arg(&filter)?;
            let est = absorption_estimate(&p, &field("--x0", &x0)?, paths, steps, &field("--eps", &eps)?, seed)?;
            emit(out.as_deref(), &paths_csv(&est))?;
            eprintln!(
                "absorbed {}/{} ({}), Wilson 95% [{:.4}, {:.4}]",
                est.absorbed, est.n_paths, est.criterion, est.ci_low, est.ci_high
            );
            Ok(true)
        }
        Cmd::Cohen { filter, t, j_max, grid } => {
            let p = filter_from_arg(&filter)?;
            let rows = t
                .iter()
                .map(|s| match s.split_once(',') {
                    Some((a, b)) => Ok([a.trim().to_string(), b.trim().to_string()]),
                    None => bail!("--t expects LO,HI, got {s:?}"),
                })
                .collect::<Result<Vec<_>>>()?;
            let v = cohen_check(&p, &congruence_set(&rows)?, j_max, grid);
            print_json(&serde_json::to_value(&v)?)?;
            Ok(v.pass)
        }
        Cmd::Verify { level, criterion } => {
            let ids: Vec<u32> = match criterion {
                Some(id) => vec![id],
                None => criterion_ids().collect(),
            };
            let mut all = true;
            for id in ids {
                let r = verify_one(id, level).with_context(|| format!("no criterion {id}"))?;
                println!("{r}");
                all &= r.pass;
            }
            Ok(all)
        }
        Cmd::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let base = config.parent().unwrap_or(Path::new("."));
            report(run(&cfg, base, out.as_deref())?)
        }
        Cmd::Recipe { name, out, print_config } => {
            let Some(cfg) = recipes::recipe(&name) else {
                bail!("unknown recipe {name:?}; known: {}", recipes::NAMES.join(", "));
            };
            if print_config {
                print!("{}", cfg.to_toml()?);
                return Ok(true);
            }
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(&name));
            report(run(&cfg, Path::new("."), Some(&out))?)
        }
    }
}

fn report(r: invset_cli::RunReport) -> Result<bool> {
    for c in &r.summary.checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for a in &r.artifacts {
        println!("wrote {}", a.display());
    }
    Ok(r.pass())
}
