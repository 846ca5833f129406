//! Executes an experiment config and writes its artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use invset_core::filter::{cohen_check, invariance_check, qmf_residual, CohenVerdict, InvarianceVerdict, Step1Report};
use invset_core::interval::{check_lemma_4_3, exit_and_barrier, IntervalUnion, SeparationReport};
use invset_core::rational::{format_rational, to_f64};
use invset_core::sampler::{absorption_estimate, AbsorptionEstimate};
use invset_core::spectral::{phi_hat_terms, SumBracket};
use invset_core::{ClosedSet1D, Rational, TransitionFn};
use serde::Serialize;

use crate::config::{field, Command, ExperimentConfig};
use crate::error::{CliError, Result};

/// QMF residual budget for builtin filters.
pub const QMF_TOL_BUILTIN: f64 = 1e-12;
/// QMF residual budget for constructed filters.
pub const QMF_TOL_CONSTRUCTED: f64 = 1e-9;
pub const QMF_GRID: u32 = 4096;
/// Sample count of the filter profile written for plotting.
const PROFILE_POINTS: i64 = 512;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SetSummary {
    pub set: String,
    pub exits: String,
    pub barriers: String,
    pub properties: SeparationReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterSummary {
    pub name: String,
    pub qmf_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariance: Option<InvarianceVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step1: Option<Step1Report>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSummary {
    pub x0: String,
    pub t_max: u32,
    pub sum: SumBracket,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationSummary {
    pub x0: String,
    pub seed: u64,
    pub absorption: AbsorptionEstimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<SetSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohen: Option<CohenVerdict>,
}

/// Result of [`run`]: the summary plus the files written.
#[derive(Debug)]
pub struct RunReport {
    pub summary: Summary,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn pass(&self) -> bool {
        self.summary.pass
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Set,
    Filter,
    Spectral,
    Simulation,
    Cohen,
}

fn wanted(cmd: Command, s: Section) -> bool {
    use Section::*;
    match cmd {
        Command::Pipeline => true,
        Command::AnalyzeSet => s == Set,
        Command::BuildFilter => matches!(s, Set | Filter),
        Command::EvalProduct => matches!(s, Filter | Spectral),
        Command::Simulate => matches!(s, Filter | Simulation),
        Command::Cohen => matches!(s, Filter | Cohen),
    }
}

/// Runs every requested section of `cfg`. Relative paths resolve against `base`; artifacts go
/// to `out`, falling back to the config's `output` and then to `base/out`.
pub fn run(cfg: &ExperimentConfig, base: &Path, out: Option<&Path>) -> Result<RunReport> {
    cfg.validate()?;
    let out_dir = match (out, &cfg.output) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(o)) => base.join(o),
        (None, None) => base.join("out"),
    };
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::Io(out_dir.display().to_string(), e))?;
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    let cmd = cfg.command;

    let set = cfg.set.as_ref().map(|s| s.build()).transpose()?;
    let mut set_summary = None;
    if let (Some(b), true) = (&set, wanted(cmd, Section::Set)) {
        let (exits, barriers) = exit_and_barrier(b)?;
        let properties = check_lemma_4_3(b)?;
        if let Some(expect) = &cfg.expect {
            if let Some(want) = &expect.exits {
                checks.push(compare("exits", want, &exits));
            }
            if let Some(want) = &expect.barriers {
                checks.push(compare("barriers", want, &barriers));
            }
        }
        set_summary = Some(SetSummary { set: b.to_string(), exits: exits.to_string(), barriers: barriers.to_string(), properties });
    }

    let filter = match (&cfg.filter, wanted(cmd, Section::Filter)) {
        (Some(spec), true) => Some(spec.build(set.as_ref(), base)?),
        _ => None,
    };
    let mut filter_summary = None;
    if let Some(p) = &filter {
        let residual = qmf_residual(p, QMF_GRID);
        let tol = if p.regions().is_some() { QMF_TOL_CONSTRUCTED } else { QMF_TOL_BUILTIN };
        checks.push(Check { name: "qmf".into(), pass: residual <= tol, detail: format!("residual {residual:e} (budget {tol:e})") });
        let invariance = match &set {
            Some(b) => {
                let v = invariance_check(p, b)?;
                checks.push(Check { name: "invariance".into(), pass: v.pass, detail: format!("max |p| on exits {:e}", v.max_abs) });
                Some(v)
            }
            None => None,
        };
        let step1 = p.regions().filter(|r| r.epsilon.is_some()).map(|r| r.step1_report(r.depth));
        if let Some(s) = &step1 {
            checks.push(Check { name: "step1".into(), pass: s.all(), detail: format!("{s:?}") });
        }
        let path = out_dir.join("filter.json");
        write(&path, &p.to_json()?)?;
        artifacts.push(path);
        let path = out_dir.join("filter.csv");
        write(&path, &filter_profile_csv(p))?;
        artifacts.push(path);
        filter_summary = Some(FilterSummary { name: p.name(), qmf_residual: residual, invariance, step1 });
    }

    let mut spectral = None;
    if let (Some(p), Some(sp), true) = (&filter, &cfg.spectral, wanted(cmd, Section::Spectral)) {
        let x0 = field("spectral.x0", &sp.x0)?;
        let terms = phi_hat_terms(p, &x0, sp.k_max, sp.t_max);
        let path = out_dir.join("product.csv");
        write(&path, &product_csv(&terms))?;
        artifacts.push(path);
        let sum = summed(&terms, sp.k_max);
        if sp.expect_exact_zero {
            checks.push(Check {
                name: "exact_zero".into(),
                pass: sum.all_exact_zero(),
                detail: format!("{} of {} terms vanish exactly", sum.exact_zero_terms, sum.terms),
            });
        }
        spectral = Some(SpectralSummary { x0: format_rational(&x0), t_max: sp.t_max, sum });
    }

    let mut simulation = None;
    if let (Some(p), Some(sim), true) = (&filter, &cfg.simulation, wanted(cmd, Section::Simulation)) {
        let x0 = field("simulation.x0", &sim.x0)?;
        let eps = field("simulation.eps", &sim.eps)?;
        let est = absorption_estimate(p, &x0, sim.paths, sim.steps, &eps, sim.seed)?;
        let path = out_dir.join("paths.csv");
        write(&path, &paths_csv(&est))?;
        artifacts.push(path);
        let path = out_dir.join("absorption.csv");
        write(&path, &absorption_curve_csv(&est))?;
        artifacts.push(path);
        simulation = Some(SimulationSummary { x0: format_rational(&x0), seed: sim.seed, absorption: est });
    }

    let mut cohen = None;
    if let (Some(p), Some(c), true) = (&filter, &cfg.cohen, wanted(cmd, Section::Cohen)) {
        let t = congruence_set(&c.t)?;
        let v = cohen_check(p, &t, c.j_max, c.grid);
        checks.push(Check {
            name: "cohen".into(),
            pass: v.pass,
            detail: format!("T = {t}, infimum {} at {:?}", v.infimum, v.argmin),
        });
        cohen = Some(v);
    }

    let pass = checks.iter().all(|c| c.pass);
    let summary = Summary {
        command: cmd,
        description: cfg.description.clone(),
        pass,
        checks,
        set: set_summary,
        filter: filter_summary,
        spectral,
        simulation,
        cohen,
    };
    let path = out_dir.join("summary.json");
    write(&path, &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    artifacts.push(path);
    if let Some(script) = gnuplot_script(&artifacts) {
        let path = out_dir.join("plot.gp");
        write(&path, &script)?;
        artifacts.push(path);
    }
    Ok(RunReport { summary, artifacts })
}

fn compare(name: &str, want: &str, got: &ClosedSet1D) -> Check {
    let got = got.to_string();
    Check { name: name.into(), pass: got == want, detail: format!("expected {want}, got {got}") }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn congruence_set(rows: &[[String; 2]]) -> Result<IntervalUnion> {
    let mut t = IntervalUnion::empty();
    for [lo, hi] in rows {
        t = t.union(&invset_core::filter::closed_set(field("cohen.t", lo)?, field("cohen.t", hi)?));
    }
    Ok(t)
}

/// Sums the terms in increasing `k`, matching `sum_phi_hat`.
fn summed(terms: &[(i64, invset_core::spectral::ProductBracket)], k_max: u32) -> SumBracket {
    let mut lower = 0.0;
    let mut upper = 0.0;
    let mut zeros = 0;
    for (_, b) in terms {
        lower += b.lower;
        upper += b.upper;
        zeros += usize::from(b.exact_zero);
    }
    let omitted_diagnostic =
        terms.iter().filter(|(k, _)| k.unsigned_abs() == k_max as u64).map(|(_, b)| b.upper).fold(0.0, f64::max);
    SumBracket { lower, upper, k_max, exact_zero_terms: zeros, terms: terms.len(), omitted_diagnostic }
}

pub fn product_csv(terms: &[(i64, invset_core::spectral::ProductBracket)]) -> String {
    let mut s = String::from("k,lower,upper,exact_zero,terms_used\n");
    for (k, b) in terms {
        let _ = writeln!(s, "{k},{},{},{},{}", b.lower, b.upper, b.exact_zero, b.terms_used);
    }
    s
}

pub fn paths_csv(est: &AbsorptionEstimate) -> String {
    let mut s = String::from("path_id,t_absorbed,final_state_num,final_state_den,decouple_count\n");
    for o in &est.outcomes {
        let t = o.t_absorbed.map_or(-1, i64::from);
        let _ = writeln!(s, "{},{t},{},{},{}", o.path_id, o.final_state.numer(), o.final_state.denom(), o.decouple_count);
    }
    s
}

/// Fraction of paths absorbed by each step, for plotting.
fn absorption_curve_csv(est: &AbsorptionEstimate) -> String {
    let mut hits = vec![0usize; est.steps as usize + 1];
    for t in est.outcomes.iter().filter_map(|o| o.t_absorbed) {
        hits[t as usize] += 1;
    }
    let mut s = String::from("t,estimate\n");
    let mut acc = 0;
    for (t, h) in hits.iter().enumerate() {
        acc += h;
        let _ = writeln!(s, "{t},{}", acc as f64 / est.n_paths as f64);
    }
    s
}

fn filter_profile_csv(p: &TransitionFn) -> String {
    let mut s = String::from("xi,p\n");
    for i in 0..=PROFILE_POINTS {
        let x = Rational::new(i.into(), PROFILE_POINTS.into());
        let _ = writeln!(s, "{},{}", to_f64(&x), p.eval(&x));
    }
    s
}

fn gnuplot_script(artifacts: &[PathBuf]) -> Option<String> {
    let has = |name: &str| artifacts.iter().any(|a| a.file_name().is_some_and(|f| f == name));
    let mut plots = Vec::new();
    if has("filter.csv") {
        plots.push("set title 'transition function'\nset xlabel 'xi'\nplot 'filter.csv' using 1:2 with lines title 'p'");
    }
    if has("product.csv") {
        plots.push(
            "set title 'product brackets'\nset xlabel 'k'\nplot 'product.csv' using 1:3 with impulses title 'upper', \\\n     'product.csv' using 1:2 with points title 'lower'",
        );
    }
    if has("absorption.csv") {
        plots.push("set title 'absorbed fraction'\nset xlabel 't'\nplot 'absorption.csv' using 1:2 with steps title 'estimate'");
    }
    if plots.is_empty() {
        return None;
    }
    let mut s = String::from("# gnuplot -persist plot.gp\nset datafile separator ','\nset key autotitle columnhead\n");
    for p in plots {
        s.push_str("\n");
        s.push_str(p);
        s.push_str("\npause -1\n");
    }
    Some(s)
}
