//! Seeded simulation of the dyadic Markov process with exact states, plus path
//! diagnostics: coupling with a set, absorption at `{0, 1}`, the geometric path bound
//! for invariant sets, and variation profiles of g-functions.

mod absorption;
mod coupling;
mod variation;

pub use absorption::{absorption_estimate, lemma_4_4_check, wilson_interval, AbsorptionEstimate, PathBoundReport, PathOutcome};
pub use coupling::{coupling_report, CouplingReport, CouplingTarget, CONVERGENCE_EPS};
pub use variation::{var_profile, VarEstimate};

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::TransitionFn;
use crate::gfun::GFunction;
use crate::rational::{halved, halved_shift, to_f64, Rational};
use crate::symbolic::SymbolSeq;

/// Slack allowed when checking that floating probabilities lie in `[0, 1]`.
const PROB_SLACK: f64 = 1e-12;

/// Independent random stream for path `index` under the master `seed`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum States {
    Interval(#[serde(serialize_with = "ser_rationals")] Vec<Rational>),
    Symbolic(Vec<SymbolSeq>),
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::rational::format_rational))
}

/// One simulated path: `states[0]` is the start, `states[t]` follows `symbols[t-1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSample {
    pub seed: u64,
    pub path_index: u64,
    pub symbols: Vec<u8>,
    pub states: States,
}

impl PathSample {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn interval_states(&self) -> Option<&[Rational]> {
        match &self.states {
            States::Interval(v) => Some(v),
            States::Symbolic(_) => None,
        }
    }

    pub fn symbolic_states(&self) -> Option<&[SymbolSeq]> {
        match &self.states {
            States::Symbolic(v) => Some(v),
            States::Interval(_) => None,
        }
    }
}

/// What drives a path: a transition function on `[0, 1]` or a g-function on sequences.
#[derive(Clone, Copy, Debug)]
pub enum Driver<'a> {
    Filter(&'a TransitionFn),
    G(&'a GFunction),
}

/// Start of a path in the matching representation.
#[derive(Clone, Debug)]
pub enum Start {
    Point(Rational),
    Seq(SymbolSeq),
}

fn checked_prob(value: f64, at: impl FnOnce() -> String) -> Result<f64> {
    if !(value >= -PROB_SLACK && value <= 1.0 + PROB_SLACK) {
        return Err(Error::ProbabilityOutOfRange { value, at: at() });
    }
    Ok(value)
}

/// Probability of digit 0 from `xi`, i.e. `p(ξ/2)`, and the halved state.
pub(crate) fn digit_zero_probability(p: &TransitionFn, xi: &Rational) -> Result<(f64, Rational)> {
    let h = halved(xi);
    let prob = match p.eval_exact(&h) {
        Some(v) => to_f64(&v),
        None => p.eval(&h),
    };
    Ok((checked_prob(prob, || format!("ξ/2 = {h}"))?, h))
}

/// One interval step with uniform draw `u`: digit 0 iff `u < p(ξ/2)`.
pub(crate) fn interval_step(p: &TransitionFn, xi: &Rational, u: f64) -> Result<(u8, Rational)> {
    let (prob, h) = digit_zero_probability(p, xi)?;
    if u < prob {
        Ok((0, h))
    } else {
        Ok((1, halved_shift(xi, 1)))
    }
}

fn symbolic_step(g: &GFunction, xi: &SymbolSeq, u: f64) -> Result<u8> {
    let j = g.alphabet_bound();
    let mut cum = 0.0;
    let mut total = 0.0;
    let mut probs = Vec::with_capacity(j as usize + 1);
    for a in 0..=j {
        let next = xi.append(a);
        let v = checked_prob(g.eval(&next)?, || next.to_string())?;
        total += v;
        probs.push(v);
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::ProbabilityOutOfRange { value: total, at: format!("sum over the successors of {xi}") });
    }
    for (a, v) in probs.iter().enumerate() {
        cum += v;
        if u < cum && *v > 0.0 {
            return Ok(a as u8);
        }
    }
    // Rounding left `u` above the cumulative total: take the last symbol with positive mass.
    Ok(probs.iter().rposition(|&v| v > 0.0).unwrap_or(j as usize) as u8)
}

/// Simulates `steps` transitions of path `path_index` under the master `seed`.
pub fn simulate(driver: Driver<'_>, start: &Start, steps: usize, seed: u64, path_index: u64) -> Result<PathSample> {
    if steps == 0 {
        return Err(Error::Invalid("a path needs at least one step".into()));
    }
    let mut rng = path_rng(seed, path_index);
    let mut symbols = Vec::with_capacity(steps);
    match (driver, start) {
        (Driver::Filter(p), Start::Point(x0)) => {
            if x0.is_negative() || *x0 > Rational::one() {
                return Err(Error::Invalid(format!("start {x0} lies outside [0,1]")));
            }
            let mut states = Vec::with_capacity(steps + 1);
            states.push(x0.clone());
            for _ in 0..steps {
                let u: f64 = rng.gen();
                let (d, next) = interval_step(p, states.last().expect("nonempty"), u)?;
                symbols.push(d);
                states.push(next);
            }
            Ok(PathSample { seed, path_index, symbols, states: States::Interval(states) })
        }
        (Driver::G(g), Start::Seq(x0)) => {
            if x0.alphabet_bound() != g.alphabet_bound() {
                return Err(Error::AlphabetMismatch { expected: g.alphabet_bound(), found: x0.alphabet_bound() });
            }
            let mut states = Vec::with_capacity(steps + 1);
            states.push(x0.clone());
            for _ in 0..steps {
                let u: f64 = rng.gen();
                let cur = states.last().expect("nonempty");
                let d = symbolic_step(g, cur, u)?;
                symbols.push(d);
                states.push(cur.append(d));
            }
            Ok(PathSample { seed, path_index, symbols, states: States::Symbolic(states) })
        }
        _ => Err(Error::Invalid("a transition function needs a rational start, a g-function a sequence".into())),
    }
}
