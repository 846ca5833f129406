//! Per-step distances between a path and a set, coupling horizons and decoupling times.

use num_traits::Zero;
use serde::Serialize;

use super::{PathSample, States};
use crate::error::{Error, Result};
use crate::interval::ClosedSet1D;
use crate::rational::{format_rational, pow2, Rational};
use crate::symbolic::{rho_to_set, SftSubshift};

/// Final-window threshold used as a proxy for `lim sup` of the distance being zero.
pub const CONVERGENCE_EPS: f64 = 1.0 / (1u64 << 20) as f64;

pub enum CouplingTarget<'a> {
    Subshift(&'a SftSubshift),
    Set(&'a ClosedSet1D),
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingReport {
    #[serde(serialize_with = "ser_rationals")]
    pub distances: Vec<Rational>,
    /// Largest `n` with `d_t = 2^{-t} d_0` for all `t ≤ n`.
    pub couples_to: usize,
    /// Steps `t` with `d_t > d_{t-1}`.
    pub decouple_times: Vec<usize>,
    /// Maximum distance over the last quarter of the path is below `CONVERGENCE_EPS`.
    pub converged: bool,
    /// Some distances are certified brackets rather than exact values; the upper end is reported.
    pub approximate: bool,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

pub fn coupling_report(path: &PathSample, target: CouplingTarget<'_>) -> Result<CouplingReport> {
    let mut approximate = false;
    let distances: Vec<Rational> = match (&path.states, target) {
        (States::Symbolic(states), CouplingTarget::Subshift(k)) => states
            .iter()
            .map(|s| rho_to_set(s, k).map(|d| d.to_rational()))
            .collect::<Result<_>>()?,
        (States::Interval(states), CouplingTarget::Set(b)) => states
            .iter()
            .map(|x| {
                let d = b.dist(x)?;
                approximate |= !d.is_exact();
                Ok(d.upper)
            })
            .collect::<Result<_>>()?,
        _ => return Err(Error::Invalid("symbolic paths pair with subshifts, interval paths with sets".into())),
    };
    Ok(summarize(distances, approximate))
}

pub(crate) fn summarize(distances: Vec<Rational>, approximate: bool) -> CouplingReport {
    let d0 = distances[0].clone();
    let couples_to = distances
        .iter()
        .enumerate()
        .skip(1)
        .take_while(|(t, d)| **d == &d0 * pow2(-(*t as i64)))
        .count();
    let decouple_times = (1..distances.len()).filter(|&t| distances[t] > distances[t - 1]).collect();
    let window = distances.len().div_ceil(4);
    let tail_max = distances[distances.len() - window..].iter().max().cloned().unwrap_or_else(Rational::zero);
    let converged = crate::rational::to_f64(&tail_max) <= CONVERGENCE_EPS;
    CouplingReport { distances, couples_to, decouple_times, converged, approximate }
}
