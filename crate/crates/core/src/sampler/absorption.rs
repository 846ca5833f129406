//! Absorption at `{0, 1}` and the geometric lower bound on distances to an invariant set.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{interval_step, path_rng};
use crate::error::{Error, Result};
use crate::filter::TransitionFn;
use crate::interval::{check_lemma_4_3, exit_and_barrier, ClosedSet1D, Distance};
use crate::rational::{format_rational, half, halved, halved_shift, pow2, to_f64, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct PathOutcome {
    pub path_id: u64,
    /// First step at which the path is absorbed.
    pub t_absorbed: Option<u32>,
    #[serde(serialize_with = "crate::rational::as_string::serialize")]
    pub final_state: Rational,
    /// Steps at which the distance to `{0, 1}` strictly increased.
    pub decouple_count: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbsorptionEstimate {
    pub n_paths: usize,
    pub steps: u32,
    pub absorbed: usize,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// What counts as absorption: the `eps`-neighbourhood of `{0, 1}`, or `N_0` for constructed filters.
    pub criterion: String,
    #[serde(skip)]
    pub outcomes: Vec<PathOutcome>,
}

impl AbsorptionEstimate {
    /// Paths absorbed within the first `t` steps.
    pub fn absorbed_by(&self, t: u32) -> usize {
        self.outcomes.iter().filter(|o| o.t_absorbed.is_some_and(|a| a <= t)).count()
    }

    /// The estimate the same paths give at horizon `t ≤ steps`.
    pub fn estimate_at(&self, t: u32) -> f64 {
        self.absorbed_by(t) as f64 / self.n_paths as f64
    }

    pub fn overlaps(&self, lo: f64, hi: f64) -> bool {
        self.ci_low <= hi && lo <= self.ci_high
    }
}

/// Wilson score interval for `k` successes out of `n` at normal quantile `z`.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// 95% two-sided normal quantile.
const Z95: f64 = 1.959963984540054;

/// Fraction of `n_paths` paths from `x0` absorbed within `steps` steps.
///
/// Absorption is the first entry into the `eps`-neighbourhood of `{0, 1}`; for constructed
/// filters it is entry into the region where `p ≡ 1` near the endpoints, which is absorbing.
/// Paths use per-index streams of the master seed, so a longer horizon extends the same paths.
pub fn absorption_estimate(
    p: &TransitionFn,
    x0: &Rational,
    n_paths: usize,
    steps: u32,
    eps: &Rational,
    seed: u64,
) -> Result<AbsorptionEstimate> {
    if n_paths == 0 {
        return Err(Error::Invalid("at least one path is required".into()));
    }
    if *eps <= Rational::zero() || *eps >= half() {
        return Err(Error::Invalid(format!("eps = {eps} must lie in (0, 1/2)")));
    }
    if *x0 < Rational::zero() || *x0 > Rational::one() {
        return Err(Error::Invalid(format!("start {x0} lies outside [0,1]")));
    }
    let regions = p.regions();
    let criterion = match regions {
        Some(r) => format!("entry into N_0 = {}", r.n_0),
        None => format!("within {} of {{0, 1}}", format_rational(eps)),
    };
    let absorbed_at = |x: &Rational| match regions {
        Some(r) => r.n_0.contains(x),
        None => {
            let d = edge_distance(x);
            d <= *eps
        }
    };
    let outcomes = (0..n_paths as u64)
        .into_par_iter()
        .map(|path_id| {
            let mut rng = path_rng(seed, path_id);
            let mut x = x0.clone();
            let mut t_absorbed = absorbed_at(&x).then_some(0);
            let mut decouple_count = 0;
            let mut prev = edge_distance(&x);
            for t in 1..=steps {
                let u: f64 = rng.gen();
                x = interval_step(p, &x, u)?.1;
                let d = edge_distance(&x);
                if d > prev {
                    decouple_count += 1;
                }
                prev = d;
                if t_absorbed.is_none() && absorbed_at(&x) {
                    t_absorbed = Some(t);
                }
            }
            Ok(PathOutcome { path_id, t_absorbed, final_state: x, decouple_count })
        })
        .collect::<Result<Vec<_>>>()?;
    let absorbed = outcomes.iter().filter(|o| o.t_absorbed.is_some()).count();
    let (ci_low, ci_high) = wilson_interval(absorbed, n_paths, Z95);
    Ok(AbsorptionEstimate {
        n_paths,
        steps,
        absorbed,
        estimate: absorbed as f64 / n_paths as f64,
        ci_low,
        ci_high,
        criterion,
        outcomes,
    })
}

/// `min(x, 1 − x)`; `1 − x` shares the reduced denominator of `x`, so no gcd is needed.
fn edge_distance(x: &Rational) -> Rational {
    let (n, d) = (x.numer(), x.denom());
    if (n << 1usize) < *d {
        x.clone()
    } else {
        Rational::new_raw(d - n, d.clone())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathBoundReport {
    #[serde(serialize_with = "crate::rational::as_string::serialize")]
    pub alpha: Rational,
    pub delta: Distance,
    /// States examined (exhaustive tree plus sampled paths).
    pub checked: u64,
    pub violations: u64,
    /// Smallest observed `d · 2^t / α` over both bounds.
    pub min_ratio: f64,
    pub first_violation: Option<String>,
}

impl PathBoundReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

struct Bounds<'a> {
    b: &'a ClosedSet1D,
    exits: ClosedSet1D,
    alpha: Rational,
}

impl Bounds<'_> {
    /// Checks both bounds at state `x` reached after `t` steps; returns the smaller ratio.
    fn check(&self, x: &Rational, t: u32) -> Result<(bool, f64)> {
        let scale = pow2(t as i64) / &self.alpha;
        let d_b = lower(self.b.dist(x)?);
        let mut ok = d_b >= pow2(-(t as i64)) * &self.alpha;
        let mut ratio = to_f64(&(&d_b * &scale));
        if t >= 1 {
            let d_e = lower(self.exits.dist(x)?);
            ok &= d_e >= pow2(-(t as i64)) * &self.alpha;
            ratio = ratio.min(to_f64(&(d_e * &scale)));
        }
        Ok((ok, ratio))
    }
}

fn lower(d: Distance) -> Rational {
    d.lower
}

/// Verifies `d_B(ξ_t) ≥ α 2^{-t}` for `t ≥ 0` and `d(ξ_t, closure B_e^c) ≥ α 2^{-t}` for
/// `t ≥ 1` with `α = min(δ, d_B(x0))`: on every digit sequence up to `exhaustive_depth`,
/// then on `samples` uniformly random digit sequences of length `sample_depth`.
pub fn lemma_4_4_check(
    b: &ClosedSet1D,
    x0: &Rational,
    exhaustive_depth: u32,
    samples: usize,
    sample_depth: u32,
    seed: u64,
) -> Result<PathBoundReport> {
    let report = check_lemma_4_3(b)?;
    if report.theta_invariant != Some(true) || !report.inside_open_unit {
        return Err(Error::Precondition(format!("{b} is not a θ-invariant subset of (0, 1)")));
    }
    if b.contains(x0) {
        return Err(Error::Precondition(format!("start {x0} lies in B")));
    }
    let delta = report.delta.ok_or_else(|| Error::Precondition("exit and barrier sets are not separated".into()))?;
    let d0 = lower(b.dist(x0)?);
    let alpha = if delta.lower < d0 { delta.lower.clone() } else { d0 };
    if alpha <= Rational::zero() {
        return Err(Error::Precondition(format!("no positive α certified at {x0}")));
    }
    let (exits, _) = exit_and_barrier(b)?;
    let bounds = Bounds { b, exits, alpha: alpha.clone() };

    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut min_ratio = f64::INFINITY;
    let mut first_violation = None;
    let mut record = |x: &Rational, t: u32, digits: &dyn Fn() -> String| -> Result<()> {
        let (ok, ratio) = bounds.check(x, t)?;
        checked += 1;
        min_ratio = min_ratio.min(ratio);
        if !ok {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(format!("ξ_{t} = {x} after digits {}", digits()));
            }
        }
        Ok(())
    };

    // Depth-first over the full binary tree of digit choices.
    let mut stack: Vec<(Rational, u32, Vec<u8>)> = vec![(x0.clone(), 0, Vec::new())];
    while let Some((x, t, digits)) = stack.pop() {
        record(&x, t, &|| digits.iter().map(|d| char::from(b'0' + d)).collect())?;
        if t < exhaustive_depth {
            let h = halved(&x);
            for d in [1u8, 0] {
                let mut next_digits = digits.clone();
                next_digits.push(d);
                let next = if d == 0 { h.clone() } else { halved_shift(&x, 1) };
                stack.push((next, t + 1, next_digits));
            }
        }
    }

    for i in 0..samples as u64 {
        let mut rng = path_rng(seed, i);
        let mut x = x0.clone();
        let mut digits = Vec::with_capacity(sample_depth as usize);
        for t in 1..=sample_depth {
            let d: u8 = rng.gen_range(0..=1);
            digits.push(d);
            x = halved_shift(&x, d);
            if t > exhaustive_depth {
                record(&x, t, &|| digits.iter().map(|d| char::from(b'0' + d)).collect())?;
            }
        }
    }
    Ok(PathBoundReport { alpha, delta, checked, violations, min_ratio, first_violation })
}
