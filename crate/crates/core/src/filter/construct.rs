//! Filters built around a prescribed invariant set.
//!
//! Both constructions cover the exit set by a finite union `N_e` of closed dyadic
//! intervals, set `N_b = closure(N_e*)`, prescribe `p` on those regions and interpolate
//! linearly across the remaining gaps of `[0,1/2]`. Values on `(1/2,1]` come from
//! `p(ξ) = 1 − p(ξ*)`, so the QMF identity holds by construction.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::TransitionFn;
use crate::error::{Error, Result};
use crate::interval::{
    check_lemma_4_3, exit_and_barrier, star_interval, ClosedSet1D, Distance, Interval, IntervalUnion, SetSpec,
    DEFAULT_DEPTH,
};
use crate::rational::{ceil_dyadic, dyadic, dyadic_exponent_below, floor_dyadic, half, to_f64, Rational};

/// Depth used when certifying separation of τ-images.
const SEPARATION_DEPTH: u32 = 32;
/// How many dyadic refinements to try beyond the first admissible level.
const EXTRA_LEVELS: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    /// `p = d_{B_e^c}` near the exit set.
    Distance,
    /// `p = |log₂ d_{B_e^c}|^{-1/k}` near the exit set, `p ≡ 1` near 0 and 1.
    LogModulus { k: u32 },
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Distance => "continuous-transition",
            Method::LogModulus { .. } => "qmf-log-modulus",
        }
    }
}

/// A piecewise-linear stretch over a free gap of `[0,1/2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "crate::rational::as_string")]
    pub lo: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub hi: Rational,
    pub value_lo: f64,
    pub value_hi: f64,
}

/// Region data of a constructed filter.
#[derive(Clone, Debug, PartialEq)]
pub struct Regions {
    pub method: Method,
    pub invariant_set: ClosedSet1D,
    /// `closure(B_e^c)`, where `p` vanishes.
    pub exits: ClosedSet1D,
    /// `closure(B_b)`, where `p` equals one.
    pub barriers: ClosedSet1D,
    pub n_e: IntervalUnion,
    pub n_b: IntervalUnion,
    pub n_0: IntervalUnion,
    pub n_half: IntervalUnion,
    pub epsilon: Option<Rational>,
    pub delta: Distance,
    pub segments: Vec<Segment>,
    pub depth: u32,
}

pub(crate) struct Evaluation {
    pub value: f64,
    pub exact: Option<Rational>,
}

impl Evaluation {
    fn exact(v: Rational) -> Self {
        Evaluation { value: to_f64(&v), exact: Some(v) }
    }

    fn complement(self) -> Self {
        Evaluation { value: 1.0 - self.value, exact: self.exact.map(|v| Rational::one() - v) }
    }
}

impl Regions {
    /// `p(x)` for `x ∈ [0,1)`.
    pub(crate) fn eval(&self, x: &Rational) -> Evaluation {
        if *x > half() {
            return self.eval(&(x - half())).complement();
        }
        if self.n_0.contains(x) {
            return Evaluation::exact(Rational::one());
        }
        if self.n_half.contains(x) {
            return Evaluation::exact(Rational::zero());
        }
        if self.n_e.contains(x) {
            return self.near_exits(x);
        }
        if self.n_b.contains(x) {
            return self.near_exits(&star_interval(x)).complement();
        }
        let seg = self
            .segments
            .iter()
            .find(|s| s.lo <= *x && *x <= s.hi)
            .expect("free gaps are covered by segments");
        if seg.lo == seg.hi {
            return Evaluation { value: seg.value_lo, exact: None };
        }
        let t = to_f64(&((x - &seg.lo) / (&seg.hi - &seg.lo)));
        Evaluation { value: seg.value_lo + t * (seg.value_hi - seg.value_lo), exact: None }
    }

    /// The prescribed formula on `N_e`.
    fn near_exits(&self, x: &Rational) -> Evaluation {
        if self.exits.contains(x) {
            return Evaluation::exact(Rational::zero());
        }
        let d = self.exits.dist_with_depth(x, self.depth).expect("exit set is nonempty");
        match &self.method {
            Method::Distance => match d.value() {
                Some(v) => Evaluation::exact(v.clone()),
                None => Evaluation { value: to_f64(&((&d.lower + &d.upper) * half())), exact: None },
            },
            Method::LogModulus { k } => {
                let dist = if d.lower.is_positive() { to_f64(&d.lower) } else { to_f64(&d.upper) };
                Evaluation { value: log_modulus(dist, *k), exact: None }
            }
        }
    }

    /// Value that a region (not the interpolation) assigns at `x ∈ [0,1/2]`, if any.
    fn region_value(&self, x: &Rational) -> Option<f64> {
        let covered = self.n_0.contains(x) || self.n_half.contains(x) || self.n_e.contains(x) || self.n_b.contains(x);
        covered.then(|| self.eval(x).value)
    }

    pub fn endpoints(&self) -> Vec<Rational> {
        let mut e: Vec<Rational> = Vec::new();
        for u in [&self.n_e, &self.n_b, &self.n_0, &self.n_half] {
            e.extend(u.endpoints());
        }
        e.extend(self.segments.iter().flat_map(|s| [s.lo.clone(), s.hi.clone()]));
        e.extend(self.exits.endpoints());
        e.sort();
        e.dedup();
        e
    }

    fn build_segments(&mut self) {
        let left_half = IntervalUnion::new(vec![Interval::closed(Rational::zero(), half())]);
        let taken = self.n_0.union(&self.n_half).union(&self.n_e).union(&self.n_b);
        let free = left_half.minus(&taken);
        let zero = Rational::zero();
        let h = half();
        let at_zero = match self.region_value(&h) {
            Some(v) => 1.0 - v,
            None => 1.0,
        };
        let at_half = match self.region_value(&zero) {
            Some(v) => 1.0 - v,
            None => 0.0,
        };
        let value_at = |x: &Rational| -> f64 {
            if x.is_zero() {
                at_zero
            } else if *x == h {
                at_half
            } else {
                self.region_value(x).expect("gap ends touch a region")
            }
        };
        self.segments = free
            .parts()
            .iter()
            .map(|g| Segment { lo: g.lo.clone(), hi: g.hi.clone(), value_lo: value_at(&g.lo), value_hi: value_at(&g.hi) })
            .collect();
    }

    pub(crate) fn to_doc(&self) -> RegionsDoc {
        RegionsDoc {
            method: self.method.clone(),
            invariant_set: SetSpec::from_set(&self.invariant_set),
            n_e: self.n_e.parts().to_vec(),
            n_b: self.n_b.parts().to_vec(),
            n_0: self.n_0.parts().to_vec(),
            n_half: self.n_half.parts().to_vec(),
            epsilon: self.epsilon.as_ref().map(crate::rational::format_rational),
            delta: self.delta.clone(),
            segments: self.segments.clone(),
            depth: self.depth,
        }
    }

    pub(crate) fn from_doc(doc: RegionsDoc) -> Result<Self> {
        let invariant_set = doc.invariant_set.build()?;
        let (exits, barriers) = exit_and_barrier(&invariant_set)?;
        Ok(Regions {
            method: doc.method,
            invariant_set,
            exits: exits.closure(),
            barriers: barriers.closure(),
            n_e: IntervalUnion::new(doc.n_e),
            n_b: IntervalUnion::new(doc.n_b),
            n_0: IntervalUnion::new(doc.n_0),
            n_half: IntervalUnion::new(doc.n_half),
            epsilon: doc.epsilon.as_deref().map(crate::rational::parse_rational).transpose()?,
            delta: doc.delta,
            segments: doc.segments,
            depth: doc.depth,
        })
    }
}

/// `|log₂ d|^{-1/k}`, which tends to 0 as `d → 0`.
pub fn log_modulus(d: f64, k: u32) -> f64 {
    if d <= 0.0 {
        0.0
    } else {
        d.log2().abs().powf(-1.0 / k as f64)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct RegionsDoc {
    #[serde(flatten)]
    method: Method,
    invariant_set: SetSpec,
    n_e: Vec<Interval>,
    n_b: Vec<Interval>,
    n_0: Vec<Interval>,
    n_half: Vec<Interval>,
    epsilon: Option<String>,
    delta: Distance,
    segments: Vec<Segment>,
    depth: u32,
}

/// `ε` and `k` for the log-modulus construction; `None` picks defaults.
#[derive(Clone, Debug, Default)]
pub struct ThmParams {
    pub epsilon: Option<Rational>,
    pub k: Option<u32>,
}

/// Closed dyadic cover of `closure(E)` at level `level`, with a margin of `2^-level`
/// so that the set lies in the interior.
fn dyadic_cover(exits: &ClosedSet1D, level: u32) -> IntervalUnion {
    let margin = dyadic(level);
    let zero = Rational::zero();
    let one = Rational::one();
    let clip = |x: Rational| if x < zero { zero.clone() } else if x > one { one.clone() } else { x };
    let parts: Vec<Interval> = exits
        .cover(level)
        .parts()
        .iter()
        .map(|p| {
            let lo = clip(floor_dyadic(&p.lo, level) - &margin);
            let hi = clip(ceil_dyadic(&p.hi, level) + &margin);
            Interval::closed(lo, hi)
        })
        .collect();
    IntervalUnion::new(parts)
}

fn special_points() -> [Rational; 3] {
    [Rational::zero(), half(), Rational::one()]
}

/// Shared first half of both constructions: exit data, separation and `N_e`.
struct Cover {
    exits: ClosedSet1D,
    barriers: ClosedSet1D,
    delta: Distance,
    n_e: IntervalUnion,
    n_b: IntervalUnion,
}

fn separated_cover(b: &ClosedSet1D, avoid_special: bool) -> Result<Cover> {
    let (exits, barriers) = exit_and_barrier(b)?;
    let exits = exits.closure();
    let barriers = barriers.closure();
    if exits.is_empty() {
        return Err(Error::Precondition("the set has no exit points; every transition function leaves it invariant".into()));
    }
    let delta = exits.separation(&barriers, SEPARATION_DEPTH)?;
    if !delta.lower.is_positive() {
        return Err(Error::Refused {
            reason: "closure of the exit set meets closure of the barrier set, so no continuous p can vanish on one and equal 1 on the other".into(),
            witness: Some(format!("exits {exits}, barriers {barriers}")),
        });
    }
    let start = dyadic_exponent_below(&(&delta.lower / Rational::from_integer(8.into())));
    let mut last_problem = String::new();
    for level in start..start + EXTRA_LEVELS {
        let n_e = dyadic_cover(&exits, level);
        let n_b = n_e.star().closure();
        if !n_e.intersect(&n_b).is_empty() {
            last_problem = format!("N_e meets its star image at level {level}");
            continue;
        }
        if n_e.endpoints().contains(&half()) {
            last_problem = "N_e has 1/2 as an endpoint".into();
            continue;
        }
        if avoid_special {
            let both = n_e.union(&n_b);
            if let Some(x) = special_points().iter().find(|x| both.contains(x)) {
                last_problem = format!("N_e ∪ N_b contains {x}");
                continue;
            }
        }
        return Ok(Cover { exits, barriers, delta, n_e, n_b });
    }
    Err(Error::Precondition(format!("could not separate the regions: {last_problem}")))
}

/// A continuous transition function for which `B` is invariant (requires the closures of
/// exit and barrier sets to be disjoint).
pub fn construct_prop_4_2(b: &ClosedSet1D) -> Result<TransitionFn> {
    let cover = separated_cover(b, false)?;
    let mut regions = Regions {
        method: Method::Distance,
        invariant_set: b.clone(),
        exits: cover.exits,
        barriers: cover.barriers,
        n_e: cover.n_e,
        n_b: cover.n_b,
        n_0: IntervalUnion::empty(),
        n_half: IntervalUnion::empty(),
        epsilon: None,
        delta: cover.delta,
        segments: Vec::new(),
        depth: DEFAULT_DEPTH,
    };
    regions.build_segments();
    Ok(TransitionFn::constructed(regions))
}

/// A continuous QMF function with `p ≡ 1` near 0 whose invariant sets include `B`.
pub fn construct_thm_1(b: &ClosedSet1D, params: &ThmParams) -> Result<TransitionFn> {
    let report = check_lemma_4_3(b)?;
    if report.theta_invariant != Some(true) {
        return Err(Error::Precondition("B must satisfy θ(B) = B".into()));
    }
    if !report.inside_open_unit {
        return Err(Error::Precondition("B must lie inside (0,1)".into()));
    }
    if !report.no_binary_rationals {
        return Err(Error::Precondition("B, its exit set and its barrier set must avoid binary rationals".into()));
    }
    if b.closure() != *b {
        return Err(Error::Precondition("B must be closed".into()));
    }
    let cover = separated_cover(b, true)?;
    let both = cover.n_e.union(&cover.n_b);
    let gap = special_points()
        .iter()
        .map(|x| both.dist(x).expect("nonempty"))
        .min()
        .expect("three points");
    let epsilon = match &params.epsilon {
        Some(e) => e.clone(),
        None => {
            let m = std::cmp::min(gap.clone(), cover.delta.lower.clone()) / Rational::from_integer(4.into());
            dyadic(dyadic_exponent_below(&m))
        }
    };
    let quarter = half() * half();
    if !epsilon.is_positive() || epsilon >= quarter {
        return Err(Error::Precondition(format!("ε = {epsilon} must lie in (0, 1/4)")));
    }
    let one = Rational::one();
    let n_0 = IntervalUnion::new(vec![
        Interval::closed(Rational::zero(), epsilon.clone()),
        Interval::closed(&one - &epsilon, one.clone()),
    ]);
    let n_half = IntervalUnion::new(vec![Interval::closed(half() - &epsilon, half() + &epsilon)]);
    if !n_0.union(&n_half).intersect(&both).is_empty() {
        return Err(Error::Precondition(format!(
            "ε = {epsilon} is too large: N_0 or N_1/2 would meet N_e ∪ N_b"
        )));
    }
    let k = match params.k {
        Some(k) => k,
        None => dyadic_exponent_below(&epsilon) + 1,
    };
    if dyadic(k) >= epsilon {
        return Err(Error::Precondition(format!("k = {k} must satisfy 2^-k < ε = {epsilon}")));
    }
    let mut regions = Regions {
        method: Method::LogModulus { k },
        invariant_set: b.clone(),
        exits: cover.exits,
        barriers: cover.barriers,
        n_e: cover.n_e,
        n_b: cover.n_b,
        n_0,
        n_half,
        epsilon: Some(epsilon),
        delta: cover.delta,
        segments: Vec::new(),
        depth: DEFAULT_DEPTH,
    };
    regions.build_segments();
    Ok(TransitionFn::constructed(regions))
}

/// Set relations required of the regions of a log-modulus filter.
#[derive(Clone, Debug, Serialize)]
pub struct Step1Report {
    /// `closure(B_e^c) ⊂ N_e` and `closure(B_b) ⊂ N_b`.
    pub covers: bool,
    /// `closure(N_e*) = N_b`.
    pub star_related: bool,
    /// `{0, 1/2, 1}` avoids `N_e ∪ N_b`.
    pub avoids_special_points: bool,
    /// `closure(B_e^c)` lies in the interior of `N_e`.
    pub exits_interior: bool,
    /// `N_e ∩ N_b = ∅`.
    pub disjoint: bool,
    /// `N_0 ∪ N_1/2` avoids `N_e ∪ N_b`.
    pub flat_regions_separate: bool,
    /// `2^-k < ε`.
    pub k_admissible: bool,
}

impl Step1Report {
    pub fn all(&self) -> bool {
        self.covers
            && self.star_related
            && self.avoids_special_points
            && self.exits_interior
            && self.disjoint
            && self.flat_regions_separate
            && self.k_admissible
    }
}

fn inside(set: &ClosedSet1D, region: &IntervalUnion, strict: bool, depth: u32) -> bool {
    let within = |iv: &Interval| {
        region.parts().iter().any(|r| {
            if strict {
                r.lo < iv.lo && iv.hi < r.hi
            } else {
                r.lo <= iv.lo && iv.hi <= r.hi
            }
        })
    };
    set.cover(depth).parts().iter().all(within)
}

impl Regions {
    /// Checks the region clauses, refining τ-images to `depth` binary digits.
    pub fn step1_report(&self, depth: u32) -> Step1Report {
        let both = self.n_e.union(&self.n_b);
        let k_admissible = match (&self.method, &self.epsilon) {
            (Method::LogModulus { k }, Some(eps)) => dyadic(*k) < *eps,
            _ => false,
        };
        Step1Report {
            covers: inside(&self.exits, &self.n_e, false, depth) && inside(&self.barriers, &self.n_b, false, depth),
            star_related: self.n_e.star().closure() == self.n_b,
            avoids_special_points: special_points().iter().all(|x| !both.contains(x)),
            exits_interior: inside(&self.exits, &self.n_e, true, depth),
            disjoint: self.n_e.intersect(&self.n_b).is_empty(),
            flat_regions_separate: self.n_0.union(&self.n_half).intersect(&both).is_empty(),
            k_admissible,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::symbolic::SftSubshift;
    use crate::interval::TauPart;

    fn one_third() -> ClosedSet1D {
        ClosedSet1D::points([rat(1, 3), rat(2, 3)])
    }

    #[test]
    fn log_modulus_filter_on_one_third() {
        let p = construct_thm_1(&one_third(), &ThmParams { epsilon: Some(rat(1, 16)), k: Some(5) }).unwrap();
        assert_eq!(p.eval_exact(&rat(1, 6)), Some(rat(0, 1)));
        assert_eq!(p.eval_exact(&rat(5, 6)), Some(rat(0, 1)));
        assert_eq!(p.eval_exact(&rat(1, 3)), Some(rat(1, 1)));
        assert_eq!(p.eval_exact(&rat(1, 32)), Some(rat(1, 1)));
        assert_eq!(p.eval_exact(&rat(1, 2)), Some(rat(0, 1)));
        let r = p.regions().unwrap().step1_report(20);
        assert!(r.all(), "{r:?}");
        for i in 0..=400 {
            let x = rat(i, 400);
            let v = p.eval(&x);
            assert!((0.0..=1.0).contains(&v), "p({x}) = {v}");
        }
    }

    #[test]
    fn default_parameters() {
        let p = construct_thm_1(&one_third(), &ThmParams::default()).unwrap();
        let r = p.regions().unwrap();
        assert_eq!(r.epsilon, Some(rat(1, 32)));
        assert_eq!(r.method, Method::LogModulus { k: 6 });
        assert!(r.step1_report(20).all());
    }

    #[test]
    fn oversized_epsilon_is_refused() {
        let err = construct_thm_1(&one_third(), &ThmParams { epsilon: Some(rat(1, 3)), k: None }).unwrap_err();
        assert!(err.to_string().contains("1/3"), "{err}");
        let err = construct_thm_1(&one_third(), &ThmParams { epsilon: Some(rat(1, 5)), k: None }).unwrap_err();
        assert!(err.to_string().contains("too large"), "{err}");
    }

    #[test]
    fn distance_filter() {
        let p = construct_prop_4_2(&one_third()).unwrap();
        assert_eq!(p.eval_exact(&rat(1, 6)), Some(rat(0, 1)));
        assert_eq!(p.eval_exact(&rat(5, 6)), Some(rat(0, 1)));
        assert_eq!(p.eval_exact(&rat(1, 3)), Some(rat(1, 1)));
        assert_eq!(p.eval_exact(&rat(2, 3)), Some(rat(1, 1)));
        let endpoints = construct_prop_4_2(&ClosedSet1D::points([rat(0, 1), rat(1, 1)])).unwrap();
        assert_eq!(endpoints.eval_exact(&rat(1, 2)), Some(rat(0, 1)));
        assert_eq!(endpoints.eval_exact(&rat(0, 1)), Some(rat(1, 1)));
    }

    #[test]
    fn overlapping_exit_and_barrier_sets_are_refused() {
        let err = construct_prop_4_2(&ClosedSet1D::points([rat(1, 4)])).unwrap_err();
        assert!(matches!(err, Error::Refused { .. }), "{err}");
    }

    #[test]
    fn finite_type_sets_are_accepted() {
        let k = SftSubshift::from_strs(1, &["000", "111"]).unwrap();
        let b = ClosedSet1D::tau_image(k, TauPart::Subshift).unwrap();
        let p = construct_thm_1(&b, &ThmParams::default()).unwrap();
        assert!(p.regions().unwrap().step1_report(16).all());
    }

    #[test]
    fn json_round_trip() {
        let p = construct_thm_1(&one_third(), &ThmParams::default()).unwrap();
        let text = p.to_json().unwrap();
        let q = TransitionFn::from_json(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(text, q.to_json().unwrap());
    }
}
