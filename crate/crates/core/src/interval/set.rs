//! Subsets of `[0,1]`: finite point sets, finite unions of intervals with open/closed
//! endpoints, and τ-images of automaton-backed symbolic sets.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{binary_reps, star_interval, tau};
use crate::error::{Error, Result};
use crate::rational::{dyadic, format_rational, half, int, is_binary_rational, Rational};
use crate::symbolic::{SftSubshift, TailSet};

/// Default binary depth for distances to τ-images of symbolic sets.
pub const DEFAULT_DEPTH: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::as_string")]
    pub lo: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let ok = lo < hi || (lo == hi && lo_closed && hi_closed);
        if !ok {
            return Err(Error::Invalid(format!("empty interval {lo}..{hi}")));
        }
        Ok(Interval { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "closed interval with lo > hi");
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = *x > self.lo || (self.lo_closed && *x == self.lo);
        let below = *x < self.hi || (self.hi_closed && *x == self.hi);
        above && below
    }

    /// Distance from `x` to the closure.
    pub fn dist(&self, x: &Rational) -> Rational {
        if *x < self.lo {
            &self.lo - x
        } else if *x > self.hi {
            x - &self.hi
        } else {
            Rational::zero()
        }
    }

    /// Gap between the closures.
    pub fn gap(&self, other: &Interval) -> Rational {
        let a = &other.lo - &self.hi;
        let b = &self.lo - &other.hi;
        let g = if a > b { a } else { b };
        if g.is_positive() {
            g
        } else {
            Rational::zero()
        }
    }

    fn map(&self, scale: &Rational, shift: &Rational) -> Interval {
        Interval {
            lo: &self.lo * scale + shift,
            hi: &self.hi * scale + shift,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// Flag text used by the config format, e.g. `closed-open`.
    pub fn flags(&self) -> &'static str {
        match (self.lo_closed, self.hi_closed) {
            (true, true) => "closed",
            (true, false) => "closed-open",
            (false, true) => "open-closed",
            (false, false) => "open",
        }
    }

    pub fn parse_flags(text: &str) -> Result<(bool, bool)> {
        match text {
            "closed" | "closed-closed" => Ok((true, true)),
            "closed-open" => Ok((true, false)),
            "open-closed" => Ok((false, true)),
            "open" | "open-open" => Ok((false, false)),
            other => Err(Error::Parse(format!("unknown interval flags {other:?}"))),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", format_rational(&self.lo));
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            format_rational(&self.lo),
            format_rational(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A finite union of disjoint, non-touching intervals kept in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

enum Piece<'a> {
    At(&'a Rational),
    Between(&'a Rational, &'a Rational),
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn new(parts: Vec<Interval>) -> Self {
        let raw = IntervalUnion { parts };
        raw.combine(&IntervalUnion::empty(), |a, _| a)
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Rational>) -> Self {
        IntervalUnion::new(points.into_iter().cloned().map(Interval::point).collect())
    }

    pub fn unit() -> Self {
        IntervalUnion { parts: vec![Interval::closed(Rational::zero(), Rational::one())] }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn endpoints(&self) -> Vec<Rational> {
        let mut e: Vec<Rational> = self.parts.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
        e.sort();
        e.dedup();
        e
    }

    /// Pointwise set operation decided on the elementary pieces cut out by all endpoints.
    pub fn combine(&self, other: &IntervalUnion, op: impl Fn(bool, bool) -> bool) -> IntervalUnion {
        assert!(!op(false, false), "set operation must keep the complement of both operands out");
        let mut cuts: Vec<Rational> = self.endpoints();
        cuts.extend(other.endpoints());
        cuts.sort();
        cuts.dedup();
        let mut pieces: Vec<Piece> = Vec::new();
        for (i, c) in cuts.iter().enumerate() {
            pieces.push(Piece::At(c));
            if let Some(d) = cuts.get(i + 1) {
                pieces.push(Piece::Between(c, d));
            }
        }
        let mut parts: Vec<Interval> = Vec::new();
        let mut open: Option<Interval> = None;
        for piece in pieces {
            let probe = match piece {
                Piece::At(c) => c.clone(),
                Piece::Between(a, b) => (a + b) * half(),
            };
            let inside = op(self.contains(&probe), other.contains(&probe));
            match (piece, inside) {
                (Piece::At(c), true) => match open.as_mut() {
                    Some(cur) if cur.hi == *c => cur.hi_closed = true,
                    _ => {
                        parts.extend(open.take());
                        open = Some(Interval::point(c.clone()));
                    }
                },
                (Piece::Between(a, b), true) => match open.as_mut() {
                    Some(cur) if cur.hi == *a && cur.hi_closed => {
                        cur.hi = b.clone();
                        cur.hi_closed = false;
                    }
                    _ => {
                        parts.extend(open.take());
                        open = Some(Interval { lo: a.clone(), hi: b.clone(), lo_closed: false, hi_closed: false });
                    }
                },
                (_, false) => parts.extend(open.take()),
            }
        }
        parts.extend(open);
        IntervalUnion { parts }
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        self.combine(other, |a, b| a && b)
    }

    pub fn minus(&self, other: &IntervalUnion) -> IntervalUnion {
        self.combine(other, |a, b| a && !b)
    }

    /// Complement within `[0,1]`.
    pub fn complement(&self) -> IntervalUnion {
        IntervalUnion::unit().minus(self)
    }

    pub fn closure(&self) -> IntervalUnion {
        IntervalUnion::new(
            self.parts.iter().map(|p| Interval::closed(p.lo.clone(), p.hi.clone())).collect(),
        )
    }

    /// Image under the affine map `x ↦ scale·x + shift` (with `scale > 0`).
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> IntervalUnion {
        IntervalUnion::new(self.parts.iter().map(|p| p.map(scale, shift)).collect())
    }

    /// `{x/2 + j/2 : x ∈ E, j ∈ {0,1}}`.
    pub fn halves(&self) -> IntervalUnion {
        let h = half();
        self.affine(&h, &Rational::zero()).union(&self.affine(&h, &h))
    }

    /// Image under the star map, following its endpoint convention at `1/2`.
    pub fn star(&self) -> IntervalUnion {
        let h = half();
        let low = IntervalUnion::new(vec![Interval::closed(Rational::zero(), h.clone())]);
        let high = IntervalUnion::new(vec![Interval::new(h.clone(), Rational::one(), false, true).expect("valid")]);
        let up = self.intersect(&low).affine(&Rational::one(), &h);
        let down = self.intersect(&high).affine(&Rational::one(), &-h);
        up.union(&down)
    }

    /// Image under the doubling map on `[0,1)`.
    pub fn theta(&self) -> IntervalUnion {
        let h = half();
        let two = int(2);
        let left = IntervalUnion::new(vec![Interval::new(Rational::zero(), h.clone(), true, false).expect("valid")]);
        let right = IntervalUnion::new(vec![Interval::new(h.clone(), Rational::one(), true, false).expect("valid")]);
        let a = self.intersect(&left).affine(&two, &Rational::zero());
        let b = self.intersect(&right).affine(&two, &-Rational::one());
        a.union(&b)
    }

    pub fn dist(&self, x: &Rational) -> Option<Rational> {
        self.parts.iter().map(|p| p.dist(x)).min()
    }

    /// Gap between the closures of two unions.
    pub fn gap(&self, other: &IntervalUnion) -> Option<Rational> {
        self.parts.iter().flat_map(|p| other.parts.iter().map(move |q| p.gap(q))).min()
    }

    pub fn is_points(&self) -> bool {
        self.parts.iter().all(Interval::is_point)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        let text: Vec<String> = self.parts.iter().map(Interval::to_string).collect();
        write!(f, "{}", text.join(" ∪ "))
    }
}

/// Which automaton-backed symbolic set a τ-image is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauPart {
    Subshift,
    Exits,
    Barriers,
    /// Star image of `K`.
    StarredSubshift,
}

/// `τ(S)` for `S` one of `K`, its exit points or its barrier points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauImage {
    pub sft: SftSubshift,
    pub part: TauPart,
}

impl TauImage {
    pub fn new(sft: SftSubshift, part: TauPart) -> Result<Self> {
        if sft.alphabet_bound() != 1 {
            return Err(Error::AlphabetMismatch { expected: 1, found: sft.alphabet_bound() });
        }
        Ok(TauImage { sft, part })
    }

    pub fn tail_set(&self) -> TailSet {
        match self.part {
            TauPart::Subshift => self.sft.points(),
            TauPart::Exits => self.sft.exit_set(),
            TauPart::Barriers => self.sft.barrier_set(),
            TauPart::StarredSubshift => self.sft.points().star(1),
        }
    }
}

/// Closed-interval cover `[v, v + 2^-d]` of the cylinder of initial word `u`.
fn cylinder_interval(u: &[u8]) -> Interval {
    let mut v = Rational::zero();
    let mut w = half();
    for &b in u.iter().rev() {
        if b == 1 {
            v += &w;
        }
        w *= half();
    }
    let hi = &v + dyadic(u.len() as u32);
    Interval::closed(v, hi)
}

/// Certified bounds on a distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    #[serde(with = "crate::rational::as_string")]
    pub lower: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub upper: Rational,
}

impl Distance {
    pub fn exact(value: Rational) -> Self {
        Distance { lower: value.clone(), upper: value }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lower)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", format_rational(&self.lower))
        } else {
            write!(f, "[{}, {}]", format_rational(&self.lower), format_rational(&self.upper))
        }
    }
}

/// A subset of `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedSet1D {
    Points(BTreeSet<Rational>),
    Intervals(IntervalUnion),
    Sft(TauImage),
}

struct Node {
    lower: Rational,
    word: Vec<u8>,
    states: Vec<bool>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // Min-heap on the lower bound, deeper nodes first on ties.
    fn cmp(&self, other: &Self) -> Ordering {
        other.lower.cmp(&self.lower).then_with(|| self.word.len().cmp(&other.word.len()))
    }
}

impl ClosedSet1D {
    pub fn points<I: IntoIterator<Item = Rational>>(points: I) -> Self {
        ClosedSet1D::Points(points.into_iter().collect())
    }

    pub fn intervals(parts: Vec<Interval>) -> Self {
        ClosedSet1D::Intervals(IntervalUnion::new(parts))
    }

    pub fn tau_image(sft: SftSubshift, part: TauPart) -> Result<Self> {
        Ok(ClosedSet1D::Sft(TauImage::new(sft, part)?))
    }

    /// Normalizes an interval union into the point variant when every part is degenerate.
    pub fn from_union(u: IntervalUnion) -> Self {
        if u.is_points() {
            ClosedSet1D::Points(u.parts().iter().map(|p| p.lo.clone()).collect())
        } else {
            ClosedSet1D::Intervals(u)
        }
    }

    /// Interval form of the finite variants.
    pub fn as_union(&self) -> Option<IntervalUnion> {
        match self {
            ClosedSet1D::Points(p) => Some(IntervalUnion::from_points(p)),
            ClosedSet1D::Intervals(u) => Some(u.clone()),
            ClosedSet1D::Sft(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ClosedSet1D::Points(p) => p.is_empty(),
            ClosedSet1D::Intervals(u) => u.is_empty(),
            ClosedSet1D::Sft(t) => t.tail_set().is_empty(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            ClosedSet1D::Points(p) => p.contains(x),
            ClosedSet1D::Intervals(u) => u.contains(x),
            ClosedSet1D::Sft(t) => match binary_reps(x) {
                Ok(reps) => {
                    let s = t.tail_set();
                    reps.iter().any(|r| s.contains(r))
                }
                Err(_) => false,
            },
        }
    }

    /// Endpoints of the finite variants (empty for τ-images).
    pub fn endpoints(&self) -> Vec<Rational> {
        self.as_union().map(|u| u.endpoints()).unwrap_or_default()
    }

    pub fn closure(&self) -> ClosedSet1D {
        match self {
            ClosedSet1D::Intervals(u) => ClosedSet1D::from_union(u.closure()),
            other => other.clone(),
        }
    }

    /// Image under the star map.
    pub fn star(&self) -> ClosedSet1D {
        match self {
            ClosedSet1D::Points(p) => ClosedSet1D::Points(p.iter().map(star_interval).collect()),
            ClosedSet1D::Intervals(u) => ClosedSet1D::from_union(u.star()),
            ClosedSet1D::Sft(t) => {
                // For binary alphabets barriers are exactly the star images of exits.
                let part = match t.part {
                    TauPart::Exits => TauPart::Barriers,
                    TauPart::Barriers => TauPart::Exits,
                    TauPart::Subshift => TauPart::StarredSubshift,
                    TauPart::StarredSubshift => TauPart::Subshift,
                };
                ClosedSet1D::Sft(TauImage { sft: t.sft.clone(), part })
            }
        }
    }

    /// `inf_{e ∈ E} |x − e|`, exact for finite variants and certified to `2^-depth` otherwise.
    pub fn dist_with_depth(&self, x: &Rational, depth: u32) -> Result<Distance> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        match self {
            ClosedSet1D::Points(p) => {
                Ok(Distance::exact(p.iter().map(|e| (x - e).abs()).min().expect("nonempty")))
            }
            ClosedSet1D::Intervals(u) => Ok(Distance::exact(u.dist(x).expect("nonempty"))),
            ClosedSet1D::Sft(t) => Ok(tau_image_distance(&t.tail_set(), x, depth)),
        }
    }

    pub fn dist(&self, x: &Rational) -> Result<Distance> {
        self.dist_with_depth(x, DEFAULT_DEPTH)
    }

    /// Closed-interval cover of depth `d`: exact for finite variants, dyadic cylinders for τ-images.
    pub fn cover(&self, depth: u32) -> IntervalUnion {
        match self {
            ClosedSet1D::Sft(t) => IntervalUnion::new(
                t.tail_set().initial_words(depth as usize).iter().map(|u| cylinder_interval(u)).collect(),
            ),
            other => other.as_union().expect("finite variant").closure(),
        }
    }

    /// Certified gap between the closures of two sets, refining τ-images up to `max_depth`.
    pub fn separation(&self, other: &ClosedSet1D, max_depth: u32) -> Result<Distance> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet);
        }
        let symbolic = matches!(self, ClosedSet1D::Sft(_)) || matches!(other, ClosedSet1D::Sft(_));
        if !symbolic {
            let a = self.as_union().expect("finite").closure();
            let b = other.as_union().expect("finite").closure();
            return Ok(Distance::exact(a.gap(&b).expect("nonempty")));
        }
        let mut last = Distance { lower: Rational::zero(), upper: Rational::one() };
        for d in 1..=max_depth {
            let a = self.cover(d);
            let b = other.cover(d);
            let lower = a.gap(&b).expect("nonempty covers");
            let slack = dyadic(d) * int(2);
            let upper = &lower + slack;
            last = Distance { lower, upper: if upper > Rational::one() { Rational::one() } else { upper } };
            if last.lower.is_positive() {
                break;
            }
        }
        Ok(last)
    }

    /// Does the set contain a binary rational?
    pub fn has_binary_rational(&self) -> bool {
        match self {
            ClosedSet1D::Points(p) => p.iter().any(is_binary_rational),
            ClosedSet1D::Intervals(u) => u.parts().iter().any(|p| !p.is_point() || is_binary_rational(&p.lo)),
            ClosedSet1D::Sft(t) => t.tail_set().has_eventually_constant_point(),
        }
    }

    pub fn describe(&self) -> String {
        self.to_string()
    }
}

/// Best-first search over dyadic cylinders of the symbolic set.
fn tau_image_distance(set: &TailSet, x: &Rational, depth: u32) -> Distance {
    if let Ok(reps) = binary_reps(x) {
        if reps.iter().any(|r| set.contains(r)) {
            return Distance::exact(Rational::zero());
        }
    }
    let mut heap = BinaryHeap::new();
    let mut best_upper: Option<Rational> = None;
    let consider_upper = |best: &mut Option<Rational>, iv: &Interval| {
        let far = std::cmp::max((x - &iv.lo).abs(), (x - &iv.hi).abs());
        if best.as_ref().map_or(true, |b| far < *b) {
            *best = Some(far);
        }
    };
    for a in 0..=1u8 {
        let states = set.start_states(a);
        if states.iter().any(|&s| s) {
            let iv = cylinder_interval(&[a]);
            consider_upper(&mut best_upper, &iv);
            heap.push(Node { lower: iv.dist(x), word: vec![a], states });
        }
    }
    while let Some(node) = heap.pop() {
        if best_upper.as_ref().is_some_and(|b| node.lower > *b) {
            continue;
        }
        if node.word.len() as u32 >= depth {
            let mut upper = best_upper.expect("set upper bound");
            if let Some(p) = set.some_point_ending_with(&node.word) {
                if let Ok(v) = tau(&p) {
                    let d = (x - v).abs();
                    if d < upper {
                        upper = d;
                    }
                }
            }
            return Distance { lower: node.lower, upper };
        }
        for b in 0..=1u8 {
            let states = set.extend_back(&node.states, b);
            if states.iter().any(|&s| s) {
                let mut word = Vec::with_capacity(node.word.len() + 1);
                word.push(b);
                word.extend_from_slice(&node.word);
                let iv = cylinder_interval(&word);
                consider_upper(&mut best_upper, &iv);
                heap.push(Node { lower: iv.dist(x), word, states });
            }
        }
    }
    unreachable!("a nonempty closed set always has a cylinder at every depth")
}

impl fmt::Display for ClosedSet1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedSet1D::Points(p) => {
                let t: Vec<String> = p.iter().map(format_rational).collect();
                write!(f, "{{{}}}", t.join(", "))
            }
            ClosedSet1D::Intervals(u) => write!(f, "{u}"),
            ClosedSet1D::Sft(t) => {
                let words: Vec<String> = t.sft.forbidden().iter().map(|w| w.to_string()).collect();
                let what = match t.part {
                    TauPart::Subshift => "K",
                    TauPart::Exits => "exits of K",
                    TauPart::Barriers => "barriers of K",
                    TauPart::StarredSubshift => "K*",
                };
                write!(f, "τ({what}), K forbids {{{}}}", words.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(lo: Rational, hi: Rational, flags: &str) -> Interval {
        let (a, b) = Interval::parse_flags(flags).unwrap();
        Interval::new(lo, hi, a, b).unwrap()
    }

    #[test]
    fn union_merges_touching_parts() {
        let u = IntervalUnion::new(vec![
            iv(rat(0, 1), rat(1, 4), "closed-open"),
            iv(rat(1, 4), rat(1, 2), "closed"),
            iv(rat(3, 4), rat(1, 1), "open-closed"),
        ]);
        assert_eq!(u.to_string(), "[0, 1/2] ∪ (3/4, 1]");
        assert!(!u.contains(&rat(3, 4)));
    }

    #[test]
    fn star_respects_half_convention() {
        let u = IntervalUnion::new(vec![iv(rat(3, 8), rat(5, 8), "closed-open")]);
        assert_eq!(u.star().to_string(), "(0, 1/8) ∪ [7/8, 1]");
        let p = IntervalUnion::from_points(&[rat(0, 1), rat(1, 2)]);
        assert_eq!(p.star().to_string(), "{1/2} ∪ {1}");
    }

    #[test]
    fn distances() {
        let p = ClosedSet1D::points([rat(1, 3), rat(2, 3)]);
        assert_eq!(p.dist(&rat(1, 4)).unwrap(), Distance::exact(rat(1, 12)));
        let u = ClosedSet1D::intervals(vec![iv(rat(3, 8), rat(5, 8), "closed-open")]);
        assert_eq!(u.dist(&rat(3, 8)).unwrap(), Distance::exact(rat(0, 1)));
        assert!(ClosedSet1D::points([]).dist(&rat(1, 2)).is_err());
    }

    #[test]
    fn distance_to_tau_image() {
        let k = SftSubshift::from_strs(1, &["00", "11"]).unwrap();
        let b = ClosedSet1D::tau_image(k, TauPart::Subshift).unwrap();
        let d = b.dist(&rat(1, 4)).unwrap();
        assert!(d.lower <= rat(1, 12) && rat(1, 12) <= d.upper, "{d}");
        assert!(&d.upper - &d.lower <= dyadic(63));
        assert_eq!(d.upper, rat(1, 12));
        assert_eq!(b.dist(&rat(2, 3)).unwrap(), Distance::exact(rat(0, 1)));
    }

    #[test]
    fn separation_of_tau_images() {
        let k = SftSubshift::from_strs(1, &["000", "111"]).unwrap();
        let e = ClosedSet1D::tau_image(k.clone(), TauPart::Exits).unwrap();
        let b = ClosedSet1D::tau_image(k, TauPart::Barriers).unwrap();
        let d = e.separation(&b, 24).unwrap();
        assert!(d.lower.is_positive(), "{d}");
    }
}
