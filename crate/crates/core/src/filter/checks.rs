//! Identity, invariance and Cohen-condition checks for transition functions.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{FilterKind, TransitionFn};
use crate::error::Result;
use crate::interval::{exit_and_barrier, star_interval, tau, ClosedSet1D, Interval, IntervalUnion};
use crate::rational::{format_rational, int, pow2, rat, to_f64, Rational};

/// Values at or below this count as zero for filters without an exact value.
pub const ZERO_TOL: f64 = 1e-15;
/// Depth of exit-cylinder enumeration for τ-image invariance checks.
const EXIT_DEPTH: usize = 12;

/// `max |p(ξ) + p(ξ*) − 1|` over `i/n` and every region endpoint.
pub fn qmf_residual(p: &TransitionFn, n: u32) -> f64 {
    let n = n.max(2) as i64;
    let mut points: Vec<Rational> = (0..=n).map(|i| rat(i, n)).collect();
    points.extend(p.region_endpoints().into_iter().filter(|x| !x.is_negative() && *x <= Rational::one()));
    points.extend(p.known_zeros());
    points
        .iter()
        .map(|x| {
            let y = star_interval(x);
            match (p.eval_exact(x), p.eval_exact(&y)) {
                (Some(a), Some(b)) => to_f64(&(a + b - Rational::one()).abs()),
                _ => (p.eval(x) + p.eval(&y) - 1.0).abs(),
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceVerdict {
    pub pass: bool,
    /// Largest `|p|` seen on the exit set.
    pub max_abs: f64,
    pub checked: usize,
    /// Worst point when the check fails.
    pub worst: Option<String>,
    pub method: &'static str,
    pub exit_set: String,
}

fn sample_union(u: &IntervalUnion, n: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for part in u.parts() {
        if part.is_point() {
            out.push(part.lo.clone());
            continue;
        }
        let width = &part.hi - &part.lo;
        for i in 0..=n {
            if (i == 0 && !part.lo_closed) || (i == n && !part.hi_closed) {
                continue;
            }
            out.push(&part.lo + &width * rat(i, n));
        }
    }
    out
}

/// `B` is invariant for `p` iff `p` vanishes on `B_e^c`.
pub fn invariance_check(p: &TransitionFn, b: &ClosedSet1D) -> Result<InvarianceVerdict> {
    let (exits, _) = exit_and_barrier(b)?;
    let (points, method): (Vec<Rational>, &'static str) = match &exits {
        ClosedSet1D::Points(set) => (set.iter().cloned().collect(), "exact evaluation at exit points"),
        ClosedSet1D::Intervals(u) => (sample_union(u, 4096), "dense grid plus endpoints"),
        ClosedSet1D::Sft(t) => {
            let tail = t.tail_set();
            let pts = tail
                .initial_words(EXIT_DEPTH)
                .iter()
                .filter_map(|u| tail.some_point_ending_with(u))
                .filter_map(|s| tau(&s).ok())
                .collect();
            (pts, "exit cylinders to depth 12")
        }
    };
    let certified = match p.kind() {
        FilterKind::Constructed(r) => r.exits == exits.closure(),
        FilterKind::Builtin(_) => false,
    };
    let mut max_abs = 0.0f64;
    let mut worst: Option<String> = None;
    let mut failed = false;
    for x in &points {
        let (zero, v) = match p.eval_exact(x) {
            Some(e) => (e.is_zero(), to_f64(&e).abs()),
            None => {
                let v = p.eval(x).abs();
                (v <= ZERO_TOL, v)
            }
        };
        if v > max_abs || (!zero && !failed) {
            if !zero {
                failed = true;
            }
            if v >= max_abs {
                max_abs = v;
                worst = Some(format!("p({}) = {v}", format_rational(x)));
            }
        }
    }
    Ok(InvarianceVerdict {
        pass: !failed,
        max_abs,
        checked: points.len(),
        worst: if failed { worst } else { None },
        method: if certified { "zero-set metadata, confirmed by evaluation" } else { method },
        exit_set: exits.to_string(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CohenVerdict {
    pub pass: bool,
    pub covered: bool,
    pub uncovered: Option<String>,
    /// `min p(ξ/2^j)` over the candidate points.
    pub infimum: f64,
    pub argmin: Option<(String, u32)>,
    /// Lower bound on `p` over `[-s/2^{j_max}, s/2^{j_max}]`.
    pub tail_certificate: Option<f64>,
    pub candidates: usize,
    pub tolerance: f64,
}

/// Lower bound for `p` on `[-r, r]`.
fn lower_bound_near_zero(p: &TransitionFn, r: &Rational) -> Option<f64> {
    if let Some(one) = p.one_radius() {
        if *r <= one {
            return Some(1.0);
        }
    }
    if let FilterKind::Builtin(b) = p.kind() {
        if let Some(c) = b.frequency() {
            let arg = to_f64(r) * c as f64;
            if arg <= 0.5 {
                return Some((std::f64::consts::PI * arg).cos().powi(2));
            }
        }
    }
    None
}

/// Cohen's condition on a congruence set `T`: `inf_{1≤j≤j_max} inf_{ξ∈T} p(ξ/2^j) > 0`.
pub fn cohen_check(p: &TransitionFn, t: &IntervalUnion, j_max: u32, grid_n: u32) -> CohenVerdict {
    let tolerance = 1e-9;
    let Some(lo) = t.parts().first().map(|i| i.lo.clone()) else {
        return CohenVerdict {
            pass: false,
            covered: false,
            uncovered: Some("T is empty".into()),
            infimum: 0.0,
            argmin: None,
            tail_certificate: None,
            candidates: 0,
            tolerance,
        };
    };
    let hi = t.parts().last().expect("nonempty").hi.clone();

    // Covering: ξ ∈ [0,1] has some k with ξ + k ∈ T.
    let k_lo = (&lo - Rational::one()).ceil().to_integer();
    let k_hi = hi.floor().to_integer();
    let mut shifted = IntervalUnion::empty();
    let mut k = k_lo.clone();
    while k <= k_hi {
        let shift = -Rational::from_integer(k.clone());
        shifted = shifted.union(&t.affine(&Rational::one(), &shift));
        k += 1;
    }
    let uncovered = IntervalUnion::unit().minus(&shifted);
    let uncovered_point = uncovered.parts().first().map(|i| {
        if i.lo_closed {
            format_rational(&i.lo)
        } else {
            format_rational(&((&i.lo + &i.hi) / int(2)))
        }
    });

    // Candidate points: a grid of T, its endpoints, and preimages of known zeros.
    let mut candidates: Vec<Rational> = sample_union(&t.closure(), grid_n.max(2) as i64);
    let mut specials = p.known_zeros();
    specials.extend(p.region_endpoints());
    for j in 1..=j_max {
        let scale = pow2(j as i64);
        for z in &specials {
            let m_lo = (&lo / &scale - z).ceil().to_integer();
            let m_hi = (&hi / &scale - z).floor().to_integer();
            let mut m = m_lo;
            while m <= m_hi {
                let xi = (z + Rational::from_integer(m.clone())) * &scale;
                if t.closure().contains(&xi) {
                    candidates.push(xi);
                }
                m += 1;
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut infimum = f64::INFINITY;
    let mut argmin = None;
    for xi in &candidates {
        for j in 1..=j_max {
            let y = xi / pow2(j as i64);
            let v = p.eval(&y);
            if v < infimum {
                infimum = v;
                argmin = Some((format_rational(xi), j));
            }
        }
    }

    let s = std::cmp::max(lo.abs(), hi.abs());
    let r = s / pow2(j_max as i64);
    let tail_certificate = lower_bound_near_zero(p, &r);
    let covered = uncovered.is_empty();
    CohenVerdict {
        pass: covered && infimum > tolerance && tail_certificate.is_some_and(|c| c > tolerance),
        covered,
        uncovered: uncovered_point,
        infimum,
        argmin,
        tail_certificate,
        candidates: candidates.len(),
        tolerance,
    }
}

/// `[lo, hi]` as a union, for Cohen sets.
pub fn closed_set(lo: Rational, hi: Rational) -> IntervalUnion {
    IntervalUnion::new(vec![Interval::closed(lo, hi)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::{construct_thm_1, ThmParams};

    fn b13() -> ClosedSet1D {
        ClosedSet1D::points([rat(1, 3), rat(2, 3)])
    }

    fn shannon_set() -> ClosedSet1D {
        ClosedSet1D::intervals(vec![
            Interval::new(rat(0, 1), rat(1, 4), true, false).unwrap(),
            Interval::closed(rat(3, 4), rat(1, 1)),
        ])
    }

    #[test]
    fn residuals() {
        for name in ["haar", "cos3", "shannon"] {
            let p = TransitionFn::builtin(name).unwrap();
            assert!(qmf_residual(&p, 4096) <= 1e-12, "{name}");
        }
        assert_eq!(qmf_residual(&TransitionFn::builtin("shannon").unwrap(), 4096), 0.0);
        let p = construct_thm_1(&b13(), &ThmParams::default()).unwrap();
        assert!(qmf_residual(&p, 4096) <= 1e-9);
    }

    #[test]
    fn invariance() {
        let cos3 = TransitionFn::builtin("cos3").unwrap();
        assert!(invariance_check(&cos3, &b13()).unwrap().pass);
        let shannon = TransitionFn::builtin("shannon").unwrap();
        assert!(invariance_check(&shannon, &shannon_set()).unwrap().pass);
        let haar = TransitionFn::builtin("haar").unwrap();
        let v = invariance_check(&haar, &b13()).unwrap();
        assert!(!v.pass);
        assert_eq!(v.max_abs, 0.75);
    }

    #[test]
    fn cohen() {
        let t = closed_set(rat(-1, 2), rat(1, 2));
        let haar = cohen_check(&TransitionFn::builtin("haar").unwrap(), &t, 30, 512);
        assert!(haar.pass, "{haar:?}");
        assert!((haar.infimum - 0.5).abs() < 1e-12);
        let cos3 = cohen_check(&TransitionFn::builtin("cos3").unwrap(), &t, 30, 512);
        assert!(!cos3.pass);
        assert_eq!(cos3.infimum, 0.0);
        let gap = cohen_check(&TransitionFn::builtin("haar").unwrap(), &closed_set(rat(0, 1), rat(1, 2)), 5, 64);
        assert!(!gap.covered && gap.uncovered.is_some());
    }
}
