//! Exit and barrier sets of subsets of `[0,1]` and the structural checks on them.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::set::{ClosedSet1D, Distance, TauPart};
use super::star_interval;
use crate::error::Result;
use crate::rational::{half, Rational};

/// `B_e^c = {ξ/2 + j/2 : ξ ∈ B, j ∈ {0,1}} ∩ B^c` and `B_b = (B_e^c)*`.
pub fn exit_and_barrier(b: &ClosedSet1D) -> Result<(ClosedSet1D, ClosedSet1D)> {
    let exits = match b {
        ClosedSet1D::Points(p) => {
            let h = half();
            ClosedSet1D::Points(
                p.iter()
                    .flat_map(|x| [x * &h, x * &h + &h])
                    .filter(|y| !p.contains(y))
                    .collect(),
            )
        }
        ClosedSet1D::Intervals(u) => ClosedSet1D::from_union(u.halves().minus(u)),
        ClosedSet1D::Sft(t) => ClosedSet1D::tau_image(t.sft.clone(), TauPart::Exits)?,
    };
    let barriers = match &exits {
        ClosedSet1D::Points(p) => ClosedSet1D::Points(p.iter().map(star_interval).collect()),
        other => other.star(),
    };
    Ok((exits, barriers))
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    /// `B = θ(B)`; `None` when this cannot be decided for the representation.
    pub theta_invariant: Option<bool>,
    pub inside_open_unit: bool,
    pub exits_nonempty: bool,
    pub no_binary_rationals: bool,
    pub disjoint: bool,
    /// Separation between `closure(B_e^c)` and `closure(B_b)`.
    pub delta: Option<Distance>,
    pub exits: String,
    pub barriers: String,
}

/// Depth to which τ-images are refined when certifying separation.
const SEPARATION_DEPTH: u32 = 32;

pub fn check_lemma_4_3(b: &ClosedSet1D) -> Result<SeparationReport> {
    let (exits, barriers) = exit_and_barrier(b)?;
    let theta_invariant = match b {
        ClosedSet1D::Points(p) => Some(
            !p.iter().any(|x| x.is_one())
                && p.iter().filter_map(|x| super::doubling(x).ok()).collect::<std::collections::BTreeSet<_>>() == *p,
        ),
        ClosedSet1D::Intervals(u) => Some(u.theta() == *u),
        ClosedSet1D::Sft(t) => match t.part {
            TauPart::Subshift => Some(t.sft.is_shift_onto()),
            _ => None,
        },
    };
    let inside_open_unit = !b.contains(&Rational::zero()) && !b.contains(&Rational::one());
    let exits_nonempty = !exits.is_empty();
    let no_binary_rationals =
        !b.has_binary_rational() && !exits.has_binary_rational() && !barriers.has_binary_rational();
    let delta = if exits_nonempty && !barriers.is_empty() {
        Some(exits.closure().separation(&barriers.closure(), SEPARATION_DEPTH)?)
    } else {
        None
    };
    let disjoint = match &delta {
        Some(d) => d.lower.is_positive(),
        None => true,
    };
    Ok(SeparationReport {
        theta_invariant,
        inside_open_unit,
        exits_nonempty,
        no_binary_rationals,
        disjoint,
        delta: delta.filter(|d| !d.upper.is_zero() || d.lower.is_positive()),
        exits: exits.to_string(),
        barriers: barriers.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::rational::rat;
    use crate::symbolic::{GeneratorFamily, GeneratorRule};

    #[test]
    fn one_third_pair() {
        let b = ClosedSet1D::points([rat(1, 3), rat(2, 3)]);
        let (e, bb) = exit_and_barrier(&b).unwrap();
        assert_eq!(e, ClosedSet1D::points([rat(1, 6), rat(5, 6)]));
        assert_eq!(bb, ClosedSet1D::points([rat(1, 3), rat(2, 3)]));
        let r = check_lemma_4_3(&b).unwrap();
        assert_eq!(r.theta_invariant, Some(true));
        assert!(r.exits_nonempty && r.no_binary_rationals && r.disjoint && r.inside_open_unit);
        assert_eq!(r.delta, Some(Distance::exact(rat(1, 6))));
    }

    #[test]
    fn shannon_set() {
        let b = ClosedSet1D::intervals(vec![
            Interval::new(rat(0, 1), rat(1, 4), true, false).unwrap(),
            Interval::closed(rat(3, 4), rat(1, 1)),
        ]);
        let (e, bb) = exit_and_barrier(&b).unwrap();
        assert_eq!(e.to_string(), "[3/8, 5/8)");
        assert_eq!(bb.to_string(), "(0, 1/8) ∪ [7/8, 1]");
    }

    #[test]
    fn endpoints_pair() {
        let b = ClosedSet1D::points([rat(0, 1), rat(1, 1)]);
        let (e, _) = exit_and_barrier(&b).unwrap();
        assert_eq!(e, ClosedSet1D::points([rat(1, 2)]));
    }

    #[test]
    fn truncated_family_is_separated() {
        let k = GeneratorFamily::new(GeneratorRule::AlternatingBlocks, 11).subshift().unwrap();
        let b = ClosedSet1D::tau_image(k.clone(), TauPart::Subshift).unwrap();
        let r = check_lemma_4_3(&b).unwrap();
        assert!(r.disjoint, "{r:?}");
        // Exits end in 00 or 11, barriers in 01 or 10.
        for w in k.exit_set().initial_words(2) {
            assert_eq!(w[0], w[1]);
        }
        for w in k.barrier_set().initial_words(2) {
            assert_ne!(w[0], w[1]);
        }
    }
}
