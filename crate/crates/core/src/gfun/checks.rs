//! Sum identity and invariance checks for g-functions.

use serde::Serialize;

use super::{fiber_defect, GFunction, GValue};
use crate::error::{Error, Result};
use crate::symbolic::{CylinderUnion, SftSubshift, SymbolSeq};

/// Depth to which exit cylinders are represented by sample points.
pub const EXIT_DEPTH: usize = 12;

/// `max |Σ_j g((ξ, j)) − 1|` over the samples; zero exactly when every value is exact and sums to one.
pub fn g_sum_residual<'a>(g: &GFunction, samples: impl IntoIterator<Item = &'a SymbolSeq>) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in samples {
        worst = worst.max(fiber_defect(&g.fiber(s)?));
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct GInvarianceVerdict {
    pub pass: bool,
    /// Exit points at which `g` was evaluated.
    pub checked: usize,
    pub max_abs: f64,
    pub worst: Option<String>,
}

fn tally<'a>(g: &GFunction, points: impl IntoIterator<Item = &'a SymbolSeq>) -> Result<GInvarianceVerdict> {
    let mut checked = 0;
    let mut max_abs = 0.0f64;
    let mut worst = None;
    let mut pass = true;
    for pt in points {
        checked += 1;
        let v = match g.eval_exact(pt)? {
            Some(v) => GValue::Exact(v),
            None => GValue::Float(g.eval(pt)?),
        };
        if !v.is_exact_zero() {
            pass = false;
            let a = v.to_f64().abs();
            if worst.is_none() || a > max_abs {
                max_abs = a;
                worst = Some(pt.to_string());
            }
        }
    }
    Ok(GInvarianceVerdict { pass, checked, max_abs, worst })
}

/// `g = 0` at every exit point of `K`, checked on one point per realizable exit cylinder
/// of depth up to 12. A float value that is not an exact zero counts as a failure.
pub fn g_invariance_check(g: &GFunction, k: &SftSubshift) -> Result<GInvarianceVerdict> {
    if g.alphabet_bound() != k.alphabet_bound() {
        return Err(Error::AlphabetMismatch { expected: k.alphabet_bound(), found: g.alphabet_bound() });
    }
    let exits = k.exit_set();
    let mut reps: Vec<SymbolSeq> = Vec::new();
    for len in 1..=EXIT_DEPTH {
        for u in exits.initial_words(len) {
            if let Some(p) = exits.some_point_ending_with(&u) {
                reps.push(p);
            }
        }
    }
    reps.sort();
    reps.dedup();
    tally(g, &reps)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetVerdict {
    pub invariance: GInvarianceVerdict,
    /// Words `u` such that every point ending in `u` exits `E`.
    pub exit_words: Vec<String>,
    /// Whether the star images of the exit closure are disjoint, so a continuous
    /// invariant g exists.
    pub continuous_g_exists: bool,
    pub obstruction: Option<String>,
}

/// Invariance of a cylinder-described set `E` under `g`.
pub fn general_subset_invariance(e: &CylinderUnion, g: &GFunction) -> Result<SubsetVerdict> {
    if g.alphabet_bound() != e.alphabet_bound() {
        return Err(Error::AlphabetMismatch { expected: e.alphabet_bound(), found: g.alphabet_bound() });
    }
    let exits = e.exit_set();
    let j = e.alphabet_bound();
    let mut reps = Vec::new();
    for w in exits.words() {
        for c in 0..=j {
            reps.push(SymbolSeq::new(vec![c], w.symbols().to_vec(), j)?);
        }
    }
    let invariance = tally(g, &reps)?;
    let (continuous_g_exists, witness) = e.star_intersection_empty();
    Ok(SubsetVerdict {
        invariance,
        exit_words: exits.words().map(ToString::to_string).collect(),
        continuous_g_exists,
        obstruction: witness.map(|w| w.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::TransitionFn;
    use crate::gfun::LocalG;
    use crate::rational::rat;
    use std::collections::BTreeMap;

    #[test]
    fn lifted_invariance() {
        let k = SftSubshift::from_strs(1, &["00", "11"]).unwrap();
        let cos3 = GFunction::lift(TransitionFn::builtin("cos3").unwrap());
        assert!(g_invariance_check(&cos3, &k).unwrap().pass);
        let haar = GFunction::lift(TransitionFn::builtin("haar").unwrap());
        let v = g_invariance_check(&haar, &k).unwrap();
        assert!(!v.pass);
        assert!((v.max_abs - 0.75).abs() < 1e-15);
    }

    #[test]
    fn residuals() {
        let samples: Vec<SymbolSeq> = ["(0)*", "(01)*", "(001)*1"].iter().map(|s| SymbolSeq::parse(s, 1).unwrap()).collect();
        let half = GFunction::Local(LocalG::constant(1, rat(1, 2)));
        assert_eq!(g_sum_residual(&half, &samples).unwrap(), 0.0);
        let mut values = BTreeMap::new();
        values.insert(vec![1], rat(3, 4));
        let bad = GFunction::Local(LocalG::new(1, 1, values, rat(1, 2)).unwrap());
        assert_eq!(g_sum_residual(&bad, &samples).unwrap(), 0.25);
        let haar = GFunction::lift(TransitionFn::builtin("haar").unwrap());
        assert!(g_sum_residual(&haar, &samples).unwrap() <= 1e-12);
    }

    #[test]
    fn cylinder_subsets() {
        let e = CylinderUnion::from_strs(1, &["0"]).unwrap();
        let half = GFunction::Local(LocalG::constant(1, rat(1, 2)));
        let v = general_subset_invariance(&e, &half).unwrap();
        assert_eq!(v.exit_words, vec!["01".to_string()]);
        assert!(!v.invariance.pass);
        let full = CylinderUnion::full(1);
        let v = general_subset_invariance(&full, &half).unwrap();
        assert!(v.invariance.pass && v.exit_words.is_empty() && v.continuous_g_exists);
    }
}
