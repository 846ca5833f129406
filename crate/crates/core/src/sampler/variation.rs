//! Empirical variation profile `var_n(g) = sup {|g(ξ) − g(η)| : ξ, η share their last n symbols}`.

use rand::Rng;
use serde::Serialize;

use super::path_rng;
use crate::error::{Error, Result};
use crate::gfun::GFunction;
use crate::symbolic::SymbolSeq;

#[derive(Clone, Debug, Serialize)]
pub struct VarEstimate {
    pub n: u32,
    /// Largest difference seen among pairs sharing their last `n` symbols.
    pub raw: f64,
    /// Running maximum from larger `n`, which makes the profile nonincreasing.
    pub smoothed: f64,
    pub pairs: usize,
}

/// Sampled lower estimates of `var_n(g)` for `n = 1..=n_max`, `samples` pairs each.
pub fn var_profile(g: &GFunction, n_max: u32, samples: usize, seed: u64) -> Result<Vec<VarEstimate>> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let j = g.alphabet_bound();
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let mut rng = path_rng(seed, n as u64);
        let mut raw = 0.0f64;
        for _ in 0..samples {
            let common: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=j)).collect();
            let a = SymbolSeq::random(&mut rng, j, 4, 6).append_word(&common);
            let b = SymbolSeq::random(&mut rng, j, 4, 6).append_word(&common);
            raw = raw.max((g.eval(&a)? - g.eval(&b)?).abs());
        }
        out.push(VarEstimate { n, raw, smoothed: raw, pairs: samples });
    }
    for i in (0..out.len().saturating_sub(1)).rev() {
        out[i].smoothed = out[i].smoothed.max(out[i + 1].smoothed);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::TransitionFn;
    use crate::gfun::LocalG;
    use crate::rational::rat;

    #[test]
    fn constant_has_no_variation() {
        let g = GFunction::Local(LocalG::constant(1, rat(1, 2)));
        assert!(var_profile(&g, 6, 50, 1).unwrap().iter().all(|v| v.smoothed == 0.0));
    }

    #[test]
    fn haar_is_lipschitz() {
        let g = GFunction::lift(TransitionFn::builtin("haar").unwrap());
        for v in var_profile(&g, 12, 200, 2).unwrap() {
            assert!(v.raw <= std::f64::consts::PI * 2f64.powi(-(v.n as i32)) + 1e-12, "{v:?}");
        }
    }
}
