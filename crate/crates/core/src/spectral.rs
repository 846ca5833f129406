//! The infinite product `Φ̂_p(x) = Π_{j≥1} p(x/2^j)` and the coding of `ℤ` into digit
//! sequences under which the product is a path probability.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::TransitionFn;
use crate::rational::{frac, halved, halved_shift, int, pow2, to_f64, Rational};
use crate::symbolic::Word;

/// First `len` digits `x_1, x_2, …` of the code of `k`: binary digits, least significant
/// first, for `k ≥ 0`; complemented digits of `−k−1` for `k < 0`.
pub fn code_k(k: i64, len: usize) -> Result<Word> {
    if len == 0 {
        return Err(Error::Invalid("code length must be at least 1".into()));
    }
    let (base, flip) = if k >= 0 { (k as u64, false) } else { ((-(k + 1)) as u64, true) };
    let digits = (0..len)
        .map(|i| {
            let bit = if i < 64 { ((base >> i) & 1) as u8 } else { 0 };
            if flip {
                1 - bit
            } else {
                bit
            }
        })
        .collect();
    Word::new(digits, 1)
}

/// `(ξ₀ + k)/2^t mod 1`.
pub fn xi_t_of_k(x0: &Rational, k: i64, t: u32) -> Rational {
    frac(&((x0 + Rational::from_integer(BigInt::from(k))) / pow2(t as i64)))
}

/// `ξ_t = ξ_{t−1}/2 + x_t/2`, driven by the given digits.
pub fn run_recursion(x0: &Rational, digits: &[u8]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(digits.len() + 1);
    let mut x = x0.clone();
    out.push(x.clone());
    for &d in digits {
        x = halved_shift(&x, d);
        out.push(x.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductBracket {
    pub lower: f64,
    pub upper: f64,
    pub terms_used: u32,
    pub exact_zero: bool,
}

impl ProductBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

/// Certified bracket on `Φ̂_p(x)` using at most `t_max` factors.
///
/// The partial product bounds from above since every factor is at most 1. A lower bound is
/// only claimed when the remaining arguments provably lie where `p ≡ 1`, or where the
/// quadratic tail bound of the `cos²` family applies.
pub fn phi_hat(p: &TransitionFn, x: &Rational, t_max: u32) -> ProductBracket {
    let one_radius = p.one_radius();
    let mut upper = 1.0f64;
    let mut y = x.clone();
    for j in 1..=t_max.max(1) {
        y = halved(&y);
        if let Some(r) = &one_radius {
            if y.abs() <= *r {
                // Every later argument is smaller still.
                return ProductBracket { lower: upper, upper, terms_used: j - 1, exact_zero: false };
            }
        }
        match p.eval_exact(&y) {
            Some(v) if v.is_zero() => {
                return ProductBracket { lower: 0.0, upper: 0.0, terms_used: j, exact_zero: true };
            }
            Some(v) => upper *= to_f64(&v),
            None => upper *= p.eval(&y),
        }
    }
    let t = t_max.max(1);
    let lower = match p.tail_bound() {
        Some(tb) => {
            let yf = to_f64(&y.abs());
            if yf <= tb.radius {
                upper * (1.0 - tb.coefficient * yf * yf).max(0.0)
            } else {
                0.0
            }
        }
        None => 0.0,
    };
    ProductBracket { lower, upper, terms_used: t, exact_zero: false }
}

#[derive(Clone, Debug, Serialize)]
pub struct SumBracket {
    pub lower: f64,
    pub upper: f64,
    pub k_max: u32,
    /// Number of terms that vanished exactly.
    pub exact_zero_terms: usize,
    pub terms: usize,
    /// Largest upper bound among the outermost terms `|k| = k_max`.
    pub omitted_diagnostic: f64,
}

impl SumBracket {
    pub fn all_exact_zero(&self) -> bool {
        self.exact_zero_terms == self.terms
    }
}

/// Per-term brackets of `Φ̂_p(ξ₀ + k)` for `|k| ≤ k_max`, in increasing `k`.
pub fn phi_hat_terms(p: &TransitionFn, x0: &Rational, k_max: u32, t_max: u32) -> Vec<(i64, ProductBracket)> {
    let k_max = k_max as i64;
    (-k_max..=k_max)
        .into_par_iter()
        .map(|k| (k, phi_hat(p, &(x0 + int(k)), t_max)))
        .collect()
}

/// `Σ_{|k| ≤ k_max} Φ̂_p(ξ₀ + k)`, summed in a fixed order for reproducible output.
pub fn sum_phi_hat(p: &TransitionFn, x0: &Rational, k_max: u32, t_max: u32) -> SumBracket {
    let terms = phi_hat_terms(p, x0, k_max, t_max);
    let mut lower = 0.0;
    let mut upper = 0.0;
    let mut zeros = 0;
    for (_, b) in &terms {
        lower += b.lower;
        upper += b.upper;
        if b.exact_zero {
            zeros += 1;
        }
    }
    let omitted_diagnostic = terms
        .iter()
        .filter(|(k, _)| k.unsigned_abs() == k_max as u64)
        .map(|(_, b)| b.upper)
        .fold(0.0, f64::max);
    SumBracket { lower, upper, k_max, exact_zero_terms: zeros, terms: terms.len(), omitted_diagnostic }
}

/// `(sin πx / πx)²`, the product for the Haar filter.
pub fn sinc_squared(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let a = std::f64::consts::PI * x;
    (a.sin() / a).powi(2)
}

/// Product of `p` along the coded path of `k` to depth `t`, which is the probability that
/// the chain from `ξ₀` follows that path.
pub fn coded_path_probability(p: &TransitionFn, x0: &Rational, k: i64, t: u32) -> f64 {
    (1..=t).map(|j| p.eval(&xi_t_of_k(x0, k, j))).product()
}

/// Is `x0` a valid starting point in `[0,1)`?
pub fn check_start(x0: &Rational) -> Result<()> {
    if x0.is_negative() || *x0 >= Rational::one() {
        return Err(Error::Invalid(format!("ξ₀ = {x0} must lie in [0,1)")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::{construct_thm_1, ThmParams};
    use crate::interval::ClosedSet1D;
    use crate::rational::rat;

    #[test]
    fn codes() {
        assert_eq!(code_k(0, 4).unwrap().to_string(), "0000");
        assert_eq!(code_k(3, 4).unwrap().to_string(), "1100");
        assert_eq!(code_k(-1, 4).unwrap().to_string(), "1111");
        assert_eq!(code_k(-2, 4).unwrap().to_string(), "0111");
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_t_of_k(&rat(1, 3), 0, 1), rat(1, 6));
        assert_eq!(xi_t_of_k(&rat(1, 3), 1, 1), rat(2, 3));
        assert_eq!(xi_t_of_k(&rat(1, 3), 1, 3), rat(1, 6));
    }

    #[test]
    fn coding_matches_recursion() {
        let x0 = rat(2, 7);
        for k in -20..=20 {
            let w = code_k(k, 12).unwrap();
            let path = run_recursion(&x0, w.symbols());
            for t in 0..=12u32 {
                assert_eq!(path[t as usize], xi_t_of_k(&x0, k, t), "k={k} t={t}");
            }
        }
    }

    #[test]
    fn haar_product_matches_sinc() {
        let haar = TransitionFn::builtin("haar").unwrap();
        let b = phi_hat(&haar, &rat(1, 2), 48);
        let v = sinc_squared(0.5);
        assert!(b.contains(v, 1e-12), "{b:?} vs {v}");
        assert!(b.width() < 1e-8);
        assert_eq!(phi_hat(&haar, &rat(0, 1), 10).upper, 1.0);
    }

    #[test]
    fn constructed_product_vanishes() {
        let b = ClosedSet1D::points([rat(1, 3), rat(2, 3)]);
        let p = construct_thm_1(&b, &ThmParams::default()).unwrap();
        let r = phi_hat(&p, &rat(1, 3), 64);
        assert!(r.exact_zero && r.upper == 0.0);
        let s = sum_phi_hat(&p, &rat(1, 3), 8, 64);
        assert!(s.all_exact_zero());
        let at_zero = phi_hat(&p, &rat(0, 1), 5);
        assert_eq!((at_zero.lower, at_zero.upper), (1.0, 1.0));
    }
}
