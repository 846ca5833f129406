//! Exact arithmetic on `[0,1]`: binary representations, the doubling and star maps,
//! subsets of the interval and their exit/barrier sets.

mod lemma;
mod set;
mod spec;

pub use lemma::{check_lemma_4_3, exit_and_barrier, SeparationReport};
pub use spec::{SetSpec, SftSpec};
pub use set::{ClosedSet1D, Distance, Interval, IntervalUnion, TauImage, TauPart, DEFAULT_DEPTH};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{half, int, is_binary_rational, Rational};
use crate::symbolic::SymbolSeq;

/// `τ(ξ) = Σ x_{-d} 2^{-d-1}`, with `x_0` the most significant binary digit.
pub fn tau(seq: &SymbolSeq) -> Result<Rational> {
    if seq.alphabet_bound() != 1 {
        return Err(Error::AlphabetMismatch { expected: 1, found: seq.alphabet_bound() });
    }
    let s = seq.preperiod_len();
    let n = seq.period_len();
    let mut head = BigInt::zero();
    for d in 0..s {
        head = (head << 1) + BigInt::from(seq.at(d));
    }
    let mut block = BigInt::zero();
    for i in 0..n {
        block = (block << 1) + BigInt::from(seq.at(s + i));
    }
    // head / 2^s + block / (2^s (2^n - 1))
    let cycle = (BigInt::one() << n) - 1;
    let num = head * &cycle + block;
    let den = (BigInt::one() << s) * cycle;
    Ok(Rational::new(num, den))
}

/// Every `ξ ∈ X` with `τ(ξ) = x`: two for binary rationals in `(0,1)`, otherwise one.
pub fn binary_reps(x: &Rational) -> Result<Vec<SymbolSeq>> {
    if *x < Rational::zero() || *x > Rational::one() {
        return Err(Error::Invalid(format!("{x} lies outside [0,1]")));
    }
    if x.is_zero() {
        return Ok(vec![SymbolSeq::constant(0, 1)]);
    }
    if x.is_one() {
        return Ok(vec![SymbolSeq::constant(1, 1)]);
    }
    let (num, den) = (x.numer().clone(), x.denom().clone());
    if is_binary_rational(x) {
        let n = den.bits() as usize - 1;
        let bits: Vec<u8> = (0..n).map(|i| u8::from(num.bit((n - 1 - i) as u64))).collect();
        // bits[0] is the most significant digit, i.e. x_0.
        let mut zeros: Vec<u8> = bits.clone();
        zeros.reverse();
        let mut ones = bits;
        *ones.last_mut().expect("n >= 1") = 0;
        ones.reverse();
        let a = SymbolSeq::new(vec![0], zeros, 1)?;
        let b = SymbolSeq::new(vec![1], ones, 1)?;
        let mut out = vec![a, b];
        out.sort();
        return Ok(out);
    }
    // Long division; remainders repeat once the cycle closes.
    let mut seen: std::collections::HashMap<BigInt, usize> = std::collections::HashMap::new();
    let mut digits: Vec<u8> = Vec::new();
    let mut r = num;
    loop {
        if let Some(&start) = seen.get(&r) {
            let mut suffix: Vec<u8> = digits[..start].to_vec();
            suffix.reverse();
            let mut period: Vec<u8> = digits[start..].to_vec();
            period.reverse();
            return Ok(vec![SymbolSeq::new(period, suffix, 1)?]);
        }
        seen.insert(r.clone(), digits.len());
        r <<= 1;
        let (q, rem) = r.div_rem(&den);
        digits.push(if q.is_zero() { 0 } else { 1 });
        r = rem;
    }
}

/// The doubling map `θ(ξ) = 2ξ mod 1` on `[0,1)`.
pub fn doubling(x: &Rational) -> Result<Rational> {
    if *x < Rational::zero() || *x >= Rational::one() {
        return Err(Error::Invalid(format!("doubling is defined on [0,1), got {x}")));
    }
    let y = x * int(2);
    Ok(if y >= Rational::one() { y - Rational::one() } else { y })
}

/// `ξ* = ξ + 1/2` on `[0,1/2]` and `ξ − 1/2` on `(1/2,1]`.
pub fn star_interval(x: &Rational) -> Rational {
    if *x <= half() {
        x + half()
    } else {
        x - half()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat};

    fn s(text: &str) -> SymbolSeq {
        SymbolSeq::parse(text, 1).unwrap()
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&s("(10)*")).unwrap(), rat(1, 3));
        assert_eq!(tau(&s("(01)*")).unwrap(), rat(2, 3));
        assert_eq!(tau(&s("(0)*1")).unwrap(), rat(1, 2));
        assert_eq!(tau(&s("(1)*")).unwrap(), rat(1, 1));
        assert_eq!(tau(&s("(0)*")).unwrap(), rat(0, 1));
    }

    #[test]
    fn binary_rep_examples() {
        assert_eq!(binary_reps(&rat(1, 2)).unwrap(), vec![s("(0)*1"), s("(1)*0")]);
        assert_eq!(binary_reps(&rat(1, 3)).unwrap(), vec![s("(10)*")]);
        assert_eq!(binary_reps(&rat(0, 1)).unwrap(), vec![s("(0)*")]);
        for x in [rat(3, 8), rat(5, 6), rat(1, 7), rat(11, 12), rat(1, 1)] {
            for r in binary_reps(&x).unwrap() {
                assert_eq!(tau(&r).unwrap(), x, "{r}");
            }
        }
    }

    #[test]
    fn doubling_and_star() {
        assert_eq!(doubling(&rat(1, 3)).unwrap(), rat(2, 3));
        assert_eq!(doubling(&rat(2, 3)).unwrap(), rat(1, 3));
        assert_eq!(doubling(&rat(3, 4)).unwrap(), rat(1, 2));
        assert!(doubling(&rat(1, 1)).is_err());
        assert_eq!(star_interval(&rat(0, 1)), rat(1, 2));
        assert_eq!(star_interval(&rat(1, 2)), rat(1, 1));
        assert_eq!(star_interval(&rat(3, 10)), rat(4, 5));
        assert_eq!(star_interval(&parse_rational("0.6").unwrap()), rat(1, 10));
    }
}
