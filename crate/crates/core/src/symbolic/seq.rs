//! Words and eventually periodic points of `{0,…,J}^{ℤ₋}`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{dyadic, Rational};

/// Largest supported alphabet bound; symbols are written as single digits.
pub const MAX_J: u8 = 9;

fn check_symbols(symbols: &[u8], j: u8) -> Result<()> {
    if j == 0 || j > MAX_J {
        return Err(Error::Invalid(format!("alphabet bound J = {j} outside 1..={MAX_J}")));
    }
    if let Some(s) = symbols.iter().find(|&&s| s > j) {
        return Err(Error::Invalid(format!("symbol {s} exceeds J = {j}")));
    }
    Ok(())
}

fn parse_digits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in {text:?}")))
        })
        .collect()
}

fn digits(symbols: &[u8]) -> String {
    symbols.iter().map(|s| char::from(b'0' + s)).collect()
}

/// A finite word, written left to right in time order: the last symbol is the newest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    symbols: Vec<u8>,
    j: u8,
}

impl Word {
    pub fn new(symbols: Vec<u8>, j: u8) -> Result<Self> {
        check_symbols(&symbols, j)?;
        if symbols.is_empty() {
            return Err(Error::Invalid("words have length at least 1".into()));
        }
        Ok(Word { symbols, j })
    }

    pub fn parse(text: &str, j: u8) -> Result<Self> {
        Word::new(parse_digits(text)?, j)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_bound(&self) -> u8 {
        self.j
    }

    /// Adds `j` (mod `J+1`) to the last symbol.
    pub fn star(&self, j: u8) -> Word {
        let mut symbols = self.symbols.clone();
        let last = symbols.last_mut().expect("nonempty word");
        *last = (*last + j) % (self.j + 1);
        Word { symbols, j: self.j }
    }

    pub fn contains_word(&self, other: &[u8]) -> bool {
        contains_subword(&self.symbols, other)
    }
}

pub(crate) fn contains_subword(hay: &[u8], needle: &[u8]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits(&self.symbols))
    }
}

/// Distance `ρ` between points: either `0` or `2^-l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymDist(Option<u32>);

impl SymDist {
    pub const ZERO: SymDist = SymDist(None);

    pub fn pow(l: u32) -> Self {
        SymDist(Some(l))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    /// The exponent `l` in `2^-l`, `None` for distance zero.
    pub fn exponent(&self) -> Option<u32> {
        self.0
    }

    pub fn to_rational(&self) -> Rational {
        match self.0 {
            None => Rational::zero(),
            Some(l) => dyadic(l),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.0 {
            None => 0.0,
            Some(l) => 2f64.powi(-(l as i32)),
        }
    }

    /// Distance multiplied by `2^-t`.
    pub fn scaled_down(&self, t: u32) -> SymDist {
        SymDist(self.0.map(|l| l + t))
    }
}

impl Ord for SymDist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for SymDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SymDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => f.write_str("0"),
            Some(0) => f.write_str("1"),
            Some(l) => write!(f, "2^-{l}"),
        }
    }
}

/// An eventually periodic point `(…,q,q,q,s)` of `{0,…,J}^{ℤ₋}`, written `(q)*s`.
///
/// The representation is kept canonical: `period` is primitive and the suffix is
/// as short as possible, so two values are equal iff they denote the same sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolSeq {
    period: Vec<u8>,
    suffix: Vec<u8>,
    j: u8,
}

impl SymbolSeq {
    pub fn new(period: Vec<u8>, suffix: Vec<u8>, j: u8) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("period must be nonempty".into()));
        }
        check_symbols(&period, j)?;
        check_symbols(&suffix, j)?;
        Ok(Self::canonical(period, suffix, j))
    }

    /// The constant sequence `(c)*`.
    pub fn constant(c: u8, j: u8) -> Self {
        SymbolSeq { period: vec![c], suffix: Vec::new(), j }
    }

    /// Parses the textual form `(q)*s`; a bare word `w` is read as `(0)*w`.
    pub fn parse(text: &str, j: u8) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('(') {
            let (period, suffix) = rest
                .split_once(")*")
                .ok_or_else(|| Error::Parse(format!("expected `(q)*s`, got {text:?}")))?;
            SymbolSeq::new(parse_digits(period)?, parse_digits(suffix)?, j)
        } else {
            SymbolSeq::new(vec![0], parse_digits(t)?, j)
        }
    }

    fn canonical(mut period: Vec<u8>, mut suffix: Vec<u8>, j: u8) -> Self {
        let n = period.len();
        if let Some(p) = (1..=n).find(|&p| n % p == 0 && period.chunks(p).all(|c| c == &period[..p])) {
            period.truncate(p);
        }
        // Absorb leading suffix symbols into the (rotated) period.
        let mut consumed = 0;
        while consumed < suffix.len() && suffix[consumed] == period[0] {
            period.rotate_left(1);
            consumed += 1;
        }
        suffix.drain(..consumed);
        SymbolSeq { period, suffix, j }
    }

    pub fn alphabet_bound(&self) -> u8 {
        self.j
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn suffix(&self) -> &[u8] {
        &self.suffix
    }

    /// Symbol `x_{-depth}`.
    pub fn at(&self, depth: usize) -> u8 {
        let s = self.suffix.len();
        if depth < s {
            self.suffix[s - 1 - depth]
        } else {
            let n = self.period.len();
            self.period[n - 1 - (depth - s) % n]
        }
    }

    /// The initial word of length `len`, i.e. `(x_{-len+1}, …, x_0)`.
    pub fn last_symbols(&self, len: usize) -> Vec<u8> {
        (0..len).rev().map(|d| self.at(d)).collect()
    }

    /// Depth beyond which every window is a rotation of the period.
    pub fn preperiod_len(&self) -> usize {
        self.suffix.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn last(&self) -> u8 {
        self.at(0)
    }

    /// The shift `Θ`, dropping `x_0`.
    pub fn shift(&self) -> Self {
        let mut period = self.period.clone();
        let mut suffix = self.suffix.clone();
        if suffix.pop().is_none() {
            period.rotate_right(1);
        }
        Self::canonical(period, suffix, self.j)
    }

    /// `(ξ, a)`: appends `a` as the new `x_0`.
    pub fn append(&self, a: u8) -> Self {
        debug_assert!(a <= self.j);
        let mut suffix = self.suffix.clone();
        suffix.push(a);
        Self::canonical(self.period.clone(), suffix, self.j)
    }

    pub fn append_word(&self, w: &[u8]) -> Self {
        let mut suffix = self.suffix.clone();
        suffix.extend_from_slice(w);
        Self::canonical(self.period.clone(), suffix, self.j)
    }

    /// Replaces `x_0` by `a`.
    pub fn with_last(&self, a: u8) -> Self {
        self.shift().append(a)
    }

    /// The star map `ξ^{*,j}`: `x_0 ↦ x_0 + j (mod J+1)`.
    pub fn star(&self, j: u8) -> Self {
        let a = (self.last() + j % (self.j + 1)) % (self.j + 1);
        self.with_last(a)
    }

    /// Inverse of [`SymbolSeq::star`].
    pub fn star_inv(&self, j: u8) -> Self {
        let m = self.j + 1;
        self.star((m - j % m) % m)
    }

    /// Depth by which two distinct sequences must have differed.
    fn difference_bound(&self, other: &Self) -> usize {
        let lcm = num_integer::lcm(self.period.len(), other.period.len());
        self.suffix.len().max(other.suffix.len()) + lcm
    }

    /// Length of the longest common initial word (`None` when equal).
    pub fn agreement(&self, other: &Self) -> Option<usize> {
        if self == other {
            return None;
        }
        let bound = self.difference_bound(other);
        Some((0..bound).find(|&d| self.at(d) != other.at(d)).expect("distinct sequences differ"))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, j: u8, max_period: usize, max_suffix: usize) -> Self {
        let plen = rng.gen_range(1..=max_period.max(1));
        let slen = rng.gen_range(0..=max_suffix);
        let period = (0..plen).map(|_| rng.gen_range(0..=j)).collect();
        let suffix = (0..slen).map(|_| rng.gen_range(0..=j)).collect();
        Self::canonical(period, suffix, j)
    }
}

/// The metric `ρ(a, b) = 2^-l` with `l` the first depth at which they differ.
pub fn rho(a: &SymbolSeq, b: &SymbolSeq) -> Result<SymDist> {
    if a.j != b.j {
        return Err(Error::AlphabetMismatch { expected: a.j, found: b.j });
    }
    Ok(match a.agreement(b) {
        None => SymDist::ZERO,
        Some(l) => SymDist::pow(l as u32),
    })
}

impl fmt::Display for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*{}", digits(&self.period), digits(&self.suffix))
    }
}

impl Serialize for SymbolSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> SymbolSeq {
        SymbolSeq::parse(text, 1).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(s("(0101)*").to_string(), "(01)*");
        assert_eq!(s("(01)*01").to_string(), "(01)*");
        assert_eq!(s("(0)*1").to_string(), "(0)*1");
        assert_eq!(s("(10)*11"), s("(01)*1"));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(s("(01)*").shift(), s("(10)*"));
        assert_eq!(s("(0)*11").shift(), s("(0)*1"));
        assert_eq!(s("(1)*").shift(), s("(1)*"));
    }

    #[test]
    fn star_examples() {
        assert_eq!(s("(01)*").star(1), s("(01)*00"));
        assert_eq!(s("(0)*").star(1), s("(0)*1"));
        let t = SymbolSeq::parse("(012)*", 2).unwrap();
        assert_eq!(t.star(2), SymbolSeq::parse("(012)*011", 2).unwrap());
        assert_eq!(t.star(2).star_inv(2), t);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&s("(0)*"), &s("(0)*1")).unwrap(), SymDist::pow(0));
        assert_eq!(rho(&s("(0)*"), &s("(0)*10")).unwrap().to_rational(), crate::rational::rat(1, 2));
        assert_eq!(rho(&s("(01)*"), &s("(01)*")).unwrap(), SymDist::ZERO);
        assert!(rho(&s("(0)*"), &SymbolSeq::parse("(0)*", 2).unwrap()).is_err());
    }

    #[test]
    fn positions_and_windows() {
        let x = s("(01)*110");
        assert_eq!(x.last_symbols(5), vec![0, 1, 1, 1, 0]);
        assert_eq!(x.at(4), 0);
        assert_eq!(x.append(1).last(), 1);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(SymbolSeq::parse("(2)*", 1).is_err());
        assert!(SymbolSeq::parse("()*1", 1).is_err());
        assert!(SymbolSeq::parse("(0*1", 1).is_err());
        assert!(Word::parse("", 1).is_err());
    }

    #[test]
    fn dist_order() {
        assert!(SymDist::ZERO < SymDist::pow(5));
        assert!(SymDist::pow(5) < SymDist::pow(1));
        assert_eq!(SymDist::pow(3).scaled_down(2), SymDist::pow(5));
    }
}
