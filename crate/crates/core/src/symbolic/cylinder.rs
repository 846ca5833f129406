//! Finite unions of cylinders `⋃ C(w)`.

use std::collections::BTreeSet;

use super::seq::{SymbolSeq, Word};
use super::sft::SymbolicSet;
use crate::error::{Error, Result};

/// The clopen set of points whose initial word is one of `words`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderUnion {
    j: u8,
    words: BTreeSet<Word>,
}

fn all_words(j: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..=j).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

impl CylinderUnion {
    pub fn new(j: u8, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        if let Some(w) = words.iter().find(|w| w.alphabet_bound() != j) {
            return Err(Error::AlphabetMismatch { expected: j, found: w.alphabet_bound() });
        }
        Ok(CylinderUnion { j, words })
    }

    pub fn from_strs<S: AsRef<str>>(j: u8, words: &[S]) -> Result<Self> {
        let words = words.iter().map(|w| Word::parse(w.as_ref(), j)).collect::<Result<Vec<_>>>()?;
        CylinderUnion::new(j, words)
    }

    /// The whole space `X`.
    pub fn full(j: u8) -> Self {
        CylinderUnion { j, words: (0..=j).map(|a| Word::new(vec![a], j).expect("valid symbol")).collect() }
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn alphabet_bound(&self) -> u8 {
        self.j
    }

    pub fn depth(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn contains_word_end(&self, u: &[u8]) -> bool {
        self.words.iter().any(|w| u.ends_with(w.symbols()))
    }

    pub fn contains(&self, seq: &SymbolSeq) -> bool {
        seq.alphabet_bound() == self.j && self.contains_word_end(&seq.last_symbols(self.depth()))
    }

    /// Exit points `E_e^c = Θ^{-1}(E) ∖ E`, as cylinders of depth `r + 1`.
    pub fn exit_set(&self) -> CylinderUnion {
        let r = self.depth();
        let words = all_words(self.j, r + 1)
            .into_iter()
            .filter(|u| self.contains_word_end(&u[..r]) && !self.contains_word_end(u))
            .map(|u| Word::new(u, self.j).expect("valid word"))
            .collect();
        CylinderUnion { j: self.j, words }
    }

    /// Image under `ξ ↦ ξ^{*,j}`.
    pub fn star(&self, j: u8) -> CylinderUnion {
        CylinderUnion { j: self.j, words: self.words.iter().map(|w| w.star(j)).collect() }
    }

    /// `⋂_{j=0}^{J} (closure E_e^c)^{*,j} = ∅`; on failure returns a point of the intersection.
    pub fn star_intersection_empty(&self) -> (bool, Option<SymbolSeq>) {
        let exits = self.exit_set();
        if exits.words.is_empty() {
            return (true, None);
        }
        let r = exits.depth();
        let hit = all_words(self.j, r).into_iter().find(|u| {
            (0..=self.j).all(|j| {
                let mut v = u.clone();
                let last = v.len() - 1;
                v[last] = (v[last] + (self.j + 1) - j) % (self.j + 1);
                exits.contains_word_end(&v)
            })
        });
        match hit {
            None => (true, None),
            Some(u) => (false, SymbolSeq::new(vec![0], u, self.j).ok()),
        }
    }
}

impl SymbolicSet for CylinderUnion {
    fn alphabet_bound(&self) -> u8 {
        self.j
    }
    fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
    fn contains(&self, seq: &SymbolSeq) -> bool {
        CylinderUnion::contains(self, seq)
    }
    fn agreement(&self, seq: &SymbolSeq) -> Option<usize> {
        if CylinderUnion::contains(self, seq) {
            return None;
        }
        let tail = seq.last_symbols(self.depth());
        self.words
            .iter()
            .map(|w| {
                w.symbols().iter().rev().zip(tail.iter().rev()).take_while(|(a, b)| a == b).count()
            })
            .max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::sft::rho_to_set;
    use crate::symbolic::SymDist;

    #[test]
    fn exits_of_last_symbol_cylinder() {
        let e = CylinderUnion::from_strs(1, &["0"]).unwrap();
        let exits = e.exit_set();
        let w: Vec<String> = exits.words().map(|w| w.to_string()).collect();
        assert_eq!(w, vec!["01"]);
        assert!(e.star_intersection_empty().0);
    }

    #[test]
    fn whole_space_has_no_exits() {
        assert!(CylinderUnion::full(2).exit_set().is_empty());
        assert!(CylinderUnion::full(1).star_intersection_empty().0);
    }

    #[test]
    fn star_intersection_can_fail() {
        // Exits are 001 and 110; their star images lie in E.
        let e = CylinderUnion::from_strs(1, &["00", "11"]).unwrap();
        assert!(e.star_intersection_empty().0);
        // Membership ignores x_0, so both children of a point ending in 01 exit together.
        let e = CylinderUnion::from_strs(1, &["00", "01"]).unwrap();
        let (ok, witness) = e.star_intersection_empty();
        assert!(!ok);
        let w = witness.unwrap();
        let exits = e.exit_set();
        assert!(exits.contains(&w) && exits.contains(&w.star(1)));
    }

    #[test]
    fn distances_to_cylinders() {
        let e = CylinderUnion::from_strs(1, &["011"]).unwrap();
        let s = SymbolSeq::parse("(0)*111", 1).unwrap();
        assert_eq!(rho_to_set(&s, &e).unwrap(), SymDist::pow(2));
        let s = SymbolSeq::parse("(0)*1011", 1).unwrap();
        assert_eq!(rho_to_set(&s, &e).unwrap(), SymDist::ZERO);
    }
}
