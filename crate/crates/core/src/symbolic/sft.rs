//! Subshifts of finite type and the automaton-backed sets derived from them.
//!
//! A subshift `X_F` is represented by its follower automaton: states are the allowed
//! words of length `m - 1` (with `m` the longest forbidden word), and reading a symbol
//! appends it and drops the oldest one. Points of `X_F` are left-infinite paths, so only
//! *live* states (those with an infinite backward path) matter.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::seq::{SymDist, SymbolSeq, Word};
use crate::error::{Error, Result};

/// Cap on the follower automaton size.
const MAX_STATES: usize = 1 << 21;

#[derive(Clone)]
pub struct SftSubshift {
    inner: Arc<Automaton>,
}

struct Automaton {
    j: u8,
    forbidden: Vec<Word>,
    max_len: usize,
    width: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    next: Vec<Vec<Option<usize>>>,
    preds: Vec<Vec<Vec<usize>>>,
    live: Vec<bool>,
}

/// Removes duplicates and every word that contains another forbidden word.
pub fn reduce_forbidden(mut words: Vec<Word>) -> Vec<Word> {
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words.dedup();
    let mut kept: Vec<Word> = Vec::new();
    for w in words {
        if !kept.iter().any(|k| w.contains_word(k.symbols())) {
            kept.push(w);
        }
    }
    kept.sort();
    kept
}

fn ends_with_any(window: &[u8], forbidden: &[Word]) -> bool {
    forbidden.iter().any(|f| window.ends_with(f.symbols()))
}

impl SftSubshift {
    pub fn new(j: u8, forbidden: Vec<Word>) -> Result<Self> {
        if let Some(w) = forbidden.iter().find(|w| w.alphabet_bound() != j) {
            return Err(Error::AlphabetMismatch { expected: j, found: w.alphabet_bound() });
        }
        let forbidden = reduce_forbidden(forbidden);
        if forbidden.is_empty() {
            return Err(Error::Invalid("empty forbidden set describes the full shift, not a subshift".into()));
        }
        let max_len = forbidden.iter().map(Word::len).max().unwrap_or(1);
        let width = max_len - 1;

        let mut states: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..width {
            let mut grown = Vec::with_capacity(states.len() * (j as usize + 1));
            for s in &states {
                for a in 0..=j {
                    let mut t = s.clone();
                    t.push(a);
                    if !ends_with_any(&t, &forbidden) {
                        grown.push(t);
                    }
                }
            }
            if grown.len() > MAX_STATES {
                return Err(Error::Invalid(format!("follower automaton exceeds {MAX_STATES} states")));
            }
            states = grown;
        }
        let index: HashMap<Vec<u8>, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let alphabet = j as usize + 1;
        let mut next = vec![vec![None; alphabet]; states.len()];
        let mut preds = vec![vec![Vec::new(); alphabet]; states.len()];
        for (i, s) in states.iter().enumerate() {
            for a in 0..=j {
                let mut full = s.clone();
                full.push(a);
                if ends_with_any(&full, &forbidden) {
                    continue;
                }
                let target = index[&full[1..]];
                next[i][a as usize] = Some(target);
                preds[target][a as usize].push(i);
            }
        }

        // Prune states without an infinite backward path.
        let mut live = vec![true; states.len()];
        let mut indegree: Vec<usize> = preds.iter().map(|p| p.iter().map(Vec::len).sum()).collect();
        let mut queue: Vec<usize> = (0..states.len()).filter(|&i| indegree[i] == 0).collect();
        while let Some(s) = queue.pop() {
            if !live[s] {
                continue;
            }
            live[s] = false;
            for a in 0..alphabet {
                if let Some(t) = next[s][a] {
                    if live[t] {
                        indegree[t] -= 1;
                        if indegree[t] == 0 {
                            queue.push(t);
                        }
                    }
                }
            }
        }
        if !live.iter().any(|&l| l) {
            return Err(Error::Invalid("forbidden set leaves no infinite sequence; the subshift is empty".into()));
        }
        Ok(SftSubshift {
            inner: Arc::new(Automaton { j, forbidden, max_len, width, states, index, next, preds, live }),
        })
    }

    /// Builds from textual words, e.g. `["00", "11"]`.
    pub fn from_strs<S: AsRef<str>>(j: u8, words: &[S]) -> Result<Self> {
        let words = words.iter().map(|w| Word::parse(w.as_ref(), j)).collect::<Result<Vec<_>>>()?;
        SftSubshift::new(j, words)
    }

    pub fn alphabet_bound(&self) -> u8 {
        self.inner.j
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.inner.forbidden
    }

    /// Length `m` of the longest forbidden word.
    pub fn window(&self) -> usize {
        self.inner.max_len
    }

    pub fn num_states(&self) -> usize {
        self.inner.states.len()
    }

    pub fn num_live_states(&self) -> usize {
        self.inner.live.iter().filter(|&&l| l).count()
    }

    pub fn is_forbidden_suffix(&self, window: &[u8]) -> bool {
        ends_with_any(window, &self.inner.forbidden)
    }

    /// True iff no forbidden word occurs anywhere in `seq`.
    pub fn contains(&self, seq: &SymbolSeq) -> bool {
        if seq.alphabet_bound() != self.inner.j {
            return false;
        }
        let m = self.inner.max_len;
        let ends = seq.preperiod_len() + seq.period_len();
        (0..ends).all(|d| {
            let window: Vec<u8> = (d..d + m).rev().map(|i| seq.at(i)).collect();
            !self.is_forbidden_suffix(&window)
        })
    }

    fn state_of(&self, seq: &SymbolSeq) -> Option<usize> {
        self.inner.index.get(&seq.last_symbols(self.inner.width)).copied()
    }

    /// `K` itself as a tail set.
    pub fn points(&self) -> TailSet {
        let a = &self.inner;
        let accept = (0..a.states.len())
            .map(|q| (0..=a.j).map(|s| a.live[q] && a.next[q][s as usize].is_some()).collect())
            .collect();
        TailSet { sft: self.clone(), accept }
    }

    /// Exit points `K_e^c = Θ^{-1}(K) ∖ K`: a forbidden word ends at position 0.
    pub fn exit_set(&self) -> TailSet {
        let a = &self.inner;
        let accept = (0..a.states.len())
            .map(|q| (0..=a.j).map(|s| a.live[q] && a.next[q][s as usize].is_none()).collect())
            .collect();
        TailSet { sft: self.clone(), accept }
    }

    /// Barrier points `K_b = {ξ ∈ K : ξ^{*,j} ∉ K for j = 1..J}`.
    pub fn barrier_set(&self) -> TailSet {
        let a = &self.inner;
        let accept = (0..a.states.len())
            .map(|q| {
                let allowed: Vec<bool> = (0..=a.j).map(|s| a.next[q][s as usize].is_some()).collect();
                let count = allowed.iter().filter(|&&x| x).count();
                allowed.iter().map(|&ok| a.live[q] && ok && count == 1).collect()
            })
            .collect();
        TailSet { sft: self.clone(), accept }
    }

    /// Decides `⋂_{j=0}^{J} (closure K_e^c)^{*,j} = ∅`; on failure returns a point of the intersection.
    pub fn condition_star_intersection(&self) -> (bool, Option<SymbolSeq>) {
        let exits = self.exit_set();
        let mut all = exits.clone();
        for j in 1..=self.inner.j {
            all = all.intersect(&exits.star(j));
        }
        if all.is_empty() {
            (true, None)
        } else {
            (false, all.some_point_ending_with(&[]))
        }
    }

    /// `K = Θ(K)`: every live state can be extended by at least one symbol.
    pub fn is_shift_onto(&self) -> bool {
        let a = &self.inner;
        (0..a.states.len()).all(|q| !a.live[q] || a.next[q].iter().any(Option::is_some))
    }

    /// Live states of the form `c^{m-1}` that carry a `c`-loop; these give the constant points `(c)*` in `K`.
    pub(crate) fn constant_state(&self, c: u8) -> Option<usize> {
        let a = &self.inner;
        let q = *a.index.get(&vec![c; a.width])?;
        (a.live[q] && a.next[q][c as usize] == Some(q)).then_some(q)
    }

    pub(crate) fn reachable_from(&self, start: usize) -> Vec<bool> {
        let a = &self.inner;
        let mut seen = vec![false; a.states.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(s) = stack.pop() {
            for t in a.next[s].iter().flatten() {
                if !seen[*t] {
                    seen[*t] = true;
                    stack.push(*t);
                }
            }
        }
        seen
    }
}

impl PartialEq for SftSubshift {
    fn eq(&self, other: &Self) -> bool {
        self.inner.j == other.inner.j && self.inner.forbidden == other.inner.forbidden
    }
}

impl Eq for SftSubshift {}

impl fmt::Debug for SftSubshift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.inner.forbidden.iter().map(Word::to_string).collect();
        f.debug_struct("SftSubshift").field("j", &self.inner.j).field("forbidden", &words).finish()
    }
}

/// Sets whose points are `(ζ, a)` with `ζ ∈ K` and a predicate on the final transition.
///
/// Covers `K`, its exit points, its barrier points, their star images and
/// intersections. All of these are closed.
#[derive(Clone, Debug)]
pub struct TailSet {
    sft: SftSubshift,
    accept: Vec<Vec<bool>>,
}

impl TailSet {
    pub fn subshift(&self) -> &SftSubshift {
        &self.sft
    }

    pub fn alphabet_bound(&self) -> u8 {
        self.sft.inner.j
    }

    pub fn is_empty(&self) -> bool {
        !self.accept.iter().any(|row| row.iter().any(|&x| x))
    }

    pub fn contains(&self, seq: &SymbolSeq) -> bool {
        if seq.alphabet_bound() != self.alphabet_bound() {
            return false;
        }
        let prev = seq.shift();
        if !self.sft.contains(&prev) {
            return false;
        }
        match self.sft.state_of(&prev) {
            Some(q) => self.accept[q][seq.last() as usize],
            None => false,
        }
    }

    /// Image under `ξ ↦ ξ^{*,j}`.
    pub fn star(&self, j: u8) -> TailSet {
        let m = self.alphabet_bound() as usize + 1;
        let accept = self
            .accept
            .iter()
            .map(|row| (0..m).map(|a| row[(a + m - (j as usize % m)) % m]).collect())
            .collect();
        TailSet { sft: self.sft.clone(), accept }
    }

    pub fn intersect(&self, other: &TailSet) -> TailSet {
        assert!(self.sft == other.sft, "tail sets over different subshifts");
        let accept = self
            .accept
            .iter()
            .zip(&other.accept)
            .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| x && y).collect())
            .collect();
        TailSet { sft: self.sft.clone(), accept }
    }

    pub fn union(&self, other: &TailSet) -> TailSet {
        assert!(self.sft == other.sft, "tail sets over different subshifts");
        let accept = self
            .accept
            .iter()
            .zip(&other.accept)
            .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| x || y).collect())
            .collect();
        TailSet { sft: self.sft.clone(), accept }
    }

    /// States from which the word `u` can be read with the final step accepted.
    /// For the empty word, every live state with some accepted symbol.
    pub fn ending_states(&self, u: &[u8]) -> Vec<bool> {
        let Some((&last, rest)) = u.split_last() else {
            return self.accept.iter().map(|row| row.iter().any(|&x| x)).collect();
        };
        let mut current: Vec<bool> = self.accept.iter().map(|row| row[last as usize]).collect();
        for &b in rest.iter().rev() {
            current = self.step_back(&current, b);
        }
        current
    }

    fn step_back(&self, set: &[bool], b: u8) -> Vec<bool> {
        let a = &self.sft.inner;
        let mut out = vec![false; set.len()];
        for (t, &inside) in set.iter().enumerate() {
            if inside {
                for &p in &a.preds[t][b as usize] {
                    if a.live[p] {
                        out[p] = true;
                    }
                }
            }
        }
        out
    }

    /// Is `u` the initial word of some point of the set?
    pub fn realizable(&self, u: &[u8]) -> bool {
        self.ending_states(u).iter().any(|&x| x)
    }

    /// Length of the longest initial word of `seq` shared with a point of the set;
    /// `None` when `seq` belongs to the set.
    pub fn agreement(&self, seq: &SymbolSeq) -> Option<usize> {
        if self.contains(seq) {
            return None;
        }
        let mut current: Vec<bool> = self.accept.iter().map(|row| row[seq.last() as usize]).collect();
        let cap = seq.preperiod_len() + seq.period_len() * (self.sft.num_states() + 2) + self.sft.window() + 2;
        let mut depth = 0usize;
        while current.iter().any(|&x| x) {
            depth += 1;
            if depth > cap {
                // Unbounded agreement means membership of a closed set.
                return None;
            }
            current = self.step_back(&current, seq.at(depth));
        }
        Some(depth)
    }

    /// Does the set contain a point `(c)*w`, i.e. one with an eventually constant past?
    pub fn has_eventually_constant_point(&self) -> bool {
        (0..=self.alphabet_bound()).any(|c| match self.sft.constant_state(c) {
            Some(start) => {
                let reach = self.sft.reachable_from(start);
                (0..reach.len()).any(|q| reach[q] && self.accept[q].iter().any(|&x| x))
            }
            None => false,
        })
    }

    /// All initial words of length `len` realized by points of the set.
    pub fn initial_words(&self, len: usize) -> Vec<Vec<u8>> {
        let j = self.alphabet_bound();
        let mut frontier: Vec<(Vec<u8>, Vec<bool>)> = Vec::new();
        if len == 0 {
            return if self.is_empty() { Vec::new() } else { vec![Vec::new()] };
        }
        for a in 0..=j {
            let set: Vec<bool> = self.accept.iter().map(|row| row[a as usize]).collect();
            if set.iter().any(|&x| x) {
                frontier.push((vec![a], set));
            }
        }
        for _ in 1..len {
            let mut grown = Vec::new();
            for (w, set) in &frontier {
                for b in 0..=j {
                    let back = self.step_back(set, b);
                    if back.iter().any(|&x| x) {
                        let mut v = vec![b];
                        v.extend_from_slice(w);
                        grown.push((v, back));
                    }
                }
            }
            frontier = grown;
        }
        let mut out: Vec<Vec<u8>> = frontier.into_iter().map(|(w, _)| w).collect();
        out.sort();
        out
    }

    /// Realizable state set after prepending `b` to a word with state set `set`.
    pub(crate) fn extend_back(&self, set: &[bool], b: u8) -> Vec<bool> {
        self.step_back(set, b)
    }

    /// State set for the one-symbol word `a`.
    pub(crate) fn start_states(&self, a: u8) -> Vec<bool> {
        self.accept.iter().map(|row| row[a as usize]).collect()
    }

    /// Some eventually periodic point of the set whose initial word is `u`.
    pub fn some_point_ending_with(&self, u: &[u8]) -> Option<SymbolSeq> {
        let a = &self.sft.inner;
        let starts = self.ending_states(u);
        let q = starts.iter().position(|&x| x)?;
        let word: Vec<u8> = if u.is_empty() {
            let s = self.accept[q].iter().position(|&x| x)? as u8;
            vec![s]
        } else {
            u.to_vec()
        };
        // Walk backwards through live predecessors until a state repeats.
        let mut visited = vec![q];
        let mut labels: Vec<u8> = Vec::new();
        let mut cur = q;
        loop {
            let (p, b) = (0..=a.j)
                .find_map(|b| a.preds[cur][b as usize].iter().find(|&&p| a.live[p]).map(|&p| (p, b)))
                .expect("live state has a live predecessor");
            labels.push(b);
            if let Some(i) = visited.iter().position(|&v| v == p) {
                // Edges i+1..=k (labels[i..]) form the cycle, labels[..i] lead to q.
                let mut period: Vec<u8> = labels[i..].to_vec();
                period.reverse();
                let mut suffix: Vec<u8> = labels[..i].to_vec();
                suffix.reverse();
                suffix.extend_from_slice(&word);
                return SymbolSeq::new(period, suffix, a.j).ok();
            }
            visited.push(p);
            cur = p;
        }
    }
}

/// Anything that can report `ρ`-distances exactly.
pub trait SymbolicSet {
    fn alphabet_bound(&self) -> u8;
    fn is_empty(&self) -> bool;
    fn contains(&self, seq: &SymbolSeq) -> bool;
    /// Longest initial word of `seq` shared with a point of the set, `None` for members.
    fn agreement(&self, seq: &SymbolSeq) -> Option<usize>;
}

impl SymbolicSet for TailSet {
    fn alphabet_bound(&self) -> u8 {
        TailSet::alphabet_bound(self)
    }
    fn is_empty(&self) -> bool {
        TailSet::is_empty(self)
    }
    fn contains(&self, seq: &SymbolSeq) -> bool {
        TailSet::contains(self, seq)
    }
    fn agreement(&self, seq: &SymbolSeq) -> Option<usize> {
        TailSet::agreement(self, seq)
    }
}

impl SymbolicSet for SftSubshift {
    fn alphabet_bound(&self) -> u8 {
        self.inner.j
    }
    fn is_empty(&self) -> bool {
        false
    }
    fn contains(&self, seq: &SymbolSeq) -> bool {
        SftSubshift::contains(self, seq)
    }
    fn agreement(&self, seq: &SymbolSeq) -> Option<usize> {
        self.points().agreement(seq)
    }
}

/// `ρ_S(ξ) = inf_{η ∈ S} ρ(ξ, η)`.
pub fn rho_to_set<S: SymbolicSet + ?Sized>(seq: &SymbolSeq, set: &S) -> Result<SymDist> {
    if seq.alphabet_bound() != set.alphabet_bound() {
        return Err(Error::AlphabetMismatch { expected: set.alphabet_bound(), found: seq.alphabet_bound() });
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(match set.agreement(seq) {
        None => SymDist::ZERO,
        Some(l) => SymDist::pow(l as u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(words: &[&str]) -> SftSubshift {
        SftSubshift::from_strs(1, words).unwrap()
    }

    fn s(text: &str) -> SymbolSeq {
        SymbolSeq::parse(text, 1).unwrap()
    }

    #[test]
    fn reduction_drops_superwords() {
        let f = SftSubshift::from_strs(1, &["00", "001", "11", "00"]).unwrap();
        let w: Vec<String> = f.forbidden().iter().map(|w| w.to_string()).collect();
        assert_eq!(w, vec!["00", "11"]);
    }

    #[test]
    fn membership_examples() {
        let k2 = k(&["00", "11"]);
        assert!(k2.contains(&s("(01)*")));
        assert!(!k2.contains(&s("(01)*1")));
        assert!(k(&["000", "111"]).contains(&s("(001)*")));
    }

    #[test]
    fn exit_points_of_golden_pair() {
        let k2 = k(&["00", "11"]);
        let e = k2.exit_set();
        assert!(e.contains(&s("(01)*1")));
        assert!(e.contains(&s("(10)*0")));
        assert!(!e.contains(&s("(01)*")));
        let k3 = k(&["000", "111"]);
        assert!(k3.exit_set().contains(&s("(10)*00")));
        // (01)*00 ends in 100, which is allowed.
        assert!(!k3.exit_set().contains(&s("(01)*00")));
    }

    #[test]
    fn barrier_is_star_of_exits_for_binary() {
        let k2 = k(&["00", "11"]);
        let b = k2.barrier_set();
        assert!(b.contains(&s("(01)*")) && b.contains(&s("(10)*")));
        assert!(!b.contains(&s("(0)*")));
        let starred = k2.exit_set().star(1);
        for text in ["(01)*", "(10)*", "(01)*1", "(0)*", "(001)*"] {
            assert_eq!(b.contains(&s(text)), starred.contains(&s(text)), "{text}");
        }
    }

    #[test]
    fn barrier_can_be_empty_for_larger_alphabets() {
        let k = SftSubshift::from_strs(2, &["00"]).unwrap();
        assert!(k.barrier_set().is_empty());
    }

    #[test]
    fn rho_to_set_examples() {
        let k2 = k(&["00", "11"]);
        assert_eq!(rho_to_set(&s("(01)*1"), &k2).unwrap(), SymDist::pow(1));
        assert_eq!(rho_to_set(&s("(01)*"), &k2).unwrap(), SymDist::ZERO);
        assert_eq!(rho_to_set(&s("(0)*"), &k2).unwrap(), SymDist::pow(1));
        assert!(rho_to_set(&SymbolSeq::parse("(0)*", 2).unwrap(), &k2).is_err());
    }

    #[test]
    fn star_intersection_condition() {
        assert!(k(&["00", "11"]).condition_star_intersection().0);
        assert!(k(&["000", "111"]).condition_star_intersection().0);
        let bad = SftSubshift::from_strs(2, &["00", "01", "02"]).unwrap();
        let (ok, witness) = bad.condition_star_intersection();
        assert!(!ok);
        let w = witness.unwrap();
        let exits = bad.exit_set();
        for j in 0..=2 {
            assert!(exits.contains(&w.star(j)), "{w} star {j}");
        }
    }

    #[test]
    fn points_found_by_backward_walk_are_members() {
        let k3 = k(&["000", "111"]);
        let e = k3.exit_set();
        let p = e.some_point_ending_with(&[1, 0, 0, 0]).unwrap();
        assert!(e.contains(&p));
        assert_eq!(p.last_symbols(4), vec![1, 0, 0, 0]);
        assert!(e.some_point_ending_with(&[0, 0, 0, 0]).is_none());
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(SftSubshift::from_strs(1, &["0", "1"]).is_err());
        assert!(SftSubshift::from_strs::<&str>(1, &[]).is_err());
    }
}
