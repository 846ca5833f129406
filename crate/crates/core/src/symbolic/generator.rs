//! Infinite forbidden-word families, handled through finite truncations, and the
//! finite-type diagnostics that distinguish them from genuine subshifts of finite type.

use serde::Serialize;

use super::seq::{SymDist, SymbolSeq, Word};
use super::sft::{rho_to_set, SftSubshift};
use crate::error::{Error, Result};

/// Named enumerators of infinite forbidden-word families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratorRule {
    /// `0000`, `1111`, and for `n ≥ 1` the words `0 0(10)^n 0` and `1 1(01)^n 1`.
    AlternatingBlocks,
}

impl GeneratorRule {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "example_3_1" | "alternating_blocks" => Ok(GeneratorRule::AlternatingBlocks),
            other => Err(Error::Parse(format!("unknown generator {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorRule::AlternatingBlocks => "example_3_1",
        }
    }

    pub fn alphabet_bound(&self) -> u8 {
        1
    }

    /// Every word of the family of length at most `max_len`.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        match self {
            GeneratorRule::AlternatingBlocks => {
                let mut out = Vec::new();
                if max_len >= 4 {
                    out.push(vec![0, 0, 0, 0]);
                    out.push(vec![1, 1, 1, 1]);
                }
                let mut n = 1;
                while 2 * n + 3 <= max_len {
                    for c in [0u8, 1] {
                        let mut w = vec![c];
                        w.extend((0..2 * n + 1).map(|i| if i % 2 == 0 { c } else { 1 - c }));
                        w.push(c);
                        out.push(w);
                    }
                    n += 1;
                }
                out.into_iter().map(|w| Word::new(w, 1).expect("binary word")).collect()
            }
        }
    }

    /// Whether the family itself is infinite (no truncation captures it).
    pub fn is_infinite(&self) -> bool {
        true
    }
}

/// A generator rule truncated at word length `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorFamily {
    pub rule: GeneratorRule,
    pub truncation: usize,
}

impl GeneratorFamily {
    pub fn new(rule: GeneratorRule, truncation: usize) -> Self {
        GeneratorFamily { rule, truncation }
    }

    pub fn words(&self) -> Vec<Word> {
        self.rule.words_up_to(self.truncation)
    }

    pub fn subshift(&self) -> Result<SftSubshift> {
        SftSubshift::new(self.rule.alphabet_bound(), self.words())
    }
}

/// Either a finite forbidden set or a truncated infinite family.
#[derive(Clone, Debug)]
pub enum SubshiftInput {
    Finite(SftSubshift),
    Family(GeneratorFamily),
}

impl SubshiftInput {
    pub fn subshift(&self) -> Result<SftSubshift> {
        match self {
            SubshiftInput::Finite(k) => Ok(k.clone()),
            SubshiftInput::Family(f) => f.subshift(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub point: SymbolSeq,
    /// `ρ` from the point to the exit set of the truncated subshift.
    pub distance: String,
    #[serde(skip)]
    pub dist: SymDist,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop22Report {
    pub finite_type: bool,
    pub exit_set_closed: bool,
    pub disjoint_from_exit_closure: bool,
    pub truncation: Option<usize>,
    /// Points of `K` close to the exit set, sorted by increasing distance.
    pub witnesses: Vec<Witness>,
}

impl Prop22Report {
    pub fn best_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

/// The equivalent finite-type properties, decided exactly for finite forbidden sets and
/// witnessed at a truncation depth for infinite families.
pub fn check_prop_2_2(input: &SubshiftInput) -> Result<Prop22Report> {
    match input {
        SubshiftInput::Finite(k) => {
            let meet = k.points().intersect(&k.exit_set());
            let disjoint = meet.is_empty();
            Ok(Prop22Report {
                finite_type: true,
                exit_set_closed: true,
                disjoint_from_exit_closure: disjoint,
                truncation: None,
                witnesses: Vec::new(),
            })
        }
        SubshiftInput::Family(family) => {
            let k = family.subshift()?;
            let witnesses = near_exit_points(&k)?;
            let infinite = family.rule.is_infinite();
            Ok(Prop22Report {
                finite_type: !infinite,
                exit_set_closed: !infinite,
                disjoint_from_exit_closure: !infinite,
                truncation: Some(family.truncation),
                witnesses,
            })
        }
    }
}

/// Points of `K` that agree with an exit point on all but the oldest symbol of a longest
/// forbidden word. Each is the simplest eventually periodic point with that ending.
pub fn near_exit_points(k: &SftSubshift) -> Result<Vec<Witness>> {
    let exits = k.exit_set();
    let m = k.window();
    let mut out: Vec<Witness> = Vec::new();
    for f in k.forbidden().iter().filter(|f| f.len() == m) {
        let u = &f.symbols()[1..];
        let Some(point) = simplest_point_ending_with(k, u) else { continue };
        let dist = rho_to_set(&point, &exits)?;
        if !out.iter().any(|w| w.point == point) {
            out.push(Witness { point, distance: dist.to_string(), dist });
        }
    }
    out.sort_by(|a, b| a.dist.cmp(&b.dist).then_with(|| a.point.cmp(&b.point)));
    Ok(out)
}

/// Shortest `(q)*e·u` in `K`, searched by total length of `q` and `e`.
pub fn simplest_point_ending_with(k: &SftSubshift, u: &[u8]) -> Option<SymbolSeq> {
    let j = k.alphabet_bound();
    const MAX_EXTRA: usize = 10;
    for total in 1..=MAX_EXTRA {
        for plen in 1..=total {
            let elen = total - plen;
            for q in words_of_len(j, plen) {
                for e in words_of_len(j, elen) {
                    let mut suffix = e.clone();
                    suffix.extend_from_slice(u);
                    let seq = SymbolSeq::new(q.clone(), suffix, j).ok()?;
                    if k.contains(&seq) {
                        return Some(seq);
                    }
                }
            }
        }
    }
    k.points().some_point_ending_with(u)
}

fn words_of_len(j: u8, len: usize) -> Vec<Vec<u8>> {
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
