//! The continuous g-function whose zero set is exactly the closure of the exit set.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::GFunction;
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::symbolic::{check_prop_2_2, rho_to_set, SftSubshift, SubshiftInput, SymbolSeq, TailSet, Word};

/// Longest window tried when searching for a separating cell depth.
const MAX_WINDOW: usize = 24;

/// Cells are indexed by the `m − 1` symbols before the last one. Each cell lists the last
/// symbols `a` for which the cylinder of `(prefix, a)` meets the zero set.
#[derive(Clone, Debug)]
pub struct ConstructedG {
    sft: SftSubshift,
    zero_set: TailSet,
    m: usize,
    cells: BTreeMap<Vec<u8>, Vec<u8>>,
    default: Rational,
}

impl ConstructedG {
    pub fn alphabet_bound(&self) -> u8 {
        self.sft.alphabet_bound()
    }

    pub fn subshift(&self) -> &SftSubshift {
        &self.sft
    }

    /// Cell depth: values depend on the last `m` symbols and the distance to the zero set.
    pub fn window(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> &BTreeMap<Vec<u8>, Vec<u8>> {
        &self.cells
    }

    pub fn default_value(&self) -> &Rational {
        &self.default
    }

    pub fn zero_set(&self) -> &TailSet {
        &self.zero_set
    }

    /// Whether every cell meets the zero set in a single last symbol, the case where the
    /// one-exit-per-cell formulas apply.
    pub fn is_separated(&self) -> bool {
        self.cells.values().all(|hits| hits.len() == 1)
    }

    fn dist(&self, seq: &SymbolSeq) -> Result<Rational> {
        Ok(rho_to_set(seq, &self.zero_set)?.to_rational())
    }

    pub(crate) fn eval(&self, seq: &SymbolSeq) -> Result<Rational> {
        let j = int(self.alphabet_bound() as i64);
        let prefix: Vec<u8> = (1..self.m).rev().map(|d| seq.at(d)).collect();
        let Some(hits) = self.cells.get(&prefix) else {
            return Ok(self.default.clone());
        };
        let x0 = seq.last();
        if let [a] = hits.as_slice() {
            let d = self.dist(&seq.with_last(*a))?;
            return Ok(if x0 == *a { d / j } else { (Rational::one() - d / &j) / &j });
        }
        // Several last symbols meet the zero set: share mass in proportion to distance.
        let dists = (0..=self.alphabet_bound())
            .map(|b| self.dist(&seq.with_last(b)))
            .collect::<Result<Vec<_>>>()?;
        let total: Rational = dists.iter().cloned().sum();
        if total.is_zero() {
            return Err(Error::Invalid(format!("every last-symbol variant of {seq} lies in the zero set")));
        }
        Ok(dists[x0 as usize].clone() / total)
    }

    /// Certified positive lower bound of `g` on `K`.
    pub fn lower_bound_on_k(&self) -> Rational {
        let j = int(self.alphabet_bound() as i64);
        let sep = separation_from_k(&self.sft, &self.zero_set);
        let cell = crate::rational::pow2(-(self.m as i64));
        let mut bound = self.default.clone();
        if !self.cells.is_empty() {
            let single_other = (Rational::one() - &cell / &j) / &j;
            let single_own = &sep / &j;
            let multi = &sep / (&j + Rational::one());
            for v in [single_other, single_own, multi] {
                if v < bound {
                    bound = v;
                }
            }
        }
        bound
    }

    pub(crate) fn to_doc(&self) -> ConstructedDoc {
        ConstructedDoc {
            j: self.alphabet_bound(),
            forbidden: self.sft.forbidden().iter().map(Word::to_string).collect(),
            m: self.m,
            cells: self
                .cells
                .iter()
                .map(|(prefix, hits)| CellDoc {
                    prefix: prefix.iter().map(|s| char::from(b'0' + s)).collect(),
                    zero_symbols: hits.clone(),
                    formula: if hits.len() == 1 { "distance" } else { "normalized" }.into(),
                })
                .collect(),
            default: format_rational(&self.default),
        }
    }

    pub(crate) fn from_doc(doc: ConstructedDoc) -> Result<Self> {
        let sft = SftSubshift::from_strs(doc.j, &doc.forbidden)?;
        let mut cells = BTreeMap::new();
        for c in doc.cells {
            let prefix: Vec<u8> = c
                .prefix
                .bytes()
                .map(|b| b.checked_sub(b'0').filter(|&s| s <= doc.j))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad cell prefix {:?}", c.prefix)))?;
            if prefix.len() + 1 != doc.m || c.zero_symbols.is_empty() || c.zero_symbols.iter().any(|&s| s > doc.j) {
                return Err(Error::Invalid(format!("cell {:?} does not fit m = {}", c.prefix, doc.m)));
            }
            let expected = if c.zero_symbols.len() == 1 { "distance" } else { "normalized" };
            if c.formula != expected {
                return Err(Error::Invalid(format!("cell {:?} has formula {:?}, expected {expected:?}", c.prefix, c.formula)));
            }
            cells.insert(prefix, c.zero_symbols);
        }
        let zero_set = sft.exit_set();
        Ok(ConstructedG { sft, zero_set, m: doc.m, cells, default: parse_rational(&doc.default)? })
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct ConstructedDoc {
    j: u8,
    forbidden: Vec<String>,
    m: usize,
    cells: Vec<CellDoc>,
    default: String,
}

#[derive(Serialize, Deserialize)]
struct CellDoc {
    prefix: String,
    zero_symbols: Vec<u8>,
    formula: String,
}

/// Groups the initial words of `set` of length `m` by their first `m − 1` symbols.
fn cells_at(set: &TailSet, m: usize) -> BTreeMap<Vec<u8>, Vec<u8>> {
    let mut cells: BTreeMap<Vec<u8>, Vec<u8>> = BTreeMap::new();
    for w in set.initial_words(m) {
        let (last, prefix) = w.split_last().expect("nonempty word");
        cells.entry(prefix.to_vec()).or_default().push(*last);
    }
    cells
}

/// `ρ(K, Z)` for disjoint closed `K` and `Z` over the same automaton.
fn separation_from_k(k: &SftSubshift, zero: &TailSet) -> Rational {
    let points = k.points();
    let mut n = 1;
    loop {
        let a = points.initial_words(n);
        let b = zero.initial_words(n);
        if !a.iter().any(|w| b.binary_search(w).is_ok()) {
            // Agreement is at most n − 1.
            return crate::rational::pow2(-((n - 1) as i64));
        }
        n += 1;
    }
}

/// Builds a continuous `g` whose zero set is exactly `closure(K_e^c)`; refuses when the
/// star images of that closure share a point.
pub fn construct_thm_1_2(k: &SftSubshift) -> Result<GFunction> {
    let (ok, witness) = k.condition_star_intersection();
    if !ok {
        return Err(Error::Refused {
            reason: "the star images of the exit closure have a common point".into(),
            witness: witness.map(|w| w.to_string()),
        });
    }
    let j = k.alphabet_bound();
    let zero_set = k.exit_set();
    let default = Rational::new(1.into(), (j as i64 + 1).into());
    if zero_set.is_empty() {
        return Ok(GFunction::Constructed(Box::new(ConstructedG {
            sft: k.clone(),
            zero_set,
            m: 1,
            cells: BTreeMap::new(),
            default,
        })));
    }
    let mut chosen = None;
    for m in 1..=MAX_WINDOW {
        let cells = cells_at(&zero_set, m);
        if cells.values().all(|hits| hits.len() == 1) {
            chosen = Some((m, cells));
            break;
        }
    }
    let (m, cells) = match chosen {
        Some(c) => c,
        None => {
            let m = k.window().max(1);
            (m, cells_at(&zero_set, m))
        }
    };
    Ok(GFunction::Constructed(Box::new(ConstructedG { sft: k.clone(), zero_set, m, cells, default })))
}

#[derive(Clone, Debug)]
pub struct StrictG {
    pub g: GFunction,
    /// Certified lower bound of `g` on `K`.
    pub lower_bound: Rational,
}

/// A g-function positive on `K` with `K` invariant; exists only for finite type.
pub fn strict_g(input: &SubshiftInput) -> Result<StrictG> {
    let report = check_prop_2_2(input)?;
    if !report.finite_type {
        let witness = report.best_witness().map(|w| format!("{} (distance {} to the exits)", w.point, w.distance));
        return Err(Error::Refused {
            reason: "not of finite type: points of K accumulate at the exit set".into(),
            witness,
        });
    }
    let k = input.subshift()?;
    let g = construct_thm_1_2(&k)?;
    let lower_bound = match &g {
        GFunction::Constructed(c) => c.lower_bound_on_k(),
        _ => unreachable!("constructor returns a constructed g"),
    };
    if lower_bound <= Rational::zero() {
        return Err(Error::Refused { reason: "g is not bounded away from zero on K".into(), witness: None });
    }
    Ok(StrictG { g, lower_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfun::{fiber_defect, g_invariance_check};
    use crate::rational::rat;
    use crate::symbolic::{GeneratorFamily, GeneratorRule};

    fn seq(s: &str) -> SymbolSeq {
        SymbolSeq::parse(s, 1).unwrap()
    }

    #[test]
    fn alternating_shift() {
        let k = SftSubshift::from_strs(1, &["00", "11"]).unwrap();
        let g = construct_thm_1_2(&k).unwrap();
        let GFunction::Constructed(c) = &g else { panic!() };
        assert_eq!(c.window(), 2);
        assert_eq!(g.eval_exact(&seq("(01)*1")).unwrap(), Some(rat(0, 1)));
        assert_eq!(g.eval_exact(&seq("(10)*0")).unwrap(), Some(rat(0, 1)));
        assert_eq!(g.eval_exact(&seq("(01)*")).unwrap(), Some(rat(1, 1)));
        for s in ["(0)*", "(01)*", "(0011)*1", "(1)*0"] {
            assert_eq!(fiber_defect(&g.fiber(&seq(s)).unwrap()), 0.0);
        }
        assert!(g_invariance_check(&g, &k).unwrap().pass);
    }

    #[test]
    fn ternary_default() {
        let k = SftSubshift::from_strs(2, &["00", "11", "22"]).unwrap();
        let g = construct_thm_1_2(&k).unwrap();
        let p = SymbolSeq::parse("(012)*", 2).unwrap();
        assert_eq!(fiber_defect(&g.fiber(&p).unwrap()), 0.0);
        let GFunction::Constructed(c) = &g else { panic!() };
        assert_eq!(c.default_value(), &rat(1, 3));
    }

    #[test]
    fn strict_and_refused() {
        let k = SftSubshift::from_strs(1, &["000", "111"]).unwrap();
        let s = strict_g(&SubshiftInput::Finite(k)).unwrap();
        assert!(s.lower_bound > rat(0, 1));
        let fam = GeneratorFamily::new(GeneratorRule::AlternatingBlocks, 15);
        match strict_g(&SubshiftInput::Family(fam)) {
            Err(Error::Refused { witness: Some(w), .. }) => assert!(w.starts_with("(01)*1") || w.starts_with("(10)*0"), "{w}"),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let k = SftSubshift::from_strs(1, &["000", "111"]).unwrap();
        let g = construct_thm_1_2(&k).unwrap();
        let text = g.to_json().unwrap();
        let back = GFunction::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        for s in ["(001)*", "(01)*00", "(0)*11"] {
            assert_eq!(g.eval_exact(&seq(s)).unwrap(), back.eval_exact(&seq(s)).unwrap());
        }
    }
}
