//! g-functions on the one-sided sequence space: lifts of transition functions, the
//! continuous g-function with a prescribed zero set, and the strict-g decision.

mod checks;
mod construct;

pub use checks::{g_invariance_check, g_sum_residual, general_subset_invariance, GInvarianceVerdict, SubsetVerdict};
pub use construct::{construct_thm_1_2, strict_g, ConstructedG, StrictG};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::TransitionFn;
use crate::interval::tau;
use crate::rational::{format_rational, parse_rational, to_f64, Rational};
use crate::symbolic::{SymbolSeq, Word};

/// A g-function depending only on the last `depth` symbols, given by a table.
///
/// Mostly useful for fixtures: constants, and deliberately defective functions.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalG {
    j: u8,
    depth: usize,
    values: BTreeMap<Vec<u8>, Rational>,
    default: Rational,
}

impl LocalG {
    /// Every unlisted ending of length `depth` takes `default`.
    pub fn new(j: u8, depth: usize, values: BTreeMap<Vec<u8>, Rational>, default: Rational) -> Result<Self> {
        if let Some(w) = values.keys().find(|w| w.len() != depth || w.iter().any(|&s| s > j)) {
            return Err(Error::Invalid(format!("table entry {w:?} does not fit depth {depth} and J = {j}")));
        }
        Ok(LocalG { j, depth, values, default })
    }

    pub fn constant(j: u8, value: Rational) -> Self {
        LocalG { j, depth: 0, values: BTreeMap::new(), default: value }
    }

    fn eval(&self, seq: &SymbolSeq) -> Rational {
        let key = seq.last_symbols(self.depth);
        self.values.get(&key).unwrap_or(&self.default).clone()
    }
}

#[derive(Clone, Debug)]
pub enum GFunction {
    /// `ξ ↦ p(τ(ξ))` on binary sequences.
    Lifted(TransitionFn),
    Constructed(Box<ConstructedG>),
    Local(LocalG),
}

impl GFunction {
    /// `g((ξ, j)) = p(τ(ξ)/2 + j/2)`.
    pub fn lift(p: TransitionFn) -> Self {
        GFunction::Lifted(p)
    }

    pub fn alphabet_bound(&self) -> u8 {
        match self {
            GFunction::Lifted(_) => 1,
            GFunction::Constructed(c) => c.alphabet_bound(),
            GFunction::Local(l) => l.j,
        }
    }

    fn check_alphabet(&self, seq: &SymbolSeq) -> Result<()> {
        if seq.alphabet_bound() != self.alphabet_bound() {
            return Err(Error::AlphabetMismatch { expected: self.alphabet_bound(), found: seq.alphabet_bound() });
        }
        Ok(())
    }

    /// Exact value when it is rational and known.
    pub fn eval_exact(&self, seq: &SymbolSeq) -> Result<Option<Rational>> {
        self.check_alphabet(seq)?;
        Ok(match self {
            GFunction::Lifted(p) => p.eval_exact(&tau(seq)?),
            GFunction::Constructed(c) => Some(c.eval(seq)?),
            GFunction::Local(l) => Some(l.eval(seq)),
        })
    }

    pub fn eval(&self, seq: &SymbolSeq) -> Result<f64> {
        if let GFunction::Lifted(p) = self {
            self.check_alphabet(seq)?;
            return Ok(p.eval(&tau(seq)?));
        }
        Ok(to_f64(&self.eval_exact(seq)?.expect("table and constructed values are exact")))
    }

    /// Values at `(ξ, 0), …, (ξ, J)`, exact where possible.
    pub fn fiber(&self, prev: &SymbolSeq) -> Result<Vec<GValue>> {
        (0..=self.alphabet_bound())
            .map(|a| {
                let pt = prev.append(a);
                Ok(match self.eval_exact(&pt)? {
                    Some(v) => GValue::Exact(v),
                    None => GValue::Float(self.eval(&pt)?),
                })
            })
            .collect()
    }

    pub fn name(&self) -> String {
        match self {
            GFunction::Lifted(p) => format!("lift({})", p.name()),
            GFunction::Constructed(c) => format!("constructed(m = {})", c.window()),
            GFunction::Local(l) => format!("local(depth = {})", l.depth),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GDoc = serde_json::from_str(text)?;
        doc.into_g()
    }
}

impl fmt::Display for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GValue {
    Exact(Rational),
    Float(f64),
}

impl GValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            GValue::Exact(r) => to_f64(r),
            GValue::Float(x) => *x,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, GValue::Exact(r) if r.is_zero())
    }
}

/// `|Σ values − 1|`, computed exactly when every value is exact.
pub(crate) fn fiber_defect(values: &[GValue]) -> f64 {
    if values.iter().all(|v| matches!(v, GValue::Exact(_))) {
        let sum: Rational = values
            .iter()
            .map(|v| match v {
                GValue::Exact(r) => r.clone(),
                GValue::Float(_) => unreachable!(),
            })
            .sum();
        to_f64(&(sum - Rational::one())).abs()
    } else {
        (values.iter().map(GValue::to_f64).sum::<f64>() - 1.0).abs()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum GDoc {
    Lifted { filter: serde_json::Value },
    Constructed(construct::ConstructedDoc),
    Local { j: u8, depth: usize, values: BTreeMap<String, String>, default: String },
}

impl From<&GFunction> for GDoc {
    fn from(g: &GFunction) -> Self {
        match g {
            GFunction::Lifted(p) => GDoc::Lifted {
                filter: serde_json::from_str(&p.to_json().expect("filters serialize")).expect("valid json"),
            },
            GFunction::Constructed(c) => GDoc::Constructed(c.to_doc()),
            GFunction::Local(l) => GDoc::Local {
                j: l.j,
                depth: l.depth,
                values: l
                    .values
                    .iter()
                    .map(|(k, v)| (k.iter().map(|s| char::from(b'0' + s)).collect(), format_rational(v)))
                    .collect(),
                default: format_rational(&l.default),
            },
        }
    }
}

impl GDoc {
    fn into_g(self) -> Result<GFunction> {
        match self {
            GDoc::Lifted { filter } => Ok(GFunction::Lifted(TransitionFn::from_json(&filter.to_string())?)),
            GDoc::Constructed(doc) => Ok(GFunction::Constructed(Box::new(ConstructedG::from_doc(doc)?))),
            GDoc::Local { j, depth, values, default } => {
                let values = values
                    .into_iter()
                    .map(|(k, v)| {
                        let w = if k.is_empty() { Vec::new() } else { Word::parse(&k, j)?.symbols().to_vec() };
                        Ok((w, parse_rational(&v)?))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(GFunction::Local(LocalG::new(j, depth, values, parse_rational(&default)?)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn seq(s: &str) -> SymbolSeq {
        SymbolSeq::parse(s, 1).unwrap()
    }

    #[test]
    fn lifted_values() {
        let haar = GFunction::lift(TransitionFn::builtin("haar").unwrap());
        assert_eq!(haar.eval_exact(&seq("(0)*")).unwrap(), Some(rat(1, 1)));
        let cos3 = GFunction::lift(TransitionFn::builtin("cos3").unwrap());
        assert_eq!(cos3.eval_exact(&seq("(10)*0")).unwrap(), Some(rat(0, 1)));
        let shannon = GFunction::lift(TransitionFn::builtin("shannon").unwrap());
        assert_eq!(shannon.eval_exact(&seq("(0)*10")).unwrap(), Some(rat(0, 1)));
    }

    #[test]
    fn local_round_trip() {
        let mut values = BTreeMap::new();
        values.insert(vec![0, 1], rat(1, 3));
        let g = GFunction::Local(LocalG::new(1, 2, values, rat(1, 2)).unwrap());
        let back = GFunction::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back.eval_exact(&seq("(0)*1")).unwrap(), Some(rat(1, 3)));
        assert_eq!(back.eval_exact(&seq("(1)*")).unwrap(), Some(rat(1, 2)));
    }
}
