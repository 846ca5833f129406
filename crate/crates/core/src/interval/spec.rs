//! Textual description of sets, shared by config files and serialized filters.

use serde::{Deserialize, Serialize};

use super::set::{ClosedSet1D, Interval, IntervalUnion, TauPart};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};
use crate::symbolic::{GeneratorFamily, GeneratorRule, SftSubshift};

/// `points = ["1/3"]`, `intervals = [["0","1/4","closed-open"]]` or `sft = { forbidden = [...] }`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sft: Option<SftSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SftSpec {
    #[serde(default)]
    pub forbidden: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<TauPart>,
}

impl SftSpec {
    pub fn subshift(&self) -> Result<SftSubshift> {
        match &self.generator {
            Some(name) => {
                let rule = GeneratorRule::parse(name)?;
                let depth = self
                    .truncation
                    .ok_or_else(|| Error::Parse("generator needs a truncation depth".into()))?;
                let mut words = GeneratorFamily::new(rule, depth).words();
                for w in &self.forbidden {
                    words.push(crate::symbolic::Word::parse(w, 1)?);
                }
                SftSubshift::new(1, words)
            }
            None => SftSubshift::from_strs(1, &self.forbidden),
        }
    }
}

impl SetSpec {
    pub fn build(&self) -> Result<ClosedSet1D> {
        let given = [self.points.is_some(), self.intervals.is_some(), self.sft.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(Error::Parse("a set needs exactly one of points, intervals or sft".into()));
        }
        if let Some(points) = &self.points {
            return Ok(ClosedSet1D::points(points.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>>>()?));
        }
        if let Some(intervals) = &self.intervals {
            let mut parts = Vec::new();
            for row in intervals {
                let (lo, hi, flags) = match row.as_slice() {
                    [lo, hi] => (lo, hi, "closed"),
                    [lo, hi, flags] => (lo, hi, flags.as_str()),
                    _ => return Err(Error::Parse(format!("interval entries are [lo, hi, flags], got {row:?}"))),
                };
                let (a, b) = Interval::parse_flags(flags)?;
                parts.push(Interval::new(parse_rational(lo)?, parse_rational(hi)?, a, b)?);
            }
            return Ok(ClosedSet1D::Intervals(IntervalUnion::new(parts)));
        }
        let sft = self.sft.as_ref().expect("checked above");
        ClosedSet1D::tau_image(sft.subshift()?, sft.part.unwrap_or(TauPart::Subshift))
    }

    pub fn from_set(set: &ClosedSet1D) -> SetSpec {
        match set {
            ClosedSet1D::Points(p) => SetSpec { points: Some(p.iter().map(format_rational).collect()), ..Default::default() },
            ClosedSet1D::Intervals(u) => SetSpec {
                intervals: Some(
                    u.parts()
                        .iter()
                        .map(|i| vec![format_rational(&i.lo), format_rational(&i.hi), i.flags().to_string()])
                        .collect(),
                ),
                ..Default::default()
            },
            ClosedSet1D::Sft(t) => SetSpec {
                sft: Some(SftSpec {
                    forbidden: t.sft.forbidden().iter().map(|w| w.to_string()).collect(),
                    generator: None,
                    truncation: None,
                    part: Some(t.part),
                }),
                ..Default::default()
            },
        }
    }
}
