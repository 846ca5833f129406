//! Transition (QMF) functions on `[0,1]`.

mod checks;
mod construct;

pub use checks::{closed_set, cohen_check, invariance_check, qmf_residual, CohenVerdict, InvarianceVerdict};
pub use construct::{construct_prop_4_2, construct_thm_1, log_modulus, Method, Regions, Segment, Step1Report, ThmParams};

use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, half, int, rat, to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `cos²(πξ)`
    Haar,
    /// `cos²(3πξ)`
    Cos3,
    /// Indicator of `[0,1/4) ∪ [3/4,1]`.
    Shannon,
}

impl Builtin {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "haar" => Ok(Builtin::Haar),
            "cos3" => Ok(Builtin::Cos3),
            "shannon" => Ok(Builtin::Shannon),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Haar => "haar",
            Builtin::Cos3 => "cos3",
            Builtin::Shannon => "shannon",
        }
    }

    /// Frequency `c` for the `cos²(cπξ)` family.
    fn frequency(&self) -> Option<i64> {
        match self {
            Builtin::Haar => Some(1),
            Builtin::Cos3 => Some(3),
            Builtin::Shannon => None,
        }
    }
}

/// `cos²(πr)` when it is rational, i.e. when `r mod 1` has denominator 1, 2, 3, 4 or 6.
fn cos_sq_exact(r: &Rational) -> Option<Rational> {
    if r.denom().bits() > 3 {
        return None;
    }
    let f = frac(r);
    let den = f.denom().to_u64()?;
    let num = f.numer().to_u64()?;
    let twelfths = match den {
        1 | 2 | 3 | 4 | 6 => num * (12 / den),
        _ => return None,
    };
    Some(match twelfths {
        0 => rat(1, 1),
        2 | 10 => rat(3, 4),
        3 | 9 => rat(1, 2),
        4 | 8 => rat(1, 4),
        6 => rat(0, 1),
        _ => unreachable!("twelfths of denominators 1..6"),
    })
}

/// Lower bound `Π_{j≥1} p(y/2^j) ≥ 1 − c y²` valid for `|y| ≤ radius`.
#[derive(Clone, Debug)]
pub struct TailBound {
    pub radius: f64,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FilterKind {
    Builtin(Builtin),
    Constructed(Box<Regions>),
}

/// A transition function `p: [0,1] → [0,1]`, extended 1-periodically.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionFn {
    kind: FilterKind,
}

impl TransitionFn {
    pub fn builtin(name: &str) -> Result<Self> {
        Ok(TransitionFn { kind: FilterKind::Builtin(Builtin::parse(name)?) })
    }

    pub fn from_builtin(b: Builtin) -> Self {
        TransitionFn { kind: FilterKind::Builtin(b) }
    }

    pub(crate) fn constructed(regions: Regions) -> Self {
        TransitionFn { kind: FilterKind::Constructed(Box::new(regions)) }
    }

    pub fn kind(&self) -> &FilterKind {
        &self.kind
    }

    pub fn regions(&self) -> Option<&Regions> {
        match &self.kind {
            FilterKind::Constructed(r) => Some(r),
            FilterKind::Builtin(_) => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FilterKind::Builtin(b) => b.name().to_string(),
            FilterKind::Constructed(r) => r.method.label().to_string(),
        }
    }

    /// Exact value where one is known: rational cos² values, indicator values, and the
    /// zero/one regions of constructed filters.
    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        let x = frac(x);
        match &self.kind {
            FilterKind::Builtin(Builtin::Shannon) => {
                let inside = x < rat(1, 4) || x >= rat(3, 4);
                Some(if inside { Rational::one() } else { Rational::zero() })
            }
            FilterKind::Builtin(b) => {
                let c = b.frequency().expect("cos² family");
                // `c·x` has denominator at least `den(x)/c`, too large for a rational value.
                if x.denom().bits() > 8 {
                    return None;
                }
                cos_sq_exact(&(x * int(c)))
            }
            FilterKind::Constructed(r) => r.eval(&x).exact,
        }
    }

    /// `p(x)` in floating point, routed through the exact value when available.
    pub fn eval(&self, x: &Rational) -> f64 {
        let x = frac(x);
        match &self.kind {
            FilterKind::Builtin(Builtin::Shannon) => to_f64(&self.eval_exact(&x).expect("indicator")),
            FilterKind::Builtin(b) => match self.eval_exact(&x) {
                Some(v) => to_f64(&v),
                None => {
                    let c = (PI * b.frequency().expect("cos² family") as f64 * to_f64(&x)).cos();
                    c * c
                }
            },
            FilterKind::Constructed(r) => r.eval(&x).value,
        }
    }

    /// `p(x) = 0` exactly.
    pub fn is_exact_zero(&self, x: &Rational) -> bool {
        self.eval_exact(x).is_some_and(|v| v.is_zero())
    }

    /// Largest known `r` with `p ≡ 1` on `[-r, r]` (mod 1).
    pub fn one_radius(&self) -> Option<Rational> {
        match &self.kind {
            FilterKind::Builtin(Builtin::Shannon) => Some(rat(1, 4) - rat(1, 1 << 20)),
            FilterKind::Builtin(_) => None,
            FilterKind::Constructed(r) => r.epsilon.clone(),
        }
    }

    /// Quadratic lower bound on the tail product near 0, for the cos² family.
    ///
    /// `cos²(θ) ≥ 1 − θ²`, and `Π (1 − a_j) ≥ 1 − Σ a_j` with `Σ_{j≥1} (cπy/2^j)² = (cπy)²/3`.
    pub fn tail_bound(&self) -> Option<TailBound> {
        match &self.kind {
            FilterKind::Builtin(b) => {
                let c = b.frequency()? as f64;
                Some(TailBound { radius: 0.5 / c, coefficient: (c * PI).powi(2) / 3.0 })
            }
            FilterKind::Constructed(_) => None,
        }
    }

    /// Isolated zeros in `[0,1)` known in closed form.
    pub fn known_zeros(&self) -> Vec<Rational> {
        match &self.kind {
            FilterKind::Builtin(Builtin::Haar) => vec![half()],
            FilterKind::Builtin(Builtin::Cos3) => vec![rat(1, 6), half(), rat(5, 6)],
            FilterKind::Builtin(Builtin::Shannon) => vec![rat(1, 4)],
            FilterKind::Constructed(r) => {
                let mut z = r.exits.endpoints();
                z.extend(r.n_half.endpoints());
                z
            }
        }
    }

    /// Region boundaries for residual grids (empty for builtins).
    pub fn region_endpoints(&self) -> Vec<Rational> {
        match &self.kind {
            FilterKind::Builtin(Builtin::Shannon) => vec![rat(1, 4), rat(3, 4)],
            FilterKind::Builtin(_) => Vec::new(),
            FilterKind::Constructed(r) => r.endpoints(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&FilterDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FilterDoc = serde_json::from_str(text)?;
        doc.into_filter()
    }
}

impl fmt::Display for TransitionFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// JSON form of a filter.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum FilterDoc {
    Builtin { name: Builtin },
    Constructed(construct::RegionsDoc),
}

impl From<&TransitionFn> for FilterDoc {
    fn from(p: &TransitionFn) -> Self {
        match &p.kind {
            FilterKind::Builtin(b) => FilterDoc::Builtin { name: *b },
            FilterKind::Constructed(r) => FilterDoc::Constructed(r.to_doc()),
        }
    }
}

impl FilterDoc {
    fn into_filter(self) -> Result<TransitionFn> {
        match self {
            FilterDoc::Builtin { name } => Ok(TransitionFn::from_builtin(name)),
            FilterDoc::Constructed(doc) => Ok(TransitionFn::constructed(Regions::from_doc(doc)?)),
        }
    }
}
