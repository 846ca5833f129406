//! Exit sets, invariant sets and the filter/g-function constructions that realize them.

pub mod error;
pub mod filter;
pub mod gfun;
pub mod interval;
pub mod rational;
pub mod sampler;
pub mod spectral;
pub mod symbolic;

pub use error::{Error, Result};
pub use filter::TransitionFn;
pub use gfun::GFunction;
pub use interval::ClosedSet1D;
pub use rational::Rational;
pub use symbolic::{SftSubshift, SymDist, SymbolSeq, Word};
