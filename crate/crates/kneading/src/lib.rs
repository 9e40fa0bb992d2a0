//! Topological entropy of lexicographically constrained shift spaces
//! `Σ(u, v)` and recognition of `(u, v)` as the kneading pair of
//! `x ↦ βx + α mod 1`.
//!
//! Numeric routines are generic over [`scalar::Scalar`]; the aliases below fix
//! the common choices.

pub mod affine;
pub mod algebraic;
pub mod beta;
pub mod config;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod inverse;
pub mod scalar;
pub mod strings;

pub use algebraic::Algebraic;
pub use error::{Error, Result};
pub use scalar::{DoubleDouble, Scalar};
pub use strings::EpString;

pub type System64 = affine::PiecewiseAffineSystem<f64>;
pub type SystemDD = affine::PiecewiseAffineSystem<DoubleDouble>;
pub type SystemExact = affine::PiecewiseAffineSystem<Algebraic>;

pub type Params64 = beta::AlphaBetaParams<f64>;
pub type ParamsDD = beta::AlphaBetaParams<DoubleDouble>;
pub type ParamsExact = beta::AlphaBetaParams<Algebraic>;

pub type EntropyReport64 = entropy::EntropyReport<f64>;
pub type EntropyReportDD = entropy::EntropyReport<DoubleDouble>;
