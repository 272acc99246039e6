//! Exact rank computations for tensors of border rank at most two.
//!
//! Tensors with rational (or quadratic-extension) entries are classified into
//! the strata of the secant variety of lines of a Segre variety: rank one,
//! generic rank two, or a point of the tangent developable, whose rank equals
//! the number of essential modes. Every claimed rank comes with an explicit
//! decomposition that is verified by exact reconstruction.

pub mod batch;
pub mod classify;
pub mod concision;
pub mod decompose;
pub mod error;
pub mod exec;
pub mod flatten;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod scalar;
pub mod symmetric;
pub mod tensor;

pub use classify::{classify, classify_detailed, type_eta, BorderRankClass, Classification, Eta};
pub use decompose::{decompose, verify, Decomposition, RankOneTerm, TangentFrame, TangentParams};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gen::{generate, GenKind, GenSpec, Sidecar};
pub use scalar::{Rational, Scalar};
pub use symmetric::{comon_check, poly_to_tensor, symmetric_rank_br2, HomPoly, SymRankReport};
pub use tensor::{DenseTensor, Shape};
