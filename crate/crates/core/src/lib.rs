//! Classification of graded Artinian quotients of `k[x, y, z]` by the
//! multiplication on `Tor^Q(R, k)`, with predictions for generic ideals.

pub mod apolarity;
pub mod error;
pub mod experiment;
pub mod field;
pub mod graded_ring;
pub mod ideal;
pub mod koszul;
pub mod linalg;
pub mod predictor;

pub use error::{Error, Result};
pub use field::FieldPrime;
