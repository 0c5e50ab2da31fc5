//! Scalar arithmetic over the field catalog and the completion map.

mod descriptor;
mod padic;
mod scalar;

pub use descriptor::{completion_of, Characteristic, FieldDescriptor, SubfieldRoots};
pub use padic::{padic_arith, teichmuller, PAdic, PAdicOp, Valuation};
pub use scalar::{parse_rational, valuation_abs, FieldElement, Gaussian, Scalar, ValuedAbs, ZeroTest};
