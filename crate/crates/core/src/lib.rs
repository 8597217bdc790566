//! Exact Frobenius eigenvalues, L-polynomials and maximality criteria for the
//! Artin-Schreier curves `y^p - y = x R(x)` with `R` an additive polynomial,
//! together with a brute-force point-counting oracle.

pub mod arith;
pub mod bigfmt;
pub mod criteria;
pub mod cyclotomic;
pub mod field;
pub mod heisenberg;
pub mod lfunction;
pub mod fpoly;
pub mod linalg;
pub mod linearized;
pub mod oracle;

pub use field::{FFElem, FieldCtx, FieldDescriptor, FieldError, SubfieldEmbed};
pub use cyclotomic::{CharSpec, CycInt};
pub use linearized::{KernelSpace, LinPoly};
