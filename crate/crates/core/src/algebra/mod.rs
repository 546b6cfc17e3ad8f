//! Finite fields and the systematic, product-closed evaluation codes the
//! protocols are built on.

pub mod code;
pub mod field;
pub mod hermitian;
pub mod linalg;
pub mod rs;

pub use code::{Backend, CodePair, CodeSpec, Codeword, EvalPoint};
pub use field::{is_prime, FieldElement, FieldSpec};
pub use hermitian::hermitian_code_pair;
pub use rs::rs_code_pair;
