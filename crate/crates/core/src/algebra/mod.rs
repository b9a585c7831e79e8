//! Exact arithmetic in GF(q) and in the Laurent-series field F_q((t)), plus
//! the digit-indexed translations `u(n)`, the set Λ and coset labels.

mod gf;
mod index;
mod laurent;

pub use gf::{is_prime, FieldConfig, GfScalar, MAX_FIELD_ORDER};
pub use index::{coset_label_decompose, lambda_element, LambdaIndex};
pub use laurent::FieldElement;
