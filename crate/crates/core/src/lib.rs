//! Rational point counts over finite fields via Gauss sums, with brute-force oracles.
//!
//! ```
//! use std::sync::Arc;
//! use fqpoints::{catalog, chars::Characters, count::PointCounter, field::FieldDescriptor};
//!
//! let field = Arc::new(FieldDescriptor::from_order(9)?);
//! let counter = PointCounter::new(Characters::new(field.clone(), 1)?);
//! let cubic = catalog::builtin_variety(&field, "twisted-cubic")?;
//! assert_eq!(counter.projective_count(&cubic)?.total, 10);
//! # Ok::<(), fqpoints::error::Error>(())
//! ```

pub mod catalog;
pub mod chars;
pub mod cli;
pub mod count;
pub mod error;
pub mod expsum;
pub mod field;
pub mod lattice;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod verify;
