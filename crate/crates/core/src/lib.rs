//! Self-reproducing P systems with a linear membrane structure.
//!
//! * [`model`]: unary and general systems, validation, size, and the
//!   permutation and plus-to-star transforms.
//! * [`semantics`]: bounded enumeration of the star and plus languages, a
//!   membrane-level simulator, and exact unary membership.
//! * [`factor`]: primes and prime-factorization vectors.
//! * [`monoid`]: the exponent-vector representation of unary systems,
//!   canonical forms, minimization and equivalence.
//! * [`complexity`]: membrane/size trade-off constructions.

pub mod complexity;
pub mod factor;
pub mod model;
pub mod monoid;
pub mod semantics;

pub use factor::FactorVector;
pub use model::{Diagnostic, GeneralPSystem, ModelError, PSystem, Parikh, UnaryPSystem};
pub use monoid::{CanonicalForm, ContextFreeClass, MonoidRepr};
pub use semantics::{Configuration, Mode};
