//! Multigraded ideals over prime fields: Gröbner bases, generic initial ideals,
//! Cartwright–Sturmfels membership tests and determinantal constructions.

pub mod determinantal;
pub mod error;
pub mod field;
pub mod gin;
pub mod groebner;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod ring;
pub mod script;
pub mod theory;

pub use error::{Error, Result};
pub use groebner::{GroebnerBasis, Ideal, Limits};
pub use monomial::{HilbertNumerator, MonomialIdeal};
pub use order::{OrderKind, TermOrder, TieBreak};
pub use poly::Polynomial;
pub use ring::{BlockRing, Monomial, Multidegree};
