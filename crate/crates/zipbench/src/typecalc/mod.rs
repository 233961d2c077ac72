//! Regular type expressions and the one-hole-context calculus over them.
//!
//! The derivative of a type expression with respect to one of its type
//! parameters is the type of its one-hole contexts: what is left of a value
//! when one occurrence of the parameter is removed. That derivative is what
//! a cursor (zipper) carries as its path, so this module is where the
//! cursor representations used elsewhere in the crate come from.

mod calculus;
mod count;
mod expr;
mod normalize;

pub use calculus::{differentiate, substitute, DiffError};
pub use count::{count_inhabitants, Cardinality, CountError};
pub use expr::{expand_lists, ParseError, TypeExpr};
pub use normalize::{normalize, NormalForm};
