//! Free groups, Stallings graphs, Whitehead automorphisms, iterated
//! centralizer extensions, quadratic equations and Szmielew invariants.

pub mod abelian;
pub mod error;
pub mod intlin;
pub mod json;
pub mod parse;
pub mod quadratic;
pub mod scenarios;
pub mod stallings;
pub mod towers;
pub mod whitehead;
pub mod words;

pub use error::{Error, Result};
pub use words::{Alphabet, Letter, Word};
