//! Finite models of quantale-enriched (T,V)-categories, presheaf monads and
//! the lax orthogonal factorisation systems they induce.

pub mod corpus;
pub mod error;
pub mod format;
pub mod lofs;
pub mod monad;
pub mod par;
pub mod presheaf;
pub mod quantale;
pub mod report;
pub mod search;
pub mod tvcat;
pub mod verify;
pub mod vrel;

pub use error::{Error, Result};
pub use quantale::{Elem, Quantale, QuantaleSpec};
pub use report::{Check, LawReport, Status};
pub use vrel::VRel;
