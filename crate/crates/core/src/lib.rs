//! Decidable syntactic machinery for stratified and reflective set theories,
//! plus a finite-category engine for checking limit, coproduct and Yoneda
//! statements by exhaustive search.
//!
//! The [`formula`] module parses and prints formulas in three languages: plain
//! set theory, the simple theory of types, and the two-sorted language L* with
//! class variables, `Vbar` and type-level pairing. [`stratify`] decides
//! stratifiability, [`transform`] builds relativizations and axiom-schema
//! instances, [`model`] evaluates formulas over hereditarily finite sets and
//! [`category`] works with finite categories.

#![allow(clippy::needless_range_loop)]

pub mod formula;
pub mod stratify;
pub mod transform;
pub mod model;
pub mod category;
pub mod corpus;

/// The guide in `book/`, compiled so its listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/stratification.md")]
    mod stratification {}
    #[doc = include_str!("../../../book/src/transformations.md")]
    mod transformations {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/categories.md")]
    mod categories {}
    #[doc = include_str!("../../../book/src/rel.md")]
    mod rel {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
