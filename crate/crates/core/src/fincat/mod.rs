//! Finite categories, functors and natural transformations.

mod category;
pub mod fixtures;
mod functor;
mod nat;

pub use category::{
    identity_name, validate_category, FinCategory, MorphismData, Mor, Ob, RawCategory,
    RawComposite, RawMorphism,
};
pub use functor::{validate_functor, FinFunctor, RawFunctor};
pub use nat::NatTransf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("no identity for object `{0}`")]
    MissingIdentity(String),
    #[error("`{g}` . `{f}` is not composable")]
    NotComposable { g: String, f: String },
    #[error("composite `{g}` . `{f}` is missing ({candidates} candidate morphisms)")]
    MissingComposite {
        g: String,
        f: String,
        candidates: usize,
    },
    #[error("composite `{g}` . `{f}` given as `{h}`, which has the wrong type")]
    IllTypedComposite { g: String, f: String, h: String },
    #[error("composite `{g}` . `{f}` given twice, as `{first}` and `{second}`")]
    ConflictingComposite {
        g: String,
        f: String,
        first: String,
        second: String,
    },
    #[error("identity law fails at `{0}`")]
    BrokenIdentity(String),
    #[error("associativity fails at (`{h}`, `{g}`, `{f}`)")]
    NonAssociative { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object `{0}` is not mapped")]
    UnmappedObject(String),
    #[error("morphism `{0}` is not mapped")]
    UnmappedMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("`{0}` is mapped twice")]
    DuplicateMapping(String),
    #[error("morphism `{f}` sent to `{image}`, which has the wrong endpoints")]
    WrongEndpoints { f: String, image: String },
    #[error("identity of `{0}` is not sent to an identity")]
    BrokenIdentity(String),
    #[error("composite `{g}` . `{f}` is not preserved")]
    BrokenComposition { g: String, f: String },
    #[error("domain/codomain mismatch: {0}")]
    Mismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatError {
    #[error("functors do not share domain and codomain")]
    Mismatch,
    #[error("component at `{0}` is missing or has the wrong type")]
    BadComponent(String),
    #[error("naturality fails at `{0}`")]
    NotNatural(String),
}
