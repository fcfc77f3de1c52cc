//! Pro-etale presentations at finite scale: oplax colimits of slice
//! systems over a cofiltered diagram, their localization at cartesian
//! morphisms, global elements of the pseudocolimit, and pro-objects.

mod diagram;
pub mod fixtures;
mod fraction;
mod global;
mod oplax;
mod pro;

use thiserror::Error;

use crate::constructions::CofilteredFailure;
use crate::fincat::{Mor, Ob};

pub use diagram::{ChosenPullback, CofilteredDiagram};
pub use fraction::{localize, FractionCategory};
pub use global::{
    canonical_reindexing, canonical_reindexing_initial, fibers_generate, global_element_category,
    pro_adjoint_faithful_check, pseudocolim_global_elements, slice_product, CanonicalReindexing,
    FaithfulReport, GlobalElementCategory, PseudocolimElement, SliceProduct,
};
pub use oplax::{build_oplax_colimit, check_ore, MarkedOplaxColimit, OreCertificate, OreFailure};
pub use pro::{
    left_pro_adjoint_on_representables, pro_compose, pro_hom, pro_identity, pro_isomorphism, ProMorphism,
    ProObject,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProetaleError {
    #[error("index category is not cofiltered: {0:?}")]
    NotCofiltered(CofilteredFailure),
    #[error("expected {expected} slice systems, found {found}")]
    SliceCount { expected: usize, found: usize },
    #[error("slice arrow {arrow:?} does not target the object at index {index:?}")]
    SliceArrow { index: Ob, arrow: Mor },
    #[error("slice system at index {0:?} lacks the identity")]
    MissingIdentity(Ob),
    #[error("no pullback of {along:?} along the transition {arrow:?} in the slice system")]
    MissingPullback { arrow: Mor, along: Mor },
    #[error("chosen square for {along:?} along {arrow:?} is not a pullback")]
    NotAPullback { arrow: Mor, along: Mor },
    #[error("calculus of fractions fails: {0:?}")]
    OreFailed(OreFailure),
    #[error("composition of classes {first:?} and {second:?} depends on representatives")]
    CompositionNotWellDefined { first: Mor, second: Mor },
    #[error("no product of the index object {index:?} with {object:?} in the slice system")]
    MissingProduct { index: Ob, object: Ob },
    #[error("global element {0:?} has no vertical representative")]
    NoVerticalRepresentative(Mor),
    #[error("object {0:?} is not the fiber of its global-element data")]
    NotAFiber(Ob),
    #[error("parallel classes {first:?} and {second:?} are not separated")]
    NotFaithful { first: Mor, second: Mor },
    #[error("pro-objects live over different categories")]
    BaseMismatch,
    #[error("index of the left pro-adjoint is not cofiltered: {0:?}")]
    IndexNotCofiltered(CofilteredFailure),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
