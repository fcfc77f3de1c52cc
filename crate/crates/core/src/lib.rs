//! Finite-scale computations around essential geometric morphisms between
//! presheaf topoi: comprehensive factorization, Kan extensions, Grothendieck
//! topologies on finite categories, and fraction-category presentations of
//! cofiltered limits of slices.

pub mod constructions;
pub mod factorization;
pub mod fincat;
pub mod kan;
pub mod presheaf;
pub mod proetale;
pub mod sites;
pub mod universe;
