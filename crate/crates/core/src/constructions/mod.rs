//! Comma categories, categories of elements, connected components, the
//! functor-level left/right classes, and quotient constructions.

mod collage;
mod comma;
mod elements;
mod filler;
mod pi0;
mod presentation;
mod props;
mod search;

pub use collage::{cocomma_collage, Collage};
pub use comma::{coslice_of_functor, comma, point, slice_of_functor, CommaCategory};
pub use elements::{category_of_elements, Elements};
pub use filler::{diagonal_filler, FillerError, FillerOrientation, Square};
pub use pi0::{pi0, Components};
pub use presentation::{Generator, Presentation, PresentationError, Presented};
pub use props::{
    check_cofiltered, check_discrete_fibration, check_discrete_opfibration, check_final,
    check_initial, is_cofiltered, is_discrete_fibration, is_discrete_opfibration,
    is_final_functor, is_initial_functor, CofilteredFailure, FinalityFailure, LiftFailure,
};
pub use search::{
    all_functors, all_nat_transfs, find_equivalence, find_isomorphism, find_natural_iso,
    for_each_functor,
};

/// Appends `#k` to the second and later occurrences of a repeated name.
pub(crate) fn uniquify(names: Vec<String>) -> Vec<String> {
    use std::collections::{HashMap, HashSet};
    let taken: HashSet<String> = names.iter().cloned().collect();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut used: HashSet<String> = HashSet::new();
    names
        .into_iter()
        .map(|n| {
            let k = seen.entry(n.clone()).or_insert(0);
            *k += 1;
            if *k == 1 && used.insert(n.clone()) {
                return n;
            }
            let mut i = *k;
            loop {
                let cand = format!("{n}#{i}");
                if !taken.contains(&cand) && used.insert(cand.clone()) {
                    return cand;
                }
                i += 1;
            }
        })
        .collect()
}
