use std::ops::ControlFlow;

use thiserror::Error;

use super::{
    find_natural_iso, for_each_functor, is_discrete_fibration, is_discrete_opfibration,
    is_final_functor, is_initial_functor,
};
use crate::fincat::{FinFunctor, NatTransf};

/// A square
///
/// ```text
///   A --top--> C
///   |          |
///   l          r
///   v          v
///   B -bottom-> D
/// ```
/// commuting up to the natural isomorphism `witness : r.top => bottom.l`.
#[derive(Clone, Debug)]
pub struct Square {
    pub l: FinFunctor,
    pub r: FinFunctor,
    pub top: FinFunctor,
    pub bottom: FinFunctor,
    pub witness: NatTransf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FillerOrientation {
    /// `l` final, `r` a discrete fibration.
    FinalFibration,
    /// `l` initial, `r` a discrete opfibration.
    InitialOpfibration,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FillerError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no diagonal filler exists")]
    NoFiller,
}

/// Finds `s : B -> C` with `s.l ≅ top` and `r.s ≅ bottom` by exhaustive
/// search, and checks that every such filler is isomorphic to the first.
pub fn diagonal_filler(sq: &Square, orientation: FillerOrientation) -> Result<FinFunctor, FillerError> {
    let pre = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(FillerError::PreconditionViolated(msg.to_string()))
        }
    };
    pre(sq.l.codomain() == sq.bottom.domain(), "l and bottom do not meet")?;
    pre(sq.top.codomain() == sq.r.domain(), "top and r do not meet")?;
    pre(sq.l.domain() == sq.top.domain(), "l and top have different domains")?;
    pre(sq.r.codomain() == sq.bottom.codomain(), "r and bottom have different codomains")?;
    pre(
        *sq.witness.source() == sq.top.then(&sq.r) && *sq.witness.target() == sq.l.then(&sq.bottom),
        "witness does not relate r.top and bottom.l",
    )?;
    pre(sq.witness.is_iso(), "witness is not invertible")?;
    match orientation {
        FillerOrientation::FinalFibration => {
            pre(is_final_functor(&sq.l), "l is not final")?;
            pre(is_discrete_fibration(&sq.r), "r is not a discrete fibration")?;
        }
        FillerOrientation::InitialOpfibration => {
            pre(is_initial_functor(&sq.l), "l is not initial")?;
            pre(is_discrete_opfibration(&sq.r), "r is not a discrete opfibration")?;
        }
    }
    let (b, c) = (sq.l.codomain().clone(), sq.top.codomain().clone());
    let mut fillers: Vec<FinFunctor> = Vec::new();
    for_each_functor(&b, &c, |o, m| {
        let s = FinFunctor::new_unchecked("s", b.clone(), c.clone(), o.to_vec(), m.to_vec());
        if find_natural_iso(&sq.l.then(&s), &sq.top).is_some()
            && find_natural_iso(&s.then(&sq.r), &sq.bottom).is_some()
        {
            fillers.push(s);
        }
        ControlFlow::Continue(())
    });
    let first = fillers.first().cloned().ok_or(FillerError::NoFiller)?;
    for other in &fillers[1..] {
        assert!(
            find_natural_iso(&first, other).is_some(),
            "two non-isomorphic diagonal fillers for an orthogonal square"
        );
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures;

    #[test]
    fn identity_filler() {
        let v = fixtures::v_one();
        let id = FinFunctor::identity(fixtures::arrow());
        let sq = Square {
            l: v.clone(),
            r: id.clone(),
            top: v.clone(),
            bottom: id.clone(),
            witness: NatTransf::identity(&v),
        };
        let s = diagonal_filler(&sq, FillerOrientation::FinalFibration).unwrap();
        assert!(s.is_identity_on_the_nose());
    }

    #[test]
    fn violated_precondition() {
        let u = fixtures::u_zero();
        let id = FinFunctor::identity(fixtures::arrow());
        let sq = Square {
            l: u.clone(),
            r: id.clone(),
            top: u.clone(),
            bottom: id,
            witness: NatTransf::identity(&u),
        };
        assert!(matches!(
            diagonal_filler(&sq, FillerOrientation::FinalFibration),
            Err(FillerError::PreconditionViolated(_))
        ));
    }
}
