//! Image of induction from a sub-fibration, and descent of the Stokes
//! condition along a cover of the base by open pieces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functor::{graded, is_cocartesian, is_stokes, restrict, VectFunctor};
use crate::poset::{MonotoneMap, StokesSpace};

use super::elementary::certificate;

/// Whether `Gr F` vanishes outside the sub-fibration given by fiber
/// elements per base element (stable under transitions).
pub fn in_image_of_subfibration(f: &VectFunctor, s: &StokesSpace, keep: &[Vec<usize>]) -> Result<bool> {
    if keep.len() != s.base().len() {
        return Err(Error::Precondition("one element list per base element expected".into()));
    }
    for (x, y) in s.base().covers() {
        let t = s.transport(x, y).unwrap();
        if keep[x].iter().any(|&a| !keep[y].contains(&t[a])) {
            return Err(Error::Precondition("sub-fibration is not stable under transitions".into()));
        }
    }
    let g = graded(f, s)?;
    let total = s.total();
    Ok(total
        .elements
        .iter()
        .enumerate()
        .all(|(u, &(x, a))| keep[x].contains(&a) || g.functor.dim(u) == 0))
}

/// Restriction of a fibration and a functor on its total poset to a set of
/// base elements.
pub fn restrict_to_base(s: &StokesSpace, f: &VectFunctor, elements: &[usize]) -> Result<(StokesSpace, VectFunctor)> {
    let sub = s.restrict_base(elements)?;
    let assignment = sub.total().elements.iter().map(|&(i, a)| s.total().index(elements[i], a)).collect();
    let inc = MonotoneMap::new(sub.total_poset().clone(), s.total_poset().clone(), assignment)?;
    let g = restrict(&inc, f)?;
    Ok((sub, g))
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceReport {
    pub elements: Vec<String>,
    pub stokes: bool,
    /// Order-theoretic elementarity certificate of the piece, if any.
    pub elementary: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub pieces: Vec<PieceReport>,
    pub cocartesian: bool,
    pub global_stokes: bool,
    /// `F` is Stokes iff every piece is, given that `F` is cocartesian.
    pub consistent: bool,
}

/// Compares the Stokes condition for `F` with the Stokes condition on the
/// pieces of an open cover (up-closed subsets) of the base.
pub fn hybrid_descent_check(s: &StokesSpace, cover: &[Vec<usize>], f: &VectFunctor) -> Result<DescentReport> {
    let base = s.base();
    let mut covered = vec![false; base.len()];
    for piece in cover {
        if piece.is_empty() || !base.is_up_closed(piece) {
            return Err(Error::Precondition("cover pieces must be nonempty open (up-closed) subsets".into()));
        }
        for &x in piece {
            covered[x] = true;
        }
    }
    if let Some(x) = covered.iter().position(|c| !c) {
        return Err(Error::Precondition(format!("cover misses {}", base.label(x))));
    }
    let mut pieces = Vec::with_capacity(cover.len());
    for piece in cover {
        let (sub, g) = restrict_to_base(s, f, piece)?;
        pieces.push(PieceReport {
            elements: piece.iter().map(|&x| base.label(x).to_string()).collect(),
            stokes: is_stokes(&g, &sub)?.stokes,
            elementary: certificate(&sub),
        });
    }
    let cocartesian = is_cocartesian(f, s)?.cocartesian;
    let global_stokes = is_stokes(f, s)?.stokes;
    let all = pieces.iter().all(|p| p.stokes);
    let consistent = !cocartesian || global_stokes == all;
    Ok(DescentReport { pieces, cocartesian, global_stokes, consistent })
}
