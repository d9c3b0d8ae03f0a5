//! Cocartesian, split and Stokes predicates for functors on total posets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poset::StokesSpace;

use super::{is_split_dims, lan, restrict, NatTransformation, VectFunctor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocartesianVerdict {
    pub cocartesian: bool,
    /// Some fiber restriction is not split, so the comparison was made with
    /// the heart-level colimit only.
    pub heart_level_only: bool,
    /// First base covering relation where the comparison map is not invertible.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StokesVerdict {
    pub stokes: bool,
    pub cocartesian: bool,
    /// Base elements whose fiber restriction is not split.
    pub non_split_at: Vec<String>,
    pub failure: Option<String>,
}

fn check_domain(f: &VectFunctor, s: &StokesSpace) -> Result<()> {
    if f.domain() != s.total_poset() {
        return Err(Error::Precondition("functor is not defined on the total poset".into()));
    }
    Ok(())
}

/// `F|_{I_x}`.
pub fn fiber_restriction(f: &VectFunctor, s: &StokesSpace, x: usize) -> Result<VectFunctor> {
    restrict(&s.fiber_inclusion(x), f)
}

/// The comparison `γ_!(F|_{I_x}) -> F|_{I_y}` for a base relation `x ≤ y`.
pub fn comparison_map(f: &VectFunctor, s: &StokesSpace, x: usize, y: usize) -> Result<NatTransformation> {
    let gamma = s
        .transition_map(x, y)
        .ok_or_else(|| Error::Precondition(format!("{} ≰ {}", s.base().label(x), s.base().label(y))))?;
    let fx = fiber_restriction(f, s, x)?;
    let fy = fiber_restriction(f, s, y)?;
    let total = s.total();
    let alpha: Vec<QMatrix> = (0..s.fiber(x).len())
        .map(|a| f.map(total.index(x, a), total.index(y, gamma.apply(a))).clone())
        .collect();
    lan(&gamma, &fx)?.mate_components(&fy, &alpha)
}

pub fn is_cocartesian(f: &VectFunctor, s: &StokesSpace) -> Result<CocartesianVerdict> {
    check_domain(f, s)?;
    let heart_level_only = (0..s.base().len())
        .any(|x| !is_split_dims(&fiber_restriction(f, s, x).expect("fiber restriction")));
    for (x, y) in s.base().covers() {
        if !comparison_map(f, s, x, y)?.is_iso() {
            return Ok(CocartesianVerdict {
                cocartesian: false,
                heart_level_only,
                failure: Some(format!("{}->{}", s.base().label(x), s.base().label(y))),
            });
        }
    }
    Ok(CocartesianVerdict { cocartesian: true, heart_level_only, failure: None })
}

/// Cocartesian and split on every fiber.
pub fn is_stokes(f: &VectFunctor, s: &StokesSpace) -> Result<StokesVerdict> {
    let c = is_cocartesian(f, s)?;
    let non_split_at: Vec<String> = (0..s.base().len())
        .filter(|&x| !is_split_dims(&fiber_restriction(f, s, x).expect("fiber restriction")))
        .map(|x| s.base().label(x).to_string())
        .collect();
    let failure = c
        .failure
        .clone()
        .map(|e| format!("not cocartesian along {e}"))
        .or_else(|| non_split_at.first().map(|x| format!("not split at {x}")));
    Ok(StokesVerdict {
        stokes: c.cocartesian && non_split_at.is_empty(),
        cocartesian: c.cocartesian,
        non_split_at,
        failure,
    })
}
