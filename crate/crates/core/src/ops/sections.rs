//! Cocartesian sections and Stokes loci.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::StokesSpace;

/// A choice of fiber element per base element, compatible with transitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CocartesianSection {
    pub choice: Vec<usize>,
}

impl CocartesianSection {
    pub fn new(s: &StokesSpace, choice: Vec<usize>) -> Result<Self> {
        if choice.len() != s.base().len() {
            return Err(Error::Precondition("one fiber element per base element expected".into()));
        }
        for (x, y) in s.base().covers() {
            if s.transport(x, y).unwrap()[choice[x]] != choice[y] {
                return Err(Error::Incoherent(format!(
                    "section is not compatible with {}->{}",
                    s.base().label(x),
                    s.base().label(y)
                )));
            }
        }
        Ok(CocartesianSection { choice })
    }

    pub fn labels(&self, s: &StokesSpace) -> Vec<String> {
        self.choice.iter().enumerate().map(|(x, &a)| s.fiber(x).label(a).to_string()).collect()
    }
}

/// All cocartesian sections, by backtracking along a linear extension.
pub fn sections(s: &StokesSpace) -> Vec<CocartesianSection> {
    let order = s.base().linear_extension();
    let mut choice = vec![usize::MAX; s.base().len()];
    let mut out = Vec::new();
    fn go(s: &StokesSpace, order: &[usize], i: usize, choice: &mut Vec<usize>, out: &mut Vec<CocartesianSection>) {
        if i == order.len() {
            out.push(CocartesianSection { choice: choice.clone() });
            return;
        }
        let y = order[i];
        let forced: Vec<usize> =
            s.base().lower_covers(y).into_iter().map(|x| s.transport(x, y).unwrap()[choice[x]]).collect();
        let candidates: Vec<usize> = match forced.first() {
            Some(&a) if forced.iter().all(|&b| b == a) => vec![a],
            Some(_) => vec![],
            None => (0..s.fiber(y).len()).collect(),
        };
        for a in candidates {
            choice[y] = a;
            go(s, order, i + 1, choice, out);
        }
        choice[y] = usize::MAX;
    }
    go(s, &order, 0, &mut choice, &mut out);
    out.sort();
    out
}

/// Base elements where the two sections are incomparable. The result is
/// down-closed: comparability at `x` propagates along transitions to
/// every `y ≥ x`.
pub fn stokes_locus(s: &StokesSpace, sigma: &CocartesianSection, tau: &CocartesianSection) -> Result<Vec<usize>> {
    if sigma == tau {
        return Err(Error::Precondition("Stokes locus of a section with itself".into()));
    }
    let locus: Vec<usize> = (0..s.base().len())
        .filter(|&x| !s.fiber(x).comparable(sigma.choice[x], tau.choice[x]))
        .collect();
    assert!(s.base().is_down_closed(&locus), "Stokes locus must be closed");
    Ok(locus)
}
