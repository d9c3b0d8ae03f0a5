//! Level structures: chains of level morphisms ending at the point.

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::poset::{FiberMap, StokesSpace};

/// `I^r -> ... -> I^0` over a common base, stored as `spaces[j] = I^j` and
/// `maps[j] : I^{j+1} -> I^j`.
#[derive(Clone, Debug)]
pub struct LevelStructure {
    spaces: Vec<StokesSpace>,
    maps: Vec<FiberMap>,
    sequence: Vec<Q>,
}

impl LevelStructure {
    /// Checks that each step is a level morphism, that every `I^j` has
    /// bijective transitions on underlying sets and that `I^0` has
    /// one-element fibers.
    pub fn new(spaces: Vec<StokesSpace>, maps: Vec<FiberMap>, sequence: Vec<Q>) -> Result<Self> {
        if spaces.is_empty() || maps.len() + 1 != spaces.len() {
            return Err(Error::Precondition("a level structure needs r+1 spaces and r maps".into()));
        }
        for (j, m) in maps.iter().enumerate() {
            if *m.source() != spaces[j + 1] || *m.target() != spaces[j] {
                return Err(Error::Precondition(format!("step {j} does not connect I^{} to I^{j}", j + 1)));
            }
            if !m.is_level_morphism() {
                return Err(Error::Precondition(format!("step I^{} -> I^{j} is not a level morphism", j + 1)));
            }
        }
        if let Some(j) = spaces.iter().position(|s| !s.is_locally_constant_set()) {
            return Err(Error::Precondition(format!("I^{j} is not locally constant as a set")));
        }
        if spaces[0].fibers().iter().any(|f| f.len() != 1) {
            return Err(Error::Precondition("I^0 must be the point".into()));
        }
        Ok(LevelStructure { spaces, maps, sequence })
    }

    pub fn spaces(&self) -> &[StokesSpace] {
        &self.spaces
    }

    pub fn maps(&self) -> &[FiberMap] {
        &self.maps
    }

    /// The auxiliary sequence `m(0) < ... < m(r) = 0`.
    pub fn sequence(&self) -> &[Q] {
        &self.sequence
    }

    pub fn top(&self) -> &StokesSpace {
        self.spaces.last().unwrap()
    }

    /// The map `I^r -> I^j`.
    pub fn projection_to(&self, j: usize) -> FiberMap {
        let mut p = FiberMap::identity(self.top());
        for m in self.maps[j..].iter().rev() {
            p = p.then(m).expect("consecutive steps compose");
        }
        p
    }
}
