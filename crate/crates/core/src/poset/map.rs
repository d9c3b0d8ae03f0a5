use serde::Serialize;

use crate::error::{Error, Result};

use super::Poset;

/// An order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Poset,
    target: Poset,
    assignment: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Poset, target: Poset, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::NotMonotone(format!(
                "assignment has {} entries for {} elements",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&b| b >= target.len()) {
            return Err(Error::NotMonotone(format!("target index {bad} out of range")));
        }
        for (a, b) in source.strict_pairs() {
            if !target.leq(assignment[a], assignment[b]) {
                return Err(Error::NotMonotone(format!(
                    "{:?} ≤ {:?} but {:?} ≰ {:?}",
                    source.label(a),
                    source.label(b),
                    target.label(assignment[a]),
                    target.label(assignment[b])
                )));
            }
        }
        Ok(MonotoneMap { source, target, assignment })
    }

    /// Builds from `source label -> target label` pairs.
    pub fn from_labels(source: Poset, target: Poset, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            assignment[source.idx(a)?] = target.idx(b)?;
        }
        if let Some(i) = assignment.iter().position(|&x| x == usize::MAX) {
            return Err(Error::NotMonotone(format!("no image for {:?}", source.label(i))));
        }
        MonotoneMap::new(source, target, assignment)
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap { source: p.clone(), target: p.clone(), assignment: (0..p.len()).collect() }
    }

    /// Inclusion of the subposet on `elements`.
    pub fn inclusion(p: &Poset, elements: &[usize]) -> Result<Self> {
        MonotoneMap::new(p.subposet(elements)?, p.clone(), elements.to_vec())
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, a: usize) -> usize {
        self.assignment[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if self.target != other.source {
            return Err(Error::NotMonotone("maps are not composable".into()));
        }
        let assignment = self.assignment.iter().map(|&b| other.assignment[b]).collect();
        Ok(MonotoneMap { source: self.source.clone(), target: other.target.clone(), assignment })
    }

    /// `{a : f(a) ≤ b}` in the source.
    pub fn comma_below(&self, b: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&a| self.target.leq(self.assignment[a], b)).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
    }

    /// Injective and reflecting the order.
    pub fn is_fully_faithful(&self) -> bool {
        self.is_injective()
            && (0..self.source.len()).all(|a| {
                (0..self.source.len()).all(|b| {
                    self.source.leq(a, b) == self.target.leq(self.assignment[a], self.assignment[b])
                })
            })
    }
}

/// How a finality verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Every comma poset has a least or greatest element.
    Certified,
    /// Some comma poset was only shown to be rationally acyclic.
    HomologyChecked,
    /// Some comma poset is empty or has nonzero reduced homology.
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinalityVerdict {
    pub is_final: bool,
    pub certification: Certification,
    /// Target element whose comma poset failed, if any.
    pub obstruction: Option<String>,
}

pub const DEFAULT_HOMOLOGY_BOUND: usize = 3;

/// Finality of `f`: for every `i` in the target, `{j : f(j) ≤ i}` must be
/// nonempty and weakly contractible.
pub fn is_final(f: &MonotoneMap) -> FinalityVerdict {
    is_final_with_bound(f, DEFAULT_HOMOLOGY_BOUND)
}

pub fn is_final_with_bound(f: &MonotoneMap, degree_bound: usize) -> FinalityVerdict {
    let mut certification = Certification::Certified;
    for i in 0..f.target.len() {
        let comma = f.comma_below(i);
        let refuted = |why: &str| FinalityVerdict {
            is_final: false,
            certification: Certification::Refuted,
            obstruction: Some(format!("{} ({why})", f.target.label(i))),
        };
        if comma.is_empty() {
            return refuted("empty");
        }
        let sub = f.source.subposet(&comma).expect("subposet of a poset");
        if sub.minimum().is_some() || sub.maximum().is_some() {
            continue;
        }
        if sub.reduced_betti(degree_bound).iter().any(|&b| b != 0) {
            return refuted("nonzero reduced homology");
        }
        certification = Certification::HomologyChecked;
    }
    FinalityVerdict { is_final: true, certification, obstruction: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_final() {
        let p = Poset::from_labels(&["a", "b", "c"], &[("a", "b")]).unwrap();
        let v = is_final(&MonotoneMap::identity(&p));
        assert!(v.is_final);
        assert_eq!(v.certification, Certification::Certified);
    }

    #[test]
    fn point_into_antichain_is_not_final() {
        let p = Poset::discrete(&["a", "b"]).unwrap();
        let f = MonotoneMap::inclusion(&p, &[0]).unwrap();
        let v = is_final(&f);
        assert!(!v.is_final);
        assert!(v.obstruction.unwrap().starts_with('b'));
    }

    #[test]
    fn homology_fallback() {
        // Target has a top element whose comma poset is the full source: a
        // zig-zag x<u>y<v with no extremum but contractible nerve.
        let src = Poset::from_labels(&["x", "u", "y", "v"], &[("x", "u"), ("y", "u"), ("y", "v")])
            .unwrap();
        let tgt = Poset::point("*");
        let f = MonotoneMap::new(src, tgt, vec![0; 4]).unwrap();
        let v = is_final(&f);
        assert!(v.is_final);
        assert_eq!(v.certification, Certification::HomologyChecked);
    }

    #[test]
    fn non_monotone_rejected() {
        let a = Poset::chain(&["a", "b"]).unwrap();
        assert!(MonotoneMap::new(a.clone(), a, vec![1, 0]).is_err());
    }
}
