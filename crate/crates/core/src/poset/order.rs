use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finite poset on string labels. The order is stored as a dense
/// reflexive relation `leq[i * n + j]`.
#[derive(Clone)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.leq == other.leq
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        write!(f, "Poset{{{:?}; {}}}", self.labels, covers.join(", "))
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::InvalidPoset(format!("duplicate label {l:?}")));
        }
    }
    Ok(index)
}

impl Poset {
    /// The order generated by `pairs` (reflexive-transitive closure).
    /// Fails if the closure is not antisymmetric.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("pair ({a},{b}) out of range")));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::InvalidPoset(format!(
                        "{:?} and {:?} are mutually related",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(Poset { labels, index, leq })
    }

    /// Builds from labels and generating relations given by label.
    pub fn from_labels(labels: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let owned: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let index = index_labels(&owned)?;
        let idx = |s: &str| {
            index.get(s).copied().ok_or_else(|| Error::InvalidPoset(format!("unknown label {s:?}")))
        };
        let p = pairs.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        Poset::new(owned, &p)
    }

    /// Builds from a full relation matrix, checking all three axioms.
    pub fn from_matrix(labels: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        if leq.len() != n * n {
            return Err(Error::InvalidPoset("relation matrix has wrong size".into()));
        }
        for i in 0..n {
            if !leq[i * n + i] {
                return Err(Error::InvalidPoset(format!("not reflexive at {:?}", labels[i])));
            }
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric at {:?}, {:?}",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if leq[i * n + j] && leq[j * n + k] && !leq[i * n + k] {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive at {:?} ≤ {:?} ≤ {:?}",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(Poset { labels, index, leq })
    }

    pub fn discrete<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Poset::new(labels.iter().map(|s| s.as_ref().to_string()).collect(), &[])
    }

    /// Totally ordered in the given order.
    pub fn chain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (1..labels.len()).map(|i| (i - 1, i)).collect();
        Poset::new(labels.iter().map(|s| s.as_ref().to_string()).collect(), &pairs)
    }

    pub fn point(label: &str) -> Self {
        Poset::discrete(&[label]).expect("single point")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn idx(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::InvalidPoset(format!("unknown element {label:?}")))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.len()).any(|c| self.lt(a, c) && self.lt(c, b))
    }

    /// Covering relations `a ⋖ b`, sorted by `(a, b)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.is_cover(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Strict relations `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).filter(move |&b| self.lt(a, b)).map(move |b| (a, b))).collect()
    }

    pub fn lower_covers(&self, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.is_cover(a, b)).collect()
    }

    pub fn upper_covers(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.is_cover(a, b)).collect()
    }

    pub fn down_set(&self, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.leq(a, b)).collect()
    }

    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq(a, b)).collect()
    }

    pub fn is_down_closed(&self, set: &[usize]) -> bool {
        set.iter().all(|&b| (0..self.len()).all(|a| !self.leq(a, b) || set.contains(&a)))
    }

    pub fn is_up_closed(&self, set: &[usize]) -> bool {
        set.iter().all(|&a| (0..self.len()).all(|b| !self.leq(a, b) || set.contains(&b)))
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&b| !(0..self.len()).any(|a| self.lt(a, b))).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| !(0..self.len()).any(|b| self.lt(a, b))).collect()
    }

    /// The least element, if any.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq(a, b)))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq(b, a)))
    }

    pub fn is_discrete(&self) -> bool {
        self.strict_pairs().is_empty()
    }

    pub fn is_total(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.comparable(a, b)))
    }

    /// Deterministic linear extension: Kahn's algorithm, always taking the
    /// available element with the smallest label.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut remaining: Vec<usize> =
            (0..n).map(|b| (0..n).filter(|&a| self.lt(a, b)).count()).collect();
        let mut done = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .filter(|&i| !done[i] && remaining[i] == 0)
                .min_by(|&a, &b| self.labels[a].cmp(&self.labels[b]))
                .expect("acyclic relation");
            done[next] = true;
            out.push(next);
            for b in 0..n {
                if self.lt(next, b) {
                    remaining[b] -= 1;
                }
            }
        }
        out
    }

    /// All strict chains `a_0 < ... < a_k` with at most `max_len` elements,
    /// grouped by length: `out[k]` holds the chains with `k + 1` elements.
    pub fn strict_chains(&self, max_len: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
        if max_len == 0 {
            return out;
        }
        let order = self.linear_extension();
        let mut layer: Vec<Vec<usize>> = order.iter().map(|&a| vec![a]).collect();
        while !layer.is_empty() {
            let mut next = Vec::new();
            if out.len() + 1 < max_len {
                for c in &layer {
                    let last = *c.last().unwrap();
                    for &b in &order {
                        if self.lt(last, b) {
                            let mut d = c.clone();
                            d.push(b);
                            next.push(d);
                        }
                    }
                }
            }
            out.push(layer);
            layer = next;
        }
        out
    }

    /// The induced subposet on `elements`, in the given order.
    pub fn subposet(&self, elements: &[usize]) -> Result<Poset> {
        let labels: Vec<String> = elements.iter().map(|&i| self.labels[i].clone()).collect();
        let m = elements.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
            }
        }
        Poset::from_matrix(labels, leq)
    }

    pub fn opposite(&self) -> Poset {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(b, a);
            }
        }
        Poset { labels: self.labels.clone(), index: self.index.clone(), leq }
    }

    /// Same elements, trivial order.
    pub fn underlying_set(&self) -> Poset {
        Poset::new(self.labels.clone(), &[]).expect("labels already unique")
    }

    /// Renames elements, keeping the order.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Poset> {
        if labels.len() != self.len() {
            return Err(Error::InvalidPoset("relabeling has the wrong length".into()));
        }
        let index = index_labels(&labels)?;
        Ok(Poset { labels, index, leq: self.leq.clone() })
    }

    /// Reduced rational Betti numbers of the nerve in degrees `0..=max_degree`.
    pub fn reduced_betti(&self, max_degree: usize) -> Vec<usize> {
        use crate::linalg::{q, QMatrix};
        let chains = self.strict_chains(max_degree + 2);
        let count = |k: usize| chains.get(k).map_or(0, Vec::len);
        // Boundary ∂_k : C_k -> C_{k-1}, with ∂_0 the augmentation.
        let rank_boundary = |k: usize| -> usize {
            if count(k) == 0 {
                return 0;
            }
            if k == 0 {
                return 1;
            }
            let lower: HashMap<&Vec<usize>, usize> =
                chains[k - 1].iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut m = QMatrix::zeros(count(k - 1), count(k));
            for (j, c) in chains[k].iter().enumerate() {
                for i in 0..c.len() {
                    let mut face = c.clone();
                    face.remove(i);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m[(lower[&face], j)] = q(sign);
                }
            }
            m.rank()
        };
        let ranks: Vec<usize> = (0..=max_degree + 1).map(rank_boundary).collect();
        (0..=max_degree).map(|k| count(k) - ranks[k] - ranks[k + 1]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_covers() {
        let p = Poset::from_labels(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.minimum(), Some(0));
        assert_eq!(p.maximum(), Some(2));
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert!(Poset::from_labels(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        assert!(Poset::discrete(&["a", "a"]).is_err());
        let bad = vec![true, true, false, false];
        assert!(Poset::from_matrix(vec!["a".into(), "b".into()], bad).is_err());
    }

    #[test]
    fn linear_extension_prefers_small_labels() {
        let p = Poset::from_labels(&["z", "b", "a"], &[("z", "a")]).unwrap();
        let ext: Vec<&str> = p.linear_extension().iter().map(|&i| p.label(i)).collect();
        assert_eq!(ext, vec!["b", "z", "a"]);
    }

    #[test]
    fn chains_by_length() {
        let p = Poset::chain(&["a", "b", "c"]).unwrap();
        let ch = p.strict_chains(5);
        assert_eq!(ch.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3, 1]);
    }

    #[test]
    fn betti_of_circle_poset() {
        // Two minima below two maxima: the nerve is a circle.
        let p = Poset::from_labels(
            &["x", "y", "u", "v"],
            &[("x", "u"), ("x", "v"), ("y", "u"), ("y", "v")],
        )
        .unwrap();
        assert_eq!(p.reduced_betti(3), vec![0, 1, 0, 0]);
        assert_eq!(Poset::discrete(&["a", "b"]).unwrap().reduced_betti(1), vec![1, 0]);
        assert_eq!(Poset::chain(&["a", "b"]).unwrap().reduced_betti(2), vec![0, 0, 0]);
    }
}
