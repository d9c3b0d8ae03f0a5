use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

use super::{MonotoneMap, Poset};

/// A finite abstract simplicial complex. Faces are sorted vertex-index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    faces: BTreeSet<Vec<usize>>,
}

fn sorted_dedup(mut f: Vec<usize>) -> Vec<usize> {
    f.sort_unstable();
    f.dedup();
    f
}

fn nonempty_subsets(face: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1u64..(1 << face.len())).map(move |mask| {
        face.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect()
    })
}

impl SimplicialComplex {
    /// Checks closure under nonempty subsets and that every vertex is a face.
    pub fn new(vertices: Vec<String>, faces: Vec<Vec<usize>>) -> Result<Self> {
        Self::validate_vertices(&vertices)?;
        let faces: BTreeSet<Vec<usize>> = faces.into_iter().map(sorted_dedup).collect();
        for f in &faces {
            if f.is_empty() {
                return Err(Error::InvalidPoset("empty face".into()));
            }
            if f.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidPoset(format!("face {f:?} uses an unknown vertex")));
            }
            for s in nonempty_subsets(f) {
                if !faces.contains(&s) {
                    return Err(Error::InvalidPoset(format!(
                        "face {f:?} is missing its subset {s:?}"
                    )));
                }
            }
        }
        if let Some(v) = (0..vertices.len()).find(|&v| !faces.contains(&vec![v])) {
            return Err(Error::InvalidPoset(format!("vertex {:?} is not a face", vertices[v])));
        }
        Ok(SimplicialComplex { vertices, faces })
    }

    /// The complex generated by the given faces (and all vertices).
    pub fn generated(vertices: Vec<String>, generators: Vec<Vec<usize>>) -> Result<Self> {
        Self::validate_vertices(&vertices)?;
        let mut faces = BTreeSet::new();
        for v in 0..vertices.len() {
            faces.insert(vec![v]);
        }
        for g in generators {
            let g = sorted_dedup(g);
            if g.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidPoset(format!("face {g:?} uses an unknown vertex")));
            }
            faces.extend(nonempty_subsets(&g));
        }
        Ok(SimplicialComplex { vertices, faces })
    }

    pub fn from_labels(vertices: &[&str], generators: &[&[&str]]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let gens = generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|l| {
                        vs.iter()
                            .position(|v| v == l)
                            .ok_or_else(|| Error::InvalidPoset(format!("unknown vertex {l:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialComplex::generated(vs, gens)
    }

    fn validate_vertices(vertices: &[String]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in vertices {
            if !seen.insert(v) {
                return Err(Error::InvalidPoset(format!("duplicate vertex {v:?}")));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.faces.contains(&sorted_dedup(face.to_vec()))
    }

    pub fn count_faces(&self, dim: usize) -> usize {
        self.faces.iter().filter(|f| f.len() == dim + 1).count()
    }

    pub fn face_label(&self, face: &[usize]) -> String {
        let names: Vec<&str> = face.iter().map(|&v| self.vertices[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Faces in a fixed order: by dimension, then lexicographically.
    fn face_list(&self) -> Vec<Vec<usize>> {
        let mut fs: Vec<Vec<usize>> = self.faces.iter().cloned().collect();
        fs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        fs
    }

    /// Faces ordered by inclusion, labeled `{v,w,...}`.
    pub fn face_poset(&self) -> Poset {
        let fs = self.face_list();
        let labels = fs.iter().map(|f| self.face_label(f)).collect();
        let n = fs.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = fs[i].iter().all(|v| fs[j].contains(v));
            }
        }
        Poset::from_matrix(labels, leq).expect("inclusion is a partial order")
    }

    /// Index of `face` in `face_poset()`.
    pub fn face_index(&self, face: &[usize]) -> Option<usize> {
        let f = sorted_dedup(face.to_vec());
        self.face_list().iter().position(|g| *g == f)
    }

    /// Vertices are the faces of `self`, simplices are chains of faces.
    pub fn barycentric(&self) -> SimplicialComplex {
        let p = self.face_poset();
        let chains = p.strict_chains(usize::MAX);
        let faces: BTreeSet<Vec<usize>> = chains.into_iter().flatten().map(sorted_dedup).collect();
        SimplicialComplex { vertices: p.labels().to_vec(), faces }
    }

    /// Checks that `sub` is a subcomplex (by vertex labels) and that every
    /// face of `self` meets it in the empty set or in a face of `sub`.
    pub fn is_full(&self, sub: &SimplicialComplex) -> Result<bool> {
        let map = self.vertex_map(sub)?;
        let sub_vertices: BTreeSet<usize> = map.values().copied().collect();
        let sub_faces: BTreeSet<Vec<usize>> =
            sub.faces.iter().map(|f| sorted_dedup(f.iter().map(|v| map[v]).collect())).collect();
        if let Some(f) = sub_faces.iter().find(|f| !self.faces.contains(*f)) {
            return Err(Error::InvalidPoset(format!("{f:?} is not a face of the ambient complex")));
        }
        Ok(self.faces.iter().all(|f| {
            let meet: Vec<usize> = f.iter().copied().filter(|v| sub_vertices.contains(v)).collect();
            meet.is_empty() || sub_faces.contains(&meet)
        }))
    }

    fn vertex_map(&self, sub: &SimplicialComplex) -> Result<HashMap<usize, usize>> {
        sub.vertices
            .iter()
            .enumerate()
            .map(|(i, l)| {
                self.vertices
                    .iter()
                    .position(|v| v == l)
                    .map(|j| (i, j))
                    .ok_or_else(|| Error::InvalidPoset(format!("vertex {l:?} not in ambient complex")))
            })
            .collect()
    }

    /// Indices in `face_poset()` of the faces having a vertex in `sub`.
    pub fn star_neighborhood(&self, sub: &SimplicialComplex) -> Result<Vec<usize>> {
        let map = self.vertex_map(sub)?;
        let sv: BTreeSet<usize> = map.values().copied().collect();
        Ok(self
            .face_list()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.iter().any(|v| sv.contains(v)))
            .map(|(i, _)| i)
            .collect())
    }

    /// The inclusion of the face poset of `sub` into its star neighborhood.
    pub fn star_inclusion(&self, sub: &SimplicialComplex) -> Result<MonotoneMap> {
        let map = self.vertex_map(sub)?;
        let star = self.star_neighborhood(sub)?;
        let star_poset = self.face_poset().subposet(&star)?;
        let assignment = sub
            .face_list()
            .iter()
            .map(|f| {
                let g = sorted_dedup(f.iter().map(|v| map[v]).collect());
                let k = self
                    .face_index(&g)
                    .ok_or_else(|| Error::InvalidPoset(format!("{g:?} is not a face")))?;
                Ok(star.iter().position(|&s| s == k).expect("faces of sub lie in the star"))
            })
            .collect::<Result<Vec<_>>>()?;
        MonotoneMap::new(sub.face_poset(), star_poset, assignment)
    }

    /// The full subcomplex spanned by a set of vertex indices.
    pub fn full_subcomplex(&self, vertices: &[usize]) -> SimplicialComplex {
        let vs = sorted_dedup(vertices.to_vec());
        let pos = |v: usize| vs.iter().position(|&w| w == v).unwrap();
        let faces = self
            .faces
            .iter()
            .filter(|f| f.iter().all(|v| vs.contains(v)))
            .map(|f| f.iter().map(|&v| pos(v)).collect())
            .collect();
        SimplicialComplex { vertices: vs.iter().map(|&v| self.vertices[v].clone()).collect(), faces }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::is_final;

    fn two_triangles() -> SimplicialComplex {
        SimplicialComplex::from_labels(&["p", "q", "r", "s"], &[&["p", "q", "r"], &["q", "r", "s"]])
            .unwrap()
    }

    #[test]
    fn edge_face_poset() {
        let k = SimplicialComplex::from_labels(&["v", "w"], &[&["v", "w"]]).unwrap();
        let p = k.face_poset();
        assert_eq!(p.len(), 3);
        assert_eq!(p.strict_pairs().len(), 2);
    }

    #[test]
    fn barycentric_triangle_counts() {
        let t = SimplicialComplex::from_labels(&["a", "b", "c"], &[&["a", "b", "c"]]).unwrap();
        let sd = t.barycentric();
        assert_eq!((sd.count_faces(0), sd.count_faces(1), sd.count_faces(2)), (7, 12, 6));
    }

    #[test]
    fn shared_edge_is_full_and_final() {
        let k = two_triangles();
        let s = SimplicialComplex::from_labels(&["q", "r"], &[&["q", "r"]]).unwrap();
        assert!(k.is_full(&s).unwrap());
        let f = k.star_inclusion(&s).unwrap();
        assert!(is_final(&f).is_final);
    }

    #[test]
    fn non_full_subcomplex() {
        let k = two_triangles();
        let s = SimplicialComplex::from_labels(&["q", "r"], &[]).unwrap();
        assert!(!k.is_full(&s).unwrap());
    }

    #[test]
    fn closure_is_checked() {
        let vs = vec!["a".to_string(), "b".to_string()];
        assert!(SimplicialComplex::new(vs.clone(), vec![vec![0, 1]]).is_err());
        assert!(SimplicialComplex::new(vs, vec![vec![0], vec![1], vec![0, 1]]).is_ok());
    }
}
