//! JSON documents for posets, fibrations, functors, simplicial complexes,
//! irregular classes, polyhedral data and Stokes matrices.
//!
//! Rationals are `"p/q"` strings; matrices are arrays of rows. Relations in
//! `leq` are generating pairs (the order is their reflexive-transitive
//! closure) given either by index or by label; output always lists the
//! covering relations by index.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functor::VectFunctor;
use crate::geometry::{
    AffineForm, IrregularClass, PolyhedralFiber, Polyhedron, PuiseuxExponential, StokesData, Term,
};
use crate::linalg::{format_q, parse_q, QMatrix, Q};
use crate::poset::{Poset, SimplicialComplex, StokesSpace};

/// An element reference: index or label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

impl ElementRef {
    fn resolve(&self, labels: &[String]) -> Result<usize> {
        match self {
            ElementRef::Index(i) if *i < labels.len() => Ok(*i),
            ElementRef::Index(i) => Err(Error::Parse(format!("element index {i} out of range"))),
            ElementRef::Label(l) => labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::Parse(format!("unknown element {l:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(ElementRef, ElementRef)>,
}

impl PosetDoc {
    pub fn from_poset(p: &Poset) -> Self {
        PosetDoc {
            elements: p.labels().to_vec(),
            leq: p.covers().into_iter().map(|(a, b)| (ElementRef::Index(a), ElementRef::Index(b))).collect(),
        }
    }

    pub fn build(&self) -> Result<Poset> {
        let pairs = self
            .leq
            .iter()
            .map(|(a, b)| Ok((a.resolve(&self.elements)?, b.resolve(&self.elements)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::new(self.elements.clone(), &pairs)
    }
}

fn split_arrow(key: &str) -> Result<(&str, &str)> {
    key.split_once("->")
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::Parse(format!("expected \"x->y\", got {key:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StokesSpaceDoc {
    pub base: PosetDoc,
    pub fibers: BTreeMap<String, PosetDoc>,
    /// `"x->y"` on covering relations, each a map of fiber labels.
    #[serde(default)]
    pub transitions: BTreeMap<String, BTreeMap<String, String>>,
}

impl StokesSpaceDoc {
    pub fn from_space(s: &StokesSpace) -> Self {
        let base = s.base();
        let fibers = (0..base.len())
            .map(|x| (base.label(x).to_string(), PosetDoc::from_poset(s.fiber(x))))
            .collect();
        let transitions = s
            .cover_transitions()
            .into_iter()
            .map(|((x, y), m)| {
                let (fx, fy) = (s.fiber(x), s.fiber(y));
                let map = m.iter().enumerate().map(|(a, &b)| (fx.label(a).to_string(), fy.label(b).to_string()));
                (format!("{}->{}", base.label(x), base.label(y)), map.collect())
            })
            .collect();
        StokesSpaceDoc { base: PosetDoc::from_poset(base), fibers, transitions }
    }

    pub fn build(&self) -> Result<StokesSpace> {
        let base = self.base.build()?;
        let mut fibers = Vec::with_capacity(base.len());
        for l in base.labels() {
            let doc = self.fibers.get(l).ok_or_else(|| Error::Parse(format!("no fiber for base element {l:?}")))?;
            fibers.push(doc.build()?);
        }
        if let Some(extra) = self.fibers.keys().find(|k| base.index_of(k).is_none()) {
            return Err(Error::Parse(format!("fiber given for unknown base element {extra:?}")));
        }
        let mut transitions = BTreeMap::new();
        for (key, map) in &self.transitions {
            let (x, y) = split_arrow(key)?;
            let (x, y) = (base.idx(x)?, base.idx(y)?);
            let (fx, fy) = (&fibers[x], &fibers[y]);
            let mut assignment = vec![usize::MAX; fx.len()];
            for (a, b) in map {
                assignment[fx.idx(a)?] = fy.idx(b)?;
            }
            if let Some(a) = assignment.iter().position(|&v| v == usize::MAX) {
                return Err(Error::Parse(format!("transition {key} does not assign {:?}", fx.label(a))));
            }
            transitions.insert((x, y), assignment);
        }
        StokesSpace::new(base, fibers, transitions)
    }
}

fn matrix_doc(m: &QMatrix) -> Vec<Vec<String>> {
    m.to_strings()
}

fn parse_matrix(rows: &[Vec<String>], shape: (usize, usize), what: &str) -> Result<QMatrix> {
    if rows.len() != shape.0 {
        return Err(Error::Parse(format!("{what}: {} rows, expected {}", rows.len(), shape.0)));
    }
    let parsed = rows
        .iter()
        .map(|r| {
            if r.len() != shape.1 {
                return Err(Error::Parse(format!("{what}: row of length {}, expected {}", r.len(), shape.1)));
            }
            r.iter().map(|x| parse_q(x)).collect::<Result<Vec<Q>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    QMatrix::from_rows(parsed, shape.1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectFunctorDoc {
    /// May be omitted when the domain is supplied separately.
    #[serde(default)]
    pub domain: PosetDoc,
    pub dims: BTreeMap<String, usize>,
    /// `"a->b"` on strict relations containing every covering relation.
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<String>>>,
}

impl VectFunctorDoc {
    pub fn from_functor(f: &VectFunctor) -> Self {
        let p = f.domain();
        VectFunctorDoc {
            domain: PosetDoc::from_poset(p),
            dims: (0..p.len()).map(|a| (p.label(a).to_string(), f.dim(a))).collect(),
            maps: f
                .cover_maps()
                .iter()
                .map(|(&(a, b), m)| (format!("{}->{}", p.label(a), p.label(b)), matrix_doc(m)))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<VectFunctor> {
        self.build_on(self.domain.build()?)
    }

    /// Builds on a given domain, whose labels must match.
    pub fn build_on(&self, domain: Poset) -> Result<VectFunctor> {
        let dims = domain.labels().iter().map(|l| self.dims.get(l).copied().unwrap_or(0)).collect::<Vec<_>>();
        if let Some(extra) = self.dims.keys().find(|k| domain.index_of(k).is_none()) {
            return Err(Error::Parse(format!("dimension given for unknown element {extra:?}")));
        }
        let mut maps = BTreeMap::new();
        for (key, rows) in &self.maps {
            let (a, b) = split_arrow(key)?;
            let (a, b) = (domain.idx(a)?, domain.idx(b)?);
            maps.insert((a, b), parse_matrix(rows, (dims[b], dims[a]), key)?);
        }
        // Maps into or out of zero spaces may be omitted.
        for (a, b) in domain.covers() {
            if dims[a] == 0 || dims[b] == 0 {
                maps.entry((a, b)).or_insert_with(|| QMatrix::zeros(dims[b], dims[a]));
            }
        }
        VectFunctor::from_generators(domain, dims, maps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialDoc {
    pub vertices: Vec<String>,
    pub faces: Vec<Vec<ElementRef>>,
}

impl SimplicialDoc {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        SimplicialDoc {
            vertices: k.vertices().to_vec(),
            faces: k.faces().map(|f| f.iter().map(|&v| ElementRef::Index(v)).collect()).collect(),
        }
    }

    /// Faces generate the complex; missing subsets are added.
    pub fn build(&self) -> Result<SimplicialComplex> {
        let faces = self
            .faces
            .iter()
            .map(|f| f.iter().map(|v| v.resolve(&self.vertices)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SimplicialComplex::generated(self.vertices.clone(), faces)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub k: String,
    pub modulus: String,
    pub angle_pi: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentialDoc {
    pub terms: Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramification: Option<usize>,
    pub exponentials: Vec<ExponentialDoc>,
}

impl IrregularDoc {
    pub fn from_class(c: &IrregularClass) -> Self {
        let exponentials = c
            .exponentials()
            .iter()
            .zip(c.labels())
            .map(|(e, l)| ExponentialDoc {
                terms: e
                    .terms()
                    .iter()
                    .map(|t| TermDoc { k: format_q(&t.k), modulus: format_q(&t.modulus), angle_pi: format_q(&t.angle) })
                    .collect(),
                label: Some(l.clone()),
            })
            .collect();
        IrregularDoc { ramification: Some(c.ramification()), exponentials }
    }

    pub fn build(&self) -> Result<IrregularClass> {
        let exps = self
            .exponentials
            .iter()
            .map(|e| {
                let terms = e
                    .terms
                    .iter()
                    .map(|t| Term::new(parse_q(&t.k)?, parse_q(&t.modulus)?, parse_q(&t.angle_pi)?))
                    .collect::<Result<Vec<_>>>()?;
                PuiseuxExponential::new(terms)
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = if self.exponentials.iter().all(|e| e.label.is_some()) {
            Some(self.exponentials.iter().map(|e| e.label.clone().unwrap_or_default()).collect())
        } else {
            None
        };
        IrregularClass::new(exps, labels, self.ramification)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineFormDoc {
    pub coeffs: Vec<String>,
    #[serde(rename = "const")]
    pub constant: String,
}

impl AffineFormDoc {
    pub fn from_form(f: &AffineForm) -> Self {
        AffineFormDoc { coeffs: f.coeffs.iter().map(format_q).collect(), constant: format_q(&f.constant) }
    }

    pub fn build(&self) -> Result<AffineForm> {
        AffineForm::new(self.coeffs.iter().map(|c| parse_q(c)).collect::<Result<_>>()?, parse_q(&self.constant)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedralFiberDoc {
    pub elements: Vec<String>,
    /// Sign-vector label (`"+-0"`) to strict generating pairs.
    #[serde(default)]
    pub orders: BTreeMap<String, Vec<(String, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedralDoc {
    pub n: usize,
    #[serde(default)]
    pub halfspaces: Vec<AffineFormDoc>,
    pub forms: Vec<AffineFormDoc>,
    pub fiber: PolyhedralFiberDoc,
}

impl PolyhedralDoc {
    pub fn build(&self) -> Result<(Polyhedron, Vec<AffineForm>, PolyhedralFiber)> {
        let halfspaces = self.halfspaces.iter().map(AffineFormDoc::build).collect::<Result<Vec<_>>>()?;
        let forms = self.forms.iter().map(AffineFormDoc::build).collect::<Result<Vec<_>>>()?;
        let fiber = PolyhedralFiber { elements: self.fiber.elements.clone(), orders: self.fiber.orders.clone() };
        Ok((Polyhedron::new(self.n, halfspaces)?, forms, fiber))
    }
}

/// Stokes matrices over the circle of an irregular class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StokesDataDoc {
    pub dims: Vec<usize>,
    pub matrices: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal_monodromy: Option<Vec<Vec<Vec<String>>>>,
}

impl StokesDataDoc {
    pub fn from_data(d: &StokesData) -> Self {
        StokesDataDoc {
            dims: d.dims.clone(),
            matrices: d.matrices.iter().map(matrix_doc).collect(),
            formal_monodromy: Some(d.formal_monodromy.iter().map(matrix_doc).collect()),
        }
    }

    pub fn build(&self) -> Result<StokesData> {
        let r: usize = self.dims.iter().sum();
        let matrices = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, m)| parse_matrix(m, (r, r), &format!("Stokes matrix {i}")))
            .collect::<Result<Vec<_>>>()?;
        let mut data = StokesData::new(self.dims.clone(), matrices);
        if let Some(h) = &self.formal_monodromy {
            if h.len() != self.dims.len() {
                return Err(Error::Parse(format!("{} formal monodromy blocks for {} exponentials", h.len(), self.dims.len())));
            }
            data.formal_monodromy = h
                .iter()
                .zip(&self.dims)
                .enumerate()
                .map(|(i, (m, &d))| parse_matrix(m, (d, d), &format!("formal monodromy {i}")))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(data)
    }
}

pub fn to_string_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
