use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poset::{MonotoneMap, Poset};

/// A functor from a finite poset to finite-dimensional rational vector
/// spaces. All maps `F(a -> b)` for `a ≤ b` are stored; they are derived from
/// generating maps at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectFunctor {
    domain: Poset,
    dims: Vec<usize>,
    transport: Vec<Vec<Option<QMatrix>>>,
}

impl VectFunctor {
    /// Builds a functor from maps on a set of strict relations that contains
    /// every covering relation. Every composite is checked: two chains of
    /// generators with the same endpoints must give the same matrix.
    pub fn from_generators(
        domain: Poset,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), QMatrix>,
    ) -> Result<Self> {
        let n = domain.len();
        if dims.len() != n {
            return Err(Error::NotAFunctor(format!("{} dimensions for {n} elements", dims.len())));
        }
        let name = |a: usize, b: usize| format!("{}->{}", domain.label(a), domain.label(b));
        for (&(a, b), m) in &maps {
            if a >= n || b >= n || !domain.lt(a, b) {
                return Err(Error::NotAFunctor(format!("map on a non-relation {a}->{b}")));
            }
            if m.shape() != (dims[b], dims[a]) {
                return Err(Error::NotAFunctor(format!(
                    "map {} has shape {:?}, expected {:?}",
                    name(a, b),
                    m.shape(),
                    (dims[b], dims[a])
                )));
            }
        }
        for (a, b) in domain.covers() {
            if !maps.contains_key(&(a, b)) {
                return Err(Error::NotAFunctor(format!("missing map on cover {}", name(a, b))));
            }
        }
        let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in maps.keys() {
            into[b].push(a);
        }
        let mut transport: Vec<Vec<Option<QMatrix>>> = vec![vec![None; n]; n];
        for b in domain.linear_extension() {
            transport[b][b] = Some(QMatrix::identity(dims[b]));
            for a in 0..n {
                if !domain.lt(a, b) {
                    continue;
                }
                let mut found: Option<QMatrix> = None;
                for &c in &into[b] {
                    if !domain.leq(a, c) {
                        continue;
                    }
                    let m = maps[&(c, b)].mul(transport[a][c].as_ref().expect("earlier"));
                    match &found {
                        None => found = Some(m),
                        Some(prev) if *prev != m => {
                            return Err(Error::NotAFunctor(format!(
                                "composites {} disagree (through {})",
                                name(a, b),
                                domain.label(c)
                            )));
                        }
                        Some(_) => {}
                    }
                }
                transport[a][b] = Some(found.expect("generators contain all covers"));
            }
        }
        Ok(VectFunctor { domain, dims, transport })
    }

    /// The zero functor.
    pub fn zero(domain: &Poset) -> Self {
        Self::constant(domain, 0)
    }

    /// `Q^n` with identity maps.
    pub fn constant(domain: &Poset, n: usize) -> Self {
        let maps = domain.covers().into_iter().map(|c| (c, QMatrix::identity(n))).collect();
        Self::from_generators(domain.clone(), vec![n; domain.len()], maps).expect("constant")
    }

    /// The representable `P_a`: `Q` on the up-set of `a`, identities there.
    pub fn representable(domain: &Poset, a: usize) -> Self {
        let dims: Vec<usize> = (0..domain.len()).map(|b| usize::from(domain.leq(a, b))).collect();
        Self::with_cover_maps(domain, dims, |_, _, r, c| {
            if r == 1 && c == 1 {
                QMatrix::identity(1)
            } else {
                QMatrix::zeros(r, c)
            }
        })
    }

    /// `Q` at `a`, zero elsewhere.
    pub fn skyscraper(domain: &Poset, a: usize) -> Self {
        let dims: Vec<usize> = (0..domain.len()).map(|b| usize::from(a == b)).collect();
        Self::with_cover_maps(domain, dims, |_, _, r, c| QMatrix::zeros(r, c))
    }

    fn with_cover_maps(
        domain: &Poset,
        dims: Vec<usize>,
        f: impl Fn(usize, usize, usize, usize) -> QMatrix,
    ) -> Self {
        let maps = domain.covers().into_iter().map(|(a, b)| ((a, b), f(a, b, dims[b], dims[a]))).collect();
        Self::from_generators(domain.clone(), dims, maps).expect("valid functor")
    }

    pub fn domain(&self) -> &Poset {
        &self.domain
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, a: usize) -> usize {
        self.dims[a]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// `F(a -> b)`; panics unless `a ≤ b`.
    pub fn map(&self, a: usize, b: usize) -> &QMatrix {
        self.transport[a][b].as_ref().unwrap_or_else(|| {
            panic!("{} ≰ {}", self.domain.label(a), self.domain.label(b))
        })
    }

    pub fn try_map(&self, a: usize, b: usize) -> Option<&QMatrix> {
        self.transport[a][b].as_ref()
    }

    /// Maps on covering relations.
    pub fn cover_maps(&self) -> BTreeMap<(usize, usize), QMatrix> {
        self.domain.covers().into_iter().map(|(a, b)| ((a, b), self.map(a, b).clone())).collect()
    }

    /// Same data on a poset with the same elements and order but new labels.
    pub fn relabel_domain(&self, domain: Poset) -> Result<Self> {
        if domain.len() != self.domain.len()
            || (0..domain.len()).any(|a| (0..domain.len()).any(|b| domain.leq(a, b) != self.domain.leq(a, b)))
        {
            return Err(Error::NotAFunctor("relabeled domain has a different order".into()));
        }
        Ok(VectFunctor { domain, dims: self.dims.clone(), transport: self.transport.clone() })
    }

    pub fn direct_sum(&self, other: &VectFunctor) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::NotAFunctor("direct sum of functors on different posets".into()));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .domain
            .covers()
            .into_iter()
            .map(|(a, b)| ((a, b), QMatrix::block_diag(&[self.map(a, b).clone(), other.map(a, b).clone()])))
            .collect();
        VectFunctor::from_generators(self.domain.clone(), dims, maps)
    }

    /// Identity natural transformation.
    pub fn identity(&self) -> NatTransformation {
        NatTransformation {
            source: self.clone(),
            target: self.clone(),
            components: self.dims.iter().map(|&d| QMatrix::identity(d)).collect(),
        }
    }
}

/// Pullback `f^*F` along a monotone map.
pub fn restrict(f: &MonotoneMap, functor: &VectFunctor) -> Result<VectFunctor> {
    if f.target() != functor.domain() {
        return Err(Error::NotAFunctor("restriction along a map with the wrong target".into()));
    }
    let src = f.source();
    let dims = (0..src.len()).map(|a| functor.dim(f.apply(a))).collect();
    let maps = src
        .covers()
        .into_iter()
        .map(|(a, b)| ((a, b), functor.map(f.apply(a), f.apply(b)).clone()))
        .collect();
    VectFunctor::from_generators(src.clone(), dims, maps)
}

/// A natural transformation between functors on the same poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransformation {
    source: VectFunctor,
    target: VectFunctor,
    components: Vec<QMatrix>,
}

impl NatTransformation {
    pub fn new(source: VectFunctor, target: VectFunctor, components: Vec<QMatrix>) -> Result<Self> {
        if source.domain != target.domain {
            return Err(Error::NotAFunctor("transformation between different posets".into()));
        }
        let p = &source.domain;
        if components.len() != p.len() {
            return Err(Error::NotAFunctor("one component per element expected".into()));
        }
        for (a, c) in components.iter().enumerate() {
            if c.shape() != (target.dim(a), source.dim(a)) {
                return Err(Error::NotAFunctor(format!(
                    "component at {} has shape {:?}, expected {:?}",
                    p.label(a),
                    c.shape(),
                    (target.dim(a), source.dim(a))
                )));
            }
        }
        for (a, b) in p.covers() {
            let lhs = target.map(a, b).mul(&components[a]);
            let rhs = components[b].mul(source.map(a, b));
            if lhs != rhs {
                return Err(Error::NotAFunctor(format!(
                    "naturality fails on {}->{}",
                    p.label(a),
                    p.label(b)
                )));
            }
        }
        Ok(NatTransformation { source, target, components })
    }

    pub(crate) fn new_unchecked(
        source: VectFunctor,
        target: VectFunctor,
        components: Vec<QMatrix>,
    ) -> Self {
        debug_assert!(NatTransformation::new(source.clone(), target.clone(), components.clone()).is_ok());
        NatTransformation { source, target, components }
    }

    pub fn source(&self) -> &VectFunctor {
        &self.source
    }

    pub fn target(&self) -> &VectFunctor {
        &self.target
    }

    pub fn component(&self, a: usize) -> &QMatrix {
        &self.components[a]
    }

    pub fn components(&self) -> &[QMatrix] {
        &self.components
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(QMatrix::is_invertible)
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.rows())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTransformation) -> Result<NatTransformation> {
        if self.target != other.source {
            return Err(Error::NotAFunctor("transformations are not composable".into()));
        }
        let components = self.components.iter().zip(&other.components).map(|(f, g)| g.mul(f)).collect();
        Ok(NatTransformation { source: self.source.clone(), target: other.target.clone(), components })
    }

    pub fn inverse(&self) -> Option<NatTransformation> {
        let components = self.components.iter().map(QMatrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(NatTransformation { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// Pointwise cokernel functor with its projection from the target.
    pub fn cokernel(&self) -> (VectFunctor, NatTransformation) {
        let p = self.source.domain();
        let cok: Vec<_> = self.components.iter().map(QMatrix::cokernel).collect();
        let lifts: Vec<QMatrix> =
            cok.iter().map(|c| c.projection.right_inverse().expect("projection is surjective")).collect();
        let dims = cok.iter().map(|c| c.dim).collect();
        let maps = p
            .covers()
            .into_iter()
            .map(|(a, b)| ((a, b), cok[b].projection.mul(self.target.map(a, b)).mul(&lifts[a])))
            .collect();
        let functor = VectFunctor::from_generators(p.clone(), dims, maps).expect("quotient functor");
        let proj = cok.into_iter().map(|c| c.projection).collect();
        let nat = NatTransformation::new_unchecked(self.target.clone(), functor.clone(), proj);
        (functor, nat)
    }
}
