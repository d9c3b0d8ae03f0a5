//! Graduation along fiberwise maps and the splitting criterion.
//!
//! `(Gr_p F)(x,a) = F(x,a) / Σ im F((x,a') -> (x,a))` over `a' ≤ a` with
//! `p(a') < p(a)`. This is the heart-level value of the cofiber of
//! `F|_{I_<} -> F|_{I_≤}` induced to `I_p`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poset::{FiberMap, MonotoneMap, Poset, StokesSpace};

use super::{lan, NatTransformation, VectFunctor};

/// A graded functor with the quotient maps `F(a) -> Gr(a)` and chosen lifts.
#[derive(Clone, Debug)]
pub struct Graded {
    pub functor: VectFunctor,
    pub projections: Vec<QMatrix>,
    pub lifts: Vec<QMatrix>,
}

/// Quotient of `F(a)` by the images of `F(a') -> F(a)` for `a'` in `lower[a]`.
fn quotients(f: &VectFunctor, lower: impl Fn(usize) -> Vec<usize>) -> (Vec<QMatrix>, Vec<QMatrix>) {
    let n = f.domain().len();
    let mut projections = Vec::with_capacity(n);
    let mut lifts = Vec::with_capacity(n);
    for a in 0..n {
        let parts: Vec<QMatrix> = lower(a).into_iter().map(|b| f.map(b, a).clone()).collect();
        let span = QMatrix::hstack(&parts, f.dim(a));
        let p = span.cokernel().projection;
        lifts.push(p.right_inverse().expect("projection is surjective"));
        projections.push(p);
    }
    (projections, lifts)
}

fn descend(
    f: &VectFunctor,
    domain: &Poset,
    projections: Vec<QMatrix>,
    lifts: Vec<QMatrix>,
) -> Result<Graded> {
    let dims = projections.iter().map(QMatrix::rows).collect();
    let maps: BTreeMap<(usize, usize), QMatrix> = domain
        .covers()
        .into_iter()
        .map(|(a, b)| ((a, b), projections[b].mul(f.map(a, b)).mul(&lifts[a])))
        .collect();
    let functor = VectFunctor::from_generators(domain.clone(), dims, maps)?;
    Ok(Graded { functor, projections, lifts })
}

/// Graduation of a functor on a poset: the quotient by all strictly lower
/// images, as a functor on the underlying set.
pub fn graded_on_poset(f: &VectFunctor) -> Graded {
    let p = f.domain();
    let (pr, li) = quotients(f, |a| (0..p.len()).filter(|&b| p.lt(b, a)).collect());
    descend(f, &p.underlying_set(), pr, li).expect("discrete domain")
}

/// `Gr_p F` on the total poset of `I_p`, for `F` on the total poset of the
/// source of `p`. The target of `p` must have locally constant underlying
/// sets so that the quotients are compatible with transitions.
pub fn gr_p(f: &VectFunctor, p: &FiberMap) -> Result<Graded> {
    let s = p.source();
    if f.domain() != s.total_poset() {
        return Err(Error::Precondition("functor is not defined on the source total poset".into()));
    }
    if !p.target().is_locally_constant_set() {
        return Err(Error::Precondition(
            "graduation needs bijective transitions on the target underlying sets".into(),
        ));
    }
    let total = s.total();
    let lower = |u: usize| {
        let (x, a) = total.elements[u];
        let fib = s.fiber(x);
        let px = p.at(x);
        let jx = p.target().fiber(x);
        (0..fib.len())
            .filter(|&b| fib.lt(b, a) && jx.lt(px[b], px[a]))
            .map(|b| total.index(x, b))
            .collect::<Vec<_>>()
    };
    let (pr, li) = quotients(f, lower);
    let (ip, _) = p.fibration_ip();
    descend(f, ip.total_poset(), pr, li)
}

/// Graduation along the identity: a functor on the total poset of `S^set`.
pub fn graded(f: &VectFunctor, s: &StokesSpace) -> Result<Graded> {
    gr_p(f, &FiberMap::identity(s))
}

/// Outcome of the splitting test on a poset.
#[derive(Clone, Debug)]
pub struct SplitVerdict {
    pub split: bool,
    pub graded: Graded,
    /// `dim F(a) - Σ_{b ≤ a} dim Gr(b)`, zero everywhere iff split.
    pub defects: Vec<i64>,
    /// On success, an isomorphism `i_!(Gr F) -> F`.
    pub witness: Option<NatTransformation>,
}

/// `F` is split iff `dim F(a) = Σ_{b ≤ a} dim Gr F(b)` for all `a`. The
/// canonical map `i_!(Gr F) -> F` built from lifts is always surjective, so
/// equality of dimensions makes it an isomorphism.
pub fn is_split(f: &VectFunctor) -> SplitVerdict {
    let g = graded_on_poset(f);
    let p = f.domain();
    let defects: Vec<i64> = (0..p.len())
        .map(|a| {
            let sum: usize = (0..p.len()).filter(|&b| p.leq(b, a)).map(|b| g.functor.dim(b)).sum();
            f.dim(a) as i64 - sum as i64
        })
        .collect();
    let split = defects.iter().all(|&d| d == 0);
    let witness = split.then(|| {
        let w = induced_map(f, &g).expect("lifts give a natural map");
        assert!(w.is_iso(), "dimension criterion and witness disagree");
        w
    });
    SplitVerdict { split, graded: g, defects, witness }
}

/// Cheap dimension-only splitting test.
pub fn is_split_dims(f: &VectFunctor) -> bool {
    let g = graded_on_poset(f);
    let p = f.domain();
    (0..p.len()).all(|a| {
        f.dim(a) == (0..p.len()).filter(|&b| p.leq(b, a)).map(|b| g.functor.dim(b)).sum::<usize>()
    })
}

/// The map `i_!(Gr F) -> F` adjoint to the lifts `Gr F(a) -> F(a)`.
pub fn induced_map(f: &VectFunctor, g: &Graded) -> Result<NatTransformation> {
    let i = MonotoneMap::new(f.domain().underlying_set(), f.domain().clone(), (0..f.domain().len()).collect())?;
    let l = lan(&i, &g.functor)?;
    l.mate_components(f, &g.lifts)
}

/// `i_!(V)` for `V` on the underlying set of `p`.
pub fn induce_from_set(p: &Poset, v: &VectFunctor) -> Result<VectFunctor> {
    let i = MonotoneMap::new(p.underlying_set(), p.clone(), (0..p.len()).collect())?;
    Ok(lan(&i, v)?.functor)
}

/// `i_!(V)` for the underlying-set inclusion of a fibration.
pub fn induce_from_underlying(s: &StokesSpace, v: &VectFunctor) -> Result<VectFunctor> {
    let inc = s.underlying_inclusion().total_map();
    Ok(lan(&inc, v)?.functor)
}
