//! Left Kan extension along monotone maps, computed pointwise as a colimit
//! over `{a : f(a) ≤ b}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poset::MonotoneMap;

use super::{restrict, NatTransformation, VectFunctor};

/// `f_!G` with the data presenting each value as a quotient of a direct sum.
#[derive(Clone, Debug)]
pub struct Lan {
    pub functor: VectFunctor,
    map: MonotoneMap,
    source: VectFunctor,
    /// For each target `b`: the summands `(a, offset)` of `⊕_{f(a) ≤ b} G(a)`.
    summands: Vec<Vec<(usize, usize)>>,
    /// `P_b : ⊕ G(a) -> (f_!G)(b)`, surjective.
    projections: Vec<QMatrix>,
    lifts: Vec<QMatrix>,
}

pub fn lan(f: &MonotoneMap, g: &VectFunctor) -> Result<Lan> {
    if f.source() != g.domain() {
        return Err(Error::NotAFunctor("Kan extension along a map with the wrong source".into()));
    }
    let (src, tgt) = (f.source(), f.target());
    let mut summands = Vec::with_capacity(tgt.len());
    let mut projections = Vec::with_capacity(tgt.len());
    for b in 0..tgt.len() {
        let below = f.comma_below(b);
        let mut offs = Vec::with_capacity(below.len());
        let mut total = 0;
        for &a in &below {
            offs.push((a, total));
            total += g.dim(a);
        }
        let top = below.iter().copied().find(|&m| below.iter().all(|&a| src.leq(a, m)));
        let proj = match top {
            // A greatest element computes the colimit directly.
            Some(m) => {
                let parts: Vec<QMatrix> = below.iter().map(|&a| g.map(a, m).clone()).collect();
                QMatrix::hstack(&parts, g.dim(m))
            }
            None => {
                let pos: BTreeMap<usize, usize> = offs.iter().copied().collect();
                let edges: Vec<(usize, usize)> = src
                    .covers()
                    .into_iter()
                    .filter(|(a, c)| pos.contains_key(a) && pos.contains_key(c))
                    .collect();
                let cols: usize = edges.iter().map(|&(a, _)| g.dim(a)).sum();
                let mut rel = QMatrix::zeros(total, cols);
                let mut col = 0;
                for (a, c) in edges {
                    let da = g.dim(a);
                    rel.set_block(pos[&c], col, g.map(a, c));
                    let neg = QMatrix::identity(da).scale(&-crate::linalg::q(1));
                    rel.set_block(pos[&a], col, &neg);
                    col += da;
                }
                rel.cokernel().projection
            }
        };
        summands.push(offs);
        projections.push(proj);
    }
    let lifts: Vec<QMatrix> =
        projections.iter().map(|p| p.right_inverse().expect("surjective projection")).collect();
    let dims: Vec<usize> = projections.iter().map(QMatrix::rows).collect();
    let mut maps = BTreeMap::new();
    for (b, c) in tgt.covers() {
        let embed = summand_embedding(&summands[b], &summands[c], g, projections[c].cols());
        maps.insert((b, c), projections[c].mul(&embed).mul(&lifts[b]));
    }
    let functor = VectFunctor::from_generators(tgt.clone(), dims, maps)?;
    Ok(Lan { functor, map: f.clone(), source: g.clone(), summands, projections, lifts })
}

/// Inclusion `⊕_{D_b} G -> ⊕_{D_c} G` for `D_b ⊆ D_c`.
fn summand_embedding(
    from: &[(usize, usize)],
    to: &[(usize, usize)],
    g: &VectFunctor,
    to_dim: usize,
) -> QMatrix {
    let from_dim: usize = from.iter().map(|&(a, _)| g.dim(a)).sum();
    let mut m = QMatrix::zeros(to_dim, from_dim);
    for &(a, off) in from {
        let (_, target_off) = to.iter().find(|&&(a2, _)| a2 == a).expect("down-sets are nested");
        m.set_block(*target_off, off, &QMatrix::identity(g.dim(a)));
    }
    m
}

impl Lan {
    /// Structure map `G(a) -> (f_!G)(f(a))`.
    pub fn unit_component(&self, a: usize) -> QMatrix {
        let b = self.map.apply(a);
        let (_, off) = self.summands[b].iter().find(|&&(x, _)| x == a).expect("a lies over f(a)");
        let d = self.source.dim(a);
        let mut inc = QMatrix::zeros(self.projections[b].cols(), d);
        inc.set_block(*off, 0, &QMatrix::identity(d));
        self.projections[b].mul(&inc)
    }

    /// The unit `G -> f^* f_! G`.
    pub fn unit(&self) -> NatTransformation {
        let target = restrict(&self.map, &self.functor).expect("restriction of the extension");
        let comps = (0..self.source.domain().len()).map(|a| self.unit_component(a)).collect();
        NatTransformation::new_unchecked(self.source.clone(), target, comps)
    }

    /// The map `f_!G -> H` adjoint to `α : G -> f^*H`, given by its
    /// components `α_a : G(a) -> H(f(a))`.
    pub fn mate_components(&self, h: &VectFunctor, alpha: &[QMatrix]) -> Result<NatTransformation> {
        if h.domain() != self.map.target() {
            return Err(Error::NotAFunctor("mate into a functor on the wrong poset".into()));
        }
        let mut comps = Vec::with_capacity(h.domain().len());
        for b in 0..h.domain().len() {
            let parts: Vec<QMatrix> = self.summands[b]
                .iter()
                .map(|&(a, _)| h.map(self.map.apply(a), b).mul(&alpha[a]))
                .collect();
            let t = QMatrix::hstack(&parts, h.dim(b));
            if !t.mul(&self.projections[b].kernel()).is_zero() {
                return Err(Error::NotAFunctor(format!(
                    "components are not natural at {}",
                    h.domain().label(b)
                )));
            }
            comps.push(t.mul(&self.lifts[b]));
        }
        NatTransformation::new(self.functor.clone(), h.clone(), comps)
    }

    pub fn mate(&self, h: &VectFunctor, alpha: &NatTransformation) -> Result<NatTransformation> {
        self.mate_components(h, alpha.components())
    }

    /// The counit `f_! f^* H -> H`, when `G = f^*H`.
    pub fn counit(&self, h: &VectFunctor) -> Result<NatTransformation> {
        let ids: Vec<QMatrix> = (0..self.source.domain().len())
            .map(|a| QMatrix::identity(self.source.dim(a)))
            .collect();
        self.mate_components(h, &ids)
    }
}
