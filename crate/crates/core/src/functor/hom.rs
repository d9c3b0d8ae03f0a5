//! Hom spaces, derived Hom complexes and isomorphism search.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{q, CochainComplex, QMatrix, Q};

use super::{NatTransformation, VectFunctor};

fn same_domain(f: &VectFunctor, g: &VectFunctor) -> Result<()> {
    if f.domain() != g.domain() {
        return Err(Error::NotAFunctor("functors live on different posets".into()));
    }
    Ok(())
}

/// Offsets of the components `Hom(F(a), G(a))` in the flattened unknowns.
fn component_offsets(f: &VectFunctor, g: &VectFunctor) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(f.domain().len());
    let mut total = 0;
    for a in 0..f.domain().len() {
        offs.push(total);
        total += f.dim(a) * g.dim(a);
    }
    (offs, total)
}

/// Basis of the space of natural transformations `F -> G`, computed as the
/// kernel of the naturality constraints on covering relations.
pub fn hom_space(f: &VectFunctor, g: &VectFunctor) -> Result<Vec<NatTransformation>> {
    same_domain(f, g)?;
    let p = f.domain();
    let (offs, unknowns) = component_offsets(f, g);
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (a, b) in p.covers() {
        // G(a->b) η_a - η_b F(a->b) = 0, entry (i, j) for i < dim G(b), j < dim F(a).
        let (gm, fm) = (g.map(a, b), f.map(a, b));
        for i in 0..g.dim(b) {
            for j in 0..f.dim(a) {
                let mut row = vec![Q::zero(); unknowns];
                for k in 0..g.dim(a) {
                    row[offs[a] + k * f.dim(a) + j] += &gm[(i, k)];
                }
                for k in 0..f.dim(b) {
                    row[offs[b] + i * f.dim(b) + k] -= &fm[(k, j)];
                }
                rows.push(row);
            }
        }
    }
    let constraints = QMatrix::from_rows(rows, unknowns)?;
    let kernel = constraints.kernel();
    Ok((0..kernel.cols())
        .map(|c| {
            let v = kernel.col(c);
            let comps = unflatten(f, g, &offs, &v);
            NatTransformation::new_unchecked(f.clone(), g.clone(), comps)
        })
        .collect())
}

fn unflatten(f: &VectFunctor, g: &VectFunctor, offs: &[usize], v: &[Q]) -> Vec<QMatrix> {
    (0..f.domain().len())
        .map(|a| {
            let (r, c) = (g.dim(a), f.dim(a));
            QMatrix::from_vec(r, c, v[offs[a]..offs[a] + r * c].to_vec()).expect("sized slice")
        })
        .collect()
}

/// The cochain complex computing `RHom(F, G)`:
/// `C^n = ⊕_{a_0 < ... < a_n} Hom(F(a_0), G(a_n))` with
/// `dφ(a_0..a_{n+1}) = φ(a_1..a_{n+1}) F(a_0 -> a_1)
///    + Σ_{0<i≤n} (-1)^i φ(.. â_i ..) + (-1)^{n+1} G(a_n -> a_{n+1}) φ(a_0..a_n)`.
pub fn rhom(f: &VectFunctor, g: &VectFunctor) -> Result<CochainComplex> {
    same_domain(f, g)?;
    let p = f.domain();
    let chains = p.strict_chains(usize::MAX);
    let block = |c: &Vec<usize>| g.dim(*c.last().unwrap()) * f.dim(c[0]);
    let mut index: Vec<HashMap<&Vec<usize>, usize>> = Vec::with_capacity(chains.len());
    let mut dims = Vec::with_capacity(chains.len());
    for layer in &chains {
        let mut m = HashMap::with_capacity(layer.len());
        let mut off = 0;
        for c in layer {
            m.insert(c, off);
            off += block(c);
        }
        index.push(m);
        dims.push(off);
    }
    while dims.last() == Some(&0) {
        dims.pop();
    }
    let mut diffs = Vec::new();
    for n in 0..dims.len().saturating_sub(1) {
        let mut d = QMatrix::zeros(dims[n + 1], dims[n]);
        for c in &chains[n + 1] {
            let row_off = index[n + 1][c];
            let (a0, last) = (c[0], *c.last().unwrap());
            let (rows, cols) = (g.dim(last), f.dim(a0));
            // Each face contributes `L φ(face) R` into the (c) block.
            let mut add = |face: Vec<usize>, left: &QMatrix, right: &QMatrix, sign: i64| {
                let col_off = index[n][&face];
                let (fr, fc) = (g.dim(*face.last().unwrap()), f.dim(face[0]));
                for i in 0..rows {
                    for j in 0..cols {
                        for k in 0..fr {
                            if left[(i, k)].is_zero() {
                                continue;
                            }
                            for l in 0..fc {
                                if right[(l, j)].is_zero() {
                                    continue;
                                }
                                let v = &left[(i, k)] * &right[(l, j)] * q(sign);
                                d[(row_off + i * cols + j, col_off + k * fc + l)] += v;
                            }
                        }
                    }
                }
            };
            let front: Vec<usize> = c[..=n].to_vec();
            let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
            add(front, g.map(c[n], last), &QMatrix::identity(f.dim(a0)), sign);
            for i in 1..=n {
                let mut face = c.clone();
                face.remove(i);
                add(face, &QMatrix::identity(g.dim(last)), &QMatrix::identity(f.dim(a0)), if i % 2 == 0 { 1 } else { -1 });
            }
            let back: Vec<usize> = c[1..].to_vec();
            add(back, &QMatrix::identity(g.dim(last)), f.map(a0, c[1]), 1);
        }
        diffs.push(d);
    }
    if dims.is_empty() {
        return Ok(CochainComplex::zero());
    }
    CochainComplex::new(0, dims, diffs)
}

/// `dim Ext^n(F, G)` for `n = 0, 1, ...`.
pub fn ext_dims(f: &VectFunctor, g: &VectFunctor) -> Result<Vec<usize>> {
    Ok(rhom(f, g)?.cohomology_dims())
}

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    pub seed: u64,
    /// Random evaluations of a generic element before falling back.
    pub samples: usize,
    /// Largest local span dimension for which the symbolic determinant is
    /// expanded.
    pub exact_bound: usize,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { seed: 0, samples: 12, exact_bound: 6 }
    }
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    /// An explicit isomorphism `F -> G`.
    Isomorphic(NatTransformation),
    NotIsomorphic { reason: String },
    Inconclusive { reason: String },
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn is_not_iso(&self) -> bool {
        matches!(self, IsoVerdict::NotIsomorphic { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            IsoVerdict::Isomorphic(_) => "isomorphic",
            IsoVerdict::NotIsomorphic { .. } => "not-isomorphic",
            IsoVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoSummary {
    pub verdict: &'static str,
    pub seed: u64,
}

/// Decides whether `F ≅ G`. A generic element of `Hom(F, G)` is sampled at
/// random integer points; if all samples are singular, each pointwise
/// determinant is expanded symbolically on the span of the components
/// there, which decides the question exactly.
pub fn iso_exists(f: &VectFunctor, g: &VectFunctor, opts: IsoOptions) -> Result<IsoVerdict> {
    same_domain(f, g)?;
    let p = f.domain();
    if let Some(a) = (0..p.len()).find(|&a| f.dim(a) != g.dim(a)) {
        return Ok(IsoVerdict::NotIsomorphic {
            reason: format!("dimensions differ at {}", p.label(a)),
        });
    }
    if f.is_zero() {
        return Ok(IsoVerdict::Isomorphic(f.identity()));
    }
    let basis = hom_space(f, g)?;
    if basis.is_empty() {
        return Ok(IsoVerdict::NotIsomorphic { reason: "no nonzero natural transformation".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let sample = |rng: &mut ChaCha8Rng, range: i64| -> Option<NatTransformation> {
        let t: Vec<Q> = (0..basis.len()).map(|_| q(rng.random_range(-range..=range))).collect();
        let eta = combine(&basis, &t);
        eta.is_iso().then_some(eta)
    };
    for _ in 0..opts.samples {
        if let Some(eta) = sample(&mut rng, 1 << 16) {
            return Ok(IsoVerdict::Isomorphic(eta));
        }
    }
    // Exact fallback: the product of determinants is a nonzero polynomial
    // iff each factor is.
    for a in 0..p.len() {
        let d = f.dim(a);
        if d == 0 {
            continue;
        }
        let span = span_basis(basis.iter().map(|b| b.component(a)), d);
        if span.is_empty() {
            return Ok(IsoVerdict::NotIsomorphic {
                reason: format!("every natural transformation vanishes at {}", p.label(a)),
            });
        }
        if span.len() > opts.exact_bound {
            return Ok(IsoVerdict::Inconclusive {
                reason: format!(
                    "{} random samples singular; span at {} has dimension {} > {}",
                    opts.samples,
                    p.label(a),
                    span.len(),
                    opts.exact_bound
                ),
            });
        }
        if symbolic_det(&span).is_empty() {
            return Ok(IsoVerdict::NotIsomorphic {
                reason: format!("every natural transformation is singular at {}", p.label(a)),
            });
        }
    }
    // The generic element is invertible; a random point finds a witness
    // with overwhelming probability.
    for _ in 0..256 {
        if let Some(eta) = sample(&mut rng, 1 << 30) {
            return Ok(IsoVerdict::Isomorphic(eta));
        }
    }
    Ok(IsoVerdict::Inconclusive { reason: "generic element invertible but no witness found".into() })
}

pub(crate) fn combine(basis: &[NatTransformation], t: &[Q]) -> NatTransformation {
    let first = &basis[0];
    let n = first.components().len();
    let comps: Vec<QMatrix> = (0..n)
        .map(|a| {
            let mut m = QMatrix::zeros(first.component(a).rows(), first.component(a).cols());
            for (b, c) in basis.iter().zip(t) {
                if !c.is_zero() {
                    m = m.add(&b.component(a).scale(c));
                }
            }
            m
        })
        .collect();
    NatTransformation::new_unchecked(first.source().clone(), first.target().clone(), comps)
}

/// A basis (as `d x d` matrices) of the span of the given matrices.
fn span_basis<'a>(mats: impl Iterator<Item = &'a QMatrix>, d: usize) -> Vec<QMatrix> {
    let flat: Vec<Vec<Q>> = mats.map(|m| m.entries().to_vec()).collect();
    if flat.is_empty() {
        return Vec::new();
    }
    let m = QMatrix::from_rows(flat, d * d).expect("square components");
    let (r, pivots) = m.rref();
    (0..pivots.len())
        .map(|i| QMatrix::from_vec(d, d, r.row(i).to_vec()).expect("d*d entries"))
        .collect()
}

/// Sparse multivariate polynomial: exponent vector -> coefficient.
type Poly = HashMap<Vec<u8>, Q>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out: Poly = HashMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e).or_insert_with(Q::zero);
            *slot += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add_assign(a: &mut Poly, b: &Poly, sign: bool) {
    for (e, c) in b {
        let slot = a.entry(e.clone()).or_insert_with(Q::zero);
        if sign {
            *slot += c;
        } else {
            *slot -= c;
        }
    }
    a.retain(|_, c| !c.is_zero());
}

/// `det(Σ t_k B_k)` as a polynomial in `t`, by Laplace expansion along
/// columns with memoization on row subsets.
fn symbolic_det(basis: &[QMatrix]) -> Poly {
    let d = basis[0].rows();
    let m = basis.len();
    let entry = |i: usize, j: usize| -> Poly {
        let mut p = HashMap::new();
        for (k, b) in basis.iter().enumerate() {
            if !b[(i, j)].is_zero() {
                let mut e = vec![0u8; m];
                e[k] = 1;
                p.insert(e, b[(i, j)].clone());
            }
        }
        p
    };
    let entries: Vec<Vec<Poly>> = (0..d).map(|i| (0..d).map(|j| entry(i, j)).collect()).collect();
    // minors[mask] = det of rows in `mask` against the first popcount(mask) columns.
    let mut minors: HashMap<u32, Poly> = HashMap::new();
    let mut one = HashMap::new();
    one.insert(vec![0u8; m], Q::one());
    minors.insert(0, one);
    for col in 0..d {
        let mut next = HashMap::new();
        for (&mask, minor) in &minors {
            if minor.is_empty() {
                continue;
            }
            for row in 0..d {
                if mask >> row & 1 == 1 || entries[row][col].is_empty() {
                    continue;
                }
                // Sign: number of chosen rows below `row` in the column order.
                let above = (mask & ((1 << row) - 1)).count_ones() as usize;
                let inversions = col - above;
                let term = poly_mul(minor, &entries[row][col]);
                let slot: &mut Poly = next.entry(mask | 1 << row).or_default();
                poly_add_assign(slot, &term, inversions % 2 == 0);
            }
        }
        minors = next;
    }
    minors.remove(&((1u32 << d) - 1)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    fn ab() -> Poset {
        Poset::chain(&["a", "b"]).unwrap()
    }

    #[test]
    fn yoneda_dimensions() {
        let p = ab();
        let pa = VectFunctor::representable(&p, 0);
        let pb = VectFunctor::representable(&p, 1);
        assert_eq!(hom_space(&pb, &pa).unwrap().len(), 1);
        assert_eq!(hom_space(&pa, &pb).unwrap().len(), 0);
    }

    #[test]
    fn rhom_of_representables() {
        let p = ab();
        let pa = VectFunctor::representable(&p, 0);
        let pb = VectFunctor::representable(&p, 1);
        let c = rhom(&pb, &pa).unwrap();
        assert_eq!(c.cohomology_dims()[0], 1);
        assert!(c.cohomology_dims()[1..].iter().all(|&h| h == 0));
        let c = rhom(&pa, &pb).unwrap();
        assert!(c.cohomology_dims().iter().all(|&h| h == 0));
    }

    #[test]
    fn rhom_on_a_chain_vanishes_above_one() {
        let p = Poset::chain(&["a", "b", "c", "d"]).unwrap();
        let (sa, sb) = (VectFunctor::skyscraper(&p, 0), VectFunctor::skyscraper(&p, 1));
        assert_eq!(&rhom(&sa, &sb).unwrap().cohomology_dims()[..2], &[0, 1]);
        let c = rhom(&VectFunctor::constant(&p, 1), &sa.direct_sum(&sb).unwrap()).unwrap();
        assert!(c.cohomology_dims()[2..].iter().all(|&h| h == 0));
        assert_eq!(c.euler_char_cochains(), c.euler_char_cohomology());
    }

    #[test]
    fn ext2_on_the_diamond() {
        let p = Poset::from_labels(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap();
        let (sa, sd) = (VectFunctor::skyscraper(&p, 0), VectFunctor::skyscraper(&p, 3));
        let h = rhom(&sa, &sd).unwrap().cohomology_dims();
        assert_eq!(&h[..3], &[0, 0, 1]);
        assert!(h[3..].iter().all(|&x| x == 0));
    }

    #[test]
    fn rhom_zero() {
        let p = ab();
        let c = rhom(&VectFunctor::zero(&p), &VectFunctor::constant(&p, 1)).unwrap();
        assert!(c.cohomology_dims().iter().all(|&h| h == 0));
    }

    #[test]
    fn symbolic_determinant_detects_singular_pencils() {
        // span{E11, E12}: every element singular.
        let e11 = QMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        let e12 = QMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(symbolic_det(&[e11.clone(), e12]).is_empty());
        let e22 = QMatrix::from_i64(&[&[0, 0], &[0, 1]]);
        let p = symbolic_det(&[e11, e22]);
        assert_eq!(p.len(), 1);
        // Antidiagonal: det = -t0 t1.
        let s = symbolic_det(&[QMatrix::from_i64(&[&[0, 1], &[0, 0]]), QMatrix::from_i64(&[&[0, 0], &[1, 0]])]);
        assert_eq!(s.get(&vec![1, 1]), Some(&q(-1)));
    }

    #[test]
    fn iso_examples() {
        let p = ab();
        let pa = VectFunctor::representable(&p, 0);
        let pb = VectFunctor::representable(&p, 1);
        let opts = IsoOptions::default();
        assert!(iso_exists(&pa, &pa, opts).unwrap().is_iso());
        assert!(iso_exists(&pa, &pb, opts).unwrap().is_not_iso());
        let c = VectFunctor::constant(&p, 1);
        let sum = pa.direct_sum(&pb).unwrap();
        assert!(iso_exists(&c.direct_sum(&pb).unwrap(), &sum, opts).unwrap().is_iso());
    }

    #[test]
    fn exact_fallback_without_samples() {
        let p = ab();
        let mut maps = std::collections::BTreeMap::new();
        maps.insert((0, 1), QMatrix::zeros(1, 1));
        let zero_map = VectFunctor::from_generators(p.clone(), vec![1, 1], maps).unwrap();
        let c = VectFunctor::constant(&p, 1);
        let opts = IsoOptions { samples: 0, ..IsoOptions::default() };
        let v = iso_exists(&c, &zero_map, opts).unwrap();
        assert!(v.is_not_iso(), "{v:?}");
        assert!(iso_exists(&c, &c, opts).unwrap().is_iso());
    }
}
