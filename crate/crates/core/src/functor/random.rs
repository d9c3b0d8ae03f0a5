//! Seeded random functors for property tests and randomized searches.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{q, QMatrix, Q};
use crate::poset::{Poset, StokesSpace};

use super::{induce_from_set, lan, restrict, VectFunctor};

/// Small random integer scalar.
pub fn random_q<R: Rng>(rng: &mut R, bound: i64) -> Q {
    q(rng.random_range(-bound..=bound))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> QMatrix {
    let data = (0..rows * cols).map(|_| random_q(rng, bound)).collect();
    QMatrix::from_vec(rows, cols, data).expect("sized")
}

/// Random point of the affine solution set of `A x = b` (`None` if empty).
pub fn random_solution<R: Rng>(rng: &mut R, a: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
    let x0 = a.solve(b).expect("sized right-hand side")?;
    let k = a.kernel();
    let mut x = x0;
    for c in 0..k.cols() {
        let t = random_q(rng, 3);
        if t.is_zero() {
            continue;
        }
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += &k[(i, c)] * &t;
        }
    }
    Some(x)
}

/// A random functor with the given dimensions: elements are processed in a
/// linear extension, and the maps into each element from its lower covers
/// are a random solution of the compatibility constraints.
pub fn random_functor_with_dims<R: Rng>(rng: &mut R, p: &Poset, dims: &[usize]) -> VectFunctor {
    let n = p.len();
    let mut transport: Vec<Vec<Option<QMatrix>>> = vec![vec![None; n]; n];
    let mut maps = BTreeMap::new();
    for b in p.linear_extension() {
        transport[b][b] = Some(QMatrix::identity(dims[b]));
        let lower = p.lower_covers(b);
        // Unknowns: entries of M_{a,b} for each lower cover a.
        let mut offs = Vec::with_capacity(lower.len());
        let mut unknowns = 0;
        for &a in &lower {
            offs.push(unknowns);
            unknowns += dims[b] * dims[a];
        }
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (i1, &a1) in lower.iter().enumerate() {
            for (i2, &a2) in lower.iter().enumerate().skip(i1 + 1) {
                for c in 0..n {
                    if !(p.leq(c, a1) && p.leq(c, a2)) {
                        continue;
                    }
                    let (t1, t2) = (transport[c][a1].as_ref().unwrap(), transport[c][a2].as_ref().unwrap());
                    // M1 t1 - M2 t2 = 0, entrywise.
                    for r in 0..dims[b] {
                        for col in 0..dims[c] {
                            let mut row = vec![Q::zero(); unknowns];
                            for k in 0..dims[a1] {
                                row[offs[i1] + r * dims[a1] + k] += &t1[(k, col)];
                            }
                            for k in 0..dims[a2] {
                                row[offs[i2] + r * dims[a2] + k] -= &t2[(k, col)];
                            }
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let a = QMatrix::from_rows(rows, unknowns).expect("rows sized");
        let x = random_solution(rng, &a, &vec![Q::zero(); a.rows()]).expect("homogeneous system");
        for (i, &a_) in lower.iter().enumerate() {
            let m = QMatrix::from_vec(dims[b], dims[a_], x[offs[i]..offs[i] + dims[b] * dims[a_]].to_vec())
                .expect("sized");
            maps.insert((a_, b), m);
        }
        for c in 0..n {
            if p.lt(c, b) {
                let (a_, m) = lower
                    .iter()
                    .find(|&&a_| p.leq(c, a_))
                    .map(|&a_| (a_, &maps[&(a_, b)]))
                    .expect("some lower cover lies above c");
                transport[c][b] = Some(m.mul(transport[c][a_].as_ref().unwrap()));
            }
        }
    }
    VectFunctor::from_generators(p.clone(), dims.to_vec(), maps).expect("constraints enforce functoriality")
}

pub fn random_dims<R: Rng>(rng: &mut R, n: usize, dim_bound: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..=dim_bound)).collect()
}

pub fn random_functor<R: Rng>(rng: &mut R, p: &Poset, dim_bound: usize) -> VectFunctor {
    let dims = random_dims(rng, p.len(), dim_bound);
    random_functor_with_dims(rng, p, &dims)
}

/// `i_!(V)` for random `V` on the underlying set.
pub fn random_split<R: Rng>(rng: &mut R, p: &Poset, dim_bound: usize) -> VectFunctor {
    let v = VectFunctor::from_generators(p.underlying_set(), random_dims(rng, p.len(), dim_bound), BTreeMap::new())
        .expect("discrete");
    induce_from_set(p, &v).expect("induction")
}

/// A random poset on `n` elements labelled `e0, e1, ...`: each pair `i < j`
/// is related with probability `density`, then closed transitively.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Poset::new(labels, &pairs).expect("pairs respect the index order")
}

/// Options for [`random_cocartesian`].
#[derive(Clone, Copy, Debug)]
pub struct CocartesianOptions {
    pub dim_bound: usize,
    /// Use split functors for the freely chosen fibers.
    pub split: bool,
    pub retries: usize,
}

/// A random cocartesian functor on the total poset of `s`.
///
/// Fiber functors are fixed first: one fiber per connected component of the
/// base is random; the others are propagated by induction along transitions
/// (upwards) or as `i_!` of the pulled-back graded pieces (downwards, which
/// needs a split value above and bijective transitions). The maps along
/// cocartesian edges are then random solutions of the naturality and
/// compatibility constraints with invertible comparison maps.
pub fn random_cocartesian<R: Rng>(rng: &mut R, s: &StokesSpace, opts: CocartesianOptions) -> Result<VectFunctor> {
    let base = s.base();
    let total = s.total();
    let mut fibers: Vec<Option<VectFunctor>> = vec![None; base.len()];
    let order = base.linear_extension();
    while let Some(&seed_x) = order.iter().find(|&&x| fibers[x].is_none()) {
        fibers[seed_x] = Some(if opts.split {
            random_split(rng, s.fiber(seed_x), opts.dim_bound)
        } else {
            random_functor(rng, s.fiber(seed_x), opts.dim_bound)
        });
        loop {
            let mut progress = false;
            for &y in &order {
                if fibers[y].is_some() {
                    continue;
                }
                if let Some(x) = base.lower_covers(y).into_iter().find(|&x| fibers[x].is_some()) {
                    let gamma = s.transition_map(x, y).unwrap();
                    fibers[y] = Some(lan(&gamma, fibers[x].as_ref().unwrap())?.functor);
                    progress = true;
                } else if let Some(z) = base.upper_covers(y).into_iter().find(|&z| fibers[z].is_some()) {
                    fibers[y] = Some(pull_down(s, y, z, fibers[z].as_ref().unwrap())?);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }
    let fibers: Vec<VectFunctor> = fibers.into_iter().map(Option::unwrap).collect();
    let n = total.poset.len();
    let mut dims = vec![0usize; n];
    let mut maps: BTreeMap<(usize, usize), QMatrix> = BTreeMap::new();
    for (y, fy) in fibers.iter().enumerate() {
        for a in 0..s.fiber(y).len() {
            dims[total.index(y, a)] = fy.dim(a);
        }
        for (a, b) in s.fiber(y).covers() {
            maps.insert((total.index(y, a), total.index(y, b)), fy.map(a, b).clone());
        }
    }
    for &y in &order {
        let lower = base.lower_covers(y);
        if lower.is_empty() {
            continue;
        }
        let extra = solve_edges(rng, s, y, &lower, &dims, &maps, &fibers, opts.retries)?;
        maps.extend(extra);
    }
    VectFunctor::from_generators(total.poset.clone(), dims, maps)
}

/// A fiber functor at `y` inducing `F_z` along `y ≤ z`: `i_!` of the graded
/// pieces of `F_z` pulled back along the transition.
fn pull_down(s: &StokesSpace, y: usize, z: usize, fz: &VectFunctor) -> Result<VectFunctor> {
    let t = s.transport(y, z).unwrap();
    let bijective = s.fiber(y).len() == s.fiber(z).len() && {
        let mut seen = vec![false; t.len()];
        t.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
    };
    let sv = super::is_split(fz);
    if !bijective || !sv.split {
        return Err(Error::Precondition(format!(
            "cannot propagate a cocartesian value from {} down to {}",
            s.base().label(z),
            s.base().label(y)
        )));
    }
    let dims: Vec<usize> = t.iter().map(|&b| sv.graded.functor.dim(b)).collect();
    let fy = s.fiber(y);
    let v = VectFunctor::from_generators(fy.underlying_set(), dims, BTreeMap::new())?;
    induce_from_set(fy, &v)
}

/// Transport along generator chains among already defined maps.
fn partial_transport(
    s: &StokesSpace,
    dims: &[usize],
    maps: &BTreeMap<(usize, usize), QMatrix>,
    from: usize,
    to: usize,
) -> Option<QMatrix> {
    let poset = s.total_poset();
    if from == to {
        return Some(QMatrix::identity(dims[from]));
    }
    for (&(_, b), m) in maps.range((from, 0)..(from + 1, 0)) {
        if poset.leq(b, to) {
            if let Some(rest) = partial_transport(s, dims, maps, b, to) {
                return Some(rest.mul(m));
            }
        }
    }
    None
}

/// Random maps `φ_{x,a} : F(x,a) -> F(y, γa)` for all lower covers `x` of `y`.
#[allow(clippy::too_many_arguments)]
fn solve_edges<R: Rng>(
    rng: &mut R,
    s: &StokesSpace,
    y: usize,
    lower: &[usize],
    dims: &[usize],
    maps: &BTreeMap<(usize, usize), QMatrix>,
    fibers: &[VectFunctor],
    retries: usize,
) -> Result<BTreeMap<(usize, usize), QMatrix>> {
    let total = s.total();
    let base = s.base();
    let fy = &fibers[y];
    // (x, a, offset) per unknown block.
    let mut blocks: Vec<(usize, usize, usize)> = Vec::new();
    let mut unknowns = 0;
    for &x in lower {
        let g = s.transport(x, y).unwrap();
        for a in 0..s.fiber(x).len() {
            blocks.push((x, a, unknowns));
            unknowns += dims[total.index(y, g[a])] * dims[total.index(x, a)];
        }
    }
    let offset = |x: usize, a: usize| blocks.iter().find(|b| b.0 == x && b.1 == a).unwrap().2;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    // Naturality in each fiber: F_y(γa -> γa') φ_a = φ_{a'} F_x(a -> a').
    for &x in lower {
        let fx = &fibers[x];
        let g = s.transport(x, y).unwrap();
        for (a, a2) in s.fiber(x).covers() {
            let (off, off2) = (offset(x, a), offset(x, a2));
            let lm = fy.map(g[a], g[a2]);
            let rm = fx.map(a, a2);
            let cdim = fx.dim(a);
            for i in 0..fy.dim(g[a2]) {
                for j in 0..cdim {
                    let mut row = vec![Q::zero(); unknowns];
                    for k in 0..fy.dim(g[a]) {
                        row[off + k * cdim + j] += &lm[(i, k)];
                    }
                    for k in 0..fx.dim(a2) {
                        row[off2 + i * fx.dim(a2) + k] -= &rm[(k, j)];
                    }
                    rows.push(row);
                }
            }
        }
    }
    // Paths from (c, e), c < y, through two different lower covers agree.
    for c in 0..base.len() {
        if !base.lt(c, y) {
            continue;
        }
        let ends: Vec<usize> = lower.iter().copied().filter(|&x| base.leq(c, x)).collect();
        for e in 0..s.fiber(c).len() {
            let src = total.index(c, e);
            let target = total.index(y, s.transport(c, y).unwrap()[e]);
            let (rdim, cdim) = (dims[target], dims[src]);
            for w in ends.windows(2) {
                let mut local = vec![vec![Q::zero(); unknowns]; rdim * cdim];
                for (x, sign) in [(w[0], 1i64), (w[1], -1i64)] {
                    let ax = s.transport(c, x).unwrap()[e];
                    let mid = total.index(x, ax);
                    let t = partial_transport(s, dims, maps, src, mid).expect("path below x");
                    let (off, md) = (offset(x, ax), dims[mid]);
                    for i in 0..rdim {
                        for j in 0..cdim {
                            for k in 0..md {
                                if !t[(k, j)].is_zero() {
                                    local[i * cdim + j][off + i * md + k] += &t[(k, j)] * q(sign);
                                }
                            }
                        }
                    }
                }
                rows.extend(local);
            }
        }
    }
    let a = QMatrix::from_rows(rows, unknowns)?;
    let zeros = vec![Q::zero(); a.rows()];
    for _ in 0..retries.max(1) {
        let sol = random_solution(rng, &a, &zeros).expect("homogeneous system");
        let mut out = BTreeMap::new();
        for &(x, a_, off) in &blocks {
            let u = total.index(x, a_);
            let v = total.index(y, s.transport(x, y).unwrap()[a_]);
            let m = QMatrix::from_vec(dims[v], dims[u], sol[off..off + dims[v] * dims[u]].to_vec())?;
            out.insert((u, v), m);
        }
        if comparisons_invertible(s, y, lower, &out, fibers)? {
            return Ok(out);
        }
    }
    Err(Error::Precondition(format!(
        "no invertible comparison found over {} after {retries} attempts",
        base.label(y)
    )))
}

fn comparisons_invertible(
    s: &StokesSpace,
    y: usize,
    lower: &[usize],
    edges: &BTreeMap<(usize, usize), QMatrix>,
    fibers: &[VectFunctor],
) -> Result<bool> {
    let total = s.total();
    for &x in lower {
        let gamma = s.transition_map(x, y).unwrap();
        let alpha: Vec<QMatrix> = (0..s.fiber(x).len())
            .map(|a| edges[&(total.index(x, a), total.index(y, gamma.apply(a)))].clone())
            .collect();
        match lan(&gamma, &fibers[x])?.mate_components(&fibers[y], &alpha) {
            Ok(m) if m.is_iso() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Random `V` on the total poset of `S^set`, locally constant along
/// transitions, so that `i_!(V)` is Stokes.
pub fn random_graded<R: Rng>(rng: &mut R, s: &StokesSpace, dim_bound: usize) -> Result<VectFunctor> {
    let set = s.underlying_set();
    random_cocartesian(rng, &set, CocartesianOptions { dim_bound, split: true, retries: 16 })
}

/// Restriction helper used by tests: the fiber functor at `x`.
pub fn fiber_of(f: &VectFunctor, s: &StokesSpace, x: usize) -> Result<VectFunctor> {
    restrict(&s.fiber_inclusion(x), f)
}
