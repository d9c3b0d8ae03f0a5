//! Stokes matrices on an unramified circle space, and common gradings of
//! pairs of filtrations.
//!
//! Each arc carries a graded trivialization `V = ⊕_q V_q` with
//! `F(A, q) = ⊕_{q' ≤_A q} V_{q'}`. At direction `D_i` the fiber functor is
//! read in the trivialization of the following arc `A_i`, and the gluing
//! into the preceding arc is `G_i`: a vector `v` over `A_i` is `G_i v` over
//! `A_{i-1}`. For `i > 0`, `G_i` is the Stokes matrix `S_i`; at `D_0` the
//! formal monodromy is folded in, `G_0 = S_0 · diag(h_q)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functor::random::random_q;
use crate::functor::{graded, is_stokes, lan, VectFunctor};
use crate::linalg::QMatrix;

use super::circle::CircleSpace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StokesData {
    /// Rank of the graded piece of each exponential.
    pub dims: Vec<usize>,
    /// One block-unipotent matrix per direction.
    pub matrices: Vec<QMatrix>,
    /// Per exponential, the monodromy of its graded piece.
    pub formal_monodromy: Vec<QMatrix>,
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    out.push(0);
    for d in dims {
        acc += d;
        out.push(acc);
    }
    out
}

impl StokesData {
    /// Identity formal monodromy.
    pub fn new(dims: Vec<usize>, matrices: Vec<QMatrix>) -> Self {
        let formal_monodromy = dims.iter().map(|&d| QMatrix::identity(d)).collect();
        StokesData { dims, matrices, formal_monodromy }
    }

    pub fn rank(&self) -> usize {
        self.dims.iter().sum()
    }

    fn block(&self, m: &QMatrix, r: usize, c: usize) -> QMatrix {
        let o = offsets(&self.dims);
        m.block(o[r], o[c], self.dims[r], self.dims[c])
    }

    /// Gluing matrices `G_i`.
    pub fn gluings(&self) -> Vec<QMatrix> {
        let h = QMatrix::block_diag(&self.formal_monodromy);
        self.matrices
            .iter()
            .enumerate()
            .map(|(i, s)| if i == 0 { s.mul(&h) } else { s.clone() })
            .collect()
    }

    /// Monodromy of the underlying local system on the first arc, going
    /// once around in the direction of increasing angle:
    /// `G_0^{-1} G_{m-1}^{-1} ... G_1^{-1}`.
    pub fn monodromy(&self) -> QMatrix {
        let g = self.gluings();
        let m = g.len();
        let mut out = QMatrix::identity(self.rank());
        for i in (1..m).chain(std::iter::once(0)) {
            out = g[i].inverse().expect("invertible gluing").mul(&out);
        }
        out
    }
}

/// Strict order on the arc before and after each direction, as
/// `lt[q''][q']`.
fn arc_orders(cs: &CircleSpace, i: usize) -> (impl Fn(usize, usize) -> bool + '_, impl Fn(usize, usize) -> bool + '_) {
    let (left, right) = cs.adjacent_arcs(i);
    let s = &cs.space;
    (move |a, b| s.fiber(left).lt(a, b), move |a, b| s.fiber(right).lt(a, b))
}

fn check_unipotent(cs: &CircleSpace, data: &StokesData) -> Result<()> {
    let n = cs.class.len();
    let m = cs.num_directions();
    if data.dims.len() != n || data.formal_monodromy.len() != n {
        return Err(Error::Precondition(format!("{n} exponentials but {} ranks", data.dims.len())));
    }
    if data.matrices.len() != m {
        return Err(Error::Precondition(format!("{m} directions but {} Stokes matrices", data.matrices.len())));
    }
    let rank = data.rank();
    for (q, h) in data.formal_monodromy.iter().enumerate() {
        if h.shape() != (data.dims[q], data.dims[q]) || !h.is_invertible() {
            return Err(Error::Precondition(format!("formal monodromy of {} is not invertible", cs.class.labels()[q])));
        }
    }
    for (i, s) in data.matrices.iter().enumerate() {
        if s.shape() != (rank, rank) {
            return Err(Error::Precondition(format!("Stokes matrix {i} is not {rank}x{rank}")));
        }
        let (left_lt, _) = arc_orders(cs, i);
        for r in 0..n {
            for c in 0..n {
                let b = data.block(s, r, c);
                let ok = if r == c { b.is_identity() } else { b.is_zero() || left_lt(r, c) };
                if !ok {
                    return Err(Error::Precondition(format!(
                        "Stokes matrix at {} is not block-unipotent: block ({}, {})",
                        cs.space.base().label(i),
                        cs.class.labels()[r],
                        cs.class.labels()[c]
                    )));
                }
            }
        }
    }
    Ok(())
}

fn coords(cs: &CircleSpace, off: &[usize], x: usize, q: usize) -> Vec<usize> {
    let fib = cs.space.fiber(x);
    (0..fib.len()).filter(|&p| fib.leq(p, q)).flat_map(|p| off[p]..off[p + 1]).collect()
}

/// The Stokes functor with the given Stokes data.
pub fn from_stokes_matrices(cs: &CircleSpace, data: &StokesData) -> Result<VectFunctor> {
    if cs.class.ramification() != 1 {
        return Err(Error::Precondition("Stokes matrices need an unramified class".into()));
    }
    check_unipotent(cs, data)?;
    let m = cs.num_directions();
    let gl = data.gluings();
    let off = offsets(&data.dims);
    let rank = data.rank();
    let s = &cs.space;
    let total = s.total();
    let dims: Vec<usize> = total.elements.iter().map(|&(x, q)| coords(cs, &off, x, q).len()).collect();
    let ident = QMatrix::identity(rank);
    let mut maps = BTreeMap::new();
    for (u, v) in s.total_poset().covers() {
        let ((x, a), (y, b)) = (total.elements[u], total.elements[v]);
        let g = if x == y || (x < m && y == cs.arc(x)) {
            &ident
        } else if x < m && y == cs.adjacent_arcs(x).0 {
            &gl[x]
        } else {
            unreachable!("covers in a circle space")
        };
        let (src, dst) = (coords(cs, &off, x, a), coords(cs, &off, y, b));
        let mut mat = QMatrix::zeros(dst.len(), src.len());
        for (j, &c) in src.iter().enumerate() {
            for r in 0..rank {
                let e = &g[(r, c)];
                if e.is_zero() {
                    continue;
                }
                match dst.iter().position(|&d| d == r) {
                    Some(i) => mat[(i, j)] = e.clone(),
                    None => {
                        return Err(Error::Precondition(format!(
                            "gluing at {} does not respect the filtrations",
                            s.base().label(x)
                        )))
                    }
                }
            }
        }
        maps.insert((u, v), mat);
    }
    VectFunctor::from_generators(s.total_poset().clone(), dims, maps)
}

/// Stokes data of a Stokes functor. Graded bases are chosen on the first
/// arc and transported across each direction, so that all but the first
/// gluing have identity diagonal blocks.
pub fn to_stokes_matrices(cs: &CircleSpace, f: &VectFunctor) -> Result<StokesData> {
    if cs.class.ramification() != 1 {
        return Err(Error::Precondition("Stokes matrices need an unramified class".into()));
    }
    let s = &cs.space;
    let v = is_stokes(f, s)?;
    if !v.stokes {
        return Err(Error::Precondition(format!(
            "not a Stokes functor: {}",
            v.failure.unwrap_or_default()
        )));
    }
    let g = graded(f, s)?;
    let total = s.total();
    let m = cs.num_directions();
    let n = cs.class.len();
    let arc0 = cs.arc(0);
    let dims: Vec<usize> = (0..n).map(|q| g.functor.dim(total.index(arc0, q))).collect();
    let top = |x: usize| s.fiber(x).maximum().expect("arc orders are total");
    // Lifts of graded vectors into the top space over x.
    let lifted = |x: usize, target: usize, q: usize| -> QMatrix {
        let u = total.index(x, q);
        f.map(u, total.index(target, top(target))).mul(&g.lifts[u])
    };
    let gr_map = |x: usize, y: usize, q: usize| g.functor.map(total.index(x, q), total.index(y, q)).clone();
    // beta[i][q]: chosen graded basis over arc i.
    let mut beta: Vec<Vec<QMatrix>> = vec![dims.iter().map(|&d| QMatrix::identity(d)).collect()];
    for i in 1..m {
        let (left, right) = cs.adjacent_arcs(i);
        let row = (0..n)
            .map(|q| {
                let t = gr_map(i, right, q).mul(&gr_map(i, left, q).inverse().expect("graded local system"));
                t.mul(&beta[i - 1][q])
            })
            .collect();
        beta.push(row);
    }
    let bases: Vec<QMatrix> = (0..m)
        .map(|i| {
            let a = cs.arc(i);
            let parts: Vec<QMatrix> = (0..n).map(|q| lifted(a, a, q).mul(&beta[i][q])).collect();
            QMatrix::hstack(&parts, f.dim(total.index(a, top(a))))
        })
        .collect();
    let rank: usize = dims.iter().sum();
    let mut gluings = Vec::with_capacity(m);
    for i in 0..m {
        let (left, right) = cs.adjacent_arcs(i);
        let (li, ri) = (left - m, right - m);
        let r = QMatrix::hstack(&(0..n).map(|q| lifted(i, right, q)).collect::<Vec<_>>(), rank);
        let l = QMatrix::hstack(&(0..n).map(|q| lifted(i, left, q)).collect::<Vec<_>>(), rank);
        let transport = l.mul(&r.inverse().expect("cocartesian and split"));
        let gi = bases[li].inverse().expect("split arc").mul(&transport).mul(&bases[ri]);
        gluings.push(gi);
    }
    let off = offsets(&dims);
    let formal: Vec<QMatrix> = (0..n).map(|q| gluings[0].block(off[q], off[q], dims[q], dims[q])).collect();
    let hinv = QMatrix::block_diag(&formal).inverse().expect("invertible formal monodromy");
    let mut matrices = gluings;
    matrices[0] = matrices[0].mul(&hinv);
    Ok(StokesData { dims, matrices, formal_monodromy: formal })
}

/// Random Stokes data: ranks in `0..=dim_bound` (not all zero), entries in
/// `[-bound, bound]` on the blocks of pairs exchanged across each
/// direction, identity formal monodromy.
pub fn random_stokes_data<R: Rng>(rng: &mut R, cs: &CircleSpace, dim_bound: usize, bound: i64) -> StokesData {
    let n = cs.class.len();
    let mut dims: Vec<usize> = (0..n).map(|_| rng.random_range(0..=dim_bound)).collect();
    if dims.iter().all(|&d| d == 0) {
        let q = rng.random_range(0..n);
        dims[q] = dim_bound.max(1);
    }
    let off = offsets(&dims);
    let rank = off[n];
    let matrices = (0..cs.num_directions())
        .map(|i| {
            let (left_lt, right_lt) = arc_orders(cs, i);
            let mut s = QMatrix::identity(rank);
            for r in 0..n {
                for c in 0..n {
                    if r != c && left_lt(r, c) && right_lt(c, r) {
                        for a in off[r]..off[r + 1] {
                            for b in off[c]..off[c + 1] {
                                s[(a, b)] = random_q(rng, bound);
                            }
                        }
                    }
                }
            }
            s
        })
        .collect();
    StokesData::new(dims, matrices)
}

/// Monodromy of `p_!(F)` on the first arc, read off the local system on
/// the base.
pub fn local_system_monodromy(cs: &CircleSpace, f: &VectFunctor) -> Result<QMatrix> {
    let s = &cs.space;
    let l = lan(&s.projection(), f)?.functor;
    let m = cs.num_directions();
    let mut out = QMatrix::identity(l.dim(cs.arc(0)));
    for i in (1..m).chain(std::iter::once(0)) {
        let (left, right) = cs.adjacent_arcs(i);
        let step = l.map(i, right).mul(&l.map(i, left).inverse().ok_or_else(|| {
            Error::Precondition("p_!F is not a local system".into())
        })?);
        out = step.mul(&out);
    }
    Ok(out)
}

/// A grading `V = ⊕_q G_q` inducing both filtrations, where
/// `plus[q]`/`minus[q]` are column bases of the filtration steps at `q` and
/// `order_plus`/`order_minus` list the index set from smallest to largest.
/// Returns `None` when no common grading exists.
pub fn common_grading(
    dim: usize,
    order_plus: &[usize],
    plus: &[QMatrix],
    order_minus: &[usize],
    minus: &[QMatrix],
) -> Result<Option<Vec<QMatrix>>> {
    let n = plus.len();
    if minus.len() != n || order_plus.len() != n || order_minus.len() != n {
        return Err(Error::Precondition("filtrations indexed by different sets".into()));
    }
    for (name, order, filt) in [("plus", order_plus, plus), ("minus", order_minus, minus)] {
        let mut seen = vec![false; n];
        for &q in order {
            if q >= n || std::mem::replace(&mut seen[q], true) {
                return Err(Error::Precondition(format!("{name} order is not a permutation")));
            }
        }
        for m in filt {
            if m.rows() != dim || m.rank() != m.cols() {
                return Err(Error::Precondition(format!("{name} filtration step is not a subspace basis")));
            }
        }
        for w in order.windows(2) {
            if !contains(&filt[w[1]], &filt[w[0]]) {
                return Err(Error::Precondition(format!("{name} filtration is not increasing")));
            }
        }
        if filt[order[n - 1]].cols() != dim {
            return Err(Error::Precondition(format!("{name} filtration does not exhaust V")));
        }
    }
    let below = |order: &[usize], filt: &[QMatrix], q: usize| -> QMatrix {
        let pos = order.iter().position(|&p| p == q).unwrap();
        if pos == 0 {
            QMatrix::zeros(dim, 0)
        } else {
            filt[order[pos - 1]].clone()
        }
    };
    let mut pieces = Vec::with_capacity(n);
    for q in 0..n {
        let (bp, bm) = (below(order_plus, plus, q), below(order_minus, minus, q));
        let gp = plus[q].cols() - bp.cols();
        let gm = minus[q].cols() - bm.cols();
        if gp != gm {
            return Ok(None);
        }
        let w = intersect(&plus[q], &minus[q]);
        let lower = QMatrix::hstack(&[intersect(&w, &bp), intersect(&w, &bm)], dim).image();
        let g = complement(&w, &lower);
        if g.cols() != gp {
            return Ok(None);
        }
        pieces.push(g);
    }
    for (order, filt) in [(order_plus, plus), (order_minus, minus)] {
        for (pos, &q) in order.iter().enumerate() {
            let parts: Vec<QMatrix> = order[..=pos].iter().map(|&p| pieces[p].clone()).collect();
            let sum = QMatrix::hstack(&parts, dim);
            if sum.rank() != sum.cols() || sum.cols() != filt[q].cols() || !contains(&filt[q], &sum) {
                return Ok(None);
            }
        }
    }
    Ok(Some(pieces))
}

/// Column span of `b` inside that of `a`.
fn contains(a: &QMatrix, b: &QMatrix) -> bool {
    QMatrix::hstack(&[a.clone(), b.clone()], a.rows()).rank() == a.rank()
}

/// Basis of the intersection of two column spans.
fn intersect(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let stacked = QMatrix::hstack(&[a.clone(), b.scale(&crate::linalg::q(-1))], a.rows());
    let k = stacked.kernel();
    let top = k.block(0, 0, a.cols(), k.cols());
    a.mul(&top).image()
}

/// Columns of `w` completing a basis of `sub ⊂ span(w)` to one of `span(w)`.
fn complement(w: &QMatrix, sub: &QMatrix) -> QMatrix {
    let mut chosen: Vec<QMatrix> = Vec::new();
    let mut acc = sub.clone();
    for j in 0..w.cols() {
        let col = QMatrix::column(w.col(j));
        let next = QMatrix::hstack(&[acc.clone(), col.clone()], w.rows());
        if next.rank() > acc.rank() {
            acc = next;
            chosen.push(col);
        }
    }
    QMatrix::hstack(&chosen, w.rows())
}
