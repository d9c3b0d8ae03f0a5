//! Oracles shared by the integration tests. They are written against the
//! raw data (matrices, rational angles) and avoid the library routines
//! they are used to check.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::Rng;
use stokes_core::geometry::{IrregularClass, PuiseuxExponential, Term};
use stokes_core::linalg::{q, q_frac, QMatrix, Q};
use stokes_core::poset::{Poset, StokesSpace};
use stokes_core::functor::VectFunctor;

/// The circle of the basic one-dimensional example: base `{1, -1, U, V}`
/// with `1, -1 < U, V`; fibers `{a, b}` discrete at the points, `a < b` on
/// `U` and `b < a` on `V`; identity transitions.
pub fn one_dimensional_circle() -> StokesSpace {
    let base = Poset::from_labels(&["1", "-1", "U", "V"], &[("1", "U"), ("1", "V"), ("-1", "U"), ("-1", "V")]).unwrap();
    let d = Poset::discrete(&["a", "b"]).unwrap();
    let u = Poset::from_labels(&["a", "b"], &[("a", "b")]).unwrap();
    let v = Poset::from_labels(&["a", "b"], &[("b", "a")]).unwrap();
    let id = || vec![("a", "a"), ("b", "b")];
    StokesSpace::from_labels(
        base,
        &[("1", d.clone()), ("-1", d), ("U", u), ("V", v)],
        &[(("1", "U"), id()), (("1", "V"), id()), (("-1", "U"), id()), (("-1", "V"), id())],
    )
    .unwrap()
}

/// Basis of `Hom(F, G)` by solving the naturality equations on covering
/// relations, as per-element component lists.
pub fn naturality_basis(f: &VectFunctor, g: &VectFunctor) -> Vec<Vec<QMatrix>> {
    let p = f.domain();
    let n = p.len();
    let mut offs = vec![0; n + 1];
    for a in 0..n {
        offs[a + 1] = offs[a] + g.dim(a) * f.dim(a);
    }
    let unknowns = offs[n];
    // X_a is dim G(a) x dim F(a), entry (i, j) at offs[a] + i * dim F(a) + j.
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (a, b) in p.covers() {
        let (fm, gm) = (f.map(a, b), g.map(a, b));
        for i in 0..g.dim(b) {
            for j in 0..f.dim(a) {
                // (G_ab X_a - X_b F_ab)_{ij} = 0
                let mut row = vec![Q::zero(); unknowns];
                for k in 0..g.dim(a) {
                    row[offs[a] + k * f.dim(a) + j] += gm[(i, k)].clone();
                }
                for k in 0..f.dim(b) {
                    row[offs[b] + i * f.dim(b) + k] -= fm[(k, j)].clone();
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        QMatrix::identity(unknowns)
    } else {
        QMatrix::from_rows(rows, unknowns).unwrap().kernel()
    };
    (0..kernel.cols())
        .map(|c| {
            let v = kernel.col(c);
            (0..n)
                .map(|a| {
                    let data = v[offs[a]..offs[a + 1]].to_vec();
                    QMatrix::from_vec(g.dim(a), f.dim(a), data).unwrap()
                })
                .collect()
        })
        .collect()
}

/// Whether the linear span of the given square matrices (size at most 2)
/// contains an invertible one, decided by expanding the determinant of a
/// generic combination as a polynomial.
pub fn span_has_invertible(ms: &[QMatrix], size: usize) -> bool {
    match size {
        0 => true,
        1 => ms.iter().any(|m| !m[(0, 0)].is_zero()),
        2 => {
            let b = |i: usize, j: usize| &ms[i][(0, 0)] * &ms[j][(1, 1)] - &ms[i][(0, 1)] * &ms[j][(1, 0)];
            (0..ms.len()).any(|i| {
                !b(i, i).is_zero() || (i + 1..ms.len()).any(|j| !(b(i, j) + b(j, i)).is_zero())
            })
        }
        _ => panic!("symbolic determinant only for sizes up to 2"),
    }
}

/// Exhaustive isomorphism test for functors of dimension at most 2: the
/// generic element of `Hom(F, G)` is invertible iff every component's
/// determinant is a nonzero polynomial (a product of nonzero polynomials
/// is nonzero).
pub fn isomorphic_small(f: &VectFunctor, g: &VectFunctor) -> bool {
    let p = f.domain();
    if (0..p.len()).any(|a| f.dim(a) != g.dim(a)) {
        return false;
    }
    let basis = naturality_basis(f, g);
    (0..p.len()).all(|a| {
        let comps: Vec<QMatrix> = basis.iter().map(|b| b[a].clone()).collect();
        span_has_invertible(&comps, f.dim(a))
    })
}

/// `⊕_b P_b^{v(b)}` with `P_b(a) = Q` for `b ≤ a`, built entry by entry.
pub fn sum_of_projectives(p: &Poset, v: &[usize]) -> VectFunctor {
    let n = p.len();
    let dims: Vec<usize> = (0..n).map(|a| (0..n).filter(|&b| p.leq(b, a)).map(|b| v[b]).sum()).collect();
    // Basis of the value at a: pairs (b, copy) with b ≤ a, in order.
    let basis = |a: usize| -> Vec<(usize, usize)> {
        (0..n).filter(|&b| p.leq(b, a)).flat_map(|b| (0..v[b]).map(move |c| (b, c))).collect()
    };
    let mut maps = BTreeMap::new();
    for (a, c) in p.covers() {
        let (src, dst) = (basis(a), basis(c));
        let mut m = QMatrix::zeros(dst.len(), src.len());
        for (j, e) in src.iter().enumerate() {
            let i = dst.iter().position(|x| x == e).unwrap();
            m[(i, j)] = q(1);
        }
        maps.insert((a, c), m);
    }
    VectFunctor::from_generators(p.clone(), dims, maps).unwrap()
}

/// Sign of `cos(π x)`.
pub fn cos_pi(x: &Q) -> Ordering {
    let two = q(2);
    let mut r = x % &two;
    if r.is_negative() {
        r += &two;
    }
    let (h, th) = (q_frac(1, 2), q_frac(3, 2));
    if r == h || r == th {
        Ordering::Equal
    } else if r > h && r < th {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// An exponential stored as pole order -> signed real coordinate along a
/// fixed line `e^{iπ α_k}` per pole order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineExp {
    pub coords: BTreeMap<Q, Q>,
}

/// A class whose coefficients at each pole order lie on one real line.
#[derive(Clone, Debug)]
pub struct LineClass {
    pub lines: BTreeMap<Q, Q>,
    pub exps: Vec<LineExp>,
}

impl LineClass {
    pub fn term(&self, k: &Q, s: &Q) -> Term {
        let alpha = &self.lines[k];
        let angle = if s.is_negative() { alpha + q(1) } else { alpha.clone() };
        Term::new(k.clone(), s.abs(), angle).unwrap()
    }

    pub fn exponential(&self, e: &LineExp) -> PuiseuxExponential {
        PuiseuxExponential::new(e.coords.iter().filter(|(_, s)| !s.is_zero()).map(|(k, s)| self.term(k, s)).collect())
            .unwrap()
    }

    pub fn class(&self) -> IrregularClass {
        IrregularClass::new(self.exps.iter().map(|e| self.exponential(e)).collect(), None, None).unwrap()
    }

    /// Leading `(k, angle)` of `e1 - e2` restricted to pole orders above
    /// `cutoff`, or `None` when they agree there.
    pub fn leading_difference(&self, i: usize, j: usize, cutoff: &Q) -> Option<(Q, Q)> {
        let (a, b) = (&self.exps[i].coords, &self.exps[j].coords);
        let ks: BTreeSet<&Q> = a.keys().chain(b.keys()).collect();
        for k in ks.into_iter().rev() {
            if k <= cutoff {
                break;
            }
            let z = Q::zero();
            let s = a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z);
            if !s.is_zero() {
                let alpha = &self.lines[k];
                return Some((k.clone(), if s.is_negative() { alpha + q(1) } else { alpha.clone() }));
            }
        }
        None
    }

    /// `Re(e_i - e_j)(r e^{iθ})` in floating point.
    pub fn re_difference(&self, i: usize, j: usize, r: f64, theta: f64) -> f64 {
        let (a, b) = (&self.exps[i].coords, &self.exps[j].coords);
        let ks: BTreeSet<&Q> = a.keys().chain(b.keys()).collect();
        let z = Q::zero();
        ks.into_iter()
            .map(|k| {
                let s = to_f64(&(a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)));
                let kf = to_f64(k);
                let alpha = to_f64(&self.lines[k]) * std::f64::consts::PI;
                s * r.powf(-kf) * (alpha - kf * theta).cos()
            })
            .sum()
    }

    /// Distinct pole orders of pairwise differences, decreasing.
    pub fn difference_orders(&self) -> Vec<Q> {
        let mut out = BTreeSet::new();
        for i in 0..self.exps.len() {
            for j in i + 1..self.exps.len() {
                if let Some((k, _)) = self.leading_difference(i, j, &Q::zero()) {
                    out.insert(k);
                }
            }
        }
        out.into_iter().rev().collect()
    }
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

/// A random class of `2..=max_len` pairwise distinct exponentials with
/// pole orders drawn from `orders` and coordinates in `[-2, 2]`.
pub fn random_line_class<R: Rng>(rng: &mut R, orders: &[Q], max_len: usize) -> LineClass {
    loop {
        let lines: BTreeMap<Q, Q> =
            orders.iter().map(|k| (k.clone(), q_frac(rng.random_range(0..12), rng.random_range(1..=6)))).collect();
        let n = rng.random_range(2..=max_len);
        let exps: Vec<LineExp> = (0..n)
            .map(|_| LineExp {
                coords: orders
                    .iter()
                    .filter_map(|k| {
                        let s = if rng.random_bool(0.6) { rng.random_range(-2..=2) } else { 0 };
                        (s != 0).then(|| (k.clone(), q(s)))
                    })
                    .collect(),
            })
            .collect();
        let distinct = (0..n).all(|i| (i + 1..n).all(|j| exps[i] != exps[j]));
        if distinct {
            return LineClass { lines, exps };
        }
    }
}

/// A random level map out of `p`: a partition into blocks whose quotient
/// preorder is a poset and satisfies `[a] < [b] ⇒ a < b`.
pub fn random_level_map<R: Rng>(rng: &mut R, p: &Poset) -> (Poset, Vec<usize>) {
    let n = p.len();
    for _ in 0..64 {
        let blocks = rng.random_range(1..=n);
        let raw: Vec<usize> = (0..n).map(|_| rng.random_range(0..blocks)).collect();
        let mut names: Vec<usize> = raw.clone();
        names.sort();
        names.dedup();
        let m: Vec<usize> = raw.iter().map(|r| names.iter().position(|x| x == r).unwrap()).collect();
        let labels: Vec<String> = (0..names.len()).map(|i| format!("c{i}")).collect();
        let pairs: Vec<(usize, usize)> = p.strict_pairs().into_iter().map(|(a, b)| (m[a], m[b])).collect();
        let Ok(j) = Poset::new(labels, &pairs) else { continue };
        let level = (0..n).all(|a| (0..n).all(|b| !j.lt(m[a], m[b]) || p.lt(a, b)));
        if level {
            return (j, m);
        }
    }
    (p.clone(), (0..n).collect())
}

/// A random fibration over a random base: fibers share the labels
/// `a0, a1, ...`, orders are sub-orders of one random total order, grow
/// along the base, and transitions are identities.
pub fn random_space<R: Rng>(rng: &mut R, base_size: usize, fiber_size: usize) -> StokesSpace {
    let base = stokes_core::functor::random::random_poset(rng, base_size, 0.5);
    let mut total: Vec<usize> = (0..fiber_size).collect();
    for i in (1..fiber_size).rev() {
        total.swap(i, rng.random_range(0..=i));
    }
    let labels: Vec<String> = (0..fiber_size).map(|i| format!("a{i}")).collect();
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); base_size];
    for x in base.linear_extension() {
        let mut ps: Vec<(usize, usize)> =
            (0..base_size).filter(|&y| base.lt(y, x)).flat_map(|y| pairs[y].clone()).collect();
        for i in 0..fiber_size {
            for j in i + 1..fiber_size {
                if rng.random_bool(0.3) {
                    ps.push((total[i], total[j]));
                }
            }
        }
        ps.sort();
        ps.dedup();
        pairs[x] = ps;
    }
    let fibers = pairs.iter().map(|ps| Poset::new(labels.clone(), ps).unwrap()).collect();
    let transitions = base.covers().into_iter().map(|e| (e, (0..fiber_size).collect())).collect();
    StokesSpace::new(base, fibers, transitions).unwrap()
}
