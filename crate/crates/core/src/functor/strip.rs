//! Removing the part of a functor induced from a sub-fibration of `I^set`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Q};
use crate::poset::{MonotoneMap, Poset, StokesSpace};

use super::{graded, lan, NatTransformation, VectFunctor};

#[derive(Clone, Debug)]
pub struct Stripped {
    /// The cofiber `F^{∖I'}`.
    pub functor: VectFunctor,
    /// `τ : i_!(Gr F|_{I'}) -> F`.
    pub tau: NatTransformation,
    pub tau_injective: bool,
}

/// Total-poset indices of a sub-fibration given by fiber elements per base
/// element; it must be stable under transitions.
fn sub_indices(s: &StokesSpace, keep: &[Vec<usize>]) -> Result<Vec<usize>> {
    if keep.len() != s.base().len() {
        return Err(Error::Precondition("one element list per base element expected".into()));
    }
    for (x, y) in s.base().covers() {
        let t = s.transport(x, y).unwrap();
        if let Some(&a) = keep[x].iter().find(|&&a| !keep[y].contains(&t[a])) {
            return Err(Error::Precondition(format!(
                "sub-fibration not stable under {}->{} at {}",
                s.base().label(x),
                s.base().label(y),
                s.fiber(x).label(a)
            )));
        }
    }
    let total = s.total();
    let mut idx: Vec<usize> =
        keep.iter().enumerate().flat_map(|(x, es)| es.iter().map(move |&a| total.index(x, a))).collect();
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

/// `F^{∖I'} = cofib(i_!(Gr F|_{I'}) -> F)`, where the map is adjoint to a
/// natural section of the projection `F -> Gr F` over `I'^set`. Fails with
/// [`Error::NoSection`] naming the first cocartesian edge where no natural
/// section exists.
pub fn strip_summand(f: &VectFunctor, s: &StokesSpace, keep: &[Vec<usize>]) -> Result<Stripped> {
    let idx = sub_indices(s, keep)?;
    let g = graded(f, s)?;
    let total_set = s.underlying_set();
    let sub_poset = total_set.total_poset().subposet(&idx)?;
    let w = restrict_to(&g.functor, &idx, &sub_poset)?;
    // Sections σ_u = R_u + K_u Z_u with K_u a kernel basis of the projection.
    let kernels: Vec<QMatrix> = idx.iter().map(|&u| g.projections[u].kernel()).collect();
    let mut offs = Vec::with_capacity(idx.len());
    let mut unknowns = 0;
    for (i, k) in kernels.iter().enumerate() {
        offs.push(unknowns);
        unknowns += k.cols() * w.dim(i);
    }
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    let mut edge_ends: Vec<(usize, usize, usize)> = Vec::new(); // (row count after edge, u, v)
    for (i, j) in sub_poset.covers() {
        let (u, v) = (idx[i], idx[j]);
        // F(u->v) σ_u = σ_v W(u->v).
        let fm = f.map(u, v);
        let wm = w.map(i, j);
        let base_lhs = fm.mul(&g.lifts[u]).sub(&g.lifts[v].mul(wm));
        let (r, c) = (f.dim(v), w.dim(i));
        let a_term = fm.mul(&kernels[i]);
        for row in 0..r {
            for col in 0..c {
                let mut eq = vec![Q::zero(); unknowns];
                // (F K_u Z_u)[row, col]
                for k in 0..kernels[i].cols() {
                    eq[offs[i] + k * c + col] += &a_term[(row, k)];
                }
                // -(K_v Z_v W)[row, col]
                for k in 0..kernels[j].cols() {
                    for l in 0..w.dim(j) {
                        let coef = &kernels[j][(row, k)] * &wm[(l, col)];
                        if !coef.is_zero() {
                            eq[offs[j] + k * w.dim(j) + l] -= coef;
                        }
                    }
                }
                rows.push(eq);
                rhs.push(-base_lhs[(row, col)].clone());
            }
        }
        edge_ends.push((rows.len(), u, v));
    }
    let a = QMatrix::from_rows(rows.clone(), unknowns)?;
    let z = match a.solve(&rhs)? {
        Some(z) => z,
        None => {
            let (_, u, v) = first_obstruction(&rows, &rhs, unknowns, &edge_ends)?;
            let p = s.total_poset();
            return Err(Error::NoSection(format!(
                "no natural section of F -> Gr F along {}->{}",
                p.label(u),
                p.label(v)
            )));
        }
    };
    let sections: Vec<QMatrix> = idx
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let zi = QMatrix::from_vec(kernels[i].cols(), w.dim(i), z[offs[i]..offs[i] + kernels[i].cols() * w.dim(i)].to_vec())
                .expect("sized");
            g.lifts[u].add(&kernels[i].mul(&zi))
        })
        .collect();
    let inc = MonotoneMap::new(sub_poset.clone(), s.total_poset().clone(), idx.clone())
        .map_err(|e| Error::Precondition(format!("sub-fibration inclusion: {e}")))?;
    let tau = lan(&inc, &w)?.mate_components(f, &sections)?;
    let tau_injective = tau.is_mono();
    let (functor, _) = tau.cokernel();
    Ok(Stripped { functor, tau, tau_injective })
}

fn restrict_to(g: &VectFunctor, idx: &[usize], sub: &Poset) -> Result<VectFunctor> {
    let dims = idx.iter().map(|&u| g.dim(u)).collect();
    let maps = sub.covers().into_iter().map(|(i, j)| ((i, j), g.map(idx[i], idx[j]).clone())).collect();
    VectFunctor::from_generators(sub.clone(), dims, maps)
}

fn first_obstruction(
    rows: &[Vec<Q>],
    rhs: &[Q],
    unknowns: usize,
    ends: &[(usize, usize, usize)],
) -> Result<(usize, usize, usize)> {
    for &(count, u, v) in ends {
        let a = QMatrix::from_rows(rows[..count].to_vec(), unknowns)?;
        if a.solve(&rhs[..count])?.is_none() {
            return Ok((count, u, v));
        }
    }
    Err(Error::NoSection("inconsistent section constraints".into()))
}
