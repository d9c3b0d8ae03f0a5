//! The stratified circle of directions of an irregular class and its level
//! filtration.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{format_q, Q};
use crate::ops::LevelStructure;
use crate::poset::{FiberMap, Poset, StokesSpace};

use super::irregular::{IrregularClass, PuiseuxExponential};

/// Rotation by `2π` on the `d`-fold cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeckAction {
    /// Image of each base element.
    pub base: Vec<usize>,
    /// Per base element `x`, the image in the fiber over `base[x]` of each
    /// fiber element over `x`.
    pub fibers: Vec<Vec<usize>>,
}

/// A circle space: directions `D_i` (indices `0..m`) and arcs
/// `A_i = (D_i, D_{i+1})` (indices `m..2m`), each direction below its two
/// adjacent arcs.
#[derive(Clone, Debug)]
pub struct CircleSpace {
    pub class: IrregularClass,
    /// Directions in units of `π` on the cover, sorted in `[0, 2d)`.
    pub directions: Vec<Q>,
    pub space: StokesSpace,
    pub deck: Option<DeckAction>,
}

pub fn angle_label(t: &Q) -> String {
    format!("{}π", format_q(t))
}

impl CircleSpace {
    pub fn num_directions(&self) -> usize {
        self.directions.len()
    }

    pub fn direction(&self, i: usize) -> usize {
        i
    }

    pub fn arc(&self, i: usize) -> usize {
        self.directions.len() + i
    }

    /// The arcs before and after direction `i`.
    pub fn adjacent_arcs(&self, i: usize) -> (usize, usize) {
        let m = self.directions.len();
        (self.arc((i + m - 1) % m), self.arc(i))
    }

    /// A direction strictly inside arc `i`.
    pub fn arc_midpoint(&self, i: usize) -> Q {
        arc_midpoint(&self.directions, i, self.class.ramification())
    }
}

fn arc_midpoint(dirs: &[Q], i: usize, d: usize) -> Q {
    let m = dirs.len();
    let two = Q::from_integer(BigInt::from(2));
    if i + 1 < m {
        (&dirs[i] + &dirs[i + 1]) / two
    } else {
        (&dirs[m - 1] + &dirs[0] + Q::from_integer(BigInt::from(2 * d as i64))) / two
    }
}

fn circle_base(dirs: &[Q], d: usize) -> Poset {
    let m = dirs.len();
    let mut labels: Vec<String> = dirs.iter().map(angle_label).collect();
    let top = Q::from_integer(BigInt::from(2 * d as i64));
    for i in 0..m {
        let end = if i + 1 < m { dirs[i + 1].clone() } else { &dirs[0] + &top };
        labels.push(format!("({},{})", angle_label(&dirs[i]), angle_label(&end)));
    }
    let mut pairs = Vec::new();
    for i in 0..m {
        pairs.push((i, m + i));
        pairs.push((i, m + (i + m - 1) % m));
    }
    Poset::new(labels, &pairs).expect("directions below arcs")
}

fn order_at(class: &IrregularClass, t: &Q) -> Result<Poset> {
    let n = class.len();
    let mut leq = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            leq[a * n + b] = matches!(class.compare_at(a, b, t), Some(Ordering::Less | Ordering::Equal));
        }
    }
    Poset::from_matrix(class.labels().to_vec(), leq)
        .map_err(|e| Error::Geometry(format!("order at {}: {e}", angle_label(t))))
}

/// The circle space of `class` over a given set of directions.
pub fn circle_space_over(class: &IrregularClass, directions: Vec<Q>) -> Result<CircleSpace> {
    let d = class.ramification();
    if directions.len() < 2 {
        return Err(Error::Geometry(format!(
            "{} Stokes direction(s): at least 2 are needed for a poset base; add a marked direction",
            directions.len()
        )));
    }
    let m = directions.len();
    let base = circle_base(&directions, d);
    let mut fibers = Vec::with_capacity(2 * m);
    for t in &directions {
        fibers.push(order_at(class, t)?);
    }
    for i in 0..m {
        fibers.push(order_at(class, &arc_midpoint(&directions, i, d))?);
    }
    let n = class.len();
    let transitions: BTreeMap<(usize, usize), Vec<usize>> =
        base.covers().into_iter().map(|e| (e, (0..n).collect())).collect();
    let space = StokesSpace::new(base, fibers, transitions)?;
    let deck = if d > 1 { Some(deck_action(class, &directions, &space)?) } else { None };
    Ok(CircleSpace { class: class.clone(), directions, space, deck })
}

/// The circle space of `class`, stratified by all pairwise Stokes directions.
pub fn circle_space(class: &IrregularClass) -> Result<CircleSpace> {
    circle_space_over(class, class.all_directions())
}

fn deck_action(class: &IrregularClass, dirs: &[Q], s: &StokesSpace) -> Result<DeckAction> {
    let perm = class
        .deck_permutation()
        .ok_or_else(|| Error::Geometry("class is not stable under the rotation by 2π".into()))?;
    let m = dirs.len();
    let top = Q::from_integer(BigInt::from(2 * class.ramification() as i64));
    let two = Q::from_integer(BigInt::from(2));
    let shift = |i: usize| -> Result<usize> {
        let t = super::irregular::reduce_mod(&(&dirs[i] + &two), &top);
        dirs.iter().position(|u| *u == t).ok_or_else(|| Error::Geometry("directions are not deck stable".into()))
    };
    let mut base = vec![0; 2 * m];
    for i in 0..m {
        let j = shift(i)?;
        base[i] = j;
        base[m + i] = m + j;
    }
    let fibers = vec![perm.clone(); 2 * m];
    for x in 0..2 * m {
        let (src, dst) = (s.fiber(x), s.fiber(base[x]));
        for a in 0..src.len() {
            for b in 0..src.len() {
                if src.leq(a, b) != dst.leq(perm[a], perm[b]) {
                    return Err(Error::Geometry("rotation by 2π does not preserve the orders".into()));
                }
            }
        }
    }
    Ok(DeckAction { base, fibers })
}

/// Exponentials of `class` truncated to pole orders above `m`, with the
/// class index of each original exponential.
fn truncated_class(class: &IrregularClass, m: &Q) -> Result<(IrregularClass, Vec<usize>)> {
    let mut reps: Vec<PuiseuxExponential> = Vec::new();
    let mut assign = Vec::with_capacity(class.len());
    for e in class.exponentials() {
        let t = e.truncate_above(m);
        let idx = match reps.iter().position(|r| *r == t) {
            Some(i) => i,
            None => {
                reps.push(t);
                reps.len() - 1
            }
        };
        assign.push(idx);
    }
    let labels = reps.iter().map(|r| format!("[{r}]")).collect();
    Ok((IrregularClass::new(reps, Some(labels), Some(class.ramification()))?, assign))
}

/// Quotient order obtained from representatives: `[a] < [b]` iff the
/// classes differ and some representatives satisfy `a' < b'`. Every pair of
/// representatives must then agree.
fn quotient_order(fiber: &Poset, assign: &[usize], labels: Vec<String>) -> Result<Poset> {
    let n = labels.len();
    let mut lt = vec![false; n * n];
    let mut gt = vec![false; n * n];
    for a in 0..fiber.len() {
        for b in 0..fiber.len() {
            let (ca, cb) = (assign[a], assign[b]);
            if ca == cb {
                continue;
            }
            if fiber.lt(a, b) {
                lt[ca * n + cb] = true;
            } else {
                gt[ca * n + cb] = true;
            }
        }
    }
    if (0..n * n).any(|i| lt[i] && gt[i]) {
        return Err(Error::Incoherent("representatives of two classes compare differently".into()));
    }
    let leq = (0..n * n).map(|i| lt[i] || i / n == i % n).collect();
    Poset::from_matrix(labels, leq)
}

/// Level filtration `I = I^r -> ... -> I^0 = *` of the circle space of a
/// class: the auxiliary sequence is the decreasing list of pole orders of
/// pairwise differences followed by `0`, and `I^j` identifies exponentials
/// whose difference has pole order at most the `j`-th entry. Orders on the
/// quotients are computed both from truncated leading terms and from
/// representatives, and must agree.
pub fn level_filtration(class: &IrregularClass) -> Result<(CircleSpace, LevelStructure)> {
    let top = circle_space(class)?;
    let mut cutoffs = class.difference_orders();
    let r = cutoffs.len();
    cutoffs.push(Q::from_integer(0.into()));
    let mut spaces = Vec::with_capacity(r + 1);
    let mut assigns = Vec::with_capacity(r + 1);
    for (j, c) in cutoffs.iter().enumerate() {
        if j == r {
            spaces.push(top.space.clone());
            assigns.push((0..class.len()).collect::<Vec<_>>());
            continue;
        }
        let (tc, assign) = truncated_class(class, c)?;
        let cs = if tc.len() == 1 {
            single_class_space(&top, tc.labels()[0].clone())
        } else {
            circle_space_over(&tc, top.directions.clone())?.space
        };
        for x in 0..top.space.base().len() {
            let rep = quotient_order(top.space.fiber(x), &assign, tc.labels().to_vec())?;
            if rep != *cs.fiber(x) {
                return Err(Error::Incoherent(format!(
                    "quotient order at {} differs from the truncated order",
                    top.space.base().label(x)
                )));
            }
        }
        spaces.push(cs);
        assigns.push(assign);
    }
    let mut maps = Vec::with_capacity(r);
    for j in 0..r {
        // I^{j+1} -> I^j sends the class of a to the class of a.
        let (fine, coarse) = (&assigns[j + 1], &assigns[j]);
        let nfine = spaces[j + 1].fiber(0).len();
        let mut m = vec![0; nfine];
        for (a, &cf) in fine.iter().enumerate() {
            m[cf] = coarse[a];
        }
        let per_base = vec![m; top.space.base().len()];
        maps.push(FiberMap::new(spaces[j + 1].clone(), spaces[j].clone(), per_base)?);
    }
    let sequence = cutoffs.iter().map(|c| -c.clone()).collect();
    let ls = LevelStructure::new(spaces, maps, sequence)?;
    Ok((top, ls))
}

fn single_class_space(top: &CircleSpace, label: String) -> StokesSpace {
    StokesSpace::constant(top.space.base().clone(), Poset::discrete(&[label]).expect("one label"))
}
