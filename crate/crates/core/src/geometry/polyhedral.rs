//! Polyhedra stratified by the signs of finitely many affine forms, with
//! fibers constant as sets, and the elementarity criterion for them.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::poset::{Poset, StokesSpace};

use super::lp::{feasible, Constraint, Relation};

/// `x ↦ coeffs · x + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vec<Q>,
    pub constant: Q,
}

impl AffineForm {
    pub fn new(coeffs: Vec<Q>, constant: Q) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) && constant.is_zero() {
            return Err(Error::Geometry("affine form is identically zero".into()));
        }
        Ok(AffineForm { coeffs, constant })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.coeffs.iter().zip(x).fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }

    fn constraint(&self, relation: Relation) -> Constraint {
        Constraint::new(self.coeffs.clone(), self.constant.clone(), relation)
    }

    fn negated(&self) -> AffineForm {
        AffineForm { coeffs: self.coeffs.iter().map(|c| -c).collect(), constant: -&self.constant }
    }
}

/// `{x ∈ R^n : h(x) ≥ 0 for every halfspace form h}`, nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    n: usize,
    halfspaces: Vec<AffineForm>,
}

impl Polyhedron {
    pub fn new(n: usize, halfspaces: Vec<AffineForm>) -> Result<Self> {
        if let Some(h) = halfspaces.iter().find(|h| h.dim() != n) {
            return Err(Error::Geometry(format!("halfspace of dimension {} in R^{n}", h.dim())));
        }
        let p = Polyhedron { n, halfspaces };
        if !feasible(n, &p.constraints()) {
            return Err(Error::Geometry("empty polyhedron".into()));
        }
        Ok(p)
    }

    /// The closed interval `[lo, hi]` of `R`.
    pub fn interval(lo: Q, hi: Q) -> Result<Self> {
        let one = Q::from_integer(1.into());
        Polyhedron::new(
            1,
            vec![AffineForm::new(vec![one.clone()], -lo)?, AffineForm::new(vec![-one], hi)?],
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn halfspaces(&self) -> &[AffineForm] {
        &self.halfspaces
    }

    fn constraints(&self) -> Vec<Constraint> {
        self.halfspaces.iter().map(|h| h.constraint(Relation::NonNegative)).collect()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| !h.eval(x).is_negative())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }

    /// `self ≤ other` in `{-, 0, +}` with `0` initial.
    pub fn specializes_to(self, other: Sign) -> bool {
        self == Sign::Zero || self == other
    }
}

pub type SignVector = Vec<Sign>;

pub fn sign_label(s: &[Sign]) -> String {
    s.iter().map(|x| x.symbol()).collect()
}

fn sign_constraint(phi: &AffineForm, s: Sign) -> Constraint {
    match s {
        Sign::Pos => phi.constraint(Relation::Positive),
        Sign::Zero => phi.constraint(Relation::Zero),
        Sign::Neg => phi.negated().constraint(Relation::Positive),
    }
}

/// Whether the cell `{sign φ_i = s_i}` meets `c`.
pub fn is_realized(c: &Polyhedron, forms: &[AffineForm], signs: &[Sign]) -> bool {
    let mut cs = c.constraints();
    cs.extend(forms.iter().zip(signs).map(|(f, &s)| sign_constraint(f, s)));
    feasible(c.dim(), &cs)
}

/// All sign vectors realized in `c`, in lexicographic order `- < 0 < +`.
pub fn realized_sign_vectors(c: &Polyhedron, forms: &[AffineForm]) -> Vec<SignVector> {
    fn go(c: &Polyhedron, forms: &[AffineForm], prefix: &mut SignVector, out: &mut Vec<SignVector>) {
        if prefix.len() == forms.len() {
            out.push(prefix.clone());
            return;
        }
        for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
            prefix.push(s);
            if is_realized(c, &forms[..prefix.len()], prefix) {
                go(c, forms, prefix, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(c, forms, &mut Vec::new(), &mut out);
    out
}

/// A finite set with an order per cell: required on maximal cells,
/// optional elsewhere (defaulting to the intersection of the orders on the
/// maximal cells above).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyhedralFiber {
    pub elements: Vec<String>,
    /// Sign-vector label `->` strict generating pairs `(smaller, larger)`.
    pub orders: BTreeMap<String, Vec<(String, String)>>,
}

/// A polyhedral Stokes stratified space with its defining data.
#[derive(Clone, Debug)]
pub struct PolyhedralSpace {
    pub polyhedron: Polyhedron,
    pub forms: Vec<AffineForm>,
    pub cells: Vec<SignVector>,
    pub space: StokesSpace,
}

/// The base poset of realized sign vectors, `σ ≤ τ` iff `σ_i ∈ {0, τ_i}`.
pub fn sign_poset(cells: &[SignVector]) -> Poset {
    let labels: Vec<String> = cells.iter().map(|s| sign_label(s)).collect();
    let n = cells.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = cells[i].iter().zip(&cells[j]).all(|(a, b)| a.specializes_to(*b));
        }
    }
    Poset::from_matrix(labels, leq).expect("sign vectors are partially ordered")
}

pub fn polyhedral_space(c: Polyhedron, forms: Vec<AffineForm>, fiber: &PolyhedralFiber) -> Result<PolyhedralSpace> {
    if let Some(f) = forms.iter().find(|f| f.dim() != c.dim()) {
        return Err(Error::Geometry(format!("form of dimension {} in R^{}", f.dim(), c.dim())));
    }
    let cells = realized_sign_vectors(&c, &forms);
    let base = sign_poset(&cells);
    for key in fiber.orders.keys() {
        if base.index_of(key).is_none() {
            return Err(Error::Geometry(format!("cell {key} is not realized")));
        }
    }
    let elems: Vec<&str> = fiber.elements.iter().map(String::as_str).collect();
    let order_at = |label: &str| -> Result<Option<Poset>> {
        match fiber.orders.get(label) {
            None => Ok(None),
            Some(pairs) => {
                let pairs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                Poset::from_labels(&elems, &pairs)
                    .map(Some)
                    .map_err(|e| Error::Geometry(format!("order at cell {label}: {e}")))
            }
        }
    };
    let maximal = base.maximal_elements();
    let mut fibers: Vec<Option<Poset>> = vec![None; base.len()];
    for &m in &maximal {
        let p = order_at(base.label(m))?
            .ok_or_else(|| Error::Geometry(format!("no order given on open cell {}", base.label(m))))?;
        fibers[m] = Some(p);
    }
    let k = fiber.elements.len();
    for x in 0..base.len() {
        if fibers[x].is_some() {
            continue;
        }
        fibers[x] = Some(match order_at(base.label(x))? {
            Some(p) => p,
            None => {
                let mut leq = vec![true; k * k];
                for &m in maximal.iter().filter(|&&m| base.leq(x, m)) {
                    let pm = fibers[m].as_ref().unwrap();
                    for a in 0..k {
                        for b in 0..k {
                            leq[a * k + b] &= pm.leq(a, b);
                        }
                    }
                }
                Poset::from_matrix(fiber.elements.clone(), leq)?
            }
        });
    }
    let fibers: Vec<Poset> = fibers.into_iter().map(Option::unwrap).collect();
    let transitions = base.covers().into_iter().map(|e| (e, (0..k).collect())).collect();
    let space = StokesSpace::new(base, fibers, transitions)
        .map_err(|e| Error::Geometry(format!("orders are inconsistent with specialization: {e}")))?;
    Ok(PolyhedralSpace { polyhedron: c, forms, cells, space })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CriterionVerdict {
    Certified,
    Fails { pair: (String, String), reason: String },
}

impl CriterionVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, CriterionVerdict::Certified)
    }
}

impl PolyhedralSpace {
    fn cell_index(&self, s: &[Sign]) -> Option<usize> {
        self.cells.iter().position(|c| c == s)
    }

    /// Base cells where `a` and `b` are incomparable.
    pub fn stokes_locus(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&x| !self.space.fiber(x).comparable(a, b)).collect()
    }

    /// For each pair of distinct elements, looks for a form `φ` whose zero
    /// cells are exactly the Stokes locus, with both open sides realized
    /// and opposite strict orders on them. Both sides are convex, hence
    /// connected.
    pub fn elementarity_criterion(&self) -> CriterionVerdict {
        let s = &self.space;
        let elems = s.fiber(0).labels();
        for a in 0..elems.len() {
            for b in a + 1..elems.len() {
                let locus = self.stokes_locus(a, b);
                let mut reason = if locus.is_empty() {
                    "Stokes locus is empty".to_string()
                } else {
                    format!("Stokes locus has {} cells, not the trace of a single hyperplane", locus.len())
                };
                let mut ok = false;
                for i in 0..self.forms.len() {
                    let on_h: Vec<usize> = (0..self.cells.len()).filter(|&x| self.cells[x][i] == Sign::Zero).collect();
                    if on_h != locus {
                        continue;
                    }
                    let side = |sg: Sign| -> Vec<usize> {
                        (0..self.cells.len()).filter(|&x| self.cells[x][i] == sg).collect()
                    };
                    let (pos, neg) = (side(Sign::Pos), side(Sign::Neg));
                    if pos.is_empty() || neg.is_empty() {
                        reason = format!("form {i} does not cut the polyhedron in two");
                        continue;
                    }
                    let all = |cells: &[usize], lo: usize, hi: usize| cells.iter().all(|&x| s.fiber(x).lt(lo, hi));
                    if (all(&pos, a, b) && all(&neg, b, a)) || (all(&pos, b, a) && all(&neg, a, b)) {
                        ok = true;
                        break;
                    }
                    reason = format!("orders on the two sides of form {i} are not opposite");
                }
                if !ok {
                    return CriterionVerdict::Fails { pair: (elems[a].clone(), elems[b].clone()), reason };
                }
            }
        }
        CriterionVerdict::Certified
    }

    /// The cell containing a point of the polyhedron.
    pub fn cell_of(&self, x: &[Q]) -> Option<usize> {
        if !self.polyhedron.contains(x) {
            return None;
        }
        let signs: SignVector = self
            .forms
            .iter()
            .map(|f| {
                let v = f.eval(x);
                if v.is_positive() {
                    Sign::Pos
                } else if v.is_negative() {
                    Sign::Neg
                } else {
                    Sign::Zero
                }
            })
            .collect();
        self.cell_index(&signs)
    }
}

/// One-dimensional helper: the interval `[lo, hi]` cut at the given points,
/// with a chain order (listed from smallest to largest) on each open piece
/// from left to right.
pub fn interval_space(lo: Q, hi: Q, cuts: &[Q], elements: &[&str], chains: &[&[&str]]) -> Result<PolyhedralSpace> {
    if chains.len() != cuts.len() + 1 {
        return Err(Error::Geometry("one chain per open piece expected".into()));
    }
    let one = Q::from_integer(1.into());
    let forms: Vec<AffineForm> =
        cuts.iter().map(|t| AffineForm::new(vec![one.clone()], -t)).collect::<Result<_>>()?;
    let mut orders = BTreeMap::new();
    for (i, chain) in chains.iter().enumerate() {
        // Piece i lies right of the first i cuts.
        let label: String = (0..cuts.len()).map(|j| if j < i { '+' } else { '-' }).collect();
        let pairs = chain.windows(2).map(|w| (w[0].to_string(), w[1].to_string())).collect();
        orders.insert(label, pairs);
    }
    let fiber = PolyhedralFiber { elements: elements.iter().map(|s| s.to_string()).collect(), orders };
    polyhedral_space(Polyhedron::interval(lo, hi)?, forms, &fiber)
}
