//! Exact feasibility of systems of strict, weak and equality linear
//! constraints by Fourier–Motzkin elimination.

use num_traits::{Signed, Zero};

use crate::linalg::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `> 0`
    Positive,
    /// `≥ 0`
    NonNegative,
    /// `= 0`
    Zero,
}

/// `coeffs · x + constant` compared with zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub constant: Q,
    pub relation: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, constant: Q, relation: Relation) -> Self {
        Constraint { coeffs, constant, relation }
    }

    fn scaled(&self, s: &Q) -> Constraint {
        Constraint {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            constant: &self.constant * s,
            relation: self.relation,
        }
    }

    /// Divides by the absolute value of the first nonzero coefficient so
    /// duplicates can be dropped.
    fn normalized(mut self) -> Constraint {
        let lead = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs());
        if let Some(l) = lead {
            let inv = Q::from_integer(1.into()) / l;
            self = self.scaled(&inv);
        }
        self
    }

    fn trivially_holds(&self) -> Option<bool> {
        if self.coeffs.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(match self.relation {
            Relation::Positive => self.constant.is_positive(),
            Relation::NonNegative => !self.constant.is_negative(),
            Relation::Zero => self.constant.is_zero(),
        })
    }
}

/// Whether some `x ∈ Q^n` satisfies every constraint.
pub fn feasible(n: usize, constraints: &[Constraint]) -> bool {
    let mut cs: Vec<Constraint> = constraints.to_vec();
    for c in &cs {
        assert_eq!(c.coeffs.len(), n, "constraint length");
    }
    // Equalities: substitute one variable away.
    while let Some(pos) = cs
        .iter()
        .position(|c| c.relation == Relation::Zero && c.coeffs.iter().any(|x| !x.is_zero()))
    {
        let eq = cs.swap_remove(pos);
        let k = eq.coeffs.iter().position(|x| !x.is_zero()).unwrap();
        let inv = Q::from_integer(1.into()) / &eq.coeffs[k];
        for c in cs.iter_mut() {
            if c.coeffs[k].is_zero() {
                continue;
            }
            let f = &c.coeffs[k] * &inv;
            for j in 0..n {
                let d = &f * &eq.coeffs[j];
                c.coeffs[j] -= d;
            }
            c.constant -= &f * &eq.constant;
        }
    }
    for k in 0..n {
        if cs.iter().any(|c| c.trivially_holds() == Some(false)) {
            return false;
        }
        cs.retain(|c| c.trivially_holds().is_none());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cs {
            if c.coeffs[k].is_positive() {
                pos.push(c);
            } else if c.coeffs[k].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            let sp = p.scaled(&(Q::from_integer(1.into()) / &p.coeffs[k]));
            for m in &neg {
                let sm = m.scaled(&(Q::from_integer(1.into()) / -&m.coeffs[k]));
                let relation = if sp.relation == Relation::Positive || sm.relation == Relation::Positive {
                    Relation::Positive
                } else {
                    Relation::NonNegative
                };
                let coeffs = sp.coeffs.iter().zip(&sm.coeffs).map(|(a, b)| a + b).collect();
                rest.push(Constraint::new(coeffs, &sp.constant + &sm.constant, relation).normalized());
            }
        }
        rest.sort();
        rest.dedup();
        cs = rest;
    }
    cs.iter().all(|c| c.trivially_holds() != Some(false))
}
