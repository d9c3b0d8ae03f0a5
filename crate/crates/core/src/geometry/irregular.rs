//! Exponential factors `Σ λ_i z^{-k_i}` with rational pole orders and
//! coefficients in polar form `λ = modulus · e^{iπ·angle}`, and the order
//! they induce on the circle of directions.
//!
//! Directions are measured in units of `π` on the `d`-fold cover, so a
//! direction is a rational `t ∈ [0, 2d)`. The value of `λ z^{-k}` at
//! `z = r e^{iπt}` is `|λ| r^{-k} e^{iπ(angle - k t)}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{format_q, Q};

/// `modulus · e^{iπ·angle} · z^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub k: Q,
    pub modulus: Q,
    /// In `[0, 2)`.
    pub angle: Q,
}

/// `x mod m` in `[0, m)`.
pub fn reduce_mod(x: &Q, m: &Q) -> Q {
    x - m * (x / m).floor()
}

fn two() -> Q {
    Q::from_integer(BigInt::from(2))
}

fn half() -> Q {
    Q::new(BigInt::one(), BigInt::from(2))
}

impl Term {
    pub fn new(k: Q, modulus: Q, angle: Q) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::Geometry(format!("pole order {} is not positive", format_q(&k))));
        }
        if !modulus.is_positive() {
            return Err(Error::Geometry(format!("modulus {} is not positive", format_q(&modulus))));
        }
        Ok(Term { k, modulus, angle: reduce_mod(&angle, &two()) })
    }
}

/// Sign of `cos(π x)`.
pub fn cos_pi_sign(x: &Q) -> Ordering {
    let r = reduce_mod(x, &two());
    let h = half();
    let th = Q::new(BigInt::from(3), BigInt::from(2));
    if r == h || r == th {
        Ordering::Equal
    } else if r > h && r < th {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// `Σ λ_i z^{-k_i}` with strictly decreasing pole orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxExponential {
    terms: Vec<Term>,
}

impl PuiseuxExponential {
    /// Terms of equal pole order are added, which needs collinear
    /// coefficients.
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let mut out = PuiseuxExponential::zero();
        for t in terms {
            out = out.add_term(&t, false)?;
        }
        Ok(out)
    }

    pub fn zero() -> Self {
        PuiseuxExponential { terms: Vec::new() }
    }

    pub fn monomial(k: Q, modulus: Q, angle: Q) -> Result<Self> {
        Ok(PuiseuxExponential { terms: vec![Term::new(k, modulus, angle)?] })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Pole order, `0` for the zero exponential.
    pub fn pole_order(&self) -> Q {
        self.leading().map(|t| t.k.clone()).unwrap_or_else(Q::zero)
    }

    /// Smallest `d` with every `k·d` integral.
    pub fn ramification(&self) -> usize {
        let d = self.terms.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.k.denom()));
        usize::try_from(d).expect("small ramification")
    }

    /// Adds (or subtracts) a term; coefficients of equal pole order must be
    /// collinear so that the result stays in polar form with rational angle.
    fn add_term(&self, t: &Term, negate: bool) -> Result<Self> {
        let angle = if negate { reduce_mod(&(&t.angle + Q::one()), &two()) } else { t.angle.clone() };
        let mut terms = self.terms.clone();
        match terms.iter().position(|s| s.k == t.k) {
            None => {
                terms.push(Term { k: t.k.clone(), modulus: t.modulus.clone(), angle });
                terms.sort_by(|a, b| b.k.cmp(&a.k));
            }
            Some(i) => {
                let s = &terms[i];
                let diff = reduce_mod(&(&angle - &s.angle), &two());
                let (modulus, new_angle) = if diff.is_zero() {
                    (&s.modulus + &t.modulus, s.angle.clone())
                } else if diff == Q::one() {
                    match s.modulus.cmp(&t.modulus) {
                        Ordering::Greater => (&s.modulus - &t.modulus, s.angle.clone()),
                        Ordering::Less => (&t.modulus - &s.modulus, angle),
                        Ordering::Equal => (Q::zero(), Q::zero()),
                    }
                } else {
                    return Err(Error::Geometry(format!(
                        "coefficients of z^-{} are not collinear",
                        format_q(&t.k)
                    )));
                };
                if modulus.is_zero() {
                    terms.remove(i);
                } else {
                    terms[i] = Term { k: t.k.clone(), modulus, angle: new_angle };
                }
            }
        }
        Ok(PuiseuxExponential { terms })
    }

    pub fn sub(&self, other: &PuiseuxExponential) -> Result<PuiseuxExponential> {
        other.terms.iter().try_fold(self.clone(), |acc, t| acc.add_term(t, true))
    }

    /// Terms of pole order strictly above `m`.
    pub fn truncate_above(&self, m: &Q) -> PuiseuxExponential {
        PuiseuxExponential { terms: self.terms.iter().filter(|t| &t.k > m).cloned().collect() }
    }

    /// The exponential `q'` with `q'(θ + 2π) = q(θ)` on the cover.
    pub fn deck_shift(&self) -> PuiseuxExponential {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { k: t.k.clone(), modulus: t.modulus.clone(), angle: reduce_mod(&(&t.angle + &t.k * two()), &two()) })
            .collect();
        PuiseuxExponential { terms }
    }
}

impl fmt::Display for PuiseuxExponential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let m = if t.modulus.is_one() { String::new() } else { format_q(&t.modulus) };
            let sign = if t.angle.is_zero() {
                if i == 0 { String::new() } else { "+".into() }
            } else if t.angle == Q::one() {
                "-".into()
            } else {
                format!("{}e^(i{}π)", if i == 0 { "" } else { "+" }, format_q(&t.angle))
            };
            write!(f, "{sign}{m}z^-{}", format_q(&t.k))?;
        }
        Ok(())
    }
}

/// Comparison of two exponentials at a direction: `Some(Less)` when
/// `Re(q1 - q2) -> -∞`, `Some(Equal)` when they coincide, `None` at a
/// Stokes direction of the pair.
pub fn compare_at(q1: &PuiseuxExponential, q2: &PuiseuxExponential, t: &Q) -> Result<Option<Ordering>> {
    let diff = q1.sub(q2)?;
    Ok(match diff.leading() {
        None => Some(Ordering::Equal),
        Some(l) => match cos_pi_sign(&(&l.angle - &l.k * t)) {
            Ordering::Equal => None,
            o => Some(o),
        },
    })
}

/// Directions `t ∈ [0, 2d)` (in units of `π`) where the leading term of
/// `q1 - q2` has vanishing real part, sorted.
pub fn stokes_directions(q1: &PuiseuxExponential, q2: &PuiseuxExponential, d: usize) -> Result<Vec<Q>> {
    let diff = q1.sub(q2)?;
    let l = diff.leading().ok_or_else(|| Error::Geometry("equal exponentials have no Stokes directions".into()))?;
    // angle - k t = 1/2 + j, i.e. t = (angle - 1/2 - j) / k.
    let top = Q::from_integer(BigInt::from(2 * d as i64));
    let span: BigInt = (&l.k * &top).ceil().to_integer() + 2;
    let mut out = Vec::new();
    let mut j = -span.clone();
    while j <= span {
        let t = (&l.angle - half() - Q::from_integer(j.clone())) / &l.k;
        if !t.is_negative() && t < top {
            out.push(t);
        }
        j += 1;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Pairwise distinct exponentials with labels and a common ramification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrregularClass {
    exponentials: Vec<PuiseuxExponential>,
    labels: Vec<String>,
    ramification: usize,
}

impl IrregularClass {
    /// Labels default to the printed exponentials; `ramification` defaults
    /// to the least common one and must be a multiple of it.
    pub fn new(
        exponentials: Vec<PuiseuxExponential>,
        labels: Option<Vec<String>>,
        ramification: Option<usize>,
    ) -> Result<Self> {
        if exponentials.is_empty() {
            return Err(Error::Geometry("an irregular class needs at least one exponential".into()));
        }
        for i in 0..exponentials.len() {
            for j in i + 1..exponentials.len() {
                if exponentials[i] == exponentials[j] {
                    return Err(Error::Geometry(format!("exponential {} is repeated", exponentials[i])));
                }
            }
        }
        let least = exponentials.iter().fold(1usize, |acc, e| acc.lcm(&e.ramification()));
        let ramification = ramification.unwrap_or(least);
        if ramification == 0 || ramification % least != 0 {
            return Err(Error::Geometry(format!(
                "ramification {ramification} is not a multiple of {least}"
            )));
        }
        let labels = labels.unwrap_or_else(|| exponentials.iter().map(|e| e.to_string()).collect());
        if labels.len() != exponentials.len() {
            return Err(Error::Geometry("one label per exponential expected".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::Geometry("exponential labels are not unique".into()));
        }
        for i in 0..exponentials.len() {
            for j in 0..i {
                exponentials[i].sub(&exponentials[j])?;
            }
        }
        Ok(IrregularClass { exponentials, labels, ramification })
    }

    pub fn exponentials(&self) -> &[PuiseuxExponential] {
        &self.exponentials
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.exponentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponentials.is_empty()
    }

    pub fn ramification(&self) -> usize {
        self.ramification
    }

    pub fn compare_at(&self, i: usize, j: usize, t: &Q) -> Option<Ordering> {
        compare_at(&self.exponentials[i], &self.exponentials[j], t).expect("checked at construction")
    }

    pub fn directions(&self, i: usize, j: usize) -> Result<Vec<Q>> {
        stokes_directions(&self.exponentials[i], &self.exponentials[j], self.ramification)
    }

    /// Union of the Stokes directions of all pairs, sorted.
    pub fn all_directions(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                out.extend(self.directions(i, j).expect("distinct exponentials"));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Distinct pole orders of pairwise differences, decreasing.
    pub fn difference_orders(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                out.push(self.exponentials[i].sub(&self.exponentials[j]).expect("checked").pole_order());
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }

    /// Index of the image of each exponential under the rotation by `2π`,
    /// or `None` when the class is not stable under it.
    pub fn deck_permutation(&self) -> Option<Vec<usize>> {
        self.exponentials
            .iter()
            .map(|e| {
                let s = e.deck_shift();
                self.exponentials.iter().position(|f| *f == s)
            })
            .collect()
    }
}
