//! Elementarity: is induction from the underlying-set fibration an
//! equivalence of Stokes functors?

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::functor::random::{random_cocartesian, random_graded, CocartesianOptions};
use crate::functor::{graded, hom_space, induce_from_underlying, is_stokes, iso_exists, IsoOptions, IsoVerdict, VectFunctor};
use crate::par::{map_trials, trial_seed};
use crate::poset::StokesSpace;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ElementaryOptions {
    pub dim_bound: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ElementaryOptions {
    fn default() -> Self {
        ElementaryOptions { dim_bound: 2, trials: 64, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub enum ElementaryVerdict {
    Certified { by: String },
    Counterexample { functor: VectFunctor, reason: String, trial: Option<usize> },
    /// No counterexample in `trials`; `undecided` of them had an
    /// inconclusive isomorphism test.
    Inconclusive { trials: usize, undecided: usize },
}

impl ElementaryVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            ElementaryVerdict::Certified { .. } => "elementary-certified",
            ElementaryVerdict::Counterexample { .. } => "counterexample",
            ElementaryVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, ElementaryVerdict::Certified { .. })
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, ElementaryVerdict::Counterexample { .. })
    }
}

/// Order-theoretic certificates: discrete fibers, or an initial base
/// element with discrete fiber (every Stokes functor is then induced from
/// that fiber, on `I` and on `I^set` alike).
pub fn certificate(s: &StokesSpace) -> Option<String> {
    if s.has_discrete_fibers() {
        return Some("discrete fibers".into());
    }
    let base = s.base();
    if let Some(x0) = base.minimum() {
        if s.fiber(x0).is_discrete() {
            return Some(format!("initial base element {} with discrete fiber", base.label(x0)));
        }
    }
    None
}

/// `dim Hom(i_!ev_b, i_!ev_a)` against `dim Hom(ev_b, ev_a)` for the
/// skyscrapers on `I^set` over a one-point base.
fn point_hom_asymmetry(s: &StokesSpace) -> Result<Option<(VectFunctor, String)>> {
    if s.base().len() != 1 {
        return Ok(None);
    }
    let fib = s.fiber(0);
    let set = s.underlying_set();
    let sp = set.total_poset();
    for a in 0..fib.len() {
        for b in 0..fib.len() {
            if !fib.lt(a, b) {
                continue;
            }
            let (ea, eb) = (VectFunctor::skyscraper(sp, a), VectFunctor::skyscraper(sp, b));
            let (ia, ib) = (induce_from_underlying(s, &ea)?, induce_from_underlying(s, &eb)?);
            let up = hom_space(&ib, &ia)?.len();
            let down = hom_space(&eb, &ea)?.len();
            if up != down {
                return Ok(Some((
                    ib,
                    format!(
                        "dim Hom(i_!ev_{b}, i_!ev_{a}) = {up} but dim Hom(ev_{b}, ev_{a}) = {down}",
                        a = fib.label(a),
                        b = fib.label(b)
                    ),
                )));
            }
        }
    }
    Ok(None)
}

enum Trial {
    Pass,
    Undecided,
    Fail(VectFunctor, String),
}

fn run_trial(s: &StokesSpace, opts: &ElementaryOptions, i: usize) -> Result<Trial> {
    let seed = trial_seed(opts.seed, i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Full faithfulness on a random pair of induced generators.
    let g1 = random_graded(&mut rng, s, opts.dim_bound)?;
    let g2 = random_graded(&mut rng, s, opts.dim_bound)?;
    let (i1, i2) = (induce_from_underlying(s, &g1)?, induce_from_underlying(s, &g2)?);
    let (up, down) = (hom_space(&i1, &i2)?.len(), hom_space(&g1, &g2)?.len());
    if up != down {
        return Ok(Trial::Fail(i1, format!("dim Hom(i_!G, i_!G') = {up} but dim Hom(G, G') = {down}")));
    }
    // Essential surjectivity on a random Stokes functor.
    let f = match random_cocartesian(&mut rng, s, CocartesianOptions { dim_bound: opts.dim_bound, split: true, retries: 16 }) {
        Ok(f) => f,
        Err(_) => return Ok(Trial::Undecided),
    };
    if !is_stokes(&f, s)?.stokes {
        return Ok(Trial::Undecided);
    }
    let induced = induce_from_underlying(s, &graded(&f, s)?.functor)?;
    Ok(match iso_exists(&induced, &f, IsoOptions { seed, ..IsoOptions::default() })? {
        IsoVerdict::Isomorphic(_) => Trial::Pass,
        IsoVerdict::NotIsomorphic { reason } => {
            Trial::Fail(f, format!("Stokes functor not induced from its graded: {reason}"))
        }
        IsoVerdict::Inconclusive { .. } => Trial::Undecided,
    })
}

/// Certifies only through [`certificate`]; otherwise searches for a
/// counterexample to full faithfulness (hom dimensions on induced
/// generators) or essential surjectivity (a random Stokes functor not
/// isomorphic to `i_!` of its graded), and reports inconclusive when none
/// is found.
pub fn is_elementary(s: &StokesSpace, opts: ElementaryOptions) -> Result<ElementaryVerdict> {
    if let Some(by) = certificate(s) {
        return Ok(ElementaryVerdict::Certified { by });
    }
    if let Some((functor, reason)) = point_hom_asymmetry(s)? {
        return Ok(ElementaryVerdict::Counterexample { functor, reason, trial: None });
    }
    search(s, opts)
}

/// The randomized part of [`is_elementary`], without certificates.
pub fn search(s: &StokesSpace, opts: ElementaryOptions) -> Result<ElementaryVerdict> {
    let results = map_trials(opts.trials, |i| run_trial(s, &opts, i));
    let mut undecided = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r? {
            Trial::Pass => {}
            Trial::Undecided => undecided += 1,
            Trial::Fail(functor, reason) => {
                return Ok(ElementaryVerdict::Counterexample { functor, reason, trial: Some(i) })
            }
        }
    }
    Ok(ElementaryVerdict::Inconclusive { trials: opts.trials, undecided })
}
