//! The level dévissage square and Stokes detection along a level morphism.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functor::{gr_p, graded, is_cocartesian, is_stokes, iso_exists, lan, IsoOptions, VectFunctor};
use crate::poset::{FiberMap, StokesSpace};

/// Clauses checked for `F` along `p : I -> J`:
/// (i) `Gr_p F` is Stokes on `I_p`, (ii) `p_! F` is Stokes on `J`,
/// (iii) `Gr(p_! F) ≅ π_!(Gr_p F)` on `J^set`, (iv) `F` is Stokes iff it
/// is cocartesian and (i), (ii) hold.
#[derive(Clone, Debug, Serialize)]
pub struct DevissageReport {
    pub functor_stokes: bool,
    pub functor_cocartesian: bool,
    pub gr_stokes: bool,
    pub pushforward_stokes: bool,
    /// Verdict label of the isomorphism test in (iii).
    pub square: &'static str,
    pub square_iso: bool,
    pub detection: bool,
    pub passed: bool,
    pub failure: Option<String>,
}

pub fn devissage_check(p: &FiberMap, f: &VectFunctor, opts: IsoOptions) -> Result<DevissageReport> {
    if !p.is_level_morphism() {
        return Err(Error::Precondition("p is not a level morphism".into()));
    }
    let (i, j) = (p.source(), p.target());
    if f.domain() != i.total_poset() {
        return Err(Error::Precondition("functor is not defined on the source total poset".into()));
    }
    let fs = is_stokes(f, i)?;
    let gr = gr_p(f, p)?;
    let (ip, pi) = p.fibration_ip();
    let gr_stokes = is_stokes(&gr.functor, &ip)?.stokes;
    let push = lan(&p.total_map(), f)?.functor;
    let pushforward_stokes = is_stokes(&push, j)?.stokes;
    let left = graded(&push, j)?.functor;
    let right = lan(&pi.total_map(), &gr.functor)?.functor;
    let verdict = iso_exists(&left, &right, opts)?;
    let square_iso = verdict.is_iso();
    let functor_cocartesian = is_cocartesian(f, i)?.cocartesian;
    let detection = fs.stokes == (functor_cocartesian && gr_stokes && pushforward_stokes);
    let failure = [
        (!gr_stokes).then_some("(i) Gr_p F is not Stokes"),
        (!pushforward_stokes).then_some("(ii) p_! F is not Stokes"),
        (!square_iso).then_some("(iii) Gr(p_! F) and π_!(Gr_p F) are not shown isomorphic"),
        (!detection).then_some("(iv) Stokes detection fails"),
    ]
    .into_iter()
    .flatten()
    .next()
    .map(String::from);
    Ok(DevissageReport {
        functor_stokes: fs.stokes,
        functor_cocartesian,
        gr_stokes,
        pushforward_stokes,
        square: verdict.label(),
        square_iso,
        detection,
        passed: failure.is_none(),
        failure,
    })
}

/// `F ⊕ ev_{(x,a)}` for a random fiber element `a` that is not maximal in
/// its fiber; the result is not split on that fiber.
pub fn corrupt<R: Rng>(rng: &mut R, f: &VectFunctor, s: &StokesSpace) -> Result<VectFunctor> {
    let total = s.total();
    let candidates: Vec<usize> = (0..total.elements.len())
        .filter(|&u| {
            let (x, a) = total.elements[u];
            let fib = s.fiber(x);
            (0..fib.len()).any(|b| fib.lt(a, b))
        })
        .collect();
    if candidates.is_empty() {
        return Err(Error::Precondition("every fiber element is maximal".into()));
    }
    let u = candidates[rng.random_range(0..candidates.len())];
    f.direct_sum(&VectFunctor::skyscraper(s.total_poset(), u))
}
