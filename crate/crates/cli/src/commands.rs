use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use stokes_core::functor::{is_cocartesian, is_split, is_stokes, rhom, IsoOptions, VectFunctor};
use stokes_core::geometry::{angle_label, from_stokes_matrices, level_filtration, random_stokes_data, sign_label};
use stokes_core::json::{IrregularDoc, PosetDoc, StokesSpaceDoc, VectFunctorDoc};
use stokes_core::ops::{devissage_check, hybrid_descent_check, is_elementary, ElementaryOptions, ElementaryVerdict};
use stokes_core::par::{map_trials, trial_seed};

use crate::input::{load_functor, load_space, Source, SpaceInput};
use crate::report::Status;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Cocartesian,
    Split,
    Stokes,
    Elementary,
    Devissage,
    Descent,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::Cocartesian => "cocartesian",
            Which::Split => "split",
            Which::Stokes => "stokes",
            Which::Elementary => "elementary",
            Which::Devissage => "devissage",
            Which::Descent => "descent",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub seed: u64,
    pub dim_bound: usize,
    pub trials: usize,
}

/// Verdict, status, command-specific result and witness.
pub struct Outcome {
    pub verdict: String,
    pub status: Status,
    pub result: Value,
    pub witness: Value,
}

impl Outcome {
    fn new(verdict: &str, status: Status, result: Value, witness: Value) -> Self {
        Outcome { verdict: verdict.to_string(), status, result, witness }
    }

    fn boolean(holds: bool, result: Value, witness: Value) -> Self {
        let status = if holds { Status::Verified } else { Status::Counterexample };
        Outcome::new(if holds { "true" } else { "false" }, status, result, witness)
    }
}

fn functor_json(f: &VectFunctor) -> Value {
    serde_json::to_value(VectFunctorDoc::from_functor(f)).expect("functor documents serialize")
}

pub fn build(src: &Source) -> Result<Outcome> {
    let input = load_space(src)?;
    let s = input.space();
    let mut result = json!({
        "kind": input.kind(),
        "space": StokesSpaceDoc::from_space(s),
        "total_poset": PosetDoc::from_poset(s.total_poset()),
    });
    match &input {
        SpaceInput::Irregular(cs) => {
            result["directions"] = json!(cs.directions.iter().map(angle_label).collect::<Vec<_>>());
        }
        SpaceInput::Polyhedral(ps) => {
            result["cells"] = json!(ps.cells.iter().map(|c| sign_label(c)).collect::<Vec<_>>());
        }
        SpaceInput::Space(_) => {}
    }
    Ok(Outcome::new("valid", Status::Verified, result, Value::Null))
}

pub fn check(which: Which, space: &Source, functor: Option<&Source>, st: Settings) -> Result<Outcome> {
    let input = load_space(space)?;
    let needs_functor = || -> Result<VectFunctor> {
        let src = functor.ok_or_else(|| anyhow!("check {} needs a functor file", which.name()))?;
        load_functor(src, &input)
    };
    let s = input.space();
    match which {
        Which::Cocartesian => {
            let v = is_cocartesian(&needs_functor()?, s)?;
            let witness = v.failure.clone().map_or(Value::Null, |e| json!({ "cover": e }));
            Ok(Outcome::boolean(v.cocartesian, json!(v), witness))
        }
        Which::Split => {
            let v = is_split(&needs_functor()?);
            Ok(Outcome::boolean(v.split, json!({ "split": v.split, "defects": v.defects }), Value::Null))
        }
        Which::Stokes => {
            let v = is_stokes(&needs_functor()?, s)?;
            let witness = if v.stokes {
                Value::Null
            } else {
                json!({ "failure": v.failure, "non_split_at": v.non_split_at })
            };
            Ok(Outcome::boolean(v.stokes, json!(v), witness))
        }
        Which::Elementary => elementary(&input, st),
        Which::Devissage => devissage(&input, functor, st),
        Which::Descent => {
            let f = needs_functor()?;
            let base = s.base();
            // Stars of the minimal elements cover the base.
            let cover: Vec<Vec<usize>> = base
                .minimal_elements()
                .into_iter()
                .map(|x| (0..base.len()).filter(|&y| base.leq(x, y)).collect())
                .collect();
            let r = hybrid_descent_check(s, &cover, &f)?;
            let status = if r.consistent { Status::Verified } else { Status::Counterexample };
            let verdict = if r.consistent { "consistent" } else { "inconsistent" };
            Ok(Outcome::new(verdict, status, json!(r), Value::Null))
        }
    }
}

fn elementary(input: &SpaceInput, st: Settings) -> Result<Outcome> {
    let mut result = json!({});
    if let SpaceInput::Polyhedral(ps) = input {
        let criterion = ps.elementarity_criterion();
        result["criterion"] = json!(criterion);
        if criterion.is_certified() {
            return Ok(Outcome::new(
                "elementary-certified",
                Status::Verified,
                json!({ "criterion": criterion, "by": "polyhedral criterion" }),
                Value::Null,
            ));
        }
    }
    let opts = ElementaryOptions { dim_bound: st.dim_bound, trials: st.trials, seed: st.seed };
    let v = is_elementary(input.space(), opts)?;
    let label = v.label();
    Ok(match v {
        ElementaryVerdict::Certified { by } => {
            result["by"] = json!(by);
            Outcome::new(label, Status::Verified, result, Value::Null)
        }
        ElementaryVerdict::Counterexample { functor, reason, trial } => {
            let witness = json!({ "reason": reason, "trial": trial, "functor": functor_json(&functor) });
            Outcome::new(label, Status::Counterexample, result, witness)
        }
        ElementaryVerdict::Inconclusive { trials, undecided } => {
            result["trials"] = json!(trials);
            result["undecided"] = json!(undecided);
            Outcome::new(label, Status::Inconclusive, result, Value::Null)
        }
    })
}

fn devissage(input: &SpaceInput, functor: Option<&Source>, st: Settings) -> Result<Outcome> {
    let SpaceInput::Irregular(cs0) = input else {
        bail!("check devissage needs an irregular class");
    };
    let (cs, levels) = level_filtration(&cs0.class)?;
    let projections: Vec<_> = (0..levels.spaces().len() - 1).map(|j| levels.projection_to(j)).collect();
    let run = |f: &VectFunctor, seed: u64| -> Result<Option<(usize, String)>> {
        for (j, p) in projections.iter().enumerate() {
            let r = devissage_check(p, f, IsoOptions { seed, ..IsoOptions::default() })?;
            if let Some(failure) = r.failure {
                return Ok(Some((j, failure)));
            }
        }
        Ok(None)
    };
    let functors: Vec<(Option<usize>, VectFunctor)> = match functor {
        Some(src) => vec![(None, load_functor(src, &SpaceInput::Irregular(cs.clone()))?)],
        None => map_trials(st.trials, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(st.seed, i));
            let data = random_stokes_data(&mut rng, &cs, st.dim_bound, 3);
            from_stokes_matrices(&cs, &data).map(|f| (Some(i), f))
        })
        .into_iter()
        .collect::<stokes_core::Result<_>>()?,
    };
    let outcomes = map_trials(functors.len(), |i| run(&functors[i].1, trial_seed(st.seed, i)));
    let result = json!({
        "levels": levels.spaces().len() - 1,
        "sequence": levels.sequence().iter().map(stokes_core::linalg::format_q).collect::<Vec<_>>(),
        "functors": functors.len(),
    });
    for (i, o) in outcomes.into_iter().enumerate() {
        if let Some((level, failure)) = o? {
            let (trial, f) = &functors[i];
            let witness = json!({ "trial": trial, "level": level, "failure": failure, "functor": functor_json(f) });
            return Ok(Outcome::new("fail", Status::Counterexample, result, witness));
        }
    }
    Ok(Outcome::new("pass", Status::Verified, result, Value::Null))
}

pub fn directions(src: &Source) -> Result<Outcome> {
    let doc: IrregularDoc = serde_json::from_str(&src.text).map_err(|e| anyhow!("{}: {e}", src.name))?;
    let class = doc.build().map_err(|e| anyhow!("{}: {e}", src.name))?;
    let mut pairs = BTreeMap::new();
    for i in 0..class.len() {
        for j in i + 1..class.len() {
            let dirs = class.directions(i, j)?;
            pairs.insert(format!("({i},{j})"), dirs.iter().map(angle_label).collect::<Vec<_>>());
        }
    }
    let result = json!({ "labels": class.labels(), "directions": pairs });
    Ok(Outcome::new("computed", Status::Verified, result, Value::Null))
}

pub fn tangent(space: &Source, functor: &Source) -> Result<Outcome> {
    let input = load_space(space)?;
    let f = load_functor(functor, &input)?;
    let c = rhom(&f, &f)?;
    let result = json!({ "ext": c.cohomology_dims(), "euler_characteristic": c.euler_char() });
    Ok(Outcome::new("computed", Status::Verified, result, Value::Null))
}
