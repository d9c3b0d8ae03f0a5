//! Input files: detection of the document kind and construction of spaces
//! and functors.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;

use stokes_core::functor::VectFunctor;
use stokes_core::geometry::{circle_space, from_stokes_matrices, polyhedral_space, CircleSpace, PolyhedralSpace};
use stokes_core::json::{IrregularDoc, PolyhedralDoc, StokesDataDoc, StokesSpaceDoc, VectFunctorDoc};
use stokes_core::poset::StokesSpace;

/// A named input with its raw bytes.
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok(Source { name: path.display().to_string(), text })
    }

    pub fn inline(name: &str, text: &str) -> Self {
        Source { name: name.to_string(), text: text.to_string() }
    }

    fn parse<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_str(&self.text).map_err(|e| anyhow!("{}: {e}", self.name))
    }

    fn keys(&self) -> Result<Value> {
        let v: Value = self.parse()?;
        if !v.is_object() {
            bail!("{}: expected a JSON object at the top level", self.name);
        }
        Ok(v)
    }
}

pub enum SpaceInput {
    Space(StokesSpace),
    Irregular(CircleSpace),
    Polyhedral(PolyhedralSpace),
}

impl SpaceInput {
    pub fn kind(&self) -> &'static str {
        match self {
            SpaceInput::Space(_) => "space",
            SpaceInput::Irregular(_) => "irregular",
            SpaceInput::Polyhedral(_) => "polyhedral",
        }
    }

    pub fn space(&self) -> &StokesSpace {
        match self {
            SpaceInput::Space(s) => s,
            SpaceInput::Irregular(cs) => &cs.space,
            SpaceInput::Polyhedral(ps) => &ps.space,
        }
    }
}

/// Detects a Stokes space, an irregular class or polyhedral data by its
/// top-level keys.
pub fn load_space(src: &Source) -> Result<SpaceInput> {
    let v = src.keys()?;
    let ctx = |e: stokes_core::Error| anyhow!("{}: {e}", src.name);
    if v.get("base").is_some() {
        let doc: StokesSpaceDoc = src.parse()?;
        Ok(SpaceInput::Space(doc.build().map_err(ctx)?))
    } else if v.get("exponentials").is_some() {
        let doc: IrregularDoc = src.parse()?;
        let class = doc.build().map_err(ctx)?;
        Ok(SpaceInput::Irregular(circle_space(&class).map_err(ctx)?))
    } else if v.get("forms").is_some() {
        let doc: PolyhedralDoc = src.parse()?;
        let (c, forms, fiber) = doc.build().map_err(ctx)?;
        Ok(SpaceInput::Polyhedral(polyhedral_space(c, forms, &fiber).map_err(ctx)?))
    } else {
        bail!("{}: not a Stokes space, irregular class or polyhedral document (no \"base\", \"exponentials\" or \"forms\" key)", src.name)
    }
}

/// A functor on the total poset of the space: a functor document, or Stokes
/// matrices over the circle of an irregular class.
pub fn load_functor(src: &Source, input: &SpaceInput) -> Result<VectFunctor> {
    let v = src.keys()?;
    let ctx = |e: stokes_core::Error| anyhow!("{}: {e}", src.name);
    if v.get("matrices").is_some() {
        let SpaceInput::Irregular(cs) = input else {
            bail!("{}: Stokes matrices need an irregular class as the space", src.name);
        };
        let doc: StokesDataDoc = src.parse()?;
        from_stokes_matrices(cs, &doc.build().map_err(ctx)?).map_err(ctx)
    } else {
        let doc: VectFunctorDoc = src.parse()?;
        doc.build_on(input.space().total_poset().clone()).map_err(ctx)
    }
}
