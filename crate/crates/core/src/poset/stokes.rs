//! Cocartesian fibrations in posets over a finite base poset.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{MonotoneMap, Poset};

/// Base poset, a fiber poset per base element and monotone transitions on
/// covering relations. Composite transitions are derived and checked for
/// coherence at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StokesSpace {
    base: Poset,
    fibers: Vec<Poset>,
    /// `transport[x][y]` is `γ_{xy}` for `x ≤ y`.
    transport: Vec<Vec<Option<Vec<usize>>>>,
    total: TotalPoset,
}

/// The total poset of a fibration together with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalPoset {
    pub poset: Poset,
    /// `(base element, fiber element)` per total element.
    pub elements: Vec<(usize, usize)>,
    /// `offsets[x]` is the total index of `(x, 0)`.
    pub offsets: Vec<usize>,
    /// `(x,a) -> (y, γ_{xy}(a))` for base covers `x ⋖ y`.
    pub cocartesian_edges: Vec<(usize, usize)>,
}

impl TotalPoset {
    pub fn index(&self, x: usize, a: usize) -> usize {
        self.offsets[x] + a
    }

    pub fn fiber_range(&self, x: usize) -> std::ops::Range<usize> {
        let end = self.offsets.get(x + 1).copied().unwrap_or(self.elements.len());
        self.offsets[x]..end
    }
}

impl StokesSpace {
    pub fn new(
        base: Poset,
        fibers: Vec<Poset>,
        transitions: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        if fibers.len() != base.len() {
            return Err(Error::Incoherent(format!(
                "{} fibers for {} base elements",
                fibers.len(),
                base.len()
            )));
        }
        if let Some(x) = fibers.iter().position(|f| f.is_empty()) {
            return Err(Error::Precondition(format!("fiber over {} is empty", base.label(x))));
        }
        let covers = base.covers();
        for key in transitions.keys() {
            if !covers.contains(key) {
                return Err(Error::Incoherent(format!(
                    "transition {}->{} is not on a covering relation",
                    base.label(key.0),
                    base.label(key.1)
                )));
            }
        }
        for &(x, y) in &covers {
            let t = transitions.get(&(x, y)).ok_or_else(|| {
                Error::Incoherent(format!(
                    "missing transition {}->{}",
                    base.label(x),
                    base.label(y)
                ))
            })?;
            MonotoneMap::new(fibers[x].clone(), fibers[y].clone(), t.clone()).map_err(|e| {
                Error::Incoherent(format!("transition {}->{}: {e}", base.label(x), base.label(y)))
            })?;
        }
        let n = base.len();
        let mut transport: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n]; n];
        for y in base.linear_extension() {
            transport[y][y] = Some((0..fibers[y].len()).collect());
            for x in 0..n {
                if !base.lt(x, y) {
                    continue;
                }
                let mut found: Option<Vec<usize>> = None;
                for z in base.lower_covers(y) {
                    if !base.leq(x, z) {
                        continue;
                    }
                    let first = transport[x][z].as_ref().expect("computed earlier");
                    let last = &transitions[&(z, y)];
                    let comp: Vec<usize> = first.iter().map(|&a| last[a]).collect();
                    match &found {
                        None => found = Some(comp),
                        Some(prev) if *prev != comp => {
                            return Err(Error::Incoherent(format!(
                                "composites from {} to {} disagree (via {})",
                                base.label(x),
                                base.label(y),
                                base.label(z)
                            )));
                        }
                        Some(_) => {}
                    }
                }
                transport[x][y] = found;
            }
        }
        let total = build_total(&base, &fibers, &transport)?;
        Ok(StokesSpace { base, fibers, transport, total })
    }

    /// Builds from labels: `fibers` lists one poset per base label and
    /// `transitions` gives `(x, y) -> [(a, γ(a))]` on covering relations.
    pub fn from_labels(
        base: Poset,
        fibers: &[(&str, Poset)],
        transitions: &[((&str, &str), Vec<(&str, &str)>)],
    ) -> Result<Self> {
        let mut fs: Vec<Option<Poset>> = vec![None; base.len()];
        for (l, p) in fibers {
            fs[base.idx(l)?] = Some(p.clone());
        }
        let fs = fs
            .into_iter()
            .enumerate()
            .map(|(i, f)| {
                f.ok_or_else(|| Error::Incoherent(format!("no fiber at {:?}", base.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ts = BTreeMap::new();
        for ((x, y), pairs) in transitions {
            let (xi, yi) = (base.idx(x)?, base.idx(y)?);
            let m = MonotoneMap::from_labels(fs[xi].clone(), fs[yi].clone(), pairs)?;
            ts.insert((xi, yi), m.assignment().to_vec());
        }
        StokesSpace::new(base, fs, ts)
    }

    /// The fibration with a single base point.
    pub fn point(fiber: Poset) -> Self {
        StokesSpace::new(Poset::point("*"), vec![fiber], BTreeMap::new())
            .expect("a point fibration is always valid")
    }

    /// `base × fiber` with identity transitions.
    pub fn constant(base: Poset, fiber: Poset) -> Self {
        let ts = base.covers().into_iter().map(|c| (c, (0..fiber.len()).collect())).collect();
        let fibers = vec![fiber; base.len()];
        StokesSpace::new(base, fibers, ts).expect("constant fibrations are coherent")
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn fiber(&self, x: usize) -> &Poset {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[Poset] {
        &self.fibers
    }

    /// `γ_{xy}` for `x ≤ y`.
    pub fn transport(&self, x: usize, y: usize) -> Option<&[usize]> {
        self.transport[x][y].as_deref()
    }

    pub fn transition_map(&self, x: usize, y: usize) -> Option<MonotoneMap> {
        let t = self.transport(x, y)?.to_vec();
        Some(MonotoneMap::new(self.fibers[x].clone(), self.fibers[y].clone(), t).expect("monotone"))
    }

    /// Transitions on covering relations.
    pub fn cover_transitions(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        self.base
            .covers()
            .into_iter()
            .map(|(x, y)| ((x, y), self.transport[x][y].clone().expect("cover")))
            .collect()
    }

    pub fn total(&self) -> &TotalPoset {
        &self.total
    }

    pub fn total_poset(&self) -> &Poset {
        &self.total.poset
    }

    /// The inclusion `j_x` of the fiber at `x` into the total poset.
    pub fn fiber_inclusion(&self, x: usize) -> MonotoneMap {
        let idx: Vec<usize> = self.total.fiber_range(x).collect();
        MonotoneMap::new(self.fibers[x].clone(), self.total.poset.clone(), idx).expect("fiber inclusion is monotone")
    }

    /// Projection of the total poset onto the base.
    pub fn projection(&self) -> MonotoneMap {
        let assignment = self.total.elements.iter().map(|&(x, _)| x).collect();
        MonotoneMap::new(self.total.poset.clone(), self.base.clone(), assignment)
            .expect("projection is monotone")
    }

    pub fn has_discrete_fibers(&self) -> bool {
        self.fibers.iter().all(Poset::is_discrete)
    }

    /// All transitions are bijections.
    pub fn is_locally_constant_set(&self) -> bool {
        self.cover_transitions().iter().all(|(&(x, y), t)| {
            let mut seen = vec![false; self.fibers[y].len()];
            self.fibers[x].len() == self.fibers[y].len()
                && t.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
        })
    }

    /// Same base and transitions, fiber orders forgotten.
    pub fn underlying_set(&self) -> StokesSpace {
        let fibers = self.fibers.iter().map(Poset::underlying_set).collect();
        StokesSpace::new(self.base.clone(), fibers, self.cover_transitions())
            .expect("forgetting orders keeps coherence")
    }

    /// The inclusion `I^set -> I`.
    pub fn underlying_inclusion(&self) -> FiberMap {
        let maps = self.fibers.iter().map(|f| (0..f.len()).collect()).collect();
        FiberMap::new(self.underlying_set(), self.clone(), maps).expect("identity on sets")
    }

    /// Restriction to the subposet of the base on `elements`.
    pub fn restrict_base(&self, elements: &[usize]) -> Result<StokesSpace> {
        let sub = self.base.subposet(elements)?;
        let fibers = elements.iter().map(|&x| self.fibers[x].clone()).collect();
        let ts = sub
            .covers()
            .into_iter()
            .map(|(i, j)| ((i, j), self.transport[elements[i]][elements[j]].clone().unwrap()))
            .collect();
        StokesSpace::new(sub, fibers, ts)
    }
}

fn build_total(
    base: &Poset,
    fibers: &[Poset],
    transport: &[Vec<Option<Vec<usize>>>],
) -> Result<TotalPoset> {
    let mut elements = Vec::new();
    let mut offsets = Vec::with_capacity(base.len());
    let mut labels = Vec::new();
    for (x, f) in fibers.iter().enumerate() {
        offsets.push(elements.len());
        for a in 0..f.len() {
            elements.push((x, a));
            labels.push(format!("({},{})", base.label(x), f.label(a)));
        }
    }
    let n = elements.len();
    let mut leq = vec![false; n * n];
    for (i, &(x, a)) in elements.iter().enumerate() {
        for (j, &(y, b)) in elements.iter().enumerate() {
            if let Some(t) = &transport[x][y] {
                leq[i * n + j] = fibers[y].leq(t[a], b);
            }
        }
    }
    let poset = Poset::from_matrix(labels, leq)
        .map_err(|e| Error::Incoherent(format!("total poset: {e}")))?;
    let mut cocartesian_edges = Vec::new();
    for (x, y) in base.covers() {
        let t = transport[x][y].as_ref().unwrap();
        for (a, &b) in t.iter().enumerate() {
            cocartesian_edges.push((offsets[x] + a, offsets[y] + b));
        }
    }
    Ok(TotalPoset { poset, elements, offsets, cocartesian_edges })
}

/// A family of monotone fiber maps `I_x -> J_x` over a common base,
/// commuting with transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberMap {
    source: StokesSpace,
    target: StokesSpace,
    maps: Vec<Vec<usize>>,
}

impl FiberMap {
    pub fn new(source: StokesSpace, target: StokesSpace, maps: Vec<Vec<usize>>) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::Precondition("fiber maps need a common base".into()));
        }
        if maps.len() != source.base.len() {
            return Err(Error::Precondition("one fiber map per base element expected".into()));
        }
        for (x, m) in maps.iter().enumerate() {
            MonotoneMap::new(source.fibers[x].clone(), target.fibers[x].clone(), m.clone())
                .map_err(|e| {
                    Error::NotMonotone(format!("fiber map at {}: {e}", source.base.label(x)))
                })?;
        }
        for ((x, y), g) in source.cover_transitions() {
            let h = target.transport(x, y).unwrap();
            for (a, &ga) in g.iter().enumerate() {
                if maps[y][ga] != h[maps[x][a]] {
                    return Err(Error::Incoherent(format!(
                        "fiber map does not commute with the transition {}->{} at {:?}",
                        source.base.label(x),
                        source.base.label(y),
                        source.fibers[x].label(a)
                    )));
                }
            }
        }
        Ok(FiberMap { source, target, maps })
    }

    /// Builds from per-base-element label assignments.
    pub fn from_labels(
        source: StokesSpace,
        target: StokesSpace,
        maps: &[(&str, Vec<(&str, &str)>)],
    ) -> Result<Self> {
        let mut out = vec![Vec::new(); source.base.len()];
        for (x, pairs) in maps {
            let xi = source.base.idx(x)?;
            let m = MonotoneMap::from_labels(
                source.fibers[xi].clone(),
                target.fibers[xi].clone(),
                pairs,
            )?;
            out[xi] = m.assignment().to_vec();
        }
        FiberMap::new(source, target, out)
    }

    pub fn identity(s: &StokesSpace) -> Self {
        let maps = s.fibers.iter().map(|f| (0..f.len()).collect()).collect();
        FiberMap { source: s.clone(), target: s.clone(), maps }
    }

    pub fn source(&self) -> &StokesSpace {
        &self.source
    }

    pub fn target(&self) -> &StokesSpace {
        &self.target
    }

    pub fn at(&self, x: usize) -> &[usize] {
        &self.maps[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FiberMap) -> Result<FiberMap> {
        if self.target != other.source {
            return Err(Error::Precondition("fiber maps are not composable".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(f, g)| f.iter().map(|&b| g[b]).collect())
            .collect();
        Ok(FiberMap { source: self.source.clone(), target: other.target.clone(), maps })
    }

    /// `p(a) < p(b) ⇒ a < b` in every fiber.
    pub fn is_level_morphism(&self) -> bool {
        (0..self.source.base.len()).all(|x| {
            let (i, j, p) = (&self.source.fibers[x], &self.target.fibers[x], &self.maps[x]);
            (0..i.len()).all(|a| (0..i.len()).all(|b| !j.lt(p[a], p[b]) || i.lt(a, b)))
        })
    }

    /// The induced map of total posets.
    pub fn total_map(&self) -> MonotoneMap {
        let (s, t) = (&self.source.total, &self.target.total);
        let assignment = s.elements.iter().map(|&(x, a)| t.index(x, self.maps[x][a])).collect();
        MonotoneMap::new(s.poset.clone(), t.poset.clone(), assignment)
            .expect("fiber maps commuting with transitions are monotone on totals")
    }

    /// The fibration `I_p` (`a ≤_p a'` iff `p(a) = p(a')` and `a ≤ a'`)
    /// with its projection onto `J^set`.
    pub fn fibration_ip(&self) -> (StokesSpace, FiberMap) {
        let fibers: Vec<Poset> = self
            .source
            .fibers
            .iter()
            .zip(&self.maps)
            .map(|(f, p)| {
                let n = f.len();
                let mut leq = vec![false; n * n];
                for a in 0..n {
                    for b in 0..n {
                        leq[a * n + b] = p[a] == p[b] && f.leq(a, b);
                    }
                }
                Poset::from_matrix(f.labels().to_vec(), leq).expect("suborder of a poset")
            })
            .collect();
        let ip = StokesSpace::new(self.source.base.clone(), fibers, self.source.cover_transitions())
            .expect("transitions preserve ≤_p");
        let pi = FiberMap::new(ip.clone(), self.target.underlying_set(), self.maps.clone())
            .expect("projection onto J^set");
        (ip, pi)
    }
}
