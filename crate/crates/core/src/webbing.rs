//! The web of a group system: pairs `(s, g)` with `g` in the fiber over `s`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::abgroups::{Element, GroupError};
use crate::axioms::{check_axiom, Axiom, AxiomError, AxiomVerdict, FiniteStructure, Witness};
use crate::order::{way_below_by_sequences, FiniteOrderedMonoid, OrderError};
use crate::systems::{
    check_stability, compose, GroupSystem, StabilityVerdict, SystemError, SystemMorphism,
};

/// Largest carrier a web may materialize.
pub const MAX_WEB_SIZE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WebError {
    #[error("base monoid is not positively ordered")]
    NotPositivelyOrdered,
    #[error("fiber over {0} has Z factors and no window was given")]
    FiberNotEnumerable(usize),
    #[error("web would have {0} elements, more than the limit")]
    TooLarge(usize),
    #[error("web fails {axiom}: {witness:?}")]
    AxiomFailure {
        axiom: Axiom,
        witness: Option<Witness>,
    },
    #[error("zero is not compact in the web")]
    NonCompactZero,
    #[error("web is windowed; a full table is required")]
    Windowed,
    #[error("web does not belong to the given system")]
    WrongSystem,
    #[error("induced map is not {0}")]
    InducedMapBroken(&'static str),
    #[error("no preservation statement for {0}")]
    UnsupportedTag(Axiom),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Materialized web of a system. With Z fibers only a window of each fiber is kept and sums
/// leaving the window are undefined.
#[derive(Debug, Clone)]
pub struct WebbedSemigroup {
    system: Arc<GroupSystem>,
    window: Option<i64>,
    pairs: Vec<(usize, Element)>,
    index: HashMap<(usize, Element), usize>,
    add: Vec<Vec<Option<usize>>>,
    leq: Vec<Vec<bool>>,
    way_below: Vec<Vec<bool>>,
    provenance: String,
}

/// Builds the web of a system with finite fibers.
pub fn web(system: &Arc<GroupSystem>) -> Result<WebbedSemigroup, WebError> {
    build(system, None)
}

/// Builds the web keeping Z coordinates in `-window..=window`.
pub fn web_windowed(system: &Arc<GroupSystem>, window: i64) -> Result<WebbedSemigroup, WebError> {
    build(system, Some(window))
}

fn build(system: &Arc<GroupSystem>, window: Option<i64>) -> Result<WebbedSemigroup, WebError> {
    let base = system.base();
    if !base.positively_ordered() {
        return Err(WebError::NotPositivelyOrdered);
    }
    let window = if system.all_finite() { None } else { window };
    let mut pairs = Vec::new();
    for s in 0..base.size() {
        let fiber = system.fiber(s);
        let elems = fiber
            .elements(window)
            .map_err(|_| WebError::FiberNotEnumerable(s))?;
        for g in elems.elements {
            pairs.push((s, g));
            if pairs.len() > MAX_WEB_SIZE {
                return Err(WebError::TooLarge(pairs.len()));
            }
        }
    }
    let index: HashMap<(usize, Element), usize> = pairs
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let n = pairs.len();
    let mut add = vec![vec![None; n]; n];
    for a in 0..n {
        for b in a..n {
            let (s, g) = &pairs[a];
            let (t, h) = &pairs[b];
            let u = base.add(*s, *t);
            let gu = system.edge(*s, u).apply(g);
            let hu = system.edge(*t, u).apply(h);
            let sum = system.fiber(u).add(&gu, &hu);
            let v = index.get(&(u, sum)).copied();
            if v.is_none() && window.is_none() {
                unreachable!("finite web is closed under sums");
            }
            add[a][b] = v;
            add[b][a] = v;
        }
    }
    let rel = |a: usize, b: usize, base_rel: bool| -> bool {
        let (s, g) = &pairs[a];
        let (t, h) = &pairs[b];
        base_rel && &system.edge(*s, *t).apply(g) == h
    };
    let base_wb = base.way_below();
    let mut leq = vec![vec![false; n]; n];
    let mut way_below = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (s, t) = (pairs[a].0, pairs[b].0);
            leq[a][b] = rel(a, b, base.leq(s, t));
            way_below[a][b] = rel(a, b, base_wb[s][t]);
        }
    }
    let w = WebbedSemigroup {
        system: system.clone(),
        window,
        pairs,
        index,
        add,
        leq,
        way_below,
        provenance: crate::json::system_hash(system),
    };
    for ax in [Axiom::PC, Axiom::PD, Axiom::S0] {
        let v = check_axiom(&w, ax)?;
        if !v.holds {
            return Err(WebError::AxiomFailure {
                axiom: ax,
                witness: v.witness,
            });
        }
    }
    let z = w.zero_index();
    if !w.way_below[z][z] {
        return Err(WebError::NonCompactZero);
    }
    Ok(w)
}

impl WebbedSemigroup {
    pub fn system(&self) -> &Arc<GroupSystem> {
        &self.system
    }

    pub fn window(&self) -> Option<i64> {
        self.window
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, Element)] {
        &self.pairs
    }

    pub fn pair(&self, a: usize) -> (usize, &[i64]) {
        (self.pairs[a].0, &self.pairs[a].1)
    }

    pub fn index_of(&self, s: usize, g: &[i64]) -> Option<usize> {
        let g = self.system.fiber(s).normalize(g);
        self.index.get(&(s, g)).copied()
    }

    pub fn zero_index(&self) -> usize {
        let z = self.system.base().zero();
        self.index_of(z, &self.system.fiber(z).zero())
            .expect("zero pair present")
    }

    pub fn add_table(&self) -> &[Vec<Option<usize>>] {
        &self.add
    }

    pub fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn way_below_table(&self) -> &[Vec<bool>] {
        &self.way_below
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn label_of(&self, a: usize) -> String {
        let (s, g) = &self.pairs[a];
        let name = self.system.base().name(*s);
        let fiber = match g.len() {
            0 => "0".to_string(),
            1 => g[0].to_string(),
            _ => format!(
                "[{}]",
                g.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        };
        format!("({name},{fiber})")
    }

    /// The web as a finite ordered monoid with labelled elements.
    pub fn to_monoid(&self) -> Result<FiniteOrderedMonoid, WebError> {
        if self.window.is_some() {
            return Err(WebError::Windowed);
        }
        let n = self.len();
        let names = (0..n).map(|a| self.label_of(a)).collect();
        let add = self
            .add
            .iter()
            .map(|r| r.iter().map(|v| v.expect("full table")).collect())
            .collect();
        Ok(FiniteOrderedMonoid::new(
            names,
            self.zero_index(),
            add,
            self.leq.clone(),
            false,
        )?)
    }
}

impl FiniteStructure for WebbedSemigroup {
    fn size(&self) -> usize {
        self.len()
    }
    fn zero(&self) -> usize {
        self.zero_index()
    }
    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.add[a][b]
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }
    fn way_below(&self, a: usize, b: usize) -> bool {
        self.way_below[a][b]
    }
    fn label(&self, a: usize) -> String {
        self.label_of(a)
    }
    fn windowed(&self) -> bool {
        self.window.is_some()
    }
}

/// Way-below of the web computed from the base relation and the edges.
pub fn web_way_below(w: &WebbedSemigroup) -> &[Vec<bool>] {
    w.way_below_table()
}

/// Compares the edge formula for way-below with the sequence definition run on the web's order.
pub fn way_below_characterization_holds(w: &WebbedSemigroup) -> bool {
    way_below_by_sequences(w.leq_table()) == w.way_below_table()
}

/// The map of webs induced by a system morphism, as indices (undefined outside a window).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebMorphism {
    pub map: Vec<Option<usize>>,
}

impl WebMorphism {
    /// Builds `(s, g) -> (alpha(s), eta_s(g))` and checks it is a morphism of the webs.
    pub fn new(
        m: &SystemMorphism,
        source: &WebbedSemigroup,
        target: &WebbedSemigroup,
    ) -> Result<Self, WebError> {
        if **source.system() != **m.source() || **target.system() != **m.target() {
            return Err(WebError::WrongSystem);
        }
        let map: Vec<Option<usize>> = source
            .pairs()
            .iter()
            .map(|(s, g)| target.index_of(m.alpha()[*s], &m.eta(*s).apply(g)))
            .collect();
        let wm = WebMorphism { map };
        wm.verify(source, target)?;
        Ok(wm)
    }

    fn verify(&self, src: &WebbedSemigroup, dst: &WebbedSemigroup) -> Result<(), WebError> {
        let f = &self.map;
        if f[src.zero_index()] != Some(dst.zero_index()) {
            return Err(WebError::InducedMapBroken("zero preserving"));
        }
        for a in 0..src.len() {
            for b in 0..src.len() {
                let (Some(fa), Some(fb)) = (f[a], f[b]) else {
                    continue;
                };
                if let Some(ab) = src.sum(a, b) {
                    if let (Some(fab), Some(s)) = (f[ab], dst.sum(fa, fb)) {
                        if fab != s {
                            return Err(WebError::InducedMapBroken("additive"));
                        }
                    }
                }
                if src.leq(a, b) && !dst.leq(fa, fb) {
                    return Err(WebError::InducedMapBroken("order preserving"));
                }
                if src.way_below(a, b) && !dst.way_below(fa, fb) {
                    return Err(WebError::InducedMapBroken("way-below preserving"));
                }
            }
        }
        Ok(())
    }
}

/// Builds both webs and the induced map.
pub fn web_morphism(
    m: &SystemMorphism,
) -> Result<(WebbedSemigroup, WebbedSemigroup, WebMorphism), WebError> {
    let src = web(m.source())?;
    let dst = web(m.target())?;
    let wm = WebMorphism::new(m, &src, &dst)?;
    Ok((src, dst, wm))
}

/// Whether the web of a composite equals the composite of the webs, pointwise.
pub fn check_web_functoriality(m1: &SystemMorphism, m2: &SystemMorphism) -> Result<bool, WebError> {
    let x = web(m1.source())?;
    let y = web(m1.target())?;
    let z = web(m2.target())?;
    let f1 = WebMorphism::new(m1, &x, &y)?;
    let f2 = WebMorphism::new(m2, &y, &z)?;
    let f12 = WebMorphism::new(&compose(m1, m2)?, &x, &z)?;
    Ok((0..x.len()).all(|a| f12.map[a] == f1.map[a].and_then(|b| f2.map[b])))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreservationVerdict {
    pub tag: Axiom,
    pub hypothesis_holds: bool,
    pub base: AxiomVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityVerdict>,
    pub conclusion: AxiomVerdict,
    /// Hypothesis holds and conclusion fails.
    pub theorem_violation: bool,
}

/// Checks a transfer statement from the base to the web:
/// `PWC` (base weakly cancellative gives web positively weakly cancellative),
/// `O5` (base to web), `AD` (base almost divisible and the system stable gives web almost divisible).
pub fn check_preservation(
    system: &Arc<GroupSystem>,
    tag: Axiom,
) -> Result<PreservationVerdict, WebError> {
    let base = system.base();
    let w = web(system)?;
    let (base_axiom, needs_stability) = match tag {
        Axiom::PWC => (Axiom::WC, false),
        Axiom::O5 => (Axiom::O5, false),
        Axiom::AD => (Axiom::AD, true),
        other => return Err(WebError::UnsupportedTag(other)),
    };
    let hyp = check_axiom(base, base_axiom)?;
    let stability = needs_stability.then(|| check_stability(system));
    let hypothesis_holds = hyp.holds && stability.as_ref().is_none_or(|s| s.stable);
    let conclusion = check_axiom(&w, tag)?;
    Ok(PreservationVerdict {
        tag,
        hypothesis_holds,
        base: hyp,
        stability,
        theorem_violation: hypothesis_holds && !conclusion.holds,
        conclusion,
    })
}
