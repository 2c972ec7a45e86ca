//! Finite directed diagrams of group systems, their colimits, and the webbed versions.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::abgroups::hom_set;
use crate::order::{adjoin_top, all_monoid_morphisms, FiniteOrderedMonoid};
use crate::structure::{maximal_set, positive_cone, trivial_monoid, MonoidMap, StructureError};
use crate::systems::{all_morphisms, GroupSystem, SystemError, SystemMorphism};
use crate::webbing::{web, WebError, WebMorphism, WebbedSemigroup};

/// Cap on the morphisms enumerated for the uniqueness check.
pub const MORPHISM_LIMIT: usize = 100_000;

/// Cap on the unpruned search space (base maps times component choices) of the uniqueness check.
pub const SEARCH_GUARD: u128 = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error("index relation is not a partial order")]
    NotPartialOrder,
    #[error("nodes {0} and {1} have no common upper bound")]
    NotDirected(usize, usize),
    #[error("expected {want} objects, got {got}")]
    BadShape { want: usize, got: usize },
    #[error("no arrow for {0} <= {1}")]
    MissingArrow(usize, usize),
    #[error("arrow given for {0}, {1}, which are not strictly comparable")]
    ExtraArrow(usize, usize),
    #[error("arrow {0} -> {1} does not connect the objects")]
    ArrowMismatch(usize, usize),
    #[error("arrows along {0} <= {1} <= {2} do not compose")]
    IncoherentArrows(usize, usize, usize),
    #[error("leg {0} breaks the cocone condition")]
    NotACocone(usize),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Web(#[from] WebError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPoset {
    pub nodes: Vec<String>,
    pub leq: Vec<Vec<bool>>,
}

impl IndexPoset {
    pub fn new(nodes: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, ColimitError> {
        let n = nodes.len();
        if n == 0 || leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(ColimitError::NotPartialOrder);
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(ColimitError::NotPartialOrder);
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(ColimitError::NotPartialOrder);
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(ColimitError::NotPartialOrder);
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !(0..n).any(|c| leq[a][c] && leq[b][c]) {
                    return Err(ColimitError::NotDirected(a, b));
                }
            }
        }
        Ok(IndexPoset { nodes, leq })
    }

    /// A chain `0 <= 1 <= ... <= n-1`.
    pub fn chain(n: usize) -> Self {
        let nodes = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        IndexPoset { nodes, leq }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The largest node; a finite directed poset has one.
    pub fn top(&self) -> usize {
        let n = self.len();
        (0..n)
            .find(|&m| (0..n).all(|a| self.leq[a][m]))
            .expect("finite directed poset has a largest element")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDiagram {
    index: IndexPoset,
    objects: Vec<Arc<GroupSystem>>,
    arrows: BTreeMap<(usize, usize), SystemMorphism>,
}

impl SystemDiagram {
    /// Arrows are given for strictly comparable pairs; the diagonal is the identity.
    pub fn new(
        index: IndexPoset,
        objects: Vec<Arc<GroupSystem>>,
        arrows: BTreeMap<(usize, usize), SystemMorphism>,
    ) -> Result<Self, ColimitError> {
        let n = index.len();
        if objects.len() != n {
            return Err(ColimitError::BadShape {
                want: n,
                got: objects.len(),
            });
        }
        for (&(i, j), m) in &arrows {
            if i >= n || j >= n || i == j || !index.leq[i][j] {
                return Err(ColimitError::ExtraArrow(i, j));
            }
            if **m.source() != *objects[i] || **m.target() != *objects[j] {
                return Err(ColimitError::ArrowMismatch(i, j));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && index.leq[i][j] && !arrows.contains_key(&(i, j)) {
                    return Err(ColimitError::MissingArrow(i, j));
                }
            }
        }
        let d = SystemDiagram {
            index,
            objects,
            arrows,
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || !d.index.leq[i][j] || !d.index.leq[j][k] {
                        continue;
                    }
                    if d.arrow(i, j).then(&d.arrow(j, k))? != d.arrow(i, k) {
                        return Err(ColimitError::IncoherentArrows(i, j, k));
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn index(&self) -> &IndexPoset {
        &self.index
    }

    pub fn objects(&self) -> &[Arc<GroupSystem>] {
        &self.objects
    }

    pub fn arrows(&self) -> &BTreeMap<(usize, usize), SystemMorphism> {
        &self.arrows
    }

    /// Arrow for `i <= j`, the identity when `i == j`.
    pub fn arrow(&self, i: usize, j: usize) -> SystemMorphism {
        if i == j {
            SystemMorphism::identity(self.objects[i].clone())
        } else {
            self.arrows[&(i, j)].clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone {
    pub apex: Arc<GroupSystem>,
    pub legs: Vec<SystemMorphism>,
}

/// The colimit of a finite directed diagram: the object at the largest node with the arrows into it.
pub fn colimit(d: &SystemDiagram) -> Cocone {
    let top = d.index.top();
    Cocone {
        apex: d.objects[top].clone(),
        legs: (0..d.index.len()).map(|i| d.arrow(i, top)).collect(),
    }
}

pub fn check_cocone(d: &SystemDiagram, c: &Cocone) -> Result<(), ColimitError> {
    let n = d.index.len();
    if c.legs.len() != n {
        return Err(ColimitError::BadShape {
            want: n,
            got: c.legs.len(),
        });
    }
    for (i, leg) in c.legs.iter().enumerate() {
        if **leg.source() != *d.objects[i] || **leg.target() != *c.apex {
            return Err(ColimitError::NotACocone(i));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && d.index.leq[i][j] && d.arrow(i, j).then(&c.legs[j])? != c.legs[i] {
                return Err(ColimitError::NotACocone(i));
            }
        }
    }
    Ok(())
}

/// Upper bound on the candidates visited by [`all_morphisms`]; `None` for infinite hom sets.
fn search_space(source: &GroupSystem, target: &GroupSystem) -> Option<u128> {
    let (m, n) = (source.base().size(), target.base().size());
    let mut homs = vec![vec![0u128; n]; m];
    for (s, row) in homs.iter_mut().enumerate() {
        for (t, h) in row.iter_mut().enumerate() {
            *h = hom_set(source.fiber(s), target.fiber(t)).ok()?.len() as u128;
        }
    }
    let mut total = 0u128;
    for alpha in all_monoid_morphisms(source.base(), target.base()) {
        let k = (0..m).fold(1u128, |acc, s| acc.saturating_mul(homs[s][alpha[s]]));
        total = total.saturating_add(k);
    }
    Some(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalVerdict {
    pub mediating: SystemMorphism,
    /// The mediating morphism composes with the colimit legs to the candidate legs.
    pub factors: bool,
    /// Number of morphisms from the colimit apex that factor the candidate; `None` when the
    /// morphism sets are infinite or over [`SEARCH_GUARD`] / [`MORPHISM_LIMIT`].
    pub factoring_count: Option<usize>,
}

impl UniversalVerdict {
    pub fn holds(&self) -> bool {
        self.factors && self.factoring_count.is_none_or(|c| c == 1)
    }
}

/// Finds the mediating morphism from the colimit to a candidate cocone and checks uniqueness
/// against every morphism between the two apexes when that set is finite.
pub fn check_universal_property(
    d: &SystemDiagram,
    candidate: &Cocone,
) -> Result<UniversalVerdict, ColimitError> {
    check_cocone(d, candidate)?;
    let colim = colimit(d);
    let top = d.index.top();
    let mediating = candidate.legs[top].clone();
    let factors_through = |u: &SystemMorphism| -> Result<bool, ColimitError> {
        for (i, leg) in colim.legs.iter().enumerate() {
            if leg.then(u)? != candidate.legs[i] {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let factors = factors_through(&mediating)?;
    let enumerable = search_space(&colim.apex, &candidate.apex).is_some_and(|k| k <= SEARCH_GUARD);
    let factoring_count =
        match enumerable.then(|| all_morphisms(&colim.apex, &candidate.apex, MORPHISM_LIMIT)) {
            Some(Ok(all)) => {
                let mut c = 0;
                for u in &all {
                    if factors_through(u)? {
                        c += 1;
                    }
                }
                Some(c)
            }
            _ => None,
        };
    Ok(UniversalVerdict {
        mediating,
        factors,
        factoring_count,
    })
}

/// A directed diagram of finite ordered monoids.
#[derive(Debug, Clone)]
pub struct WebbedDiagram {
    pub index: IndexPoset,
    pub stages: Vec<Arc<FiniteOrderedMonoid>>,
    /// Maps for `i <= j`, including identities.
    pub arrows: BTreeMap<(usize, usize), MonoidMap>,
}

fn web_map(
    m: &SystemMorphism,
    src: &WebbedSemigroup,
    dst: &WebbedSemigroup,
    dom: &Arc<FiniteOrderedMonoid>,
    cod: &Arc<FiniteOrderedMonoid>,
) -> Result<MonoidMap, ColimitError> {
    let wm = WebMorphism::new(m, src, dst)?;
    let map = wm
        .map
        .into_iter()
        .map(|v| v.expect("finite webs"))
        .collect();
    Ok(MonoidMap::new(dom.clone(), cod.clone(), map)?)
}

/// Applies the web construction to every object and arrow.
pub fn webbed_diagram(
    d: &SystemDiagram,
) -> Result<(WebbedDiagram, Vec<WebbedSemigroup>), ColimitError> {
    let webs: Vec<WebbedSemigroup> = d.objects.iter().map(web).collect::<Result<_, _>>()?;
    let stages: Vec<Arc<FiniteOrderedMonoid>> = webs
        .iter()
        .map(|w| w.to_monoid().map(Arc::new))
        .collect::<Result<_, _>>()?;
    let n = d.index.len();
    let mut arrows = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if d.index.leq[i][j] {
                let m = web_map(&d.arrow(i, j), &webs[i], &webs[j], &stages[i], &stages[j])?;
                arrows.insert((i, j), m);
            }
        }
    }
    Ok((
        WebbedDiagram {
            index: d.index.clone(),
            stages,
            arrows,
        },
        webs,
    ))
}

#[derive(Debug, Clone)]
pub struct WebCocone {
    pub target: Arc<FiniteOrderedMonoid>,
    pub legs: Vec<MonoidMap>,
}

/// The colimit cocone of a webbed diagram: the top stage.
pub fn web_colimit(wd: &WebbedDiagram) -> WebCocone {
    let top = wd.index.top();
    WebCocone {
        target: wd.stages[top].clone(),
        legs: (0..wd.index.len())
            .map(|i| wd.arrows[&(i, top)].clone())
            .collect(),
    }
}

/// The colimit cocone with an absorbing element adjoined above the apex; legs are unchanged.
pub fn padded_cocone(wd: &WebbedDiagram) -> WebCocone {
    let c = web_colimit(wd);
    let target = Arc::new(adjoin_top(&c.target, "ω"));
    let legs = c
        .legs
        .into_iter()
        .map(|l| MonoidMap {
            domain: l.domain,
            codomain: target.clone(),
            map: l.map,
        })
        .collect();
    WebCocone { target, legs }
}

/// Everything sent to the one-point monoid.
pub fn collapsed_cocone(wd: &WebbedDiagram) -> WebCocone {
    let target = Arc::new(trivial_monoid());
    let legs = wd
        .stages
        .iter()
        .map(|s| MonoidMap::to_trivial(s.clone()))
        .map(|l| MonoidMap {
            codomain: target.clone(),
            ..l
        })
        .collect();
    WebCocone { target, legs }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct L1L2Verdict {
    pub l1: bool,
    /// `(s', s)` in the target with nothing from a stage in between.
    pub l1_witness: Option<(usize, usize)>,
    pub l2: bool,
    /// `(i, x', x, y)`: `x' ≪ x`, images of `x` and `y` compare, and no later stage separates.
    pub l2_witness: Option<(usize, usize, usize, usize)>,
}

/// Approximation conditions characterizing a colimit cocone: every way-below pair of the
/// target is interpolated by an image, and comparisons in the target are reflected at a later stage.
pub fn check_l1_l2(wd: &WebbedDiagram, c: &WebCocone) -> L1L2Verdict {
    let t = &c.target;
    let n = wd.index.len();
    let mut l1_witness = None;
    'l1: for s2 in 0..t.size() {
        for s in 0..t.size() {
            if !t.leq(s2, s) {
                continue;
            }
            let found = (0..n).any(|i| {
                c.legs[i]
                    .map
                    .iter()
                    .any(|&img| t.leq(s2, img) && t.leq(img, s))
            });
            if !found {
                l1_witness = Some((s2, s));
                break 'l1;
            }
        }
    }
    let mut l2_witness = None;
    'l2: for i in 0..n {
        let si = &wd.stages[i];
        let leg = &c.legs[i];
        for x in 0..si.size() {
            for y in 0..si.size() {
                if !t.leq(leg.map[x], leg.map[y]) {
                    continue;
                }
                for x2 in 0..si.size() {
                    if !si.leq(x2, x) {
                        continue;
                    }
                    let ok = (0..n).any(|j| {
                        wd.index.leq[i][j] && {
                            let a = &wd.arrows[&(i, j)];
                            wd.stages[j].leq(a.map[x2], a.map[y])
                        }
                    });
                    if !ok {
                        l2_witness = Some((i, x2, x, y));
                        break 'l2;
                    }
                }
            }
        }
    }
    L1L2Verdict {
        l1: l1_witness.is_none(),
        l1_witness,
        l2: l2_witness.is_none(),
        l2_witness,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityVerdict {
    pub well_defined: bool,
    pub surjective: bool,
    pub order_embedding: bool,
    pub additive: bool,
    pub cones_match: bool,
    pub maximal_match: bool,
}

impl ContinuityVerdict {
    pub fn holds(&self) -> bool {
        self.well_defined
            && self.surjective
            && self.order_embedding
            && self.additive
            && self.cones_match
            && self.maximal_match
    }
}

/// Compares the colimit of the webbed diagram with the web of the colimit through the map
/// induced by the cocone legs.
pub fn check_webbing_continuity(d: &SystemDiagram) -> Result<ContinuityVerdict, ColimitError> {
    let (wd, webs) = webbed_diagram(d)?;
    let wc = web_colimit(&wd);
    let colim = colimit(d);
    let apex_web = web(&colim.apex)?;
    let apex = Arc::new(apex_web.to_monoid()?);
    let n = wd.index.len();
    let mut gamma: Vec<Option<usize>> = vec![None; wc.target.size()];
    let mut well_defined = true;
    for i in 0..n {
        let alpha_i = web_map(&colim.legs[i], &webs[i], &apex_web, &wd.stages[i], &apex)?;
        for x in 0..wd.stages[i].size() {
            let at = wc.legs[i].map[x];
            let v = alpha_i.map[x];
            match gamma[at] {
                None => gamma[at] = Some(v),
                Some(prev) if prev != v => well_defined = false,
                _ => {}
            }
        }
    }
    let total = gamma.iter().all(|g| g.is_some());
    let g: Vec<usize> = gamma.iter().map(|v| v.unwrap_or(0)).collect();
    let src = &wc.target;
    let mut hit = vec![false; apex.size()];
    g.iter().for_each(|&v| hit[v] = true);
    let surjective = total && hit.iter().all(|&h| h);
    let order_embedding = total
        && (0..src.size()).all(|a| (0..src.size()).all(|b| src.leq(a, b) == apex.leq(g[a], g[b])));
    let additive = total
        && g[src.zero()] == apex.zero()
        && (0..src.size())
            .all(|a| (0..src.size()).all(|b| g[src.add(a, b)] == apex.add(g[a], g[b])));
    let mut cone_img: Vec<usize> = positive_cone(src).members.iter().map(|&a| g[a]).collect();
    cone_img.sort_unstable();
    let cones_match = total && cone_img == positive_cone(&apex).members;
    let mut max_img: Vec<usize> = maximal_set(src).iter().map(|&a| g[a]).collect();
    max_img.sort_unstable();
    let maximal_match = total && max_img == maximal_set(&apex);
    Ok(ContinuityVerdict {
        well_defined: well_defined && total,
        surjective,
        order_embedding,
        additive,
        cones_match,
        maximal_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroups::{FinAbGroup, GroupHom};
    use crate::order::truncated_naturals;

    fn chain_diagram() -> SystemDiagram {
        let z4 = FinAbGroup::cyclic(4);
        let z2 = FinAbGroup::cyclic(2);
        let a = Arc::new(GroupSystem::constant(truncated_naturals(1), z4.clone()));
        let b = Arc::new(GroupSystem::constant(truncated_naturals(1), z2.clone()));
        let red = GroupHom::new(z4, z2, vec![vec![1]]).unwrap();
        let triv = GroupHom::identity(&FinAbGroup::trivial());
        let m = SystemMorphism::new(
            a.clone(),
            b.clone(),
            vec![0, 1, 2],
            vec![triv, red.clone(), red],
        )
        .unwrap();
        let mut arrows = BTreeMap::new();
        arrows.insert((0, 1), m);
        SystemDiagram::new(IndexPoset::chain(2), vec![a, b], arrows).unwrap()
    }

    #[test]
    fn colimit_of_chain_is_top() {
        let d = chain_diagram();
        let c = colimit(&d);
        assert_eq!(*c.apex, *d.objects()[1]);
        let v = check_universal_property(&d, &c).unwrap();
        assert!(v.holds());
        assert_eq!(v.factoring_count, Some(1));
    }

    #[test]
    fn l1_l2_and_padding() {
        let d = chain_diagram();
        let (wd, _) = webbed_diagram(&d).unwrap();
        let v = check_l1_l2(&wd, &web_colimit(&wd));
        assert!(v.l1 && v.l2);
        let p = check_l1_l2(&wd, &padded_cocone(&wd));
        assert!(!p.l1);
        let c = check_l1_l2(&wd, &collapsed_cocone(&wd));
        assert!(!c.l2);
    }

    #[test]
    fn continuity_on_chain() {
        assert!(check_webbing_continuity(&chain_diagram()).unwrap().holds());
    }

    #[test]
    fn undirected_index_rejected() {
        let leq = vec![vec![true, false], vec![false, true]];
        assert_eq!(
            IndexPoset::new(vec!["a".into(), "b".into()], leq),
            Err(ColimitError::NotDirected(0, 1))
        );
    }
}
