//! Group-valued functors on finite ordered monoids, and their morphisms.

use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

use crate::abgroups::{hom_set, FinAbGroup, GroupError, GroupHom, DEFAULT_WINDOW};
use crate::order::{
    all_monoid_morphisms, is_monoid_morphism, is_order_preserving, FiniteOrderedMonoid,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("expected {want} fibers, got {got}")]
    BadShape { want: usize, got: usize },
    #[error("fiber at zero is not trivial")]
    NontrivialFiberAtZero,
    #[error("no edge for the comparable pair ({0}, {1})")]
    MissingEdge(usize, usize),
    #[error("edge given for the incomparable pair ({0}, {1})")]
    ExtraEdge(usize, usize),
    #[error("edge ({0}, {1}) does not go between the fibers")]
    EdgeTypeMismatch(usize, usize),
    #[error("edge ({0}, {0}) is not the identity")]
    NotIdentityOnDiagonal(usize),
    #[error("edges along {0} <= {1} <= {2} do not compose")]
    FunctorialityFailure(usize, usize, usize),
    #[error("base map is not a monoid morphism")]
    NotMonoidMorphism,
    #[error("base map is not order preserving")]
    NotOrderPreserving,
    #[error("component at {0} does not go between the fibers")]
    ComponentTypeMismatch(usize),
    #[error("naturality square fails for {0} <= {1}")]
    NaturalitySquareFailure(usize, usize),
    #[error("target of the first morphism is not the source of the second")]
    NotComposable,
    #[error("more than {0} morphisms")]
    TooManyMorphisms(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A functor from a finite ordered monoid (viewed as a poset) into abelian groups,
/// with the fiber over zero trivial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSystem {
    base: FiniteOrderedMonoid,
    fibers: Vec<FinAbGroup>,
    edges: Vec<Vec<Option<GroupHom>>>,
}

impl GroupSystem {
    /// Builds and validates a system. Every comparable pair, including the diagonal, needs an edge.
    pub fn new(
        base: FiniteOrderedMonoid,
        fibers: Vec<FinAbGroup>,
        edges: BTreeMap<(usize, usize), GroupHom>,
    ) -> Result<Self, SystemError> {
        let n = base.size();
        if fibers.len() != n {
            return Err(SystemError::BadShape {
                want: n,
                got: fibers.len(),
            });
        }
        let mut table = vec![vec![None; n]; n];
        for ((s, t), h) in edges {
            if s >= n || t >= n {
                return Err(SystemError::BadShape {
                    want: n,
                    got: s.max(t) + 1,
                });
            }
            if !base.leq(s, t) {
                return Err(SystemError::ExtraEdge(s, t));
            }
            table[s][t] = Some(h);
        }
        let sys = GroupSystem {
            base,
            fibers,
            edges: table,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// Like [`GroupSystem::new`], but fills in the edges that are forced: identities on the
    /// diagonal and zero maps out of or into trivial fibers.
    pub fn with_implied_edges(
        base: FiniteOrderedMonoid,
        fibers: Vec<FinAbGroup>,
        mut edges: BTreeMap<(usize, usize), GroupHom>,
    ) -> Result<Self, SystemError> {
        let n = base.size();
        if fibers.len() != n {
            return Err(SystemError::BadShape {
                want: n,
                got: fibers.len(),
            });
        }
        for s in 0..n {
            for t in 0..n {
                if !base.leq(s, t) || edges.contains_key(&(s, t)) {
                    continue;
                }
                if s == t {
                    edges.insert((s, t), GroupHom::identity(&fibers[s]));
                } else if fibers[s].is_trivial() || fibers[t].is_trivial() {
                    edges.insert((s, t), GroupHom::zero(&fibers[s], &fibers[t]));
                }
            }
        }
        Self::new(base, fibers, edges)
    }

    fn validate(&self) -> Result<(), SystemError> {
        let n = self.base.size();
        let b = &self.base;
        if !self.fibers[b.zero()].is_trivial() {
            return Err(SystemError::NontrivialFiberAtZero);
        }
        for s in 0..n {
            for t in 0..n {
                if !b.leq(s, t) {
                    continue;
                }
                let e = self.edges[s][t]
                    .as_ref()
                    .ok_or(SystemError::MissingEdge(s, t))?;
                if e.domain != self.fibers[s] || e.codomain != self.fibers[t] {
                    return Err(SystemError::EdgeTypeMismatch(s, t));
                }
            }
            if self.edge(s, s) != &GroupHom::identity(&self.fibers[s]) {
                return Err(SystemError::NotIdentityOnDiagonal(s));
            }
        }
        for s in 0..n {
            for t in 0..n {
                if s == t || !b.leq(s, t) {
                    continue;
                }
                for u in 0..n {
                    if u == t || !b.leq(t, u) {
                        continue;
                    }
                    let c = self.edge(s, t).then(self.edge(t, u))?;
                    if &c != self.edge(s, u) {
                        return Err(SystemError::FunctorialityFailure(s, t, u));
                    }
                }
            }
        }
        Ok(())
    }

    /// Trivial groups everywhere.
    pub fn trivial(base: FiniteOrderedMonoid) -> Self {
        let n = base.size();
        Self::with_implied_edges(base, vec![FinAbGroup::trivial(); n], BTreeMap::new())
            .expect("trivial system is valid")
    }

    /// The same group on every nonzero element with identity edges.
    pub fn constant(base: FiniteOrderedMonoid, group: FinAbGroup) -> Self {
        let n = base.size();
        let z = base.zero();
        let fibers: Vec<FinAbGroup> = (0..n)
            .map(|s| {
                if s == z {
                    FinAbGroup::trivial()
                } else {
                    group.clone()
                }
            })
            .collect();
        let mut edges = BTreeMap::new();
        for s in 0..n {
            for t in 0..n {
                if s != z && base.leq(s, t) {
                    edges.insert((s, t), GroupHom::identity(&group));
                }
            }
        }
        Self::with_implied_edges(base, fibers, edges).expect("constant system is valid")
    }

    /// Fibers pulled back along an order-preserving level map into a chain of groups.
    ///
    /// `chain[k]` is the group at level `k`, `steps[k]` the map from level `k` to `k + 1`.
    /// The zero element must sit at a level whose group is trivial.
    pub fn from_levels(
        base: FiniteOrderedMonoid,
        level: &[usize],
        chain: &[FinAbGroup],
        steps: &[GroupHom],
    ) -> Result<Self, SystemError> {
        let n = base.size();
        let fibers: Vec<FinAbGroup> = level.iter().map(|&l| chain[l].clone()).collect();
        let mut edges = BTreeMap::new();
        for s in 0..n {
            for t in 0..n {
                if !base.leq(s, t) {
                    continue;
                }
                let (a, b) = (level[s], level[t]);
                if a > b {
                    return Err(SystemError::NotOrderPreserving);
                }
                let mut h = GroupHom::identity(&chain[a]);
                for step in &steps[a..b] {
                    h = h.then(step)?;
                }
                edges.insert((s, t), h);
            }
        }
        Self::new(base, fibers, edges)
    }

    pub fn base(&self) -> &FiniteOrderedMonoid {
        &self.base
    }

    pub fn fiber(&self, s: usize) -> &FinAbGroup {
        &self.fibers[s]
    }

    pub fn fibers(&self) -> &[FinAbGroup] {
        &self.fibers
    }

    /// Edge for `s <= t`. Panics on incomparable pairs.
    pub fn edge(&self, s: usize, t: usize) -> &GroupHom {
        self.edges[s][t]
            .as_ref()
            .expect("edge requested for incomparable pair")
    }

    pub fn try_edge(&self, s: usize, t: usize) -> Option<&GroupHom> {
        self.edges[s][t].as_ref()
    }

    pub fn all_finite(&self) -> bool {
        self.fibers.iter().all(|g| g.is_finite())
    }
}

/// A pair (base morphism, natural transformation) between two systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemMorphism {
    source: Arc<GroupSystem>,
    target: Arc<GroupSystem>,
    alpha: Vec<usize>,
    eta: Vec<GroupHom>,
}

impl SystemMorphism {
    pub fn new(
        source: Arc<GroupSystem>,
        target: Arc<GroupSystem>,
        alpha: Vec<usize>,
        eta: Vec<GroupHom>,
    ) -> Result<Self, SystemError> {
        let (sb, tb) = (source.base(), target.base());
        if alpha.len() != sb.size() || alpha.iter().any(|&a| a >= tb.size()) {
            return Err(SystemError::NotMonoidMorphism);
        }
        if !is_monoid_morphism(sb, tb, &alpha) {
            return Err(SystemError::NotMonoidMorphism);
        }
        if !is_order_preserving(sb, tb, &alpha) {
            return Err(SystemError::NotOrderPreserving);
        }
        if eta.len() != sb.size() {
            return Err(SystemError::BadShape {
                want: sb.size(),
                got: eta.len(),
            });
        }
        for (s, h) in eta.iter().enumerate() {
            if &h.domain != source.fiber(s) || &h.codomain != target.fiber(alpha[s]) {
                return Err(SystemError::ComponentTypeMismatch(s));
            }
        }
        for s in 0..sb.size() {
            for t in 0..sb.size() {
                if s != t
                    && sb.leq(s, t)
                    && !naturality_holds(&source, &target, &alpha, &eta, s, t)?
                {
                    return Err(SystemError::NaturalitySquareFailure(s, t));
                }
            }
        }
        Ok(SystemMorphism {
            source,
            target,
            alpha,
            eta,
        })
    }

    /// Like [`SystemMorphism::new`] with zero components filled in where a fiber is trivial.
    pub fn with_implied_components(
        source: Arc<GroupSystem>,
        target: Arc<GroupSystem>,
        alpha: Vec<usize>,
        mut eta: BTreeMap<usize, GroupHom>,
    ) -> Result<Self, SystemError> {
        let n = source.base().size();
        if alpha.len() != n || alpha.iter().any(|&a| a >= target.base().size()) {
            return Err(SystemError::NotMonoidMorphism);
        }
        let mut comps = Vec::with_capacity(n);
        for s in 0..n {
            let h = match eta.remove(&s) {
                Some(h) => h,
                None => {
                    let (d, c) = (source.fiber(s), target.fiber(alpha[s]));
                    if d.is_trivial() || c.is_trivial() {
                        GroupHom::zero(d, c)
                    } else {
                        return Err(SystemError::ComponentTypeMismatch(s));
                    }
                }
            };
            comps.push(h);
        }
        Self::new(source, target, alpha, comps)
    }

    pub fn identity(system: Arc<GroupSystem>) -> Self {
        let n = system.base().size();
        let eta = (0..n)
            .map(|s| GroupHom::identity(system.fiber(s)))
            .collect();
        SystemMorphism {
            source: system.clone(),
            target: system,
            alpha: (0..n).collect(),
            eta,
        }
    }

    pub fn source(&self) -> &Arc<GroupSystem> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GroupSystem> {
        &self.target
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn eta(&self, s: usize) -> &GroupHom {
        &self.eta[s]
    }

    pub fn components(&self) -> &[GroupHom] {
        &self.eta
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SystemMorphism) -> Result<SystemMorphism, SystemError> {
        if *self.target != *other.source {
            return Err(SystemError::NotComposable);
        }
        let alpha: Vec<usize> = self.alpha.iter().map(|&a| other.alpha[a]).collect();
        let eta = self
            .eta
            .iter()
            .enumerate()
            .map(|(s, h)| h.then(&other.eta[self.alpha[s]]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SystemMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            alpha,
            eta,
        })
    }
}

fn naturality_holds(
    source: &GroupSystem,
    target: &GroupSystem,
    alpha: &[usize],
    eta: &[GroupHom],
    s: usize,
    t: usize,
) -> Result<bool, SystemError> {
    let left = eta[s].then(target.edge(alpha[s], alpha[t]))?;
    let right = source.edge(s, t).then(&eta[t])?;
    Ok(left == right)
}

/// `m2 ∘ m1`.
pub fn compose(m1: &SystemMorphism, m2: &SystemMorphism) -> Result<SystemMorphism, SystemError> {
    m1.then(m2)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    /// `(s, k)` such that the edge from `s` to `k * s` is not bijective.
    pub witness: Option<(usize, usize)>,
    /// False when some fiber has Z factors and bijectivity was decided on a window.
    pub exact: bool,
}

/// Checks that every edge `s -> k * s` is a group isomorphism.
pub fn check_stability(system: &GroupSystem) -> StabilityVerdict {
    let b = system.base();
    let mut exact = true;
    for s in 0..b.size() {
        let mut seen = vec![false; b.size()];
        let mut ks = s;
        for k in 1..=b.size() + 1 {
            if seen[ks] {
                break;
            }
            seen[ks] = true;
            if b.leq(s, ks) {
                let (bij, ex) = system.edge(s, ks).is_bijective(DEFAULT_WINDOW);
                exact &= ex;
                if !bij {
                    return StabilityVerdict {
                        stable: false,
                        witness: Some((s, k)),
                        exact,
                    };
                }
            }
            ks = b.add(ks, s);
        }
    }
    StabilityVerdict {
        stable: true,
        witness: None,
        exact,
    }
}

/// All natural transformations over a fixed base map, by backtracking over components.
pub fn natural_transformations(
    source: &GroupSystem,
    target: &GroupSystem,
    alpha: &[usize],
    limit: usize,
) -> Result<Vec<Vec<GroupHom>>, SystemError> {
    let n = source.base().size();
    let choices: Vec<Vec<GroupHom>> = (0..n)
        .map(|s| hom_set(source.fiber(s), target.fiber(alpha[s])))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    let mut cur: Vec<GroupHom> = Vec::with_capacity(n);
    #[allow(clippy::too_many_arguments)]
    fn go(
        s: usize,
        source: &GroupSystem,
        target: &GroupSystem,
        alpha: &[usize],
        choices: &[Vec<GroupHom>],
        cur: &mut Vec<GroupHom>,
        out: &mut Vec<Vec<GroupHom>>,
        limit: usize,
    ) -> Result<(), SystemError> {
        let n = choices.len();
        if s == n {
            if out.len() >= limit {
                return Err(SystemError::TooManyMorphisms(limit));
            }
            out.push(cur.clone());
            return Ok(());
        }
        for h in &choices[s] {
            cur.push(h.clone());
            let mut ok = true;
            for r in 0..=s {
                for (a, b) in [(r, s), (s, r)] {
                    if a != b
                        && source.base().leq(a, b)
                        && !naturality_holds(source, target, alpha, cur, a, b)?
                    {
                        ok = false;
                    }
                }
            }
            if ok {
                go(s + 1, source, target, alpha, choices, cur, out, limit)?;
            }
            cur.pop();
        }
        Ok(())
    }
    go(
        0, source, target, alpha, &choices, &mut cur, &mut out, limit,
    )?;
    Ok(out)
}

/// Every morphism between two systems with finite hom sets.
pub fn all_morphisms(
    source: &Arc<GroupSystem>,
    target: &Arc<GroupSystem>,
    limit: usize,
) -> Result<Vec<SystemMorphism>, SystemError> {
    let mut out = Vec::new();
    for alpha in all_monoid_morphisms(source.base(), target.base()) {
        for eta in natural_transformations(source, target, &alpha, limit)? {
            if out.len() >= limit {
                return Err(SystemError::TooManyMorphisms(limit));
            }
            out.push(SystemMorphism {
                source: source.clone(),
                target: target.clone(),
                alpha: alpha.clone(),
                eta,
            });
        }
    }
    Ok(out)
}
