//! Positive cone, maximal elements, exact sequences, ideals and quotients of finite ordered monoids.

mod diagram;
mod ideals;

pub use diagram::{decompose, ideal_morphism_diagram, Block, Decomposition, DiagramReport};
pub use ideals::{
    factor_through_quotient, ideal_generated_by, ideal_lattice, is_ideal, lattice_isomorphism,
    quotient, Factorization, IdealFailure, IdealLattice, IdealVerdict, LatticeIsoReport, Quotient,
};

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::order::{is_monoid_morphism, is_order_preserving, FiniteOrderedMonoid, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("map is not a monoid morphism")]
    NotMonoidMorphism,
    #[error("map is not order preserving")]
    NotOrderPreserving,
    #[error("maps are not composable")]
    NotComposable,
    #[error("structure has no maximal elements")]
    NoMaximalElements,
    #[error("subset is not closed under sums or misses zero")]
    NotASubmonoid,
    #[error("element {0} is not positive")]
    NotPositive(usize),
    #[error("subset is not an ideal: {0:?}")]
    NotAnIdeal(IdealFailure),
    #[error("ideal is not singly generated")]
    NotSinglyGenerated,
    #[error("element {0} of the ideal is not sent to zero")]
    IdealNotKilled(usize),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// An order-preserving monoid morphism between finite ordered monoids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMap {
    pub domain: Arc<FiniteOrderedMonoid>,
    pub codomain: Arc<FiniteOrderedMonoid>,
    pub map: Vec<usize>,
}

impl MonoidMap {
    pub fn new(
        domain: Arc<FiniteOrderedMonoid>,
        codomain: Arc<FiniteOrderedMonoid>,
        map: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if map.len() != domain.size() || map.iter().any(|&v| v >= codomain.size()) {
            return Err(StructureError::NotMonoidMorphism);
        }
        if !is_monoid_morphism(&domain, &codomain, &map) {
            return Err(StructureError::NotMonoidMorphism);
        }
        if !is_order_preserving(&domain, &codomain, &map) {
            return Err(StructureError::NotOrderPreserving);
        }
        Ok(MonoidMap {
            domain,
            codomain,
            map,
        })
    }

    pub fn identity(m: Arc<FiniteOrderedMonoid>) -> Self {
        let map = (0..m.size()).collect();
        MonoidMap {
            domain: m.clone(),
            codomain: m,
            map,
        }
    }

    /// The map from the trivial monoid.
    pub fn from_trivial(codomain: Arc<FiniteOrderedMonoid>) -> Self {
        MonoidMap {
            domain: Arc::new(trivial_monoid()),
            map: vec![codomain.zero()],
            codomain,
        }
    }

    /// The map to the trivial monoid.
    pub fn to_trivial(domain: Arc<FiniteOrderedMonoid>) -> Self {
        MonoidMap {
            map: vec![0; domain.size()],
            domain,
            codomain: Arc::new(trivial_monoid()),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonoidMap) -> Result<MonoidMap, StructureError> {
        if *self.codomain != *other.domain {
            return Err(StructureError::NotComposable);
        }
        Ok(MonoidMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        })
    }

    pub fn is_order_embedding(&self) -> bool {
        let n = self.domain.size();
        (0..n).all(|a| {
            (0..n).all(|b| self.domain.leq(a, b) == self.codomain.leq(self.map[a], self.map[b]))
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `y <= f(x)` implies `y` is in the image.
    pub fn image_is_hereditary(&self) -> bool {
        let mut hit = vec![false; self.codomain.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        let m = &self.codomain;
        (0..m.size()).all(|y| hit[y] || !self.map.iter().any(|&fx| m.leq(y, fx)))
    }
}

/// The one-element monoid.
pub fn trivial_monoid() -> FiniteOrderedMonoid {
    FiniteOrderedMonoid::new(vec!["0".into()], 0, vec![vec![0]], vec![vec![true]], true)
        .expect("trivial monoid is valid")
}

/// A relation on a carrier, as a square boolean table.
pub type PairSet = Vec<Vec<bool>>;

/// `{(t1, t2) : t1 <= f(s) + t2 for some s}`.
pub fn image_set(f: &MonoidMap) -> PairSet {
    let t = &f.codomain;
    let n = t.size();
    let mut out = vec![vec![false; n]; n];
    for t1 in 0..n {
        for t2 in 0..n {
            out[t1][t2] = f.map.iter().any(|&fs| t.leq(t1, t.add(fs, t2)));
        }
    }
    out
}

/// `{(s1, s2) : f(s1) <= f(s2)}`.
pub fn kernel_set(f: &MonoidMap) -> PairSet {
    let n = f.domain.size();
    (0..n)
        .map(|a| (0..n).map(|b| f.codomain.leq(f.map[a], f.map[b])).collect())
        .collect()
}

fn first_difference(a: &PairSet, b: &PairSet) -> Option<(usize, usize)> {
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
            if x != y {
                return Some((i, j));
            }
        }
    }
    None
}

/// Exactness of `0 -> S -> T -> V -> 0` at each of the three inner positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceVerdict {
    pub exact_at_left: bool,
    pub exact_at_middle: bool,
    pub exact_at_right: bool,
    /// First pair where kernel and image differ, with the position (0, 1 or 2).
    pub witness: Option<(usize, usize, usize)>,
}

impl SequenceVerdict {
    pub fn exact(&self) -> bool {
        self.exact_at_left && self.exact_at_middle && self.exact_at_right
    }
}

/// Whether `ker(g) = im(f)` for composable `f`, `g`.
pub fn is_exact_at(f: &MonoidMap, g: &MonoidMap) -> Result<bool, StructureError> {
    if *f.codomain != *g.domain {
        return Err(StructureError::NotComposable);
    }
    Ok(kernel_set(g) == image_set(f))
}

/// Exactness of `0 -> S -f-> T -g-> V -> 0`.
pub fn check_sequence(f: &MonoidMap, g: &MonoidMap) -> Result<SequenceVerdict, StructureError> {
    if *f.codomain != *g.domain {
        return Err(StructureError::NotComposable);
    }
    let into_s = MonoidMap::from_trivial(f.domain.clone());
    let out_v = MonoidMap::to_trivial(g.codomain.clone());
    let checks = [
        (into_s, f.clone()),
        (f.clone(), g.clone()),
        (g.clone(), out_v),
    ];
    let mut exact = [true; 3];
    let mut witness = None;
    for (pos, (a, b)) in checks.iter().enumerate() {
        if let Some((x, y)) = first_difference(&kernel_set(b), &image_set(a)) {
            exact[pos] = false;
            witness.get_or_insert((pos, x, y));
        }
    }
    Ok(SequenceVerdict {
        exact_at_left: exact[0],
        exact_at_middle: exact[1],
        exact_at_right: exact[2],
        witness,
    })
}

/// `f` is an order embedding exactly when `0 -> S -> T` is exact; returns both sides.
pub fn embedding_criterion(f: &MonoidMap) -> (bool, bool) {
    let into = MonoidMap::from_trivial(f.domain.clone());
    (f.is_order_embedding(), kernel_set(f) == image_set(&into))
}

/// `f` is surjective exactly when `S -> T -> 0` is exact and the image is hereditary;
/// returns both sides.
pub fn surjectivity_criterion(f: &MonoidMap) -> (bool, bool) {
    let out = MonoidMap::to_trivial(f.codomain.clone());
    let right_exact = kernel_set(&out) == image_set(f);
    (f.is_surjective(), right_exact && f.image_is_hereditary())
}

/// Restriction of a monoid to a subset closed under sums and containing zero.
pub fn restrict(
    m: &FiniteOrderedMonoid,
    members: &[usize],
    positively_ordered: bool,
) -> Result<FiniteOrderedMonoid, StructureError> {
    restrict_with_zero(m, members, m.zero(), positively_ordered)
}

/// Restriction to a subset closed under sums whose neutral element is `zero`.
pub fn restrict_with_zero(
    m: &FiniteOrderedMonoid,
    members: &[usize],
    zero: usize,
    positively_ordered: bool,
) -> Result<FiniteOrderedMonoid, StructureError> {
    let pos = |x: usize| members.iter().position(|&y| y == x);
    let z = pos(zero).ok_or(StructureError::NotASubmonoid)?;
    let k = members.len();
    let mut add = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            add[i][j] = pos(m.add(members[i], members[j])).ok_or(StructureError::NotASubmonoid)?;
        }
    }
    let leq = (0..k)
        .map(|i| (0..k).map(|j| m.leq(members[i], members[j])).collect())
        .collect();
    let names = members.iter().map(|&x| m.name(x).to_string()).collect();
    Ok(FiniteOrderedMonoid::new(
        names,
        z,
        add,
        leq,
        positively_ordered,
    )?)
}

/// A submonoid together with its inclusion.
#[derive(Debug, Clone)]
pub struct SubMonoid {
    pub members: Vec<usize>,
    pub inclusion: MonoidMap,
}

impl SubMonoid {
    pub fn monoid(&self) -> &Arc<FiniteOrderedMonoid> {
        &self.inclusion.domain
    }
}

fn submonoid(
    m: &Arc<FiniteOrderedMonoid>,
    members: Vec<usize>,
    positive: bool,
) -> Result<SubMonoid, StructureError> {
    let sub = Arc::new(restrict(m, &members, positive)?);
    let inclusion = MonoidMap::new(sub, m.clone(), members.clone())?;
    Ok(SubMonoid { members, inclusion })
}

/// `{s : 0 <= s}`.
pub fn positive_cone(m: &Arc<FiniteOrderedMonoid>) -> SubMonoid {
    let members: Vec<usize> = (0..m.size()).filter(|&s| m.is_positive(s)).collect();
    submonoid(m, members, true).expect("positive cone is a positively ordered submonoid")
}

/// Largest element of a set under the order of `m`, if any.
pub fn largest(m: &FiniteOrderedMonoid, set: &[usize]) -> Option<usize> {
    set.iter()
        .copied()
        .find(|&a| set.iter().all(|&b| m.leq(b, a)))
}

/// The maximal elements, which form an absorbing group, with the checks that tie them to the
/// positive cone.
#[derive(Debug, Clone)]
pub struct MaximalGroup {
    pub sub: SubMonoid,
    /// Neutral element, as an index into the ambient monoid.
    pub neutral: usize,
    pub checks: MaximalChecks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalChecks {
    pub nonempty: bool,
    pub cone_has_largest: bool,
    pub absorbing_group: bool,
    pub neutral_is_largest_positive: bool,
    pub unique_complements: bool,
}

impl MaximalChecks {
    pub fn all(&self) -> bool {
        self.nonempty
            && self.cone_has_largest
            && self.absorbing_group
            && self.neutral_is_largest_positive
            && self.unique_complements
    }
}

impl MaximalGroup {
    pub fn members(&self) -> &[usize] {
        &self.sub.members
    }

    pub fn monoid(&self) -> &Arc<FiniteOrderedMonoid> {
        self.sub.monoid()
    }
}

pub fn maximal_set(m: &FiniteOrderedMonoid) -> Vec<usize> {
    (0..m.size())
        .filter(|&a| (0..m.size()).all(|b| !m.leq(a, b) || a == b))
        .collect()
}

pub fn maximal_elements(m: &Arc<FiniteOrderedMonoid>) -> Result<MaximalGroup, StructureError> {
    let maxs = maximal_set(m);
    let positives: Vec<usize> = (0..m.size()).filter(|&s| m.is_positive(s)).collect();
    let largest_pos = largest(m, &positives);
    if maxs.is_empty() {
        return Err(StructureError::NoMaximalElements);
    }
    let is_max = |x: usize| maxs.contains(&x);
    let closed = maxs
        .iter()
        .all(|&a| maxs.iter().all(|&b| is_max(m.add(a, b))));
    let absorbing = (0..m.size()).all(|x| maxs.iter().all(|&a| is_max(m.add(x, a))));
    let neutral = maxs
        .iter()
        .copied()
        .find(|&e| maxs.iter().all(|&a| m.add(e, a) == a));
    let inverses =
        neutral.is_some_and(|e| maxs.iter().all(|&a| maxs.iter().any(|&b| m.add(a, b) == e)));
    let absorbing_group = closed && absorbing && neutral.is_some() && inverses;
    let neutral_is_largest_positive = neutral.is_some() && neutral == largest_pos;
    let unique_complements = neutral.is_some_and(|e| {
        (0..m.size()).all(|x| maxs.iter().filter(|&&p| m.add(x, p) == e).count() == 1)
    });
    let checks = MaximalChecks {
        nonempty: true,
        cone_has_largest: largest_pos.is_some(),
        absorbing_group,
        neutral_is_largest_positive,
        unique_complements,
    };
    let neutral = neutral
        .ok_or_else(|| StructureError::Inconsistent("maximal elements have no neutral".into()))?;
    let sub_monoid = restrict_with_zero(m, &maxs, neutral, maxs.len() == 1)?;
    let sub = Arc::new(sub_monoid);
    let inclusion = MonoidMap {
        domain: sub,
        codomain: m.clone(),
        map: maxs.clone(),
    };
    Ok(MaximalGroup {
        sub: SubMonoid {
            members: maxs,
            inclusion,
        },
        neutral,
        checks,
    })
}

/// `0 -> S_+ -> S -> S_max -> 0` with `j(s) = s + e` and the set-theoretic section `q`.
#[derive(Debug, Clone)]
pub struct SplitSequence {
    pub positive: SubMonoid,
    pub maximal: MaximalGroup,
    pub i: MonoidMap,
    pub j: MonoidMap,
    /// Section of `j`, as indices into the ambient monoid.
    pub q: Vec<usize>,
    pub verdict: SequenceVerdict,
    pub section_ok: bool,
}

impl SplitSequence {
    pub fn split_exact(&self) -> bool {
        self.verdict.exact() && self.section_ok
    }
}

pub fn split_sequence(m: &Arc<FiniteOrderedMonoid>) -> Result<SplitSequence, StructureError> {
    let positive = positive_cone(m);
    let maximal = maximal_elements(m)?;
    let e = maximal.neutral;
    let members = maximal.members().to_vec();
    let jmap: Vec<usize> = (0..m.size())
        .map(|s| {
            members
                .iter()
                .position(|&x| x == m.add(s, e))
                .expect("absorbing")
        })
        .collect();
    let j = MonoidMap::new(m.clone(), maximal.monoid().clone(), jmap)?;
    let i = positive.inclusion.clone();
    let q = members.clone();
    let section_ok = (0..members.len()).all(|k| j.map[q[k]] == k);
    let verdict = check_sequence(&i, &j)?;
    Ok(SplitSequence {
        positive,
        maximal,
        i,
        j,
        q,
        verdict,
        section_ok,
    })
}

/// `alpha_+` on positive cones and `alpha_max(x) = alpha(x) + e_T` on maximal groups.
pub fn restrict_morphism(alpha: &MonoidMap) -> Result<(MonoidMap, MonoidMap), StructureError> {
    let sp = positive_cone(&alpha.domain);
    let tp = positive_cone(&alpha.codomain);
    let plus: Vec<usize> = sp
        .members
        .iter()
        .map(|&s| tp.members.iter().position(|&t| t == alpha.map[s]))
        .collect::<Option<_>>()
        .ok_or_else(|| {
            StructureError::Inconsistent("positive element sent outside the cone".into())
        })?;
    let smax = maximal_elements(&alpha.domain)?;
    let tmax = maximal_elements(&alpha.codomain)?;
    let e = tmax.neutral;
    let maxmap: Vec<usize> = smax
        .members()
        .iter()
        .map(|&x| {
            tmax.members()
                .iter()
                .position(|&y| y == alpha.codomain.add(alpha.map[x], e))
        })
        .collect::<Option<_>>()
        .ok_or_else(|| StructureError::Inconsistent("maximal group not absorbing".into()))?;
    Ok((
        MonoidMap::new(sp.monoid().clone(), tp.monoid().clone(), plus)?,
        MonoidMap::new(smax.monoid().clone(), tmax.monoid().clone(), maxmap)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroups::FinAbGroup;
    use crate::order::{product, truncated_naturals};
    use crate::systems::GroupSystem;
    use crate::webbing::web;

    pub(crate) fn w5() -> Arc<FiniteOrderedMonoid> {
        let s = Arc::new(GroupSystem::constant(
            truncated_naturals(1),
            FinAbGroup::cyclic(2),
        ));
        Arc::new(web(&s).unwrap().to_monoid().unwrap())
    }

    #[test]
    fn cone_and_max_of_w5() {
        let m = w5();
        let cone = positive_cone(&m);
        let names: Vec<&str> = cone.members.iter().map(|&a| m.name(a)).collect();
        assert_eq!(names, ["(0,0)", "(1,0)", "(∞,0)"]);
        let mx = maximal_elements(&m).unwrap();
        let names: Vec<&str> = mx.members().iter().map(|&a| m.name(a)).collect();
        assert_eq!(names, ["(∞,0)", "(∞,1)"]);
        assert!(mx.checks.all());
        assert_eq!(m.name(mx.neutral), "(∞,0)");
    }

    #[test]
    fn split_sequence_of_w5() {
        let m = w5();
        let sp = split_sequence(&m).unwrap();
        assert!(sp.split_exact(), "{:?}", sp.verdict);
        let a = m.index_of("(1,1)").unwrap();
        let image = sp.maximal.members()[sp.j.map[a]];
        assert_eq!(m.name(image), "(∞,1)");
    }

    #[test]
    fn criteria_on_simple_maps() {
        let t = Arc::new(truncated_naturals(1));
        let p = Arc::new(product(&t, &t));
        // diagonal embedding
        let diag = MonoidMap::new(t.clone(), p.clone(), vec![0, 4, 8]).unwrap();
        let (emb, exact) = embedding_criterion(&diag);
        assert!(emb && exact);
        let (surj, crit) = surjectivity_criterion(&diag);
        assert!(!surj && !crit);
        // first projection
        let proj = MonoidMap::new(p.clone(), t.clone(), (0..9).map(|x| x / 3).collect()).unwrap();
        assert_eq!(surjectivity_criterion(&proj), (true, true));
        assert_eq!(embedding_criterion(&proj), (false, false));
    }
}
