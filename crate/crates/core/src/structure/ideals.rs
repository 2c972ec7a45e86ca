//! Ideals, the ideal lattice, and quotients by ideals.

use std::sync::Arc;

use serde::Serialize;

use super::{
    check_sequence, positive_cone, restrict, MonoidMap, SequenceVerdict, StructureError, SubMonoid,
};
use crate::axioms::{check_axiom, Axiom, AxiomVerdict};
use crate::order::FiniteOrderedMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IdealFailure {
    MissingZero,
    NotClosedUnderSum(usize, usize),
    NotPositivelyDirected(usize),
    NotHereditary { below: usize, member: usize },
    NotPositivelyStable(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealVerdict {
    pub holds: bool,
    pub failure: Option<IdealFailure>,
}

fn mask(n: usize, members: &[usize]) -> Vec<bool> {
    let mut v = vec![false; n];
    for &a in members {
        v[a] = true;
    }
    v
}

fn members_of(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect()
}

/// Checks the three ideal conditions: positively directed submonoid, order-hereditary,
/// positively stable (`s + t` in the set puts `s` and `t` in it).
pub fn is_ideal(m: &FiniteOrderedMonoid, members: &[usize]) -> IdealVerdict {
    let n = m.size();
    let inside = mask(n, members);
    let fail = |f| IdealVerdict {
        holds: false,
        failure: Some(f),
    };
    if !inside[m.zero()] {
        return fail(IdealFailure::MissingZero);
    }
    for &a in members {
        for &b in members {
            if !inside[m.add(a, b)] {
                return fail(IdealFailure::NotClosedUnderSum(a, b));
            }
        }
    }
    for &a in members {
        if !members.iter().any(|&p| m.is_positive(m.add(a, p))) {
            return fail(IdealFailure::NotPositivelyDirected(a));
        }
    }
    for &b in members {
        for a in 0..n {
            if m.leq(a, b) && !inside[a] {
                return fail(IdealFailure::NotHereditary {
                    below: a,
                    member: b,
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if inside[m.add(a, b)] && !(inside[a] && inside[b]) {
                return fail(IdealFailure::NotPositivelyStable(a, b));
            }
        }
    }
    IdealVerdict {
        holds: true,
        failure: None,
    }
}

/// `k * x` for large `k`: the point where the multiples of a positive element stop growing.
pub fn stable_multiple(m: &FiniteOrderedMonoid, x: usize) -> usize {
    let mut acc = x;
    loop {
        let next = m.add(acc, x);
        if next == acc {
            return acc;
        }
        acc = next;
    }
}

/// `{y : y + z <= ∞x for some z}` without the minimality cross-check.
pub(crate) fn generated_set(m: &FiniteOrderedMonoid, x: usize) -> Vec<usize> {
    let top = stable_multiple(m, x);
    (0..m.size())
        .filter(|&y| (0..m.size()).any(|z| m.leq(m.add(y, z), top)))
        .collect()
}

/// The ideal generated by a positive element, checked to be the smallest ideal containing it.
pub fn ideal_generated_by(m: &FiniteOrderedMonoid, x: usize) -> Result<Vec<usize>, StructureError> {
    if !m.is_positive(x) {
        return Err(StructureError::NotPositive(x));
    }
    let set = generated_set(m, x);
    let v = is_ideal(m, &set);
    if !v.holds {
        return Err(StructureError::Inconsistent(format!(
            "generated set is not an ideal: {:?}",
            v.failure
        )));
    }
    let lat = ideal_lattice(m);
    let mut smallest = vec![true; m.size()];
    for ideal in lat.ideals.iter().filter(|i| i.contains(&x)) {
        let im = mask(m.size(), ideal);
        for (s, b) in smallest.iter_mut().zip(im) {
            *s &= b;
        }
    }
    if members_of(&smallest) != set {
        return Err(StructureError::Inconsistent(
            "generated ideal is not the smallest one".into(),
        ));
    }
    Ok(set)
}

/// Closure under zero, sums, lower bounds and summands.
struct IdealClosure {
    absorb: Vec<Vec<usize>>,
    zero: usize,
    add: Vec<Vec<usize>>,
}

impl IdealClosure {
    fn new(m: &FiniteOrderedMonoid) -> Self {
        let n = m.size();
        let mut absorb = vec![Vec::new(); n];
        for c in 0..n {
            let mut set = vec![false; n];
            for a in 0..n {
                if m.leq(a, c) {
                    set[a] = true;
                }
                for b in 0..n {
                    if m.add(a, b) == c {
                        set[a] = true;
                        set[b] = true;
                    }
                }
            }
            absorb[c] = members_of(&set);
        }
        IdealClosure {
            absorb,
            zero: m.zero(),
            add: m.add_table().to_vec(),
        }
    }

    fn close(&self, seed: &[bool]) -> Vec<bool> {
        let mut set = seed.to_vec();
        set[self.zero] = true;
        loop {
            let mut changed = false;
            let cur = members_of(&set);
            for &c in &cur {
                for &a in &self.absorb[c] {
                    if !set[a] {
                        set[a] = true;
                        changed = true;
                    }
                }
            }
            let cur = members_of(&set);
            for &a in &cur {
                for &b in &cur {
                    let s = self.add[a][b];
                    if !set[s] {
                        set[s] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return set;
            }
        }
    }
}

/// All ideals, with a positive generator for the singly generated ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealLattice {
    pub ideals: Vec<Vec<usize>>,
    pub generators: Vec<Option<usize>>,
}

impl IdealLattice {
    pub fn position(&self, members: &[usize]) -> Option<usize> {
        self.ideals.iter().position(|i| i == members)
    }

    pub fn singly_generated(&self, k: usize) -> bool {
        self.generators[k].is_some()
    }
}

/// Enumerates every ideal. Sets closed under the monotone rules are listed in lectic order
/// (each closed set is produced once), then the existential condition is filtered.
pub fn ideal_lattice(m: &FiniteOrderedMonoid) -> IdealLattice {
    let n = m.size();
    let cl = IdealClosure::new(m);
    let mut closed = Vec::new();
    let mut a = cl.close(&vec![false; n]);
    closed.push(a.clone());
    'next: loop {
        for i in (0..n).rev() {
            if a[i] {
                continue;
            }
            let mut seed: Vec<bool> = a.iter().enumerate().map(|(k, &v)| v && k < i).collect();
            seed[i] = true;
            let b = cl.close(&seed);
            if (0..i).all(|k| b[k] == a[k]) {
                a = b;
                closed.push(a.clone());
                continue 'next;
            }
        }
        break;
    }
    let mut ideals: Vec<Vec<usize>> = closed
        .iter()
        .map(|c| members_of(c))
        .filter(|c| is_ideal(m, c).holds)
        .collect();
    ideals.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let generators = ideals
        .iter()
        .map(|i| {
            i.iter()
                .copied()
                .find(|&x| m.is_positive(x) && generated_set(m, x) == *i)
        })
        .collect();
    IdealLattice { ideals, generators }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeIsoReport {
    pub cone_ideals: usize,
    pub ideals: usize,
    pub lands_in_lattice: bool,
    pub bijective: bool,
    pub inverse_is_cone: bool,
    pub order_isomorphism: bool,
    pub singly_generated_match: bool,
}

impl LatticeIsoReport {
    pub fn holds(&self) -> bool {
        self.lands_in_lattice
            && self.bijective
            && self.inverse_is_cone
            && self.order_isomorphism
            && self.singly_generated_match
    }
}

/// Compares the ideals of the positive cone with the ideals of the whole monoid through
/// `J -> {s : s + t in J for some t}` and its inverse `I -> I ∩ S_+`.
pub fn lattice_isomorphism(m: &Arc<FiniteOrderedMonoid>) -> LatticeIsoReport {
    let n = m.size();
    let cone = positive_cone(m);
    let lat_plus = ideal_lattice(cone.monoid());
    let lat = ideal_lattice(m);
    let star = |j: &[usize]| -> Vec<usize> {
        let inside = mask(n, &j.iter().map(|&k| cone.members[k]).collect::<Vec<_>>());
        (0..n)
            .filter(|&s| (0..n).any(|t| inside[m.add(s, t)]))
            .collect()
    };
    let forward: Vec<Option<usize>> = lat_plus
        .ideals
        .iter()
        .map(|j| lat.position(&star(j)))
        .collect();
    let lands_in_lattice = forward.iter().all(|f| f.is_some());
    let mut hit = vec![false; lat.ideals.len()];
    for f in forward.iter().flatten() {
        hit[*f] = true;
    }
    let bijective =
        lands_in_lattice && lat.ideals.len() == lat_plus.ideals.len() && hit.iter().all(|&h| h);
    let cone_of = |i: &[usize]| -> Vec<usize> {
        (0..cone.members.len())
            .filter(|&k| i.contains(&cone.members[k]))
            .collect()
    };
    let inverse_is_cone = lands_in_lattice
        && forward
            .iter()
            .enumerate()
            .all(|(k, f)| cone_of(&lat.ideals[f.unwrap()]) == lat_plus.ideals[k]);
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let order_isomorphism = lands_in_lattice
        && (0..forward.len()).all(|a| {
            (0..forward.len()).all(|b| {
                subset(&lat_plus.ideals[a], &lat_plus.ideals[b])
                    == subset(
                        &lat.ideals[forward[a].unwrap()],
                        &lat.ideals[forward[b].unwrap()],
                    )
            })
        });
    let singly_generated_match = lands_in_lattice
        && forward
            .iter()
            .enumerate()
            .all(|(k, f)| lat_plus.singly_generated(k) == lat.singly_generated(f.unwrap()));
    LatticeIsoReport {
        cone_ideals: lat_plus.ideals.len(),
        ideals: lat.ideals.len(),
        lands_in_lattice,
        bijective,
        inverse_is_cone,
        order_isomorphism,
        singly_generated_match,
    }
}

/// `S / I`, ordered by `x <= y + z` for some `z` in the ideal.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub monoid: Arc<FiniteOrderedMonoid>,
    pub projection: MonoidMap,
    pub classes: Vec<Vec<usize>>,
    pub ideal: SubMonoid,
    pub sequence: SequenceVerdict,
    pub axioms: Vec<AxiomVerdict>,
}

pub fn quotient(m: &Arc<FiniteOrderedMonoid>, ideal: &[usize]) -> Result<Quotient, StructureError> {
    let v = is_ideal(m, ideal);
    if let Some(f) = v.failure {
        return Err(StructureError::NotAnIdeal(f));
    }
    let n = m.size();
    let pre = |x: usize, y: usize| ideal.iter().any(|&z| m.leq(x, m.add(y, z)));
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let k = classes.len();
        let members: Vec<usize> = (x..n)
            .filter(|&y| class_of[y] == usize::MAX && pre(x, y) && pre(y, x))
            .collect();
        for &y in &members {
            class_of[y] = k;
        }
        classes.push(members);
    }
    let k = classes.len();
    let rep = |c: usize| classes[c][0];
    let mut add = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            add[a][b] = class_of[m.add(rep(a), rep(b))];
        }
    }
    for x in 0..n {
        for y in 0..n {
            if class_of[m.add(x, y)] != add[class_of[x]][class_of[y]] {
                return Err(StructureError::Inconsistent(
                    "sum is not well defined on classes".into(),
                ));
            }
        }
    }
    let leq: Vec<Vec<bool>> = (0..k)
        .map(|a| (0..k).map(|b| pre(rep(a), rep(b))).collect())
        .collect();
    let zero = class_of[m.zero()];
    let positive = (0..k).all(|a| leq[zero][a]);
    let names = (0..k).map(|c| format!("[{}]", m.name(rep(c)))).collect();
    let q = Arc::new(FiniteOrderedMonoid::new(names, zero, add, leq, positive)?);
    let projection = MonoidMap::new(m.clone(), q.clone(), class_of)?;
    let positive_ideal = ideal.iter().all(|&x| m.is_positive(x));
    let sub = Arc::new(restrict(m, ideal, positive_ideal)?);
    let inclusion = MonoidMap::new(sub, m.clone(), ideal.to_vec())?;
    let sequence = check_sequence(&inclusion, &projection)?;
    let axioms = [Axiom::PC, Axiom::PD, Axiom::S0]
        .into_iter()
        .map(|a| check_axiom(q.as_ref(), a).expect("small checks fit the budget"))
        .collect();
    Ok(Quotient {
        monoid: q,
        projection,
        classes,
        ideal: SubMonoid {
            members: ideal.to_vec(),
            inclusion,
        },
        sequence,
        axioms,
    })
}

/// A morphism killing an ideal, pushed through the quotient.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub quotient: Quotient,
    pub induced: MonoidMap,
    pub commutes: bool,
    /// Induced map is surjective exactly when the original one is.
    pub surjectivity_matches: bool,
}

pub fn factor_through_quotient(
    alpha: &MonoidMap,
    ideal: &[usize],
) -> Result<Factorization, StructureError> {
    let t = &alpha.codomain;
    if let Some(&x) = ideal.iter().find(|&&x| alpha.map[x] != t.zero()) {
        return Err(StructureError::IdealNotKilled(x));
    }
    let q = quotient(&alpha.domain, ideal)?;
    let mut induced = vec![usize::MAX; q.classes.len()];
    for (c, members) in q.classes.iter().enumerate() {
        induced[c] = alpha.map[members[0]];
        if members.iter().any(|&x| alpha.map[x] != induced[c]) {
            return Err(StructureError::Inconsistent(
                "map is not constant on a class".into(),
            ));
        }
    }
    let induced = MonoidMap::new(q.monoid.clone(), t.clone(), induced)?;
    let commutes = q.projection.then(&induced)? == *alpha;
    let surjectivity_matches = induced.is_surjective() == alpha.is_surjective();
    Ok(Factorization {
        quotient: q,
        induced,
        commutes,
        surjectivity_matches,
    })
}
