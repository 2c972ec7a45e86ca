//! Named example structures and seeded random generators for them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abgroups::{hom_set, FinAbGroup, GroupHom};
use crate::colimits::{IndexPoset, SystemDiagram};
use crate::metric::{BaseMap, CircleWebMorphism};
use crate::order::{max_chain, product, truncated_naturals, union_monoid, FiniteOrderedMonoid};
use crate::systems::{all_morphisms, GroupSystem, SystemMorphism};
use crate::webbing::web;

/// Fiber groups used by the random generators: 0, Z/2, Z/3, Z/4, Z/2⊕Z/2.
pub const GROUP_MENU: [&[u64]; 5] = [&[], &[2], &[3], &[4], &[2, 2]];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn group(factors: &[u64]) -> FinAbGroup {
    FinAbGroup::new(factors.to_vec())
}

/// Z/2 over `{0, 1, ∞}` with identity edges: the five-element web.
pub fn w5() -> Arc<GroupSystem> {
    Arc::new(GroupSystem::constant(
        truncated_naturals(1),
        FinAbGroup::cyclic(2),
    ))
}

/// As [`w5`], but the edge from 1 to ∞ is zero.
pub fn w5_zero_edge() -> Arc<GroupSystem> {
    let base = truncated_naturals(1);
    let z2 = FinAbGroup::cyclic(2);
    let fibers = vec![FinAbGroup::trivial(), z2.clone(), z2.clone()];
    let mut edges = BTreeMap::new();
    edges.insert((1, 2), GroupHom::zero(&z2, &z2));
    Arc::new(GroupSystem::with_implied_edges(base, fibers, edges).expect("valid"))
}

/// Trivial fibers over the square of `{0, 1, ∞}`.
pub fn trivial_square() -> Arc<GroupSystem> {
    let t = truncated_naturals(1);
    Arc::new(GroupSystem::trivial(product(&t, &t)))
}

/// Z/2 over `{0, ∞}`.
pub fn stable_z2() -> Arc<GroupSystem> {
    Arc::new(GroupSystem::constant(
        truncated_naturals(0),
        FinAbGroup::cyclic(2),
    ))
}

pub fn named_systems() -> Vec<(&'static str, Arc<GroupSystem>)> {
    let chain_z3 = GroupSystem::constant(max_chain(2), FinAbGroup::cyclic(3));
    let z4 = FinAbGroup::cyclic(4);
    let z2 = FinAbGroup::cyclic(2);
    let reduce = GroupHom::new(z4.clone(), z2.clone(), vec![vec![1]]).expect("reduction");
    let levels = GroupSystem::from_levels(
        truncated_naturals(2),
        &[0, 1, 1, 2],
        &[FinAbGroup::trivial(), z4, z2],
        &[
            GroupHom::zero(&FinAbGroup::trivial(), &FinAbGroup::cyclic(4)),
            reduce,
        ],
    )
    .expect("valid");
    let unions = union_monoid(&[0, 1, 2, 3]).expect("closed family");
    vec![
        ("w5", w5()),
        ("w5-zero-edge", w5_zero_edge()),
        ("trivial-square", trivial_square()),
        ("stable-z2", stable_z2()),
        ("chain-z3", Arc::new(chain_z3)),
        ("levels-z4-z2", Arc::new(levels)),
        (
            "unions-z2",
            Arc::new(GroupSystem::constant(unions, FinAbGroup::cyclic(2))),
        ),
    ]
}

/// Ordered monoids used by the structure checks: small bases and the webs of the named systems.
pub fn named_monoids() -> Vec<(String, FiniteOrderedMonoid)> {
    let mut out: Vec<(String, FiniteOrderedMonoid)> = Vec::new();
    for m in 0..=3 {
        out.push((format!("tn{m}"), truncated_naturals(m)));
    }
    for k in 1..=3 {
        out.push((format!("max{k}"), max_chain(k)));
    }
    let t = truncated_naturals(1);
    out.push(("tn1-squared".into(), product(&t, &t)));
    out.push(("tn0-x-tn1".into(), product(&truncated_naturals(0), &t)));
    out.push((
        "unions".into(),
        union_monoid(&[0, 1, 2, 3]).expect("closed"),
    ));
    out.push((
        "unions-chain".into(),
        union_monoid(&[0, 1, 3, 7]).expect("closed"),
    ));
    for (name, s) in named_systems() {
        let w = web(&s).expect("named systems web");
        out.push((format!("web-{name}"), w.to_monoid().expect("finite web")));
    }
    out
}

fn random_union_family<R: Rng>(rng: &mut R, max_size: usize) -> FiniteOrderedMonoid {
    loop {
        let mut sets = vec![0u32];
        for _ in 0..rng.gen_range(1..=3) {
            sets.push(rng.gen_range(1..8));
        }
        let mut closed = sets.clone();
        loop {
            let mut grew = false;
            for a in closed.clone() {
                for b in closed.clone() {
                    if !closed.contains(&(a | b)) {
                        closed.push(a | b);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        closed.sort_unstable();
        closed.dedup();
        if closed.len() <= max_size {
            return union_monoid(&closed).expect("closed under unions");
        }
    }
}

/// A random positively ordered base with at most `max_size` (at least 2) elements.
pub fn random_base<R: Rng>(rng: &mut R, max_size: usize) -> FiniteOrderedMonoid {
    let max_size = max_size.max(2);
    loop {
        let m = match rng.gen_range(0..4) {
            0 => truncated_naturals(rng.gen_range(0..=4)),
            1 => max_chain(rng.gen_range(1..=5)),
            2 => random_union_family(rng, max_size),
            _ => {
                let a = truncated_naturals(0);
                let b = if rng.gen_bool(0.5) {
                    truncated_naturals(rng.gen_range(0..=1))
                } else {
                    max_chain(rng.gen_range(1..=2))
                };
                product(&a, &b)
            }
        };
        if m.size() <= max_size {
            return m;
        }
    }
}

/// Elements ordered so that everything below an element comes first.
fn linear_extension(m: &FiniteOrderedMonoid) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.size()).collect();
    order.sort_by_key(|&s| (0..m.size()).filter(|&x| m.leq(x, s)).count());
    order
}

/// A random system over `base`: fibers pulled back along a random level map into a chain
/// of groups from [`GROUP_MENU`], or a constant system.
pub fn random_system_over<R: Rng>(rng: &mut R, base: FiniteOrderedMonoid) -> GroupSystem {
    if rng.gen_bool(0.2) {
        let g = group(GROUP_MENU.choose(rng).expect("menu"));
        return GroupSystem::constant(base, g);
    }
    let top = rng.gen_range(1..=3);
    let mut chain = vec![FinAbGroup::trivial()];
    for _ in 0..top {
        chain.push(group(GROUP_MENU.choose(rng).expect("menu")));
    }
    let steps: Vec<GroupHom> = (0..top)
        .map(|k| {
            let homs = hom_set(&chain[k], &chain[k + 1]).expect("finite groups");
            homs.choose(rng).expect("zero map exists").clone()
        })
        .collect();
    let mut level = vec![0usize; base.size()];
    for s in linear_extension(&base) {
        if s == base.zero() {
            continue;
        }
        let below = (0..base.size())
            .filter(|&x| x != s && base.leq(x, s))
            .map(|x| level[x])
            .max()
            .unwrap_or(0);
        level[s] = (below + usize::from(rng.gen_bool(0.5))).min(top);
    }
    GroupSystem::from_levels(base, &level, &chain, &steps).expect("levels are order preserving")
}

pub fn random_system<R: Rng>(rng: &mut R, max_base: usize) -> GroupSystem {
    let base = random_base(rng, max_base);
    random_system_over(rng, base)
}

/// A composable pair of morphisms `A -> B -> C` between small random systems.
pub fn random_composable_pair<R: Rng>(rng: &mut R) -> (SystemMorphism, SystemMorphism) {
    const LIMIT: usize = 20_000;
    loop {
        let [a, b, c] = [0; 3].map(|_| Arc::new(random_system(rng, 4)));
        let (Ok(f), Ok(g)) = (all_morphisms(&a, &b, LIMIT), all_morphisms(&b, &c, LIMIT)) else {
            continue;
        };
        if let (Some(f), Some(g)) = (f.choose(rng), g.choose(rng)) {
            return (f.clone(), g.clone());
        }
    }
}

fn random_index<R: Rng>(rng: &mut R) -> IndexPoset {
    let named = |n: usize, rel: &[(usize, usize)]| {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in rel {
            leq[i][j] = true;
        }
        let names = (0..n).map(|i| format!("i{i}")).collect();
        IndexPoset::new(names, leq).expect("directed poset")
    };
    match rng.gen_range(0..3) {
        0 => IndexPoset::chain(rng.gen_range(1..=4)),
        1 => named(3, &[(0, 2), (1, 2)]),
        _ => named(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]),
    }
}

/// Stages `G ⊕ Z/2^ℓ(i)` over one base, with `ℓ` non-increasing along the index and
/// reduction maps on the second summand.
pub fn random_diagram<R: Rng>(rng: &mut R) -> SystemDiagram {
    let index = random_index(rng);
    let n = index.len();
    let g = random_system(rng, 4);
    let base = g.base().clone();
    let mut ell = vec![0u32; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse((0..n).filter(|&j| index.leq[j][i]).count()));
    for &i in &order {
        let above = (0..n)
            .filter(|&j| j != i && index.leq[i][j])
            .map(|j| ell[j])
            .max();
        ell[i] = match above {
            None => rng.gen_range(0..=2),
            Some(a) => (a + u32::from(rng.gen_bool(0.5))).min(2),
        };
    }
    let extra = |l: u32| {
        if l == 0 {
            FinAbGroup::trivial()
        } else {
            FinAbGroup::cyclic(1 << l)
        }
    };
    let stage = |l: u32| -> Arc<GroupSystem> {
        let z = base.zero();
        let k = extra(l);
        let fibers: Vec<FinAbGroup> = (0..base.size())
            .map(|s| {
                if s == z {
                    FinAbGroup::trivial()
                } else {
                    g.fiber(s).direct_sum(&k)
                }
            })
            .collect();
        let mut edges = BTreeMap::new();
        for s in 0..base.size() {
            for t in 0..base.size() {
                if s != z && s != t && base.leq(s, t) {
                    edges.insert((s, t), g.edge(s, t).direct_sum(&GroupHom::identity(&k)));
                }
            }
        }
        Arc::new(
            GroupSystem::with_implied_edges(base.clone(), fibers, edges).expect("stage is valid"),
        )
    };
    let objects: Vec<Arc<GroupSystem>> = ell.iter().map(|&l| stage(l)).collect();
    let mut arrows = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !index.leq[i][j] {
                continue;
            }
            let (ki, kj) = (extra(ell[i]), extra(ell[j]));
            let reduce = GroupHom::new(ki.clone(), kj.clone(), vec![vec![1; ki.rank()]; kj.rank()])
                .expect("reduction");
            let eta: BTreeMap<usize, GroupHom> = (0..base.size())
                .filter(|&s| s != base.zero())
                .map(|s| (s, GroupHom::identity(g.fiber(s)).direct_sum(&reduce)))
                .collect();
            let alpha: Vec<usize> = (0..base.size()).collect();
            let m = SystemMorphism::with_implied_components(
                objects[i].clone(),
                objects[j].clone(),
                alpha,
                eta,
            )
            .expect("reduction is natural");
            arrows.insert((i, j), m);
        }
    }
    SystemDiagram::new(index, objects, arrows).expect("coherent diagram")
}

/// A random morphism of the circle model: identity, a rotation at resolution at most
/// `max_resolution`, or the collapse, with a small fiber multiplier.
pub fn random_circle_morphism<R: Rng>(rng: &mut R, max_resolution: u32) -> CircleWebMorphism {
    let base = match rng.gen_range(0..10) {
        0..=2 => BaseMap::Identity,
        3 => BaseMap::Collapse,
        _ => {
            let resolution = rng.gen_range(1..=max_resolution.max(1));
            let steps = rng.gen_range(-3..=3);
            BaseMap::Rotation { steps, resolution }
        }
    };
    let fiber_multiplier = *[1, 1, 1, -1, 0, 2].choose(rng).expect("menu");
    CircleWebMorphism {
        base,
        fiber_multiplier,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a: Vec<_> = (0..5).map(|_| random_system(&mut rng(7), 6)).collect();
        let b: Vec<_> = (0..5).map(|_| random_system(&mut rng(7), 6)).collect();
        assert_eq!(a, b);
        let mut r = rng(1);
        for _ in 0..50 {
            let s = random_system(&mut r, 6);
            assert!(s.base().size() <= 6);
        }
    }

    #[test]
    fn random_diagrams_are_valid() {
        let mut r = rng(3);
        for _ in 0..10 {
            let d = random_diagram(&mut r);
            assert!(!d.objects().is_empty());
        }
    }

    #[test]
    fn named_fixtures_web() {
        for (name, s) in named_systems() {
            assert!(web(&s).is_ok(), "{name}");
        }
        assert!(named_monoids().iter().all(|(_, m)| m.size() <= 16));
    }
}
