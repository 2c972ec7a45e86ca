//! Brute-force oracles. Each one evaluates a definition directly, without reusing the
//! library's search code.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use cuweb::abgroups::{Element, FinAbGroup, GroupHom};
use cuweb::axioms::{Axiom, FiniteStructure};
use cuweb::circle::{fatten_steps, lambda_iter, lambda_star_n, ArcOpenSet};
use cuweb::metric::{fiber_edge, pair_leq, pair_way_below, CircleMorphism};
use cuweb::order::FiniteOrderedMonoid;
use cuweb::systems::GroupSystem;
use cuweb::webbing::WebbedSemigroup;

/// Plain tables of a finite structure. `add` is `None` outside a window.
#[derive(Debug, Clone)]
pub struct Tables {
    pub n: usize,
    pub zero: usize,
    pub add: Vec<Vec<Option<usize>>>,
    pub leq: Vec<Vec<bool>>,
    pub wb: Vec<Vec<bool>>,
}

impl Tables {
    pub fn of<S: FiniteStructure>(s: &S) -> Self {
        let n = s.size();
        Tables {
            n,
            zero: s.zero(),
            add: (0..n)
                .map(|a| (0..n).map(|b| s.sum(a, b)).collect())
                .collect(),
            leq: (0..n)
                .map(|a| (0..n).map(|b| s.leq(a, b)).collect())
                .collect(),
            wb: (0..n)
                .map(|a| (0..n).map(|b| s.way_below(a, b)).collect())
                .collect(),
        }
    }

    fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    fn ll(&self, a: usize, b: usize) -> bool {
        self.wb[a][b]
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b].expect("full table")
    }

    /// All vectors `(k·a)_a` for `k = 0, 1, ...` until the vector repeats.
    fn multiple_states(&self) -> Vec<Vec<usize>> {
        let mut seen = HashSet::new();
        let mut states = Vec::new();
        let mut cur = vec![self.zero; self.n];
        while seen.insert(cur.clone()) {
            states.push(cur.clone());
            cur = (0..self.n).map(|a| self.add(cur[a], a)).collect();
        }
        // One more step so that both `k` and `k + 1` are available for every listed `k`.
        states.push(cur);
        states
    }
}

/// Direct evaluation of an axiom's defining formula over a full table.
pub fn oracle_axiom(t: &Tables, axiom: Axiom) -> bool {
    let n = t.n;
    let z = t.zero;
    let all = || 0..n;
    match axiom {
        Axiom::PC => {
            all().all(|s| all().all(|u| !(t.le(s, u) && t.le(z, u)) || t.le(z, t.add(s, u))))
        }
        Axiom::PD => all().all(|s| all().any(|p| t.le(z, t.add(s, p)))),
        Axiom::S0 => all().all(|s| all().all(|u| t.add(s, u) != z || (s == z && u == z))),
        Axiom::WC => all()
            .all(|s| all().all(|u| all().all(|v| !t.ll(t.add(s, u), t.add(v, u)) || t.ll(s, v)))),
        Axiom::PWC => all().all(|s| all().all(|u| !t.ll(t.add(s, u), u) || t.ll(s, z))),
        Axiom::O5 => all().all(|s| {
            all().all(|u| {
                all().all(|s2| {
                    !(t.le(s, u) && t.ll(s2, s))
                        || all().any(|w| t.le(t.add(s2, w), u) && t.le(u, t.add(s, w)))
                })
            })
        }),
        Axiom::O6 => all().all(|x2| {
            all().all(|x| {
                all().all(|y| {
                    all().all(|zz| {
                        !(t.ll(x2, x) && t.le(x, t.add(y, zz)))
                            || all().any(|a| {
                                t.le(a, x)
                                    && t.le(a, y)
                                    && all()
                                        .any(|b| t.le(b, x) && t.le(b, zz) && t.le(x2, t.add(a, b)))
                            })
                    })
                })
            })
        }),
        Axiom::AU => {
            let st = t.multiple_states();
            (1..st.len() - 1)
                .all(|k| all().all(|x| all().all(|y| !t.le(st[k + 1][x], st[k][y]) || t.le(x, y))))
        }
        Axiom::AD => {
            let st = t.multiple_states();
            (1..st.len() - 1).all(|k| {
                all().all(|x| {
                    all().all(|x2| {
                        !t.ll(x2, x) || all().any(|y| t.le(st[k][y], x) && t.le(x2, st[k + 1][y]))
                    })
                })
            })
        }
    }
}

/// `x ≪ y` from the sequence definition, over increasing chains of length at most 3 (in a
/// finite poset the tail of an increasing sequence is constant, so longer chains add nothing).
pub fn way_below_by_chains(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    let mut wb = vec![vec![true; n]; n];
    for c1 in 0..n {
        for c2 in (0..n).filter(|&c2| leq[c1][c2]) {
            for c3 in (0..n).filter(|&c3| leq[c2][c3]) {
                for y in (0..n).filter(|&y| leq[y][c3]) {
                    // The chain c1 ≤ c2 ≤ c3 ≤ c3 ≤ ... has supremum c3 ≥ y; its tail is c3.
                    for (x, row) in wb.iter_mut().enumerate() {
                        if !leq[x][c3] {
                            row[y] = false;
                        }
                    }
                }
            }
        }
    }
    wb
}

/// All elements of a finite abelian group, listed directly from its factors.
pub fn group_elements(g: &FinAbGroup) -> Vec<Element> {
    let mut out = vec![vec![]];
    for &d in &g.factors {
        assert!(d > 0, "finite factors only");
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..d as i64).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Applies a homomorphism through its matrix with explicit reduction.
pub fn apply(h: &GroupHom, x: &[i64]) -> Element {
    h.matrix
        .iter()
        .zip(&h.codomain.factors)
        .map(|(row, &e)| {
            let v: i64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            if e == 0 {
                v
            } else {
                v.rem_euclid(e as i64)
            }
        })
        .collect()
}

fn group_add(g: &FinAbGroup, a: &[i64], b: &[i64]) -> Element {
    a.iter()
        .zip(b)
        .zip(&g.factors)
        .map(|((x, y), &d)| {
            if d == 0 {
                x + y
            } else {
                (x + y).rem_euclid(d as i64)
            }
        })
        .collect()
}

/// Functoriality checked on every element: identities on the diagonal, composition along
/// every comparable triple, and homomorphisms on every edge.
pub fn functorial(
    base: &FiniteOrderedMonoid,
    fibers: &[FinAbGroup],
    edges: &BTreeMap<(usize, usize), GroupHom>,
) -> bool {
    let n = base.size();
    if fibers.len() != n || group_elements(&fibers[base.zero()]).len() != 1 {
        return false;
    }
    for s in 0..n {
        for t in 0..n {
            let e = edges.get(&(s, t));
            if base.leq(s, t) != e.is_some() {
                return false;
            }
            let Some(e) = e else { continue };
            if e.domain != fibers[s] || e.codomain != fibers[t] {
                return false;
            }
            let xs = group_elements(&fibers[s]);
            for a in &xs {
                if s == t && apply(e, a) != *a {
                    return false;
                }
                for b in &xs {
                    if apply(e, &group_add(&fibers[s], a, b))
                        != group_add(&fibers[t], &apply(e, a), &apply(e, b))
                    {
                        return false;
                    }
                }
            }
            for u in (0..n).filter(|&u| base.leq(t, u)) {
                let (f, g) = (&edges[&(t, u)], &edges[&(s, u)]);
                if xs.iter().any(|a| apply(f, &apply(e, a)) != apply(g, a)) {
                    return false;
                }
            }
        }
    }
    true
}

/// The web of a finite system straight from the pair formulas, keyed by `(s, g)`.
pub struct WebOracle {
    pub pairs: Vec<(usize, Element)>,
    pub add: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
}

pub fn web_oracle(sys: &GroupSystem) -> WebOracle {
    let base = sys.base();
    let pairs: Vec<(usize, Element)> = (0..base.size())
        .flat_map(|s| {
            group_elements(sys.fiber(s))
                .into_iter()
                .map(move |g| (s, g))
        })
        .collect();
    let index = |s: usize, g: &Element| {
        pairs
            .iter()
            .position(|(t, h)| *t == s && h == g)
            .expect("pair")
    };
    let m = pairs.len();
    let mut add = vec![vec![0; m]; m];
    let mut leq = vec![vec![false; m]; m];
    for (a, (s, g)) in pairs.iter().enumerate() {
        for (b, (t, h)) in pairs.iter().enumerate() {
            let u = base.add(*s, *t);
            let v = group_add(
                sys.fiber(u),
                &apply(sys.edge(*s, u), g),
                &apply(sys.edge(*t, u), h),
            );
            add[a][b] = index(u, &v);
            leq[a][b] = base.leq(*s, *t) && apply(sys.edge(*s, *t), g) == *h;
        }
    }
    WebOracle { pairs, add, leq }
}

/// Checks a materialized web against [`web_oracle`]; returns a description of the first mismatch.
pub fn web_mismatch(sys: &GroupSystem, w: &WebbedSemigroup) -> Option<String> {
    let o = web_oracle(sys);
    if o.pairs.len() != w.len() {
        return Some(format!("size {} vs {}", w.len(), o.pairs.len()));
    }
    let pos: Vec<usize> = o
        .pairs
        .iter()
        .map(|(s, g)| w.index_of(*s, g).expect("pair present"))
        .collect();
    for a in 0..o.pairs.len() {
        for b in 0..o.pairs.len() {
            if w.sum(pos[a], pos[b]) != Some(pos[o.add[a][b]]) {
                return Some(format!("sum of {:?} and {:?}", o.pairs[a], o.pairs[b]));
            }
            if w.leq(pos[a], pos[b]) != o.leq[a][b] {
                return Some(format!("order of {:?} and {:?}", o.pairs[a], o.pairs[b]));
            }
        }
    }
    None
}

/// `α ≃ β` on `Λ*_n` by scanning every way-below pair of `Λ*_n`.
pub fn brute_compare(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    n: u32,
    window: i64,
    strict: bool,
) -> bool {
    let rel = if strict { pair_way_below } else { pair_leq };
    let pairs = lambda_star_n(n, window).unwrap().pairs;
    for x in &pairs {
        for y in &pairs {
            if !pair_way_below(x, y) {
                continue;
            }
            let (ax, bx) = (
                alpha.image(&x.0, x.1).unwrap(),
                beta.image(&x.0, x.1).unwrap(),
            );
            let (ay, by) = (
                alpha.image(&y.0, y.1).unwrap(),
                beta.image(&y.0, y.1).unwrap(),
            );
            if !rel(&ax, &by) || !rel(&bx, &ay) {
                return false;
            }
        }
    }
    true
}

/// Open sets at resolution `n` from the definition: a grid point may be included only when
/// both neighbouring arcs are.
pub fn brute_open_sets(n: u32) -> Vec<ArcOpenSet> {
    let len = 1u32 << n;
    let mut out = Vec::new();
    for arcs in 0u64..(1 << len) {
        for points in 0u64..(1 << len) {
            let open = (0..len).all(|p| {
                let left = (p + len - 1) % len;
                points >> p & 1 == 0 || (arcs >> p & 1 == 1 && arcs >> left & 1 == 1)
            });
            if open {
                out.push(ArcOpenSet::new(n, arcs, points).expect("open by construction"));
            }
        }
    }
    out
}

/// Systems whose webs are small enough for cubic oracles.
pub fn small(sys: &Arc<GroupSystem>) -> bool {
    sys.all_finite()
        && (0..sys.base().size())
            .map(|s| sys.fiber(s).order().unwrap_or(u64::MAX))
            .sum::<u64>()
            <= 24
}

/// `α ≃ β` on `Λ*_n` over every open set `s` and the least `t` way above it.
pub fn full_scan_compare(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    n: u32,
    window: i64,
    strict: bool,
) -> bool {
    let rel = if strict { pair_way_below } else { pair_leq };
    lambda_iter(n).unwrap().all(|s| {
        let t = s.minimal_way_above();
        let gs = if s.is_full() { -window..=window } else { 0..=0 };
        gs.into_iter().all(|g| {
            let h = fiber_edge(&s, &t, g);
            let (a_s, b_s) = (alpha.image(&s, g).unwrap(), beta.image(&s, g).unwrap());
            let (a_t, b_t) = (alpha.image(&t, h).unwrap(), beta.image(&t, h).unwrap());
            rel(&a_s, &b_t) && rel(&b_s, &a_t)
        })
    })
}

/// Smallest admissible fattening radius in grid steps, scanning every open set.
pub fn full_scan_fattening(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    grid_n: u32,
    window: i64,
) -> Option<u32> {
    let len = 1u32 << grid_n;
    (1..=(len / 2).max(1)).find(|&j| {
        lambda_iter(grid_n).unwrap().all(|u| {
            let v = fatten_steps(&u, j);
            let gs = if u.is_full() { -window..=window } else { 0..=0 };
            gs.into_iter().all(|g| {
                let h = fiber_edge(&u, &v, g);
                if !pair_way_below(&(u, g), &(v, h)) {
                    return true;
                }
                let lows = [alpha.image(&u, g).unwrap(), beta.image(&u, g).unwrap()];
                let highs = [alpha.image(&v, h).unwrap(), beta.image(&v, h).unwrap()];
                lows.iter().all(|a| highs.iter().all(|b| pair_leq(a, b)))
            })
        })
    })
}
