//! Exhaustive axiom checking on finite ordered monoids and on windowed webs.

use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

use crate::order::FiniteOrderedMonoid;

/// Upper bound on the number of quantifier instances a single check may visit.
pub const EVALUATION_BUDGET: u128 = 4_000_000_000;

/// Read access to a finite carrier with a (possibly partial) sum.
///
/// `sum` returns `None` when the result falls outside a materialized window.
pub trait FiniteStructure {
    fn size(&self) -> usize;
    fn zero(&self) -> usize;
    fn sum(&self, a: usize, b: usize) -> Option<usize>;
    fn leq(&self, a: usize, b: usize) -> bool;
    fn way_below(&self, a: usize, b: usize) -> bool;
    fn label(&self, a: usize) -> String;
    fn windowed(&self) -> bool {
        false
    }
}

impl FiniteStructure for FiniteOrderedMonoid {
    fn size(&self) -> usize {
        FiniteOrderedMonoid::size(self)
    }
    fn zero(&self) -> usize {
        FiniteOrderedMonoid::zero(self)
    }
    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.add(a, b))
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        FiniteOrderedMonoid::leq(self, a, b)
    }
    fn way_below(&self, a: usize, b: usize) -> bool {
        FiniteOrderedMonoid::leq(self, a, b)
    }
    fn label(&self, a: usize) -> String {
        self.name(a).to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    PC,
    PD,
    S0,
    WC,
    PWC,
    O5,
    O6,
    AU,
    AD,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::PC,
        Axiom::PD,
        Axiom::S0,
        Axiom::WC,
        Axiom::PWC,
        Axiom::O5,
        Axiom::O6,
        Axiom::AU,
        Axiom::AD,
    ];
}

impl FromStr for Axiom {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axiom::ALL
            .iter()
            .copied()
            .find(|a| format!("{a:?}").eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom {s}"))
    }
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive,
    /// Checked on every instance whose terms lie in the materialized window.
    Window,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub elements: Vec<usize>,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub coverage: Coverage,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("check of {axiom} needs about {instances} evaluations, over budget")]
    InfeasibleEnumeration { axiom: Axiom, instances: u128 },
}

fn witness<S: FiniteStructure + ?Sized>(s: &S, elements: Vec<usize>, n: Option<usize>) -> Witness {
    let labels = elements.iter().map(|&e| s.label(e)).collect();
    Witness {
        elements,
        labels,
        n,
    }
}

/// `k * a`, or `None` once a partial sum leaves the window.
pub fn multiple<S: FiniteStructure + ?Sized>(s: &S, k: usize, a: usize) -> Option<usize> {
    let mut acc = s.zero();
    for _ in 0..k {
        acc = s.sum(acc, a)?;
    }
    Some(acc)
}

/// Multiples `0, a, 2a, ...` up to `k * a`, stopping early when the window is left.
fn multiples<S: FiniteStructure + ?Sized>(s: &S, a: usize, k: usize) -> Vec<usize> {
    let mut out = vec![s.zero()];
    let mut acc = s.zero();
    for _ in 0..k {
        match s.sum(acc, a) {
            Some(v) => {
                acc = v;
                out.push(v);
            }
            None => break,
        }
    }
    out
}

/// Preperiod and period of the sequence `k * a` (full sums only).
fn cycle<S: FiniteStructure + ?Sized>(s: &S, a: usize) -> Option<(usize, usize)> {
    let mut first_seen = vec![usize::MAX; s.size()];
    let mut acc = s.zero();
    let mut k = 0;
    loop {
        if first_seen[acc] != usize::MAX {
            return Some((first_seen[acc], k - first_seen[acc]));
        }
        first_seen[acc] = k;
        acc = s.sum(acc, a)?;
        k += 1;
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Number of multipliers `n` that decide the multiplier-quantified axioms.
///
/// Always at least the carrier size. On full tables the sequences `n * x` are eventually
/// periodic, so every `n` beyond preperiod plus common period repeats an earlier instance.
pub fn multiplier_bound<S: FiniteStructure + ?Sized>(s: &S) -> usize {
    let n = s.size();
    if s.windowed() {
        return n;
    }
    let mut pre = 0;
    let mut per = 1usize;
    for a in 0..n {
        if let Some((mu, la)) = cycle(s, a) {
            pre = pre.max(mu);
            per = lcm(per, la).min(1 << 20);
        }
    }
    n.max(pre + per + 1)
}

fn budget(axiom: Axiom, instances: u128) -> Result<(), AxiomError> {
    if instances > EVALUATION_BUDGET {
        Err(AxiomError::InfeasibleEnumeration { axiom, instances })
    } else {
        Ok(())
    }
}

/// Exhaustively checks one axiom. The first violation in enumeration order is returned.
pub fn check_axiom<S: FiniteStructure + ?Sized>(
    s: &S,
    axiom: Axiom,
) -> Result<AxiomVerdict, AxiomError> {
    let n = s.size();
    let z = s.zero();
    let n128 = n as u128;
    let coverage = if s.windowed() {
        Coverage::Window
    } else {
        Coverage::Exhaustive
    };
    let verdict = |w: Option<Witness>| AxiomVerdict {
        axiom,
        holds: w.is_none(),
        witness: w,
        coverage,
    };
    let found = match axiom {
        Axiom::PC => {
            let mut w = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    if s.leq(a, b) && s.leq(z, b) {
                        if let Some(c) = s.sum(a, b) {
                            if !s.leq(z, c) {
                                w = Some(witness(s, vec![a, b], None));
                                break 'outer;
                            }
                        }
                    }
                }
            }
            w
        }
        Axiom::PD => (0..n)
            .find(|&a| !(0..n).any(|p| s.sum(a, p).is_some_and(|c| s.leq(z, c))))
            .map(|a| witness(s, vec![a], None)),
        Axiom::S0 => {
            let mut w = None;
            'outer: for a in 0..n {
                for b in 0..n {
                    if s.sum(a, b) == Some(z) && (a != z || b != z) {
                        w = Some(witness(s, vec![a, b], None));
                        break 'outer;
                    }
                }
            }
            w
        }
        Axiom::WC => {
            budget(axiom, n128.pow(3))?;
            let mut w = None;
            'outer: for a in 0..n {
                for t in 0..n {
                    let Some(at) = s.sum(a, t) else { continue };
                    for v in 0..n {
                        let Some(vt) = s.sum(v, t) else { continue };
                        if s.way_below(at, vt) && !s.way_below(a, v) {
                            w = Some(witness(s, vec![a, t, v], None));
                            break 'outer;
                        }
                    }
                }
            }
            w
        }
        Axiom::PWC => {
            let mut w = None;
            'outer: for a in 0..n {
                for t in 0..n {
                    let Some(at) = s.sum(a, t) else { continue };
                    if s.way_below(at, t) && !s.way_below(a, z) {
                        w = Some(witness(s, vec![a, t], None));
                        break 'outer;
                    }
                }
            }
            w
        }
        Axiom::O5 => {
            budget(axiom, n128.pow(4))?;
            let mut w = None;
            'outer: for a in 0..n {
                for t in 0..n {
                    if !s.leq(a, t) {
                        continue;
                    }
                    for a2 in 0..n {
                        if !s.way_below(a2, a) {
                            continue;
                        }
                        let ok = (0..n).any(|x| {
                            let (Some(l), Some(r)) = (s.sum(a2, x), s.sum(a, x)) else {
                                return false;
                            };
                            s.leq(l, t) && s.leq(t, r)
                        });
                        if !ok {
                            w = Some(witness(s, vec![a, t, a2], None));
                            break 'outer;
                        }
                    }
                }
            }
            w
        }
        Axiom::O6 => {
            budget(axiom, n128.pow(5))?;
            check_o6(s)
        }
        Axiom::AU => {
            let bound = multiplier_bound(s);
            budget(axiom, n128 * n128 * bound as u128)?;
            let mult: Vec<Vec<usize>> = (0..n).map(|a| multiples(s, a, bound + 1)).collect();
            let mut w = None;
            'outer: for k in 1..=bound {
                for x in 0..n {
                    let Some(&lhs) = mult[x].get(k + 1) else {
                        continue;
                    };
                    for y in 0..n {
                        let Some(&rhs) = mult[y].get(k) else { continue };
                        if s.leq(lhs, rhs) && !s.leq(x, y) {
                            w = Some(witness(s, vec![x, y], Some(k)));
                            break 'outer;
                        }
                    }
                }
            }
            w
        }
        Axiom::AD => {
            let bound = multiplier_bound(s);
            budget(axiom, n128 * n128 * n128 * bound as u128)?;
            let mult: Vec<Vec<usize>> = (0..n).map(|a| multiples(s, a, bound + 1)).collect();
            let mut w = None;
            'outer: for k in 1..=bound {
                for x in 0..n {
                    for x2 in 0..n {
                        if !s.way_below(x2, x) {
                            continue;
                        }
                        let ok = (0..n).any(|y| match (mult[y].get(k), mult[y].get(k + 1)) {
                            (Some(&ky), Some(&k1y)) => s.leq(ky, x) && s.leq(x2, k1y),
                            _ => false,
                        });
                        if !ok {
                            w = Some(witness(s, vec![x2, x], Some(k)));
                            break 'outer;
                        }
                    }
                }
            }
            w
        }
    };
    Ok(verdict(found))
}

fn check_o6<S: FiniteStructure + ?Sized>(s: &S) -> Option<Witness> {
    let n = s.size();
    let words = n.div_ceil(64);
    let down: Vec<Vec<u64>> = (0..n)
        .map(|a| {
            let mut v = vec![0u64; words];
            for b in 0..n {
                if s.leq(b, a) {
                    v[b / 64] |= 1 << (b % 64);
                }
            }
            v
        })
        .collect();
    let below: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| s.leq(b, a)).collect())
        .collect();
    for x in 0..n {
        for y in 0..n {
            for zz in 0..n {
                let Some(yz) = s.sum(y, zz) else { continue };
                if !s.leq(x, yz) {
                    continue;
                }
                let mut reach = vec![0u64; words];
                for &a in below[x].iter().filter(|&&a| s.leq(a, y)) {
                    for &b in below[x].iter().filter(|&&b| s.leq(b, zz)) {
                        if let Some(ab) = s.sum(a, b) {
                            for (r, d) in reach.iter_mut().zip(&down[ab]) {
                                *r |= d;
                            }
                        }
                    }
                }
                for x2 in 0..n {
                    if s.way_below(x2, x) && reach[x2 / 64] >> (x2 % 64) & 1 == 0 {
                        return Some(witness(s, vec![x2, x, y, zz], None));
                    }
                }
            }
        }
    }
    None
}

/// Re-evaluates the defining formula of an axiom at a witness; true when the witness is a
/// genuine violation.
pub fn is_violation<S: FiniteStructure + ?Sized>(s: &S, axiom: Axiom, w: &Witness) -> bool {
    let n = s.size();
    let z = s.zero();
    let e = &w.elements;
    let get = |i: usize| e.get(i).copied().filter(|&v| v < n);
    match axiom {
        Axiom::PC => match (get(0), get(1)) {
            (Some(a), Some(b)) => {
                s.leq(a, b) && s.leq(z, b) && s.sum(a, b).is_some_and(|c| !s.leq(z, c))
            }
            _ => false,
        },
        Axiom::PD => {
            get(0).is_some_and(|a| !(0..n).any(|p| s.sum(a, p).is_some_and(|c| s.leq(z, c))))
        }
        Axiom::S0 => match (get(0), get(1)) {
            (Some(a), Some(b)) => s.sum(a, b) == Some(z) && (a != z || b != z),
            _ => false,
        },
        Axiom::WC => match (get(0), get(1), get(2)) {
            (Some(a), Some(t), Some(v)) => match (s.sum(a, t), s.sum(v, t)) {
                (Some(at), Some(vt)) => s.way_below(at, vt) && !s.way_below(a, v),
                _ => false,
            },
            _ => false,
        },
        Axiom::PWC => match (get(0), get(1)) {
            (Some(a), Some(t)) => s
                .sum(a, t)
                .is_some_and(|at| s.way_below(at, t) && !s.way_below(a, z)),
            _ => false,
        },
        Axiom::O5 => match (get(0), get(1), get(2)) {
            (Some(a), Some(t), Some(a2)) => {
                s.leq(a, t)
                    && s.way_below(a2, a)
                    && !(0..n).any(|x| match (s.sum(a2, x), s.sum(a, x)) {
                        (Some(l), Some(r)) => s.leq(l, t) && s.leq(t, r),
                        _ => false,
                    })
            }
            _ => false,
        },
        Axiom::O6 => match (get(0), get(1), get(2), get(3)) {
            (Some(x2), Some(x), Some(y), Some(zz)) => {
                s.way_below(x2, x)
                    && s.sum(y, zz).is_some_and(|yz| s.leq(x, yz))
                    && !(0..n).any(|a| {
                        s.leq(a, x)
                            && s.leq(a, y)
                            && (0..n).any(|b| {
                                s.leq(b, x)
                                    && s.leq(b, zz)
                                    && s.sum(a, b).is_some_and(|ab| s.leq(x2, ab))
                            })
                    })
            }
            _ => false,
        },
        Axiom::AU => match (get(0), get(1), w.n) {
            (Some(x), Some(y), Some(k)) => match (multiple(s, k + 1, x), multiple(s, k, y)) {
                (Some(l), Some(r)) => s.leq(l, r) && !s.leq(x, y),
                _ => false,
            },
            _ => false,
        },
        Axiom::AD => match (get(0), get(1), w.n) {
            (Some(x2), Some(x), Some(k)) => {
                s.way_below(x2, x)
                    && !(0..n).any(|y| match (multiple(s, k, y), multiple(s, k + 1, y)) {
                        (Some(ky), Some(k1y)) => s.leq(ky, x) && s.leq(x2, k1y),
                        _ => false,
                    })
            }
            _ => false,
        },
    }
}
