//! Finite ordered monoids given by tables.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("tables do not match the carrier size {0}")]
    BadShape(usize),
    #[error("sum is not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("sum is not commutative at ({0}, {1})")]
    NonCommutative(usize, usize),
    #[error("zero is not neutral for {0}")]
    BadNeutral(usize),
    #[error("order is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("{0} <= {1} and {2} <= {3} but the sums are not comparable")]
    IncompatibleSumOrder(usize, usize, usize, usize),
    #[error("flagged positively ordered but 0 is not below {0}")]
    NotPositive(usize),
}

/// A commutative monoid with a compatible partial order, all given by tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteOrderedMonoid {
    names: Vec<String>,
    zero: usize,
    add: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    positively_ordered: bool,
}

impl FiniteOrderedMonoid {
    /// Validates the tables and builds the monoid.
    pub fn new(
        names: Vec<String>,
        zero: usize,
        add: Vec<Vec<usize>>,
        leq: Vec<Vec<bool>>,
        positively_ordered: bool,
    ) -> Result<Self, OrderError> {
        let m = FiniteOrderedMonoid {
            names,
            zero,
            add,
            leq,
            positively_ordered,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), OrderError> {
        let n = self.names.len();
        let shape = n > 0
            && self.zero < n
            && self.add.len() == n
            && self.leq.len() == n
            && self
                .add
                .iter()
                .all(|r| r.len() == n && r.iter().all(|&v| v < n))
            && self.leq.iter().all(|r| r.len() == n);
        if !shape {
            return Err(OrderError::BadShape(n));
        }
        for a in 0..n {
            if self.add[self.zero][a] != a {
                return Err(OrderError::BadNeutral(a));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.add[a][b] != self.add[b][a] {
                    return Err(OrderError::NonCommutative(a, b));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.add[a][b];
                for c in 0..n {
                    if self.add[ab][c] != self.add[a][self.add[b][c]] {
                        return Err(OrderError::NonAssociative(a, b, c));
                    }
                }
            }
        }
        for a in 0..n {
            if !self.leq[a][a] {
                return Err(OrderError::NotPartialOrder(format!(
                    "{a} is not below itself"
                )));
            }
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    return Err(OrderError::NotPartialOrder(format!(
                        "{a} and {b} are mutually below"
                    )));
                }
                if !self.leq[a][b] {
                    continue;
                }
                for c in 0..n {
                    if self.leq[b][c] && !self.leq[a][c] {
                        return Err(OrderError::NotPartialOrder(format!(
                            "{a} <= {b} <= {c} but not {a} <= {c}"
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq[a][b] {
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        if self.leq[c][d] && !self.leq[self.add[a][c]][self.add[b][d]] {
                            return Err(OrderError::IncompatibleSumOrder(a, b, c, d));
                        }
                    }
                }
            }
        }
        if self.positively_ordered {
            for a in 0..n {
                if !self.leq[self.zero][a] {
                    return Err(OrderError::NotPositive(a));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn leq_table(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn positively_ordered(&self) -> bool {
        self.positively_ordered
    }

    pub fn is_positive(&self, a: usize) -> bool {
        self.leq[self.zero][a]
    }

    /// `k * a`, with `0 * a = 0`.
    pub fn multiple(&self, k: usize, a: usize) -> usize {
        (0..k).fold(self.zero, |acc, _| self.add[acc][a])
    }

    /// Way-below on a finite carrier. In a finite poset an increasing sequence is eventually
    /// constant, so the relation coincides with the order; the sequence search confirms that.
    pub fn way_below(&self) -> Vec<Vec<bool>> {
        let wb = way_below_by_sequences(&self.leq);
        assert_eq!(
            wb, self.leq,
            "way-below differs from the order on a finite carrier"
        );
        wb
    }
}

/// Sequence definition of way-below: `x ≪ y` iff every increasing sequence whose supremum is
/// above `y` eventually passes above `x`. Increasing sequences in a finite poset are chains that
/// become constant at their supremum; a counterexample is a chain avoiding the up-set of `x`
/// whose last element is above `y`. Chains are explored depth first.
pub fn way_below_by_sequences(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    let mut out = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            out[x][y] = !counter_chain_exists(leq, x, y);
        }
    }
    out
}

fn counter_chain_exists(leq: &[Vec<bool>], x: usize, y: usize) -> bool {
    let n = leq.len();
    let allowed: Vec<bool> = (0..n).map(|z| !leq[x][z]).collect();
    // minimal starting points of chains inside the allowed region
    let mut visited = vec![false; n];
    let mut stack: Vec<usize> = (0..n)
        .filter(|&z| allowed[z] && !(0..n).any(|w| w != z && allowed[w] && leq[w][z]))
        .collect();
    while let Some(z) = stack.pop() {
        if visited[z] {
            continue;
        }
        visited[z] = true;
        // the chain may stop here: it is then constant with supremum z
        if leq[y][z] {
            return true;
        }
        for w in 0..n {
            if w != z && allowed[w] && leq[z][w] && !visited[w] {
                stack.push(w);
            }
        }
    }
    false
}

/// `{0, 1, ..., m, ∞}` with truncated addition and the usual order.
pub fn truncated_naturals(m: usize) -> FiniteOrderedMonoid {
    let n = m + 2;
    let inf = m + 1;
    let names = (0..=m)
        .map(|k| k.to_string())
        .chain(std::iter::once("∞".to_string()))
        .collect();
    let add = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if a == inf || b == inf || a + b > m {
                        inf
                    } else {
                        a + b
                    }
                })
                .collect()
        })
        .collect();
    let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
    FiniteOrderedMonoid::new(names, 0, add, leq, true).expect("truncated naturals are valid")
}

/// `{0, 1, ..., k}` with `a + b = max(a, b)`.
pub fn max_chain(k: usize) -> FiniteOrderedMonoid {
    let n = k + 1;
    let names = (0..n).map(|a| a.to_string()).collect();
    let add = (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect();
    let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
    FiniteOrderedMonoid::new(names, 0, add, leq, true).expect("max chains are valid")
}

/// A family of subsets (bitmasks) closed under union and containing the empty set,
/// with union as sum and inclusion as order.
pub fn union_monoid(sets: &[u32]) -> Option<FiniteOrderedMonoid> {
    let mut sets: Vec<u32> = sets.to_vec();
    sets.sort_unstable();
    sets.dedup();
    if sets.first() != Some(&0) {
        return None;
    }
    let pos = |s: u32| sets.iter().position(|&t| t == s);
    let n = sets.len();
    let mut add = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            add[a][b] = pos(sets[a] | sets[b])?;
        }
    }
    let leq = (0..n)
        .map(|a| (0..n).map(|b| sets[a] & !sets[b] == 0).collect())
        .collect();
    let names = sets.iter().map(|s| format!("{{{}}}", bits(*s))).collect();
    FiniteOrderedMonoid::new(names, 0, add, leq, true).ok()
}

fn bits(s: u32) -> String {
    (0..32)
        .filter(|i| s >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Cartesian product with componentwise sum and order.
pub fn product(a: &FiniteOrderedMonoid, b: &FiniteOrderedMonoid) -> FiniteOrderedMonoid {
    let nb = b.size();
    let n = a.size() * nb;
    let split = |x: usize| (x / nb, x % nb);
    let names = (0..n)
        .map(|x| {
            let (i, j) = split(x);
            format!("({},{})", a.name(i), b.name(j))
        })
        .collect();
    let add = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (i, j) = split(x);
                    let (k, l) = split(y);
                    a.add(i, k) * nb + b.add(j, l)
                })
                .collect()
        })
        .collect();
    let leq = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (i, j) = split(x);
                    let (k, l) = split(y);
                    a.leq(i, k) && b.leq(j, l)
                })
                .collect()
        })
        .collect();
    FiniteOrderedMonoid::new(
        names,
        a.zero() * nb + b.zero(),
        add,
        leq,
        a.positively_ordered() && b.positively_ordered(),
    )
    .expect("products of valid monoids are valid")
}

/// Adjoins an absorbing element above everything.
pub fn adjoin_top(m: &FiniteOrderedMonoid, name: &str) -> FiniteOrderedMonoid {
    let n = m.size();
    let top = n;
    let mut names = m.names().to_vec();
    names.push(name.to_string());
    let add = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| {
                    if a == top || b == top {
                        top
                    } else {
                        m.add(a, b)
                    }
                })
                .collect()
        })
        .collect();
    let leq = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| b == top || (a != top && m.leq(a, b)))
                .collect()
        })
        .collect();
    FiniteOrderedMonoid::new(names, m.zero(), add, leq, m.positively_ordered())
        .expect("adjoining an absorbing top keeps the axioms")
}

/// Whether `f` is a monoid morphism.
pub fn is_monoid_morphism(
    src: &FiniteOrderedMonoid,
    dst: &FiniteOrderedMonoid,
    f: &[usize],
) -> bool {
    if f.len() != src.size() || f[src.zero()] != dst.zero() {
        return false;
    }
    (0..src.size()).all(|a| (0..src.size()).all(|b| f[src.add(a, b)] == dst.add(f[a], f[b])))
}

pub fn is_order_preserving(
    src: &FiniteOrderedMonoid,
    dst: &FiniteOrderedMonoid,
    f: &[usize],
) -> bool {
    (0..src.size()).all(|a| (0..src.size()).all(|b| !src.leq(a, b) || dst.leq(f[a], f[b])))
}

/// All order-preserving monoid morphisms between two finite ordered monoids, by backtracking.
pub fn all_monoid_morphisms(
    src: &FiniteOrderedMonoid,
    dst: &FiniteOrderedMonoid,
) -> Vec<Vec<usize>> {
    let n = src.size();
    let mut out = Vec::new();
    let mut f = vec![usize::MAX; n];
    f[src.zero()] = dst.zero();
    let order: Vec<usize> = (0..n).filter(|&a| a != src.zero()).collect();
    fn consistent(src: &FiniteOrderedMonoid, dst: &FiniteOrderedMonoid, f: &[usize]) -> bool {
        let n = src.size();
        for a in 0..n {
            if f[a] == usize::MAX {
                continue;
            }
            for b in 0..n {
                if f[b] == usize::MAX {
                    continue;
                }
                let s = src.add(a, b);
                if f[s] != usize::MAX && f[s] != dst.add(f[a], f[b]) {
                    return false;
                }
                if src.leq(a, b) && !dst.leq(f[a], f[b]) {
                    return false;
                }
            }
        }
        true
    }
    fn go(
        k: usize,
        order: &[usize],
        src: &FiniteOrderedMonoid,
        dst: &FiniteOrderedMonoid,
        f: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            out.push(f.clone());
            return;
        }
        let a = order[k];
        for v in 0..dst.size() {
            f[a] = v;
            if consistent(src, dst, f) {
                go(k + 1, order, src, dst, f, out);
            }
        }
        f[a] = usize::MAX;
    }
    if consistent(src, dst, &f) {
        go(0, &order, src, dst, &mut f, &mut out);
    }
    out
}

/// An order isomorphism that is also a monoid isomorphism, if one exists.
pub fn find_isomorphism(a: &FiniteOrderedMonoid, b: &FiniteOrderedMonoid) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    all_monoid_morphisms(a, b).into_iter().find(|f| {
        let mut seen = vec![false; b.size()];
        f.iter().for_each(|&v| seen[v] = true);
        seen.iter().all(|&x| x)
            && (0..a.size()).all(|x| (0..a.size()).all(|y| a.leq(x, y) == b.leq(f[x], f[y])))
    })
}
