//! Finitely generated abelian groups in invariant-factor form and their homomorphisms.
//!
//! A group is a list of factors; `0` stands for a copy of Z and `d >= 1` for Z/d.
//! Elements are integer vectors with the torsion coordinates reduced to `0..d`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default half-width of the window used when enumerating Z factors.
pub const DEFAULT_WINDOW: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    DomainMismatch {
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("generator {column} of order {order} is not sent to an element of matching order")]
    NotWellDefined { column: usize, order: u64 },
    #[error("group has Z factors and no enumeration window was given")]
    Unbounded,
    #[error("codomain of the first map does not match the domain of the second")]
    NotComposable,
    #[error("element has {got} coordinates, group has {want} factors")]
    BadElement { got: usize, want: usize },
    #[error("homomorphism set is infinite")]
    InfiniteHomSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub factors: Vec<u64>,
}

pub type Element = Vec<i64>;

fn reduce(x: i64, d: u64) -> i64 {
    if d == 0 {
        x
    } else {
        x.rem_euclid(d as i64)
    }
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Self {
        FinAbGroup { factors }
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn z() -> Self {
        FinAbGroup { factors: vec![0] }
    }

    pub fn cyclic(d: u64) -> Self {
        FinAbGroup { factors: vec![d] }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|&d| d != 0)
    }

    /// Number of elements, `None` for infinite groups.
    pub fn order(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        Some(self.factors.iter().product())
    }

    /// True when every element is zero (no factors, or only Z/1 factors).
    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|&d| d == 1)
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn normalize(&self, x: &[i64]) -> Element {
        x.iter()
            .zip(&self.factors)
            .map(|(&v, &d)| reduce(v, d))
            .collect()
    }

    pub fn check(&self, x: &[i64]) -> Result<(), GroupError> {
        if x.len() != self.rank() {
            return Err(GroupError::BadElement {
                got: x.len(),
                want: self.rank(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Element {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| reduce(x + y, d))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Element {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| reduce(-x, d))
            .collect()
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Element {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| reduce(k * x, d))
            .collect()
    }

    /// Whether `x` lies in the enumeration window (only Z coordinates are constrained).
    pub fn in_window(&self, x: &[i64], window: i64) -> bool {
        x.iter()
            .zip(&self.factors)
            .all(|(&v, &d)| d != 0 || v.abs() <= window)
    }

    /// Enumerates all elements; Z factors need a window.
    pub fn elements(&self, window: Option<i64>) -> Result<Enumeration, GroupError> {
        let mut ranges = Vec::with_capacity(self.rank());
        let mut partial = false;
        for &d in &self.factors {
            if d == 0 {
                let b = window.ok_or(GroupError::Unbounded)?;
                partial = true;
                ranges.push((-b..=b).collect::<Vec<_>>());
            } else {
                ranges.push((0..d as i64).collect());
            }
        }
        let mut out: Vec<Element> = vec![vec![]];
        for r in &ranges {
            let mut next = Vec::with_capacity(out.len() * r.len());
            for prefix in &out {
                for &v in r {
                    let mut e = prefix.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            out = next;
        }
        Ok(Enumeration {
            elements: out,
            partial,
        })
    }

    /// Direct sum of two groups.
    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        FinAbGroup { factors: f }
    }
}

impl std::fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&d| if d == 0 { "Z".into() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub elements: Vec<Element>,
    /// True when a window truncated some Z factor.
    pub partial: bool,
}

/// A homomorphism given by an integer matrix with one row per codomain factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupHom {
    pub domain: FinAbGroup,
    pub codomain: FinAbGroup,
    pub matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    /// Builds a homomorphism, reducing the matrix to canonical form and checking well-definedness.
    pub fn new(
        domain: FinAbGroup,
        codomain: FinAbGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self, GroupError> {
        let rows = codomain.rank();
        let cols = domain.rank();
        let shape_ok = matrix.len() == rows && matrix.iter().all(|r| r.len() == cols);
        if !shape_ok {
            return Err(GroupError::DomainMismatch {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, |r| r.len()),
                want_rows: rows,
                want_cols: cols,
            });
        }
        let matrix: Vec<Vec<i64>> = matrix
            .into_iter()
            .zip(&codomain.factors)
            .map(|(row, &e)| row.into_iter().map(|v| reduce(v, e)).collect())
            .collect();
        for (i, &d) in domain.factors.iter().enumerate() {
            if d == 0 {
                continue;
            }
            for (j, &e) in codomain.factors.iter().enumerate() {
                if reduce(d as i64 * matrix[j][i], e) != 0 {
                    return Err(GroupError::NotWellDefined {
                        column: i,
                        order: d,
                    });
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let n = g.rank();
        let matrix = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| i64::from(i == j && g.factors[j] != 1))
                    .collect()
            })
            .collect();
        GroupHom {
            domain: g.clone(),
            codomain: g.clone(),
            matrix,
        }
    }

    pub fn zero(domain: &FinAbGroup, codomain: &FinAbGroup) -> Self {
        GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: vec![vec![0; domain.rank()]; codomain.rank()],
        }
    }

    /// Multiplication by `k` on a group.
    pub fn scalar(g: &FinAbGroup, k: i64) -> Self {
        let n = g.rank();
        let matrix = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { reduce(k, g.factors[j]) } else { 0 })
                    .collect()
            })
            .collect();
        GroupHom {
            domain: g.clone(),
            codomain: g.clone(),
            matrix,
        }
    }

    pub fn apply(&self, x: &[i64]) -> Element {
        self.matrix
            .iter()
            .zip(&self.codomain.factors)
            .map(|(row, &e)| {
                let s: i64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
                reduce(s, e)
            })
            .collect()
    }

    /// Block-diagonal map between direct sums.
    pub fn direct_sum(&self, other: &GroupHom) -> GroupHom {
        let (c1, c2) = (self.domain.rank(), other.domain.rank());
        let mut matrix: Vec<Vec<i64>> = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .copied()
                    .chain(std::iter::repeat_n(0, c2))
                    .collect()
            })
            .collect();
        matrix.extend(other.matrix.iter().map(|r| {
            std::iter::repeat_n(0, c1)
                .chain(r.iter().copied())
                .collect()
        }));
        GroupHom {
            domain: self.domain.direct_sum(&other.domain),
            codomain: self.codomain.direct_sum(&other.codomain),
            matrix,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.codomain != other.domain {
            return Err(GroupError::NotComposable);
        }
        let rows = other.codomain.rank();
        let cols = self.domain.rank();
        let mid = self.codomain.rank();
        let matrix = (0..rows)
            .map(|j| {
                (0..cols)
                    .map(|i| {
                        let s: i64 = (0..mid)
                            .map(|k| other.matrix[j][k] * self.matrix[k][i])
                            .sum();
                        reduce(s, other.codomain.factors[j])
                    })
                    .collect()
            })
            .collect();
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            matrix,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|&v| v == 0))
    }

    /// Bijectivity. Exact for finite groups; with Z factors it is decided on the window.
    pub fn is_bijective(&self, window: i64) -> (bool, bool) {
        let exact = self.domain.is_finite() && self.codomain.is_finite();
        if exact && self.domain.order() != self.codomain.order() {
            return (false, true);
        }
        let dom = self.domain.elements(Some(window)).expect("window given");
        let mut seen = std::collections::HashSet::new();
        for x in &dom.elements {
            if !seen.insert(self.apply(x)) {
                return (false, exact);
            }
        }
        if exact {
            return (true, true);
        }
        let cod = self.codomain.elements(Some(window)).expect("window given");
        let surj = cod.elements.iter().all(|y| seen.contains(y));
        (surj, false)
    }
}

/// Composition helper matching the usual right-to-left notation: `g ∘ f`.
pub fn compose(f: &GroupHom, g: &GroupHom) -> Result<GroupHom, GroupError> {
    f.then(g)
}

/// Every homomorphism between two groups, when there are finitely many.
pub fn hom_set(domain: &FinAbGroup, codomain: &FinAbGroup) -> Result<Vec<GroupHom>, GroupError> {
    let rows = codomain.rank();
    let cols = domain.rank();
    // choices per entry
    let mut choices: Vec<Vec<i64>> = Vec::with_capacity(rows * cols);
    for &e in &codomain.factors {
        for &d in &domain.factors {
            if e == 0 {
                if d == 0 {
                    return Err(GroupError::InfiniteHomSet);
                }
                choices.push(vec![0]);
            } else {
                choices.push((0..e as i64).collect());
            }
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let matrix: Vec<Vec<i64>> = (0..rows)
            .map(|j| {
                (0..cols)
                    .map(|i| choices[j * cols + i][idx[j * cols + i]])
                    .collect()
            })
            .collect();
        if let Ok(h) = GroupHom::new(domain.clone(), codomain.clone(), matrix) {
            out.push(h);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Direct limit of a chain `A_0 -> A_1 -> ...` of finite groups.
///
/// Returns the stable image group size and the stage from which the chain maps are bijective,
/// or `None` if the chain never stabilizes within the given maps.
pub fn colimit_chain(maps: &[GroupHom]) -> Result<Option<(usize, u64)>, GroupError> {
    for w in maps.windows(2) {
        if w[0].codomain != w[1].domain {
            return Err(GroupError::NotComposable);
        }
    }
    for (k, m) in maps.iter().enumerate() {
        if !m.domain.is_finite() || !m.codomain.is_finite() {
            return Err(GroupError::Unbounded);
        }
        if maps[k..].iter().all(|f| f.is_bijective(0).0) {
            return Ok(Some((k, m.domain.order().unwrap_or(0))));
        }
    }
    Ok(None)
}
