//! Discretized circle. Resolution `n` cuts the circle into `N = 2^n` open arcs; arc `a`
//! (0-based) runs from point `a` to point `a + 1 mod N`, so point `p` touches arcs `p - 1`
//! and `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroups::{FinAbGroup, GroupHom};
use crate::order::{FiniteOrderedMonoid, OrderError};
use crate::systems::{GroupSystem, SystemError};
use crate::webbing::{web_windowed, WebError, WebbedSemigroup, MAX_WEB_SIZE};

/// Largest resolution the set operations accept.
pub const MAX_RESOLUTION: u32 = 5;
/// Largest resolution at which all of `Λ_n` is materialized (about 2.6^N sets).
pub const MAX_ENUMERATION_RESOLUTION: u32 = 4;

#[derive(Debug, Error)]
pub enum CircleError {
    #[error("resolution {0} exceeds the guard")]
    ResolutionTooLarge(u32),
    #[error("resolutions differ: {0} vs {1}")]
    ResolutionMismatch(u32, u32),
    #[error("cannot refine from resolution {from} to coarser {to}")]
    CoarserResolution { from: u32, to: u32 },
    #[error("radius is not a multiple of the grid step")]
    OffGridRadius,
    #[error("point {0} is included without both adjacent arcs")]
    NotOpen(u32),
    #[error("index {0} out of range")]
    OutOfRange(u32),
    #[error("step-function base too large ({0} elements)")]
    TooLarge(usize),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Web(#[from] WebError),
}

fn count(n: u32) -> u32 {
    1 << n
}

fn mask(n: u32) -> u64 {
    (1u64 << count(n)) - 1
}

/// Cyclic shift by `k` positions towards higher indices.
fn rot(bits: u64, k: i64, n: u32) -> u64 {
    let len = count(n) as i64;
    let k = k.rem_euclid(len) as u32;
    if k == 0 {
        return bits;
    }
    ((bits << k) | (bits >> (len as u32 - k))) & mask(n)
}

/// Open subset of the circle that is a union of grid arcs and grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcOpenSet {
    n: u32,
    arcs: u64,
    points: u64,
}

impl ArcOpenSet {
    pub fn new(n: u32, arcs: u64, points: u64) -> Result<Self, CircleError> {
        if n > MAX_RESOLUTION {
            return Err(CircleError::ResolutionTooLarge(n));
        }
        let m = mask(n);
        if let Some(bad) = [arcs, points].iter().find(|&&b| b & !m != 0) {
            return Err(CircleError::OutOfRange(63 - bad.leading_zeros()));
        }
        let loose = points & !(arcs & rot(arcs, 1, n));
        if loose != 0 {
            return Err(CircleError::NotOpen(loose.trailing_zeros()));
        }
        Ok(ArcOpenSet { n, arcs, points })
    }

    pub fn empty(n: u32) -> Self {
        ArcOpenSet {
            n,
            arcs: 0,
            points: 0,
        }
    }

    pub fn full(n: u32) -> Self {
        ArcOpenSet {
            n,
            arcs: mask(n),
            points: mask(n),
        }
    }

    /// The single open arc `a`.
    pub fn arc(n: u32, a: u32) -> Self {
        ArcOpenSet {
            n,
            arcs: 1 << (a % count(n)),
            points: 0,
        }
    }

    pub fn resolution(&self) -> u32 {
        self.n
    }

    pub fn arcs(&self) -> u64 {
        self.arcs
    }

    pub fn points(&self) -> u64 {
        self.points
    }

    pub fn is_full(&self) -> bool {
        self.arcs == mask(self.n) && self.points == mask(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.arcs == 0
    }

    fn closure_points(&self) -> u64 {
        self.points | self.arcs | rot(self.arcs, 1, self.n)
    }

    /// Inclusion as point sets, refining to the finer resolution first.
    pub fn subset_of(&self, other: &ArcOpenSet) -> bool {
        let (a, b) = common(self, other);
        a.arcs & !b.arcs == 0 && a.points & !b.points == 0
    }

    /// Smallest open grid set containing the closure.
    pub fn minimal_way_above(&self) -> ArcOpenSet {
        let p = self.closure_points();
        ArcOpenSet {
            n: self.n,
            arcs: self.arcs | p | rot(p, -1, self.n),
            points: p,
        }
    }

    fn to_json(self) -> ArcOpenSetJson {
        let bits = |b: u64, shift: u32| {
            (0..count(self.n))
                .filter(|i| b >> i & 1 == 1)
                .map(|i| i + shift)
                .collect()
        };
        ArcOpenSetJson {
            n: self.n,
            arcs: bits(self.arcs, 1),
            points: bits(self.points, 0),
        }
    }
}

/// Both sets at the finer of their resolutions.
pub fn common(a: &ArcOpenSet, b: &ArcOpenSet) -> (ArcOpenSet, ArcOpenSet) {
    let m = a.n.max(b.n);
    (refine(a, m).expect("finer"), refine(b, m).expect("finer"))
}

impl fmt::Display for ArcOpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return write!(f, "T");
        }
        if self.is_empty() {
            return write!(f, "∅");
        }
        let j = self.to_json();
        write!(f, "U{:?}", j.arcs)?;
        if !j.points.is_empty() {
            write!(f, "+x{:?}", j.points)?;
        }
        Ok(())
    }
}

/// JSON form: arcs numbered `1..=2^n` (arc `k` ends at point `k`), points `0..2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcOpenSetJson {
    pub n: u32,
    pub arcs: Vec<u32>,
    pub points: Vec<u32>,
}

impl TryFrom<ArcOpenSetJson> for ArcOpenSet {
    type Error = CircleError;

    fn try_from(j: ArcOpenSetJson) -> Result<Self, CircleError> {
        if j.n > MAX_RESOLUTION {
            return Err(CircleError::ResolutionTooLarge(j.n));
        }
        let len = count(j.n);
        let mut arcs = 0u64;
        for k in j.arcs {
            if k == 0 || k > len {
                return Err(CircleError::OutOfRange(k));
            }
            arcs |= 1 << (k - 1);
        }
        let mut points = 0u64;
        for p in j.points {
            if p >= len {
                return Err(CircleError::OutOfRange(p));
            }
            points |= 1 << p;
        }
        ArcOpenSet::new(j.n, arcs, points)
    }
}

impl Serialize for ArcOpenSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArcOpenSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ArcOpenSetJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// All open grid sets at resolution `n`.
pub fn lambda_n(n: u32) -> Result<Vec<ArcOpenSet>, CircleError> {
    Ok(lambda_iter(n)?.collect())
}

/// The empty set, the full set, every single arc and every minimal open neighbourhood of a grid
/// point (two arcs and their common endpoint). Every set in `Λ_n` is a union of these.
pub fn lambda_generators(n: u32) -> Result<Vec<ArcOpenSet>, CircleError> {
    if n > MAX_RESOLUTION {
        return Err(CircleError::ResolutionTooLarge(n));
    }
    let mut out = vec![ArcOpenSet::empty(n), ArcOpenSet::full(n)];
    for a in 0..count(n) {
        out.push(ArcOpenSet::arc(n, a));
        let arcs = (1 << a) | rot(1 << a, -1, n);
        out.push(ArcOpenSet {
            n,
            arcs,
            points: 1 << a,
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Lazy form of [`lambda_n`], ordered by arc mask and then point mask.
pub fn lambda_iter(n: u32) -> Result<LambdaIter, CircleError> {
    if n > MAX_ENUMERATION_RESOLUTION {
        return Err(CircleError::ResolutionTooLarge(n));
    }
    Ok(LambdaIter {
        n,
        arcs: 0,
        sub: Some(0),
    })
}

pub struct LambdaIter {
    n: u32,
    arcs: u64,
    sub: Option<u64>,
}

impl Iterator for LambdaIter {
    type Item = ArcOpenSet;

    fn next(&mut self) -> Option<ArcOpenSet> {
        let n = self.n;
        let sub = self.sub?;
        let item = ArcOpenSet {
            n,
            arcs: self.arcs,
            points: sub,
        };
        let allowed = self.arcs & rot(self.arcs, 1, n);
        if sub != allowed {
            self.sub = Some(sub.wrapping_sub(allowed) & allowed);
        } else if self.arcs < mask(n) {
            self.arcs += 1;
            self.sub = Some(0);
        } else {
            self.sub = None;
        }
        Some(item)
    }
}

/// Rotation by `k` grid steps.
pub fn rotate(u: &ArcOpenSet, k: i64) -> ArcOpenSet {
    ArcOpenSet {
        n: u.n,
        arcs: rot(u.arcs, k, u.n),
        points: rot(u.points, k, u.n),
    }
}

/// `Λ*_n` with the Z fiber over the full circle cut to `-window..=window`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaStar {
    pub pairs: Vec<(ArcOpenSet, i64)>,
    pub partial: bool,
}

pub fn lambda_star_n(n: u32, window: i64) -> Result<LambdaStar, CircleError> {
    let mut pairs = Vec::new();
    for u in lambda_n(n)? {
        if u.is_full() {
            pairs.extend((-window..=window).map(|g| (u, g)));
        } else {
            pairs.push((u, 0));
        }
    }
    Ok(LambdaStar {
        pairs,
        partial: true,
    })
}

/// Compact containment: the closure of `u` lies inside `v`.
pub fn way_below_indicator(u: &ArcOpenSet, v: &ArcOpenSet) -> Result<bool, CircleError> {
    if u.n != v.n {
        return Err(CircleError::ResolutionMismatch(u.n, v.n));
    }
    Ok(u.arcs & !v.arcs == 0 && u.closure_points() & !v.points == 0)
}

/// The same point set at resolution `m`.
pub fn refine(u: &ArcOpenSet, m: u32) -> Result<ArcOpenSet, CircleError> {
    if m < u.n {
        return Err(CircleError::CoarserResolution { from: u.n, to: m });
    }
    if m > MAX_RESOLUTION {
        return Err(CircleError::ResolutionTooLarge(m));
    }
    if m == u.n {
        return Ok(*u);
    }
    let d = m - u.n;
    let k = 1u32 << d;
    let (mut arcs, mut points) = (0u64, 0u64);
    for a in 0..count(u.n) {
        if u.arcs >> a & 1 == 1 {
            for i in 0..k {
                arcs |= 1 << (a * k + i);
            }
            for i in 1..k {
                points |= 1 << (a * k + i);
            }
        }
        if u.points >> a & 1 == 1 {
            points |= 1 << (a * k);
        }
    }
    Ok(ArcOpenSet { n: m, arcs, points })
}

/// Union of open balls of radius `j / 2^n` around the points of `u`.
pub fn fatten_steps(u: &ArcOpenSet, j: u32) -> ArcOpenSet {
    let n = u.n;
    let (mut arcs, mut points) = (u.arcs, u.points);
    for i in 1..=j as i64 {
        arcs |= rot(u.arcs, i, n) | rot(u.arcs, -i, n);
        points |= rot(u.arcs, i, n) | rot(u.arcs, 1 - i, n);
    }
    ArcOpenSet { n, arcs, points }
}

/// Fattening by the radius `num / 2^exp`, which must be a grid multiple at the resolution of `u`.
pub fn fatten(u: &ArcOpenSet, num: u64, exp: u32) -> Result<ArcOpenSet, CircleError> {
    let steps = if exp <= u.n {
        num << (u.n - exp)
    } else {
        let d = exp - u.n;
        if !num.is_multiple_of(1 << d) {
            return Err(CircleError::OffGridRadius);
        }
        num >> d
    };
    Ok(fatten_steps(u, steps.min(count(u.n) as u64) as u32))
}

/// Level of a step function: `0..=M`, with `M + 1` standing for ∞.
pub type Level = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    pub arcs: Vec<Level>,
    pub points: Vec<Level>,
}

impl StepFunction {
    pub fn constant(n: u32, v: Level) -> Self {
        StepFunction {
            arcs: vec![v; count(n) as usize],
            points: vec![v; count(n) as usize],
        }
    }

    pub fn full_support(&self) -> bool {
        self.points.iter().all(|&p| p > 0)
    }

    fn name(&self, m: Level) -> String {
        let show = |v: Level| {
            if v > m {
                "∞".to_string()
            } else {
                v.to_string()
            }
        };
        let all = self.arcs.iter().chain(&self.points);
        if all.clone().all(|&v| v == self.arcs[0]) {
            return format!("[{}]", show(self.arcs[0]));
        }
        let arcs: Vec<String> = self.arcs.iter().map(|&v| show(v)).collect();
        let points: Vec<String> = self.points.iter().map(|&v| show(v)).collect();
        format!("[{}|{}]", arcs.join(","), points.join(","))
    }
}

/// Step functions with values `0..=M` or ∞, lower semicontinuous at the grid points.
pub fn step_functions(n: u32, m: Level) -> Result<Vec<StepFunction>, CircleError> {
    if n > MAX_RESOLUTION {
        return Err(CircleError::ResolutionTooLarge(n));
    }
    let len = count(n) as usize;
    let top = m + 1;
    let mut out = Vec::new();
    let mut arcs = vec![0; len];
    loop {
        let caps: Vec<Level> = (0..len)
            .map(|p| arcs[(p + len - 1) % len].min(arcs[p]))
            .collect();
        let mut points = vec![0; len];
        loop {
            out.push(StepFunction {
                arcs: arcs.clone(),
                points: points.clone(),
            });
            if out.len() > MAX_WEB_SIZE {
                return Err(CircleError::TooLarge(out.len()));
            }
            if !increment(&mut points, |i| caps[i]) {
                break;
            }
        }
        if !increment(&mut arcs, |_| top) {
            break;
        }
    }
    Ok(out)
}

fn increment(digits: &mut [Level], cap: impl Fn(usize) -> Level) -> bool {
    for i in 0..digits.len() {
        if digits[i] < cap(i) {
            digits[i] += 1;
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Step functions under pointwise truncated sum and pointwise order.
pub fn step_monoid(
    n: u32,
    m: Level,
) -> Result<(FiniteOrderedMonoid, Vec<StepFunction>), CircleError> {
    let fs = step_functions(n, m)?;
    let top = m + 1;
    let index: BTreeMap<(Vec<Level>, Vec<Level>), usize> = fs
        .iter()
        .enumerate()
        .map(|(i, f)| ((f.arcs.clone(), f.points.clone()), i))
        .collect();
    let plus = |a: &[Level], b: &[Level]| -> Vec<Level> {
        a.iter().zip(b).map(|(&x, &y)| (x + y).min(top)).collect()
    };
    let k = fs.len();
    let mut add = vec![vec![0; k]; k];
    let mut leq = vec![vec![false; k]; k];
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in fs.iter().enumerate() {
            add[i][j] = index[&(plus(&f.arcs, &g.arcs), plus(&f.points, &g.points))];
            leq[i][j] = f.arcs.iter().zip(&g.arcs).all(|(x, y)| x <= y)
                && f.points.iter().zip(&g.points).all(|(x, y)| x <= y);
        }
    }
    let names = fs.iter().map(|f| f.name(m)).collect();
    let zero = index[&(vec![0; count(n) as usize], vec![0; count(n) as usize])];
    Ok((FiniteOrderedMonoid::new(names, zero, add, leq, true)?, fs))
}

/// Z over full-support step functions, trivial elsewhere, identities between Z fibers.
pub fn circle_system(n: u32, m: Level) -> Result<GroupSystem, CircleError> {
    let (base, fs) = step_monoid(n, m)?;
    let fibers: Vec<FinAbGroup> = fs
        .iter()
        .map(|f| {
            if f.full_support() {
                FinAbGroup::z()
            } else {
                FinAbGroup::trivial()
            }
        })
        .collect();
    let mut edges = BTreeMap::new();
    for s in 0..fs.len() {
        for t in 0..fs.len() {
            if s != t && fs[s].full_support() && base.leq(s, t) {
                edges.insert((s, t), GroupHom::identity(&FinAbGroup::z()));
            }
        }
    }
    Ok(GroupSystem::with_implied_edges(base, fibers, edges)?)
}

pub fn circle_semigroup(n: u32, m: Level, window: i64) -> Result<WebbedSemigroup, CircleError> {
    let sys = Arc::new(circle_system(n, m)?);
    Ok(web_windowed(&sys, window)?)
}

/// Index of the pair (constant function `level`, `g`) in a circle semigroup.
pub fn constant_pair(w: &WebbedSemigroup, level: Level, g: i64) -> Option<usize> {
    let s = w.system().base().index_of(&format!("[{level}]"))?;
    let g = if w.system().fiber(s).is_trivial() {
        vec![]
    } else {
        vec![g]
    };
    w.index_of(s, &g)
}
