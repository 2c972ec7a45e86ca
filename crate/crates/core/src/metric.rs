//! Comparison of morphisms out of the circle model, the discrete semimetric `dd`, the
//! fattening metric `d`, and the fiberwise criterion for webbed morphisms.
//!
//! Domain and codomain are both the circle web on indicator levels: a pair `(U, g)` with
//! `g ∈ Z` when `U` is the whole circle and `g = 0` otherwise.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::{
    common, lambda_generators, lambda_n, refine, rotate, way_below_indicator, ArcOpenSet,
    CircleError, MAX_RESOLUTION,
};
use crate::json::{take_schema, JsonError};

/// Largest resolution cap of a tabulated morphism (validation is quadratic in `|Λ*_n|`).
pub const MAX_TABLE_CAP: u32 = 3;

pub type Pair = (ArcOpenSet, i64);

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("morphism not available at resolution {0}")]
    ResolutionUnavailable(u32),
    #[error("morphism not available on fiber window {0}")]
    WindowUnavailable(i64),
    #[error("not a webbed morphism")]
    NotWebbedMorphism,
    #[error("generator {0} has no image")]
    MissingGenerator(String),
    #[error("bad fiber element at {0}")]
    BadFiber(String),
    #[error("not order preserving at {0}")]
    NotMonotone(String),
    #[error("does not preserve compact containment at {0}")]
    NotWayBelowPreserving(String),
    #[error("images disagree under refinement at {0}")]
    Incoherent(String),
    #[error("table resolution cap {0} exceeds {MAX_TABLE_CAP}")]
    CapTooLarge(u32),
    #[error("morphism file needs either \"webbed\" or \"images\"")]
    BadMorphismFile,
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error(transparent)]
    Json(#[from] JsonError),
}

fn show(p: &Pair) -> String {
    format!("({},{})", p.0, p.1)
}

/// The connecting map between fibers: identity between two Z fibers, zero otherwise.
pub fn fiber_edge(from: &ArcOpenSet, to: &ArcOpenSet, g: i64) -> i64 {
    if from.is_full() && to.is_full() {
        g
    } else {
        0
    }
}

pub fn pair_leq(a: &Pair, b: &Pair) -> bool {
    a.0.subset_of(&b.0) && fiber_edge(&a.0, &b.0, a.1) == b.1
}

pub fn pair_way_below(a: &Pair, b: &Pair) -> bool {
    let (u, v) = common(&a.0, &b.0);
    way_below_indicator(&u, &v).expect("same resolution") && fiber_edge(&u, &v, a.1) == b.1
}

fn valid_pair(p: &Pair) -> bool {
    p.0.is_full() || p.1 == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMap {
    Identity,
    /// Everything to the empty set.
    Collapse,
    /// Rotation by `steps / 2^resolution` of a turn.
    Rotation {
        steps: i64,
        resolution: u32,
    },
}

/// Morphism given by a map on indicator levels and a multiplier on the Z fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleWebMorphism {
    pub base: BaseMap,
    pub fiber_multiplier: i64,
}

impl CircleWebMorphism {
    pub fn identity() -> Self {
        CircleWebMorphism {
            base: BaseMap::Identity,
            fiber_multiplier: 1,
        }
    }

    pub fn rotation(steps: i64, resolution: u32) -> Self {
        CircleWebMorphism {
            base: BaseMap::Rotation { steps, resolution },
            fiber_multiplier: 1,
        }
    }

    pub fn with_multiplier(self, m: i64) -> Self {
        CircleWebMorphism {
            fiber_multiplier: m,
            ..self
        }
    }

    pub fn image_set(&self, u: &ArcOpenSet) -> Result<ArcOpenSet, CircleError> {
        Ok(match self.base {
            BaseMap::Identity => *u,
            BaseMap::Collapse => ArcOpenSet::empty(u.resolution()),
            BaseMap::Rotation { steps, resolution } => {
                let r = u.resolution().max(resolution);
                if r > MAX_RESOLUTION {
                    return Err(CircleError::ResolutionTooLarge(r));
                }
                rotate(&refine(u, r)?, steps << (r - resolution))
            }
        })
    }

    /// Component of the fiber map from `G(u)` to `H(image)`.
    pub fn eta(&self, u: &ArcOpenSet, g: i64) -> Result<i64, CircleError> {
        Ok(fiber_edge(
            u,
            &self.image_set(u)?,
            self.fiber_multiplier * g,
        ))
    }

    pub fn image(&self, u: &ArcOpenSet, g: i64) -> Result<Pair, CircleError> {
        Ok((self.image_set(u)?, self.eta(u, g)?))
    }

    /// Tabulates the morphism on `Λ*_n` for `n <= cap`.
    pub fn tabulate(&self, cap: u32, window: i64) -> Result<MorphismOnGenerators, MetricError> {
        let mut entries = Vec::new();
        for n in 0..=cap {
            for u in lambda_n(n)? {
                for g in fibers(&u, window) {
                    entries.push(ImageEntry {
                        source: u,
                        fiber: g,
                        image: self.image_set(&u)?,
                        image_fiber: self.eta(&u, g)?,
                    });
                }
            }
        }
        MorphismOnGenerators::new(cap, window, entries)
    }
}

fn fibers(u: &ArcOpenSet, window: i64) -> std::ops::RangeInclusive<i64> {
    if u.is_full() {
        -window..=window
    } else {
        0..=0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageEntry {
    pub source: ArcOpenSet,
    pub fiber: i64,
    pub image: ArcOpenSet,
    pub image_fiber: i64,
}

/// A morphism known only through its values on `Λ*_n`, `n <= cap`, fiber window `window`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismOnGenerators {
    cap: u32,
    window: i64,
    images: HashMap<Pair, Pair>,
}

impl MorphismOnGenerators {
    /// Checks completeness, monotonicity, preservation of compact containment at each
    /// resolution, and agreement between resolutions `n` and `n + 1`.
    pub fn new(cap: u32, window: i64, entries: Vec<ImageEntry>) -> Result<Self, MetricError> {
        if cap > MAX_TABLE_CAP {
            return Err(MetricError::CapTooLarge(cap));
        }
        let mut images = HashMap::new();
        for e in entries {
            let (src, img) = ((e.source, e.fiber), (e.image, e.image_fiber));
            if !valid_pair(&src) || !valid_pair(&img) || e.fiber.abs() > window {
                return Err(MetricError::BadFiber(show(&src)));
            }
            images.insert(src, img);
        }
        let m = MorphismOnGenerators {
            cap,
            window,
            images,
        };
        for n in 0..=cap {
            let level: Vec<Pair> = lambda_n(n)?
                .into_iter()
                .flat_map(|u| fibers(&u, window).map(move |g| (u, g)))
                .collect();
            for p in &level {
                if !m.images.contains_key(p) {
                    return Err(MetricError::MissingGenerator(show(p)));
                }
            }
            for a in &level {
                for b in &level {
                    if pair_leq(a, b) && !pair_leq(&m.images[a], &m.images[b]) {
                        return Err(MetricError::NotMonotone(format!(
                            "{} ≤ {}",
                            show(a),
                            show(b)
                        )));
                    }
                    if pair_way_below(a, b) && !pair_way_below(&m.images[a], &m.images[b]) {
                        return Err(MetricError::NotWayBelowPreserving(format!(
                            "{} ≪ {}",
                            show(a),
                            show(b)
                        )));
                    }
                }
            }
            if n < cap {
                for p in &level {
                    let q = (refine(&p.0, n + 1)?, p.1);
                    let (x, y) = (&m.images[p], &m.images[&q]);
                    if !(pair_leq(x, y) && pair_leq(y, x)) {
                        return Err(MetricError::Incoherent(show(p)));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn entries(&self) -> Vec<ImageEntry> {
        let mut v: Vec<ImageEntry> = self
            .images
            .iter()
            .map(|(s, i)| ImageEntry {
                source: s.0,
                fiber: s.1,
                image: i.0,
                image_fiber: i.1,
            })
            .collect();
        v.sort_by_key(|a| (a.source, a.fiber));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircleMorphism {
    Webbed(CircleWebMorphism),
    Table(MorphismOnGenerators),
}

impl CircleMorphism {
    pub fn image(&self, u: &ArcOpenSet, g: i64) -> Result<Pair, MetricError> {
        match self {
            CircleMorphism::Webbed(w) => Ok(w.image(u, g)?),
            CircleMorphism::Table(t) => {
                if u.resolution() > t.cap {
                    return Err(MetricError::ResolutionUnavailable(u.resolution()));
                }
                t.images
                    .get(&(*u, g))
                    .copied()
                    .ok_or(MetricError::WindowUnavailable(g))
            }
        }
    }

    fn available(&self, n: u32, window: i64) -> Result<(), MetricError> {
        if let CircleMorphism::Table(t) = self {
            if n > t.cap {
                return Err(MetricError::ResolutionUnavailable(n));
            }
            if window > t.window {
                return Err(MetricError::WindowUnavailable(window));
            }
        }
        Ok(())
    }
}

/// Morphism file: `{"cuweb_schema":1, "webbed": {...}}` or
/// `{"cuweb_schema":1, "resolution_cap": N, "window": B, "images": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub webbed: Option<CircleWebMorphism>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<ImageEntry>>,
}

pub fn parse_morphism(text: &str) -> Result<CircleMorphism, MetricError> {
    let obj = take_schema(text)?;
    let f: MorphismFile =
        serde_json::from_value(serde_json::Value::Object(obj)).map_err(JsonError::from)?;
    match f {
        MorphismFile {
            webbed: Some(w),
            images: None,
            ..
        } => {
            if let BaseMap::Rotation { resolution, .. } = w.base {
                if resolution > MAX_RESOLUTION {
                    return Err(CircleError::ResolutionTooLarge(resolution).into());
                }
            }
            Ok(CircleMorphism::Webbed(w))
        }
        MorphismFile {
            webbed: None,
            resolution_cap: Some(cap),
            window: Some(b),
            images: Some(entries),
        } => Ok(CircleMorphism::Table(MorphismOnGenerators::new(
            cap, b, entries,
        )?)),
        _ => Err(MetricError::BadMorphismFile),
    }
}

pub fn morphism_file(m: &CircleMorphism) -> MorphismFile {
    match m {
        CircleMorphism::Webbed(w) => MorphismFile {
            webbed: Some(*w),
            resolution_cap: None,
            window: None,
            images: None,
        },
        CircleMorphism::Table(t) => MorphismFile {
            webbed: None,
            resolution_cap: Some(t.cap),
            window: Some(t.window),
            images: Some(t.entries()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareVerdict {
    pub holds: bool,
    /// `(s,g) ≪ (t,h)` whose images fail a cross comparison.
    pub witness: Option<(Pair, Pair)>,
}

/// Sets whose conditions decide a scan over `Λ_n`. Webbed base maps, closures, least sets way
/// above and fattenings all preserve unions, and off the full set every fiber is 0, so for two
/// webbed morphisms the generators of the topology suffice. Tables are scanned in full.
fn scan_sets(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    n: u32,
) -> Result<Vec<ArcOpenSet>, MetricError> {
    Ok(match (alpha, beta) {
        (CircleMorphism::Webbed(_), CircleMorphism::Webbed(_)) => lambda_generators(n)?,
        _ => lambda_n(n)?,
    })
}

/// `α ≃ β` on `Λ*_n` (or `α ≈ β` when `strict`).
///
/// Every `t` with `s ≪ t` contains the least such set, and images of larger pairs are larger,
/// so only the least one is tested.
pub fn compare_on(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    n: u32,
    window: i64,
    strict: bool,
) -> Result<CompareVerdict, MetricError> {
    alpha.available(n, window)?;
    beta.available(n, window)?;
    let rel = if strict { pair_way_below } else { pair_leq };
    for s in scan_sets(alpha, beta, n)? {
        let t = s.minimal_way_above();
        for g in fibers(&s, window) {
            let h = fiber_edge(&s, &t, g);
            let (a_s, b_s) = (alpha.image(&s, g)?, beta.image(&s, g)?);
            let (a_t, b_t) = (alpha.image(&t, h)?, beta.image(&t, h)?);
            if !rel(&a_s, &b_t) || !rel(&b_s, &a_t) {
                return Ok(CompareVerdict {
                    holds: false,
                    witness: Some(((s, g), (t, h))),
                });
            }
        }
    }
    Ok(CompareVerdict {
        holds: true,
        witness: None,
    })
}

/// Exact dyadic rational or ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dyadic {
    Finite { num: u64, exp: u32 },
    Infinite,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic::Finite { num: 0, exp: 0 };

    pub fn new(num: u64, exp: u32) -> Self {
        let (mut num, mut exp) = (num, exp);
        if num == 0 {
            return Self::ZERO;
        }
        while exp > 0 && num % 2 == 0 {
            num /= 2;
            exp -= 1;
        }
        Dyadic::Finite { num, exp }
    }

    pub fn pow2_inv(n: u32) -> Self {
        Dyadic::new(1, n)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Dyadic::Finite { .. })
    }

    pub fn plus(self, other: Dyadic) -> Dyadic {
        match (self, other) {
            (Dyadic::Finite { num: a, exp: e }, Dyadic::Finite { num: b, exp: f }) => {
                let x = e.max(f);
                Dyadic::new((a << (x - e)) + (b << (x - f)), x)
            }
            _ => Dyadic::Infinite,
        }
    }

    pub fn double(self) -> Dyadic {
        self.plus(self)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Dyadic::Finite { num, exp } => num as f64 / (1u64 << exp) as f64,
            Dyadic::Infinite => f64::INFINITY,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (Dyadic::Finite { num: a, exp: e }, Dyadic::Finite { num: b, exp: f }) => {
                let x = e.max(f);
                ((a as u128) << (x - e)).cmp(&((b as u128) << (x - f)))
            }
            (Dyadic::Infinite, Dyadic::Infinite) => Ordering::Equal,
            (Dyadic::Infinite, _) => Ordering::Greater,
            (_, Dyadic::Infinite) => Ordering::Less,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dyadic::Infinite => write!(f, "inf"),
            Dyadic::Finite { num, exp: 0 } => write!(f, "{num}"),
            Dyadic::Finite { num, exp } => write!(f, "{num}/{}", 1u64 << exp),
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Closed interval known to contain a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Bracket {
    pub fn exact(v: Dyadic) -> Self {
        Bracket { lo: v, hi: v }
    }

    pub const INFINITE: Bracket = Bracket {
        lo: Dyadic::Infinite,
        hi: Dyadic::Infinite,
    };

    pub fn is_finite(&self) -> bool {
        self.hi.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemimetricValue {
    pub bracket: Bracket,
    /// Comparison outcome at `n = 0..=max_n`.
    pub profile: Vec<bool>,
    /// The outcomes hold on an initial segment of resolutions.
    pub monotone: bool,
}

/// Discrete semimetric: the infimum of `1/2^n` over the resolutions where the morphisms compare.
pub fn discrete_semimetric(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    max_n: u32,
    window: i64,
) -> Result<SemimetricValue, MetricError> {
    let profile = (0..=max_n)
        .map(|n| compare_on(alpha, beta, n, window, false).map(|v| v.holds))
        .collect::<Result<Vec<bool>, _>>()?;
    let best = profile.iter().rposition(|&h| h);
    let monotone = profile.iter().take_while(|&&h| h).count() == best.map_or(0, |b| b + 1);
    let bracket = match best {
        None => Bracket::INFINITE,
        Some(b) if b as u32 == max_n => Bracket {
            lo: Dyadic::ZERO,
            hi: Dyadic::pow2_inv(max_n),
        },
        Some(b) => Bracket::exact(Dyadic::pow2_inv(b as u32)),
    };
    Ok(SemimetricValue {
        bracket,
        profile,
        monotone,
    })
}

fn fattening_admissible(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    grid_n: u32,
    window: i64,
    j: u32,
) -> Result<bool, MetricError> {
    for u in scan_sets(alpha, beta, grid_n)? {
        let v = crate::circle::fatten_steps(&u, j);
        for g in fibers(&u, window) {
            let h = fiber_edge(&u, &v, g);
            if !pair_way_below(&(u, g), &(v, h)) {
                continue;
            }
            let lows = [alpha.image(&u, g)?, beta.image(&u, g)?];
            let highs = [alpha.image(&v, h)?, beta.image(&v, h)?];
            if !lows.iter().all(|a| highs.iter().all(|b| pair_leq(a, b))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Fattening metric on the grid of resolution `grid_n`: the smallest grid radius `j/2^n` that
/// is admissible, reported as the bracket `[(j-1)/2^n, j/2^n]`.
pub fn metric_d(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    grid_n: u32,
    window: i64,
) -> Result<Bracket, MetricError> {
    alpha.available(grid_n, window)?;
    beta.available(grid_n, window)?;
    let len = 1u32 << grid_n;
    for j in 1..=(len / 2).max(1) {
        if fattening_admissible(alpha, beta, grid_n, window, j)? {
            return Ok(Bracket {
                lo: Dyadic::new(j as u64 - 1, grid_n),
                hi: Dyadic::new(j as u64, grid_n),
            });
        }
    }
    Ok(Bracket::INFINITE)
}

/// `None` when a side is infinite; otherwise whether `a ≤ b ≤ 2a` is consistent with the
/// brackets (false only when violated for every value in them).
fn sandwich(a: &Bracket, b: &Bracket) -> Option<bool> {
    if !a.is_finite() || !b.is_finite() {
        return None;
    }
    Some(a.lo <= b.hi && b.lo <= a.hi.double())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricReport {
    pub dd: SemimetricValue,
    pub d: Bracket,
    pub window: i64,
    pub max_n: u32,
    pub grid_n: u32,
    /// `dd` is pinned down exactly (not only bounded by the resolution cap).
    pub certified: bool,
    /// `dd ≤ d ≤ 2dd` is consistent with the brackets.
    pub dd_le_d_le_2dd: Option<bool>,
    /// `d ≤ dd ≤ 2d` is consistent with the brackets.
    pub d_le_dd_le_2d: Option<bool>,
}

pub fn metric_report(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    max_n: u32,
    grid_n: u32,
    window: i64,
) -> Result<MetricReport, MetricError> {
    let dd = discrete_semimetric(alpha, beta, max_n, window)?;
    let d = metric_d(alpha, beta, grid_n, window)?;
    let certified = dd.bracket.lo == dd.bracket.hi;
    Ok(MetricReport {
        dd_le_d_le_2dd: sandwich(&dd.bracket, &d),
        d_le_dd_le_2d: sandwich(&d, &dd.bracket),
        dd,
        d,
        window,
        max_n,
        grid_n,
        certified,
    })
}

/// `dd(α,γ) ≤ 2(dd(α,β) + dd(β,γ))`; false only when violated for every value in the brackets.
pub fn check_relaxed_triangle(ac: &Bracket, ab: &Bracket, bc: &Bracket) -> bool {
    ac.lo <= ab.hi.plus(bc.hi).double()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramVerdict {
    pub n: u32,
    /// Comparison on `Λ*_n`, i.e. `dd ≤ 1/2^n`.
    pub lhs: bool,
    /// Comparison of the base maps on `Λ_n`.
    pub base_compare: bool,
    /// Every square `D(s,t)`, `s ≪ t` in `Λ_n`, commutes on the window.
    pub squares_commute: bool,
    pub witness: Option<String>,
}

impl DiagramVerdict {
    pub fn rhs(&self) -> bool {
        self.base_compare && self.squares_commute
    }

    pub fn equivalent(&self) -> bool {
        self.lhs == self.rhs()
    }
}

/// Evaluates both sides of the fiberwise description of `dd ≤ 1/2^n` for webbed morphisms.
pub fn check_diagram_proposition(
    alpha: &CircleMorphism,
    beta: &CircleMorphism,
    n: u32,
    window: i64,
) -> Result<DiagramVerdict, MetricError> {
    let (CircleMorphism::Webbed(a), CircleMorphism::Webbed(b)) = (alpha, beta) else {
        return Err(MetricError::NotWebbedMorphism);
    };
    let lhs = compare_on(alpha, beta, n, window, false)?.holds;
    let mut base_compare = true;
    let mut squares_commute = true;
    let mut witness = None;
    for s in lambda_generators(n)? {
        let t = s.minimal_way_above();
        let (as_, bs) = (a.image_set(&s)?, b.image_set(&s)?);
        let (at, bt) = (a.image_set(&t)?, b.image_set(&t)?);
        if base_compare && !(as_.subset_of(&bt) && bs.subset_of(&at)) {
            base_compare = false;
            witness.get_or_insert_with(|| format!("base comparison fails at {s} ≪ {t}"));
        }
        // Squares out of a trivial G(s) commute; G(s) = Z forces s = t = T.
        if !s.is_full() {
            continue;
        }
        for g in fibers(&s, window) {
            let gt = fiber_edge(&s, &t, g);
            let left = bs.subset_of(&at) && fiber_edge(&bs, &at, b.eta(&s, g)?) == a.eta(&t, gt)?;
            let right =
                as_.subset_of(&bt) && fiber_edge(&as_, &bt, a.eta(&s, g)?) == b.eta(&t, gt)?;
            if !(left && right) {
                squares_commute = false;
                witness.get_or_insert_with(|| format!("D({s},{t}) fails at g = {g}"));
            }
        }
    }
    Ok(DiagramVerdict {
        n,
        lhs,
        base_compare,
        squares_commute,
        witness,
    })
}
