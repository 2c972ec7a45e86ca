//! JSON documents. Every top-level document carries `"cuweb_schema": 1`; serialization is
//! canonical, so writing a parsed canonical document reproduces it byte for byte.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::abgroups::{FinAbGroup, GroupError, GroupHom};
use crate::colimits::{Cocone, ColimitError, IndexPoset, SystemDiagram};
use crate::metric::{morphism_file, parse_morphism, CircleMorphism};
use crate::order::{FiniteOrderedMonoid, OrderError};
use crate::systems::{GroupSystem, SystemError, SystemMorphism};
use crate::webbing::WebbedSemigroup;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("missing or unsupported cuweb_schema (expected 1)")]
    Schema,
    #[error("unrecognized document")]
    UnknownDocument,
    #[error("bad key {0:?}")]
    BadKey(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error(transparent)]
    CircleMorphism(Box<crate::metric::MetricError>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidJson {
    pub elements: Vec<String>,
    pub zero: usize,
    pub add: Vec<Vec<usize>>,
    pub leq: Vec<Vec<u8>>,
    pub positively_ordered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub factors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomJson {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub base: MonoidJson,
    #[serde(default)]
    pub fibers: BTreeMap<String, GroupJson>,
    #[serde(default)]
    pub edges: BTreeMap<String, HomJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub alpha: Vec<usize>,
    #[serde(default)]
    pub eta: BTreeMap<String, HomJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub source: SystemJson,
    pub target: SystemJson,
    pub alpha: Vec<usize>,
    #[serde(default)]
    pub eta: BTreeMap<String, HomJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexJson {
    pub nodes: Vec<String>,
    pub leq: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub index: IndexJson,
    pub objects: BTreeMap<String, SystemJson>,
    #[serde(default)]
    pub arrows: BTreeMap<String, MapJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoconeJson {
    pub apex: SystemJson,
    pub legs: BTreeMap<String, MapJson>,
}

/// Any top-level document.
#[derive(Debug, Clone)]
pub enum Document {
    Monoid(FiniteOrderedMonoid),
    System(Arc<GroupSystem>),
    Morphism(SystemMorphism),
    Diagram(SystemDiagram),
    Cocone(CoconeJson),
    CircleMorphism(CircleMorphism),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Monoid(_) => "monoid",
            Document::System(_) => "system",
            Document::Morphism(_) => "morphism",
            Document::Diagram(_) => "diagram",
            Document::Cocone(_) => "cocone",
            Document::CircleMorphism(_) => "circle-morphism",
        }
    }
}

/// Removes and checks the schema tag of a top-level object.
pub fn take_schema(text: &str) -> Result<serde_json::Map<String, Value>, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    let Value::Object(mut obj) = v else {
        return Err(JsonError::UnknownDocument);
    };
    match obj.remove("cuweb_schema") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => Ok(obj),
        _ => Err(JsonError::Schema),
    }
}

pub fn parse_document(text: &str) -> Result<Document, JsonError> {
    let obj = take_schema(text)?;
    let has = |k: &str| obj.contains_key(k);
    let v = Value::Object(obj.clone());
    if has("index") {
        Ok(Document::Diagram(diagram_from_json(
            serde_json::from_value(v)?,
        )?))
    } else if has("apex") {
        Ok(Document::Cocone(serde_json::from_value(v)?))
    } else if has("alpha") {
        Ok(Document::Morphism(morphism_from_json(
            serde_json::from_value(v)?,
        )?))
    } else if has("base") {
        Ok(Document::System(Arc::new(system_from_json(
            serde_json::from_value(v)?,
        )?)))
    } else if has("elements") {
        Ok(Document::Monoid(monoid_from_json(serde_json::from_value(
            v,
        )?)?))
    } else if has("webbed") || has("images") {
        let m = parse_morphism(text).map_err(|e| JsonError::CircleMorphism(Box::new(e)))?;
        Ok(Document::CircleMorphism(m))
    } else {
        Err(JsonError::UnknownDocument)
    }
}

/// Wraps a serializable body with the schema tag and renders it canonically.
pub fn to_canonical<T: Serialize>(body: &T) -> String {
    let mut v = serde_json::to_value(body).expect("serializable");
    if let Value::Object(obj) = &mut v {
        let mut tagged = serde_json::Map::new();
        tagged.insert("cuweb_schema".into(), Value::from(SCHEMA_VERSION));
        tagged.extend(std::mem::take(obj));
        v = Value::Object(tagged);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn document_to_canonical(d: &Document) -> String {
    match d {
        Document::Monoid(m) => to_canonical(&monoid_to_json(m)),
        Document::System(s) => to_canonical(&system_to_json(s)),
        Document::Morphism(m) => to_canonical(&morphism_to_json(m)),
        Document::Diagram(d) => to_canonical(&diagram_to_json(d)),
        Document::Cocone(c) => to_canonical(c),
        Document::CircleMorphism(m) => to_canonical(&morphism_file(m)),
    }
}

pub fn monoid_to_json(m: &FiniteOrderedMonoid) -> MonoidJson {
    MonoidJson {
        elements: m.names().to_vec(),
        zero: m.zero(),
        add: m.add_table().to_vec(),
        leq: m
            .leq_table()
            .iter()
            .map(|r| r.iter().map(|&b| u8::from(b)).collect())
            .collect(),
        positively_ordered: m.positively_ordered(),
    }
}

pub fn monoid_from_json(j: MonoidJson) -> Result<FiniteOrderedMonoid, JsonError> {
    let leq = j
        .leq
        .iter()
        .map(|r| r.iter().map(|&b| b != 0).collect())
        .collect();
    Ok(FiniteOrderedMonoid::new(
        j.elements,
        j.zero,
        j.add,
        leq,
        j.positively_ordered,
    )?)
}

fn hom_json(h: &GroupHom) -> HomJson {
    HomJson {
        matrix: h.matrix.clone(),
    }
}

fn parse_index(key: &str) -> Result<usize, JsonError> {
    key.trim()
        .parse()
        .map_err(|_| JsonError::BadKey(key.to_string()))
}

fn parse_pair(key: &str) -> Result<(String, String), JsonError> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| JsonError::BadKey(key.to_string()))?;
    Ok((a.trim().to_string(), b.trim().to_string()))
}

/// Canonical system JSON: every fiber is listed; edges are listed only off the diagonal and
/// between nontrivial fibers, the rest being forced.
pub fn system_to_json(s: &GroupSystem) -> SystemJson {
    let b = s.base();
    let mut fibers = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for x in 0..b.size() {
        fibers.insert(
            x.to_string(),
            GroupJson {
                factors: s.fiber(x).factors.clone(),
            },
        );
        for y in 0..b.size() {
            if x != y && b.leq(x, y) && !s.fiber(x).is_trivial() && !s.fiber(y).is_trivial() {
                edges.insert(format!("{x},{y}"), hom_json(s.edge(x, y)));
            }
        }
    }
    SystemJson {
        base: monoid_to_json(b),
        fibers,
        edges,
    }
}

pub fn system_from_json(j: SystemJson) -> Result<GroupSystem, JsonError> {
    let base = monoid_from_json(j.base)?;
    let n = base.size();
    let mut fibers = vec![FinAbGroup::trivial(); n];
    for (k, g) in j.fibers {
        let i = parse_index(&k)?;
        if i >= n {
            return Err(JsonError::BadKey(k));
        }
        fibers[i] = FinAbGroup::new(g.factors);
    }
    let mut edges = BTreeMap::new();
    for (k, h) in j.edges {
        let (a, b) = parse_pair(&k)?;
        let (a, b) = (parse_index(&a)?, parse_index(&b)?);
        if a >= n || b >= n {
            return Err(JsonError::BadKey(k));
        }
        edges.insert(
            (a, b),
            GroupHom::new(fibers[a].clone(), fibers[b].clone(), h.matrix)?,
        );
    }
    Ok(GroupSystem::with_implied_edges(base, fibers, edges)?)
}

fn map_to_json(m: &SystemMorphism) -> MapJson {
    let mut eta = BTreeMap::new();
    for (s, h) in m.components().iter().enumerate() {
        if !h.domain.is_trivial() && !h.codomain.is_trivial() {
            eta.insert(s.to_string(), hom_json(h));
        }
    }
    MapJson {
        alpha: m.alpha().to_vec(),
        eta,
    }
}

fn map_from_json(
    source: Arc<GroupSystem>,
    target: Arc<GroupSystem>,
    j: MapJson,
) -> Result<SystemMorphism, JsonError> {
    let mut eta = BTreeMap::new();
    for (k, h) in j.eta {
        let s = parse_index(&k)?;
        if s >= source.base().size() || j.alpha.get(s).is_none_or(|&a| a >= target.base().size()) {
            return Err(JsonError::BadKey(k));
        }
        let hom = GroupHom::new(
            source.fiber(s).clone(),
            target.fiber(j.alpha[s]).clone(),
            h.matrix,
        )?;
        eta.insert(s, hom);
    }
    Ok(SystemMorphism::with_implied_components(
        source, target, j.alpha, eta,
    )?)
}

pub fn morphism_to_json(m: &SystemMorphism) -> MorphismJson {
    let body = map_to_json(m);
    MorphismJson {
        source: system_to_json(m.source()),
        target: system_to_json(m.target()),
        alpha: body.alpha,
        eta: body.eta,
    }
}

pub fn morphism_from_json(j: MorphismJson) -> Result<SystemMorphism, JsonError> {
    let source = Arc::new(system_from_json(j.source)?);
    let target = Arc::new(system_from_json(j.target)?);
    map_from_json(
        source,
        target,
        MapJson {
            alpha: j.alpha,
            eta: j.eta,
        },
    )
}

pub fn diagram_to_json(d: &SystemDiagram) -> DiagramJson {
    let idx = d.index();
    let objects = idx
        .nodes
        .iter()
        .zip(d.objects())
        .map(|(n, o)| (n.clone(), system_to_json(o)))
        .collect();
    let arrows = d
        .arrows()
        .iter()
        .map(|(&(i, j), m)| (format!("{},{}", idx.nodes[i], idx.nodes[j]), map_to_json(m)))
        .collect();
    DiagramJson {
        index: IndexJson {
            nodes: idx.nodes.clone(),
            leq: idx
                .leq
                .iter()
                .map(|r| r.iter().map(|&b| u8::from(b)).collect())
                .collect(),
        },
        objects,
        arrows,
    }
}

pub fn diagram_from_json(j: DiagramJson) -> Result<SystemDiagram, JsonError> {
    let leq = j
        .index
        .leq
        .iter()
        .map(|r| r.iter().map(|&b| b != 0).collect())
        .collect();
    let index = IndexPoset::new(j.index.nodes.clone(), leq)?;
    let node = |name: &str| {
        index
            .nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| JsonError::UnknownNode(name.to_string()))
    };
    let mut objects = vec![None; index.len()];
    for (name, s) in j.objects {
        objects[node(&name)?] = Some(Arc::new(system_from_json(s)?));
    }
    let objects: Vec<Arc<GroupSystem>> = objects
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| JsonError::UnknownNode(index.nodes[i].clone())))
        .collect::<Result<_, _>>()?;
    let mut arrows = BTreeMap::new();
    for (k, m) in j.arrows {
        let (a, b) = parse_pair(&k)?;
        let (a, b) = (node(&a)?, node(&b)?);
        arrows.insert(
            (a, b),
            map_from_json(objects[a].clone(), objects[b].clone(), m)?,
        );
    }
    Ok(SystemDiagram::new(index, objects, arrows)?)
}

pub fn cocone_to_json(d: &SystemDiagram, c: &Cocone) -> CoconeJson {
    CoconeJson {
        apex: system_to_json(&c.apex),
        legs: d
            .index()
            .nodes
            .iter()
            .zip(&c.legs)
            .map(|(n, l)| (n.clone(), map_to_json(l)))
            .collect(),
    }
}

/// Resolves a cocone document against a diagram.
pub fn cocone_from_json(d: &SystemDiagram, j: CoconeJson) -> Result<Cocone, JsonError> {
    let apex = Arc::new(system_from_json(j.apex)?);
    let mut legs = Vec::with_capacity(d.index().len());
    let mut given = j.legs;
    for (i, name) in d.index().nodes.iter().enumerate() {
        let m = given
            .remove(name)
            .ok_or_else(|| JsonError::UnknownNode(name.clone()))?;
        legs.push(map_from_json(d.objects()[i].clone(), apex.clone(), m)?);
    }
    if let Some(extra) = given.keys().next() {
        return Err(JsonError::UnknownNode(extra.clone()));
    }
    Ok(Cocone { apex, legs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebJson {
    pub provenance: String,
    pub window: Option<i64>,
    pub labels: Vec<String>,
    pub pairs: Vec<(usize, Vec<i64>)>,
    pub add: Vec<Vec<Option<usize>>>,
    pub leq: Vec<Vec<u8>>,
    pub way_below: Vec<Vec<u8>>,
}

pub fn web_to_json(w: &WebbedSemigroup) -> WebJson {
    let bits = |t: &[Vec<bool>]| -> Vec<Vec<u8>> {
        t.iter()
            .map(|r| r.iter().map(|&b| u8::from(b)).collect())
            .collect()
    };
    WebJson {
        provenance: w.provenance().to_string(),
        window: w.window(),
        labels: (0..w.len()).map(|a| w.label_of(a)).collect(),
        pairs: w.pairs().to_vec(),
        add: w.add_table().to_vec(),
        leq: bits(w.leq_table()),
        way_below: bits(w.way_below_table()),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the canonical JSON of a system.
pub fn system_hash(s: &GroupSystem) -> String {
    sha256_hex(to_canonical(&system_to_json(s)).as_bytes())
}
