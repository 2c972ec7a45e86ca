//! Command-line front end. Every command prints one JSON document to stdout; the exit code is
//! 0 when all checked properties hold, 1 when one fails, 2 on input or usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::abgroups::DEFAULT_WINDOW;
use crate::axioms::{check_axiom, Axiom, AxiomVerdict};
use crate::circle::circle_semigroup;
use crate::colimits::{
    check_cocone, check_l1_l2, check_universal_property, check_webbing_continuity, colimit,
    collapsed_cocone, padded_cocone, web_colimit, webbed_diagram, SystemDiagram,
};
use crate::json::{
    cocone_from_json, document_to_canonical, parse_document, sha256_hex, take_schema, to_canonical,
    web_to_json, CoconeJson, Document, JsonError,
};
use crate::metric::{check_diagram_proposition, metric_report, parse_morphism, CircleMorphism};
use crate::order::FiniteOrderedMonoid;
use crate::structure::{
    check_sequence, ideal_generated_by, ideal_lattice, lattice_isomorphism, quotient,
    split_sequence, MonoidMap,
};
use crate::systems::{check_stability, GroupSystem};
use crate::webbing::{web_morphism, web_windowed, WebbedSemigroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cuweb",
    version,
    about = "Checks and constructions for webbed ordered monoids"
)]
pub struct Cli {
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate any document.
    Validate { file: PathBuf },
    /// Web of a system.
    Web {
        file: PathBuf,
        /// Z coordinates kept in -B..=B.
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: i64,
    },
    /// Check order axioms on a monoid or on the web of a system.
    Axioms {
        file: PathBuf,
        /// Axiom tag (PC, PD, S0, WC, PWC, O5, O6, AU, AD); repeatable, all when omitted.
        #[arg(long)]
        axiom: Vec<Axiom>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: i64,
    },
    /// Ideal lattice and its comparison with the lattice of the positive cone.
    Ideals { file: PathBuf },
    /// Quotient by an ideal.
    Quotient {
        file: PathBuf,
        /// `gen:NAME`, `set:I,J,...` (indices), `zero` or `full`.
        #[arg(long)]
        ideal: String,
    },
    /// Exactness: the split sequence of one structure, the quotient sequence of one structure
    /// and an ideal, or the sequence given by two morphism documents.
    Exact {
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Colimit of a finite directed diagram and the webbed checks.
    Colimit {
        file: PathBuf,
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Circle semigroup on step functions.
    Circle {
        #[arg(long)]
        n: u32,
        #[arg(long = "M")]
        m: u32,
        #[arg(long = "B")]
        b: i64,
    },
    /// Distances between two morphisms of the circle model.
    Metric {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Resolution of the fattening grid (defaults to max-n).
        #[arg(long)]
        grid_n: Option<u32>,
    },
}

/// Input or usage problem (exit 2).
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(Value, bool), InputError>;

struct Inputs(Vec<Value>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, InputError> {
        let bytes =
            std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        self.0
            .push(json!({"path": path.display().to_string(), "sha256": sha256_hex(&bytes)}));
        String::from_utf8(bytes).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    fn document(&mut self, path: &Path) -> Result<Document, InputError> {
        let text = self.read(path)?;
        parse_document(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

/// A monoid document, or the web of a system document.
enum Structure {
    Monoid(FiniteOrderedMonoid),
    Web(WebbedSemigroup),
}

impl Structure {
    fn load(inputs: &mut Inputs, path: &Path, window: i64) -> Result<Structure, InputError> {
        match inputs.document(path)? {
            Document::Monoid(m) => Ok(Structure::Monoid(m)),
            Document::System(s) => Ok(Structure::Web(web_windowed(&s, window)?)),
            d => Err(InputError(format!(
                "{}: expected a monoid or system, got a {}",
                path.display(),
                d.kind()
            ))),
        }
    }

    fn monoid(self) -> Result<Arc<FiniteOrderedMonoid>, InputError> {
        match self {
            Structure::Monoid(m) => Ok(Arc::new(m)),
            Structure::Web(w) => Ok(Arc::new(w.to_monoid()?)),
        }
    }
}

fn names(m: &FiniteOrderedMonoid, set: &[usize]) -> Vec<String> {
    set.iter().map(|&x| m.name(x).to_string()).collect()
}

fn parse_ideal(m: &FiniteOrderedMonoid, arg: &str) -> Result<Vec<usize>, InputError> {
    if arg == "zero" {
        return Ok(vec![m.zero()]);
    }
    if arg == "full" {
        return Ok((0..m.size()).collect());
    }
    if let Some(name) = arg.strip_prefix("gen:") {
        let x = m
            .index_of(name)
            .ok_or_else(|| InputError(format!("unknown element {name:?}")))?;
        return Ok(ideal_generated_by(m, x)?);
    }
    if let Some(list) = arg.strip_prefix("set:") {
        let mut set = Vec::new();
        for part in list.split(',').filter(|p| !p.is_empty()) {
            let i: usize = part.trim().parse()?;
            if i >= m.size() {
                return Err(InputError(format!("index {i} out of range")));
            }
            set.push(i);
        }
        set.sort_unstable();
        set.dedup();
        return Ok(set);
    }
    Err(InputError(format!("bad ideal argument {arg:?}")))
}

fn verdict_json(v: &AxiomVerdict) -> Value {
    json!({
        "axiom": v.axiom.to_string(),
        "holds": v.holds,
        "coverage": v.coverage,
        "witness": v.witness,
    })
}

fn cmd_validate(inputs: &mut Inputs, file: &Path) -> Outcome {
    let doc = inputs.document(file)?;
    let mut body = json!({"kind": doc.kind(), "valid": true});
    match &doc {
        Document::Monoid(m) => body["size"] = json!(m.size()),
        Document::System(s) => {
            body["base_size"] = json!(s.base().size());
            body["stability"] = serde_json::to_value(check_stability(s))?;
        }
        Document::Diagram(d) => body["nodes"] = json!(d.index().nodes),
        Document::Morphism(m) => body["alpha"] = json!(m.alpha()),
        Document::Cocone(c) => body["legs"] = json!(c.legs.keys().collect::<Vec<_>>()),
        Document::CircleMorphism(m) => {
            body["webbed"] = json!(matches!(m, CircleMorphism::Webbed(_)))
        }
    }
    body["canonical"] = json!(inputs_is_canonical(file, &doc));
    Ok((body, true))
}

fn inputs_is_canonical(file: &Path, doc: &Document) -> bool {
    std::fs::read_to_string(file).is_ok_and(|t| t == document_to_canonical(doc))
}

fn cmd_web(inputs: &mut Inputs, file: &Path, window: i64) -> Outcome {
    match inputs.document(file)? {
        Document::System(s) => {
            let w = web_windowed(&s, window)?;
            Ok((serde_json::to_value(web_to_json(&w))?, true))
        }
        d => Err(InputError(format!("expected a system, got a {}", d.kind()))),
    }
}

fn cmd_axioms(inputs: &mut Inputs, file: &Path, axioms: &[Axiom], window: i64) -> Outcome {
    let list: Vec<Axiom> = if axioms.is_empty() {
        Axiom::ALL.to_vec()
    } else {
        axioms.to_vec()
    };
    let s = Structure::load(inputs, file, window)?;
    let mut out = Vec::new();
    let mut all = true;
    for ax in list {
        let v = match &s {
            Structure::Monoid(m) => check_axiom(m, ax)?,
            Structure::Web(w) => check_axiom(w, ax)?,
        };
        all &= v.holds;
        out.push(verdict_json(&v));
    }
    let size = match &s {
        Structure::Monoid(m) => m.size(),
        Structure::Web(w) => w.len(),
    };
    Ok((json!({"size": size, "verdicts": out}), all))
}

fn cmd_ideals(inputs: &mut Inputs, file: &Path) -> Outcome {
    let m = Structure::load(inputs, file, DEFAULT_WINDOW)?.monoid()?;
    let lattice = ideal_lattice(&m);
    let iso = lattice_isomorphism(&m);
    let ideals: Vec<Value> = lattice
        .ideals
        .iter()
        .zip(&lattice.generators)
        .map(|(i, g)| json!({"members": names(&m, i), "generator": g.map(|x| m.name(x).to_string())}))
        .collect();
    let holds = iso.holds();
    Ok((
        json!({"ideals": ideals, "lattice_isomorphism": iso, "holds_iso": holds}),
        holds,
    ))
}

fn cmd_quotient(inputs: &mut Inputs, file: &Path, arg: &str) -> Outcome {
    let m = Structure::load(inputs, file, DEFAULT_WINDOW)?.monoid()?;
    let ideal = parse_ideal(&m, arg)?;
    let q = quotient(&m, &ideal)?;
    let classes: Vec<Vec<String>> = q.classes.iter().map(|c| names(&m, c)).collect();
    let exact = q.sequence.exact();
    let body = json!({
        "ideal": names(&m, &ideal),
        "quotient": serde_json::to_value(crate::json::monoid_to_json(&q.monoid))?,
        "classes": classes,
        "projection": q.projection.map,
        "sequence": q.sequence,
        "axioms": q.axioms,
    });
    Ok((body, exact))
}

fn web_map(m: &crate::systems::SystemMorphism) -> Result<MonoidMap, InputError> {
    let (src, dst, wm) = web_morphism(m)?;
    let map = wm
        .map
        .iter()
        .map(|v| v.ok_or_else(|| InputError("web morphism leaves the window".into())))
        .collect::<Result<Vec<usize>, _>>()?;
    Ok(MonoidMap::new(
        Arc::new(src.to_monoid()?),
        Arc::new(dst.to_monoid()?),
        map,
    )?)
}

fn cmd_exact(inputs: &mut Inputs, files: &[PathBuf], ideal: Option<&str>) -> Outcome {
    match (files, ideal) {
        ([one], None) => {
            let m = Structure::load(inputs, one, DEFAULT_WINDOW)?.monoid()?;
            let sp = split_sequence(&m)?;
            let holds = sp.split_exact();
            Ok((
                json!({
                    "sequence": "split",
                    "positive": names(&m, &sp.positive.members),
                    "maximal": names(&m, sp.maximal.members()),
                    "verdict": sp.verdict,
                    "section_ok": sp.section_ok,
                    "maximal_checks": sp.maximal.checks,
                }),
                holds,
            ))
        }
        ([one], Some(arg)) => {
            let m = Structure::load(inputs, one, DEFAULT_WINDOW)?.monoid()?;
            let ideal = parse_ideal(&m, arg)?;
            let q = quotient(&m, &ideal)?;
            let holds = q.sequence.exact();
            Ok((
                json!({"sequence": "quotient", "ideal": names(&m, &ideal), "verdict": q.sequence}),
                holds,
            ))
        }
        ([a, b], None) => {
            let (Document::Morphism(f), Document::Morphism(g)) =
                (inputs.document(a)?, inputs.document(b)?)
            else {
                return Err(InputError(
                    "two files must both be morphism documents".into(),
                ));
            };
            let v = check_sequence(&web_map(&f)?, &web_map(&g)?)?;
            let holds = v.exact();
            Ok((json!({"sequence": "morphisms", "verdict": v}), holds))
        }
        _ => Err(InputError("--ideal takes a single structure".into())),
    }
}

fn cmd_colimit(inputs: &mut Inputs, file: &Path, candidate: Option<&Path>) -> Outcome {
    let Document::Diagram(d) = inputs.document(file)? else {
        return Err(InputError("expected a diagram document".into()));
    };
    let (wd, _) = webbed_diagram(&d)?;
    let colim = web_colimit(&wd);
    let computed = check_l1_l2(&wd, &colim);
    let padded = check_l1_l2(&wd, &padded_cocone(&wd));
    let collapsed = check_l1_l2(&wd, &collapsed_cocone(&wd));
    let continuity = check_webbing_continuity(&d)?;
    let universal = check_universal_property(&d, &colimit(&d))?;
    let mut holds = computed.l1 && computed.l2 && continuity.holds() && universal.holds();
    let mut body = json!({
        "apex": d.index().nodes[d.index().top()],
        "web_colimit": computed,
        "padded_candidate": padded,
        "collapsed_candidate": collapsed,
        "continuity": continuity,
        "universal": {"factors": universal.factors, "factoring_count": universal.factoring_count},
    });
    if let Some(path) = candidate {
        let c = candidate_cocone(inputs, path, &d)?;
        let verdict = match check_cocone(&d, &c) {
            Err(e) => json!({"cocone": false, "error": e.to_string()}),
            Ok(()) => {
                let u = check_universal_property(&d, &c)?;
                json!({"cocone": true, "factors": u.factors, "factoring_count": u.factoring_count})
            }
        };
        holds &= verdict["cocone"] == json!(true);
        body["candidate"] = verdict;
    }
    Ok((body, holds))
}

fn candidate_cocone(
    inputs: &mut Inputs,
    path: &Path,
    d: &SystemDiagram,
) -> Result<crate::colimits::Cocone, InputError> {
    let text = inputs.read(path)?;
    let obj = take_schema(&text)?;
    let j: CoconeJson = serde_json::from_value(Value::Object(obj)).map_err(JsonError::from)?;
    Ok(cocone_from_json(d, j)?)
}

fn cmd_circle(n: u32, m: u32, b: i64) -> Outcome {
    let w = circle_semigroup(n, m, b)?;
    Ok((serde_json::to_value(web_to_json(&w))?, true))
}

fn cmd_metric(
    inputs: &mut Inputs,
    a: &Path,
    b: &Path,
    max_n: u32,
    window: i64,
    grid_n: u32,
) -> Outcome {
    let ma: CircleMorphism = parse_morphism(&inputs.read(a)?)?;
    let mb: CircleMorphism = parse_morphism(&inputs.read(b)?)?;
    let report = metric_report(&ma, &mb, max_n, grid_n, window)?;
    let mut holds = report.dd_le_d_le_2dd != Some(false);
    let mut body = serde_json::to_value(&report)?;
    if let (CircleMorphism::Webbed(_), CircleMorphism::Webbed(_)) = (&ma, &mb) {
        let mut rows = Vec::new();
        for n in 0..=max_n {
            let v = check_diagram_proposition(&ma, &mb, n, window)?;
            holds &= v.equivalent();
            let mut row = serde_json::to_value(&v)?;
            row["equivalent"] = json!(v.equivalent());
            rows.push(row);
        }
        body["diagram_proposition"] = json!(rows);
    }
    Ok((body, holds))
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Outcome {
    match &cli.command {
        Command::Validate { file } => cmd_validate(inputs, file),
        Command::Web { file, window } => cmd_web(inputs, file, *window),
        Command::Axioms {
            file,
            axiom,
            window,
        } => cmd_axioms(inputs, file, axiom, *window),
        Command::Ideals { file } => cmd_ideals(inputs, file),
        Command::Quotient { file, ideal } => cmd_quotient(inputs, file, ideal),
        Command::Exact { files, ideal } => cmd_exact(inputs, files, ideal.as_deref()),
        Command::Colimit { file, candidate } => cmd_colimit(inputs, file, candidate.as_deref()),
        Command::Circle { n, m, b } => cmd_circle(*n, *m, *b),
        Command::Metric {
            a,
            b,
            max_n,
            window,
            grid_n,
        } => cmd_metric(inputs, a, b, *max_n, *window, grid_n.unwrap_or(*max_n)),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Web { .. } => "web",
        Command::Axioms { .. } => "axioms",
        Command::Ideals { .. } => "ideals",
        Command::Quotient { .. } => "quotient",
        Command::Exact { .. } => "exact",
        Command::Colimit { .. } => "colimit",
        Command::Circle { .. } => "circle",
        Command::Metric { .. } => "metric",
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs(Vec::new());
    match dispatch(&cli, &mut inputs) {
        Ok((mut body, holds)) => {
            let echo: Vec<String> = args
                .iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned())
                .collect();
            if let Value::Object(obj) = &mut body {
                obj.insert("command".into(), json!(command_name(&cli.command)));
                obj.insert("args".into(), json!(echo));
                obj.insert("inputs".into(), json!(inputs.0));
                obj.insert("holds".into(), json!(holds));
                if cli.timing {
                    obj.insert(
                        "elapsed_ms".into(),
                        json!(start.elapsed().as_millis() as u64),
                    );
                }
            }
            let _ = out.write_all(to_canonical(&body).as_bytes());
            if holds {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

/// Canonical JSON of a system, for writing fixture files.
pub fn system_file(s: &GroupSystem) -> String {
    to_canonical(&crate::json::system_to_json(s))
}
