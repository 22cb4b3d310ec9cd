//! Run configuration: a line-oriented `key = value` document.
//!
//! Grammar: one `key = value` pair per line, `#` starts a comment (outside
//! strings), strings are double-quoted with `\"` and `\\` escapes, lists are
//! bracketed and comma-separated, and lists nest (a point is `[x, y]`, a
//! polygon a list of points).  Recognized keys:
//!
//! ```text
//! preset           = "sierpinski-carpet" | "sierpinski-gasket"
//! depth            = 4            # >= 1
//! resolution       = 729          # cells per unit, >= 16
//! samples_per_edge = 32           # >= 1
//! scales           = [0.5, 0.25]  # ball radii; defaults to a ladder
//! metrics          = ["separation", "porosity"]   # defaults to all
//! custom.seed      = [[0, 0], [1, 0], [1, 1], [0, 1]]
//! custom.maps[i].scale        = 0.333
//! custom.maps[i].rotation     = 0.0      # optional, radians
//! custom.maps[i].reflect      = false    # optional
//! custom.maps[i].translation  = [0.0, 0.0]
//! custom.carve[j]  = [[1, 1], [2, 1], [2, 2], [1, 2]]
//! ```
//!
//! Exactly one of `preset` or a `custom.*` system must be given.  The custom
//! system is validated here by constructing it, so carve overlaps or
//! malformed polygons are rejected at parse time with the constructor's
//! message.

use prefractal::error::{Error, Result};
use prefractal::geom::{Polygon, Vec2};
use prefractal::ifs::{build_preset, IfsSystem, SimilarityMap};

/// Analyses `run_report` knows how to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Shape,
    Separation,
    Porosity,
    ComponentInBall,
    Path,
    Classes,
    Measure,
    Topology,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Shape,
        Metric::Separation,
        Metric::Porosity,
        Metric::ComponentInBall,
        Metric::Path,
        Metric::Classes,
        Metric::Measure,
        Metric::Topology,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Shape => "shape",
            Metric::Separation => "separation",
            Metric::Porosity => "porosity",
            Metric::ComponentInBall => "component-in-ball",
            Metric::Path => "path",
            Metric::Classes => "classes",
            Metric::Measure => "measure",
            Metric::Topology => "topology",
        }
    }

    fn from_name(name: &str) -> Option<Metric> {
        Metric::ALL.iter().copied().find(|m| m.name() == name)
    }
}

/// Parsed and validated run configuration, defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// The system to generate; already validated by its constructor.
    pub system: IfsSystem,
    /// Preset name when the system came from `preset`, `None` for custom.
    pub preset: Option<String>,
    pub depth: u32,
    pub resolution: u32,
    pub samples_per_edge: u32,
    /// Explicit ball radii; `None` means a default ladder is derived from
    /// the scene bounds at run time.
    pub scales: Option<Vec<f64>>,
    /// Requested analyses, in canonical order, deduplicated.
    pub metrics: Vec<Metric>,
    /// Record wall-clock stage timings in the report.  Off by default so
    /// that report bytes depend only on the configuration.
    pub timings: bool,
}

impl RunConfig {
    pub fn metric(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }

    /// Apply command-line overrides, re-checking the bounds the parser
    /// enforces.
    pub fn apply_overrides(&mut self, depth: Option<u32>, resolution: Option<u32>) -> Result<()> {
        if let Some(d) = depth {
            check_depth(d)?;
            self.depth = d;
        }
        if let Some(r) = resolution {
            check_resolution(r)?;
            self.resolution = r;
        }
        Ok(())
    }
}

const DEFAULT_DEPTH: u32 = 4;
const DEFAULT_RESOLUTION: u32 = 729;
const DEFAULT_SAMPLES_PER_EDGE: u32 = 32;

fn check_depth(depth: u32) -> Result<()> {
    if depth < 1 {
        return Err(Error::Config("depth must be ≥ 1".into()));
    }
    Ok(())
}

fn check_resolution(resolution: u32) -> Result<()> {
    if resolution < 16 {
        return Err(Error::Config("resolution must be ≥ 16".into()));
    }
    Ok(())
}

/// Parse a configuration document and apply defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut doc = Document::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value_text) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        let value = parse_value(value_text)
            .map_err(|m| Error::Config(format!("line {}: {key}: {m}", lineno + 1)))?;
        doc.assign(key, value)
            .map_err(|m| Error::Config(format!("line {}: {m}", lineno + 1)))?;
    }
    doc.finish()
}

/// Remove a trailing `#` comment, honoring double-quoted strings.
fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate() {
        if escaped {
            escaped = false;
            continue;
        }
        match b {
            b'\\' if in_string => escaped = true,
            b'"' => in_string = !in_string,
            b'#' if !in_string => return &line[..i],
            _ => {}
        }
    }
    line
}

/// A parsed right-hand side.
#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(f64),
    Bool(bool),
    Str(String),
    List(Vec<Value>),
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Bool(_) => "boolean",
            Value::Str(_) => "string",
            Value::List(_) => "list",
        }
    }
}

/// Parse a complete value expression; trailing garbage is an error.
fn parse_value(text: &str) -> core::result::Result<Value, String> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    cur.skip_ws();
    let value = cur.value()?;
    cur.skip_ws();
    if cur.pos != cur.bytes.len() {
        return Err(format!("unexpected trailing input `{}`", &text[cur.pos..].trim()));
    }
    Ok(value)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn value(&mut self) -> core::result::Result<Value, String> {
        match self.peek() {
            Some(b'"') => self.string(),
            Some(b'[') => self.list(),
            Some(_) => self.scalar(),
            None => Err("expected a value".into()),
        }
    }

    fn string(&mut self) -> core::result::Result<Value, String> {
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                Some(b'"') => {
                    self.pos += 1;
                    return Ok(Value::Str(out));
                }
                Some(b'\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(b'"') => out.push('"'),
                        Some(b'\\') => out.push('\\'),
                        _ => return Err("unsupported escape in string".into()),
                    }
                    self.pos += 1;
                }
                Some(b) => {
                    out.push(b as char);
                    self.pos += 1;
                }
                None => return Err("unterminated string".into()),
            }
        }
    }

    fn list(&mut self) -> core::result::Result<Value, String> {
        self.pos += 1;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b']') => {
                    self.pos += 1;
                    return Ok(Value::List(items));
                }
                None => return Err("unterminated list".into()),
                _ => {}
            }
            items.push(self.value()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {}
                _ => return Err("expected `,` or `]` in list".into()),
            }
        }
    }

    fn scalar(&mut self) -> core::result::Result<Value, String> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || b == b',' || b == b']' {
                break;
            }
            self.pos += 1;
        }
        let token = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match token {
            "true" => Ok(Value::Bool(true)),
            "false" => Ok(Value::Bool(false)),
            _ => token
                .parse::<f64>()
                .map(Value::Num)
                .map_err(|_| format!("`{token}` is not a number, boolean, string, or list")),
        }
    }
}

// Typed extractors; each message names the constraint so callers can prefix
// the key.

fn as_integer(key: &str, value: &Value, min: u32) -> Result<u32> {
    let n = match value {
        Value::Num(n) => *n,
        other => {
            return Err(Error::Config(format!(
                "{key} must be an integer, got a {}",
                other.type_name()
            )))
        }
    };
    if !n.is_finite() || n.fract() != 0.0 || n < 0.0 || n > u32::MAX as f64 {
        return Err(Error::Config(format!("{key} must be a non-negative integer")));
    }
    let n = n as u32;
    if n < min {
        return Err(Error::Config(format!("{key} must be ≥ {min}")));
    }
    Ok(n)
}

fn as_float(key: &str, value: &Value) -> Result<f64> {
    match value {
        Value::Num(n) if n.is_finite() => Ok(*n),
        Value::Num(_) => Err(Error::Config(format!("{key} must be finite"))),
        other => {
            Err(Error::Config(format!("{key} must be a number, got a {}", other.type_name())))
        }
    }
}

fn as_bool(key: &str, value: &Value) -> Result<bool> {
    match value {
        Value::Bool(b) => Ok(*b),
        other => {
            Err(Error::Config(format!("{key} must be a boolean, got a {}", other.type_name())))
        }
    }
}

fn as_string(key: &str, value: &Value) -> Result<String> {
    match value {
        Value::Str(s) => Ok(s.clone()),
        other => {
            Err(Error::Config(format!("{key} must be a string, got a {}", other.type_name())))
        }
    }
}

fn as_point(key: &str, value: &Value) -> Result<Vec2> {
    let items = match value {
        Value::List(items) if items.len() == 2 => items,
        _ => {
            return Err(Error::Config(format!("{key} must be a point `[x, y]`")));
        }
    };
    let x = as_float(key, &items[0])?;
    let y = as_float(key, &items[1])?;
    Ok(Vec2 { x, y })
}

fn as_points(key: &str, value: &Value) -> Result<Vec<Vec2>> {
    let items = match value {
        Value::List(items) => items,
        other => {
            return Err(Error::Config(format!(
                "{key} must be a list of points, got a {}",
                other.type_name()
            )))
        }
    };
    items.iter().map(|item| as_point(key, item)).collect()
}

/// One `custom.maps[i]` block under assembly.
#[derive(Debug, Default, Clone)]
struct MapDraft {
    scale: Option<f64>,
    rotation: Option<f64>,
    reflect: Option<bool>,
    translation: Option<Vec2>,
}

/// Accumulated assignments before validation.
#[derive(Debug, Default)]
struct Document {
    preset: Option<String>,
    depth: Option<u32>,
    resolution: Option<u32>,
    samples_per_edge: Option<u32>,
    scales: Option<Vec<f64>>,
    metrics: Option<Vec<Metric>>,
    seed: Option<Vec<Vec2>>,
    maps: Vec<Option<MapDraft>>,
    carve: Vec<Option<Vec<Vec2>>>,
}

impl Document {
    fn assign(&mut self, key: &str, value: Value) -> core::result::Result<(), String> {
        let dup = |field: &str| format!("duplicate key `{field}`");
        match key {
            "preset" => {
                if self.preset.is_some() {
                    return Err(dup(key));
                }
                self.preset = Some(as_string(key, &value).map_err(|e| e.message().to_string())?);
            }
            "depth" => {
                if self.depth.is_some() {
                    return Err(dup(key));
                }
                self.depth = Some(as_integer(key, &value, 1).map_err(|e| e.message().to_string())?);
            }
            "resolution" => {
                if self.resolution.is_some() {
                    return Err(dup(key));
                }
                self.resolution =
                    Some(as_integer(key, &value, 16).map_err(|e| e.message().to_string())?);
            }
            "samples_per_edge" => {
                if self.samples_per_edge.is_some() {
                    return Err(dup(key));
                }
                self.samples_per_edge =
                    Some(as_integer(key, &value, 1).map_err(|e| e.message().to_string())?);
            }
            "scales" => {
                if self.scales.is_some() {
                    return Err(dup(key));
                }
                let items = match value {
                    Value::List(items) => items,
                    other => return Err(format!("scales must be a list, got a {}", other.type_name())),
                };
                if items.is_empty() {
                    return Err("scales must not be empty".into());
                }
                let mut scales = Vec::with_capacity(items.len());
                for (i, item) in items.iter().enumerate() {
                    let r = as_float(&format!("scales[{i}]"), item)
                        .map_err(|e| e.message().to_string())?;
                    if r <= 0.0 {
                        return Err(format!("scales[{i}] must be > 0"));
                    }
                    scales.push(r);
                }
                self.scales = Some(scales);
            }
            "metrics" => {
                if self.metrics.is_some() {
                    return Err(dup(key));
                }
                let items = match value {
                    Value::List(items) => items,
                    other => {
                        return Err(format!("metrics must be a list, got a {}", other.type_name()))
                    }
                };
                let mut metrics = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    let name = as_string(&format!("metrics[{i}]"), item)
                        .map_err(|e| e.message().to_string())?;
                    let metric = Metric::from_name(&name).ok_or_else(|| {
                        format!(
                            "metrics[{i}]: unknown metric `{name}` (known: {})",
                            Metric::ALL.map(Metric::name).join(", ")
                        )
                    })?;
                    if !metrics.contains(&metric) {
                        metrics.push(metric);
                    }
                }
                metrics.sort();
                self.metrics = Some(metrics);
            }
            "custom.seed" => {
                if self.seed.is_some() {
                    return Err(dup(key));
                }
                self.seed = Some(as_points(key, &value).map_err(|e| e.message().to_string())?);
            }
            _ => return self.assign_indexed(key, value),
        }
        Ok(())
    }

    fn assign_indexed(&mut self, key: &str, value: Value) -> core::result::Result<(), String> {
        if let Some(rest) = key.strip_prefix("custom.maps[") {
            let (index, field) = split_index(rest)
                .ok_or_else(|| format!("malformed key `{key}`: expected `custom.maps[i].field`"))?;
            let field = field
                .strip_prefix('.')
                .ok_or_else(|| format!("malformed key `{key}`: expected `custom.maps[i].field`"))?;
            if index >= self.maps.len() {
                self.maps.resize(index + 1, None);
            }
            let draft = self.maps[index].get_or_insert_with(MapDraft::default);
            let err = |e: Error| e.message().to_string();
            match field {
                "scale" => {
                    if draft.scale.is_some() {
                        return Err(format!("duplicate key `{key}`"));
                    }
                    draft.scale = Some(as_float(key, &value).map_err(err)?);
                }
                "rotation" => {
                    if draft.rotation.is_some() {
                        return Err(format!("duplicate key `{key}`"));
                    }
                    draft.rotation = Some(as_float(key, &value).map_err(err)?);
                }
                "reflect" => {
                    if draft.reflect.is_some() {
                        return Err(format!("duplicate key `{key}`"));
                    }
                    draft.reflect = Some(as_bool(key, &value).map_err(err)?);
                }
                "translation" => {
                    if draft.translation.is_some() {
                        return Err(format!("duplicate key `{key}`"));
                    }
                    draft.translation = Some(as_point(key, &value).map_err(err)?);
                }
                other => {
                    return Err(format!(
                        "unknown map field `{other}` (known: scale, rotation, reflect, translation)"
                    ))
                }
            }
            return Ok(());
        }
        if let Some(rest) = key.strip_prefix("custom.carve[") {
            let (index, tail) = split_index(rest)
                .ok_or_else(|| format!("malformed key `{key}`: expected `custom.carve[j]`"))?;
            if !tail.is_empty() {
                return Err(format!("malformed key `{key}`: expected `custom.carve[j]`"));
            }
            if index >= self.carve.len() {
                self.carve.resize(index + 1, None);
            }
            if self.carve[index].is_some() {
                return Err(format!("duplicate key `{key}`"));
            }
            self.carve[index] =
                Some(as_points(key, &value).map_err(|e| e.message().to_string())?);
            return Ok(());
        }
        Err(format!("unknown key `{key}`"))
    }

    fn finish(self) -> Result<RunConfig> {
        let has_custom =
            self.seed.is_some() || !self.maps.is_empty() || !self.carve.is_empty();
        let (system, preset) = match (self.preset, has_custom) {
            (Some(_), true) => {
                return Err(Error::Config(
                    "give either `preset` or `custom.*` keys, not both".into(),
                ))
            }
            (None, false) => {
                return Err(Error::Config(
                    "no system given: set `preset` or define `custom.*`".into(),
                ))
            }
            (Some(name), false) => (build_preset(&name)?, Some(name)),
            (None, true) => (build_custom(self.seed, self.maps, self.carve)?, None),
        };
        Ok(RunConfig {
            system,
            preset,
            depth: self.depth.unwrap_or(DEFAULT_DEPTH),
            resolution: self.resolution.unwrap_or(DEFAULT_RESOLUTION),
            samples_per_edge: self.samples_per_edge.unwrap_or(DEFAULT_SAMPLES_PER_EDGE),
            scales: self.scales,
            metrics: self.metrics.unwrap_or_else(|| Metric::ALL.to_vec()),
            timings: false,
        })
    }
}

/// Split `"3].rest"` into `(3, ".rest")`.
fn split_index(rest: &str) -> Option<(usize, &str)> {
    let close = rest.find(']')?;
    let index: usize = rest[..close].parse().ok()?;
    Some((index, &rest[close + 1..]))
}

fn build_custom(
    seed: Option<Vec<Vec2>>,
    maps: Vec<Option<MapDraft>>,
    carve: Vec<Option<Vec<Vec2>>>,
) -> Result<IfsSystem> {
    let seed = seed.ok_or_else(|| Error::Config("custom.seed is required".into()))?;
    if maps.is_empty() {
        return Err(Error::Config("custom system needs at least one custom.maps[i]".into()));
    }
    let mut built_maps = Vec::with_capacity(maps.len());
    for (i, draft) in maps.into_iter().enumerate() {
        let draft = draft.ok_or_else(|| {
            Error::Config(format!("custom.maps[{i}] is missing (indices must be contiguous)"))
        })?;
        let scale = draft
            .scale
            .ok_or_else(|| Error::Config(format!("custom.maps[{i}].scale is required")))?;
        let translation = draft
            .translation
            .ok_or_else(|| Error::Config(format!("custom.maps[{i}].translation is required")))?;
        built_maps.push(SimilarityMap::new(
            scale,
            draft.rotation.unwrap_or(0.0),
            draft.reflect.unwrap_or(false),
            translation,
        )?);
    }
    let mut built_carve = Vec::with_capacity(carve.len());
    for (j, points) in carve.into_iter().enumerate() {
        let points = points.ok_or_else(|| {
            Error::Config(format!("custom.carve[{j}] is missing (indices must be contiguous)"))
        })?;
        built_carve.push(Polygon::new(points)?);
    }
    IfsSystem::new(built_maps, Polygon::new(seed)?, built_carve)
}
