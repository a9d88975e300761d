//! On-disk instance format.
//!
//! An instance is a JSON document with three top-level keys:
//!
//! * `nodes`: list of `{id, name?, x?, y?, heading?}`,
//! * `arcs`: list of `{from, to, length, bounds}` where `bounds` is
//!   `{kind, breakpoints?/step?, mu_minus, mu_plus, alpha_minus,
//!   alpha_plus}` with `kind` one of `"constant"`, `"piecewise"` or
//!   `"sampled"`,
//! * `query`: `{source, targets, w_source, w_target}` where `w_target` is
//!   either a number (required exit squared speed) or the string
//!   `"free"`.
//!
//! Infinite bound values are written as the strings `"inf"` / `"-inf"`;
//! JSON has no infinity literal. Loading reports syntax errors with line
//! and column, and schema errors with the offending field's path (for
//! example `arcs[3].bounds.breakpoints`).

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use basp_core::{ArcBounds, BoundFn, GraphError, NodeId, RoadGraph};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// A bound value that may be infinite: serialized as a plain number when
/// finite and as the sentinel string `"inf"` / `"-inf"` otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtFloat(pub f64);

impl Serialize for ExtFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtFloat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ExtFloat, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtFloat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"inf\" or \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExtFloat, E> {
                Ok(ExtFloat(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtFloat, E> {
                Ok(ExtFloat(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtFloat, E> {
                Ok(ExtFloat(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtFloat, E> {
                match v {
                    "inf" => Ok(ExtFloat(f64::INFINITY)),
                    "-inf" => Ok(ExtFloat(f64::NEG_INFINITY)),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// One bound function's values: a single scalar for `kind = "constant"`,
/// one value per piece or cell otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValuesDto {
    /// A single value covering the whole arc.
    One(ExtFloat),
    /// One value per breakpoint piece or sample cell.
    Many(Vec<ExtFloat>),
}

/// The exit-speed requirement: a number, or free.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WTargetDto(pub Option<f64>);

impl Serialize for WTargetDto {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(w) => s.serialize_f64(w),
            None => s.serialize_str("free"),
        }
    }
}

impl<'de> Deserialize<'de> for WTargetDto {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<WTargetDto, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = WTargetDto;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"free\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<WTargetDto, E> {
                Ok(WTargetDto(Some(v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<WTargetDto, E> {
                Ok(WTargetDto(Some(v as f64)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<WTargetDto, E> {
                Ok(WTargetDto(Some(v as f64)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<WTargetDto, E> {
                if v == "free" {
                    Ok(WTargetDto(None))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// A node row: the id is required, everything else is display metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDto {
    /// Node id; arcs and the query refer to nodes by this number.
    pub id: u32,
    /// Optional display name, usable in `--path` arguments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Optional planar x coordinate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Optional planar y coordinate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    /// Optional heading in radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<f64>,
}

/// The four bound functions of one arc, all sharing a representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsDto {
    /// `"constant"`, `"piecewise"` or `"sampled"`.
    pub kind: String,
    /// Piece start offsets (ascending from 0); `"piecewise"` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<f64>>,
    /// Uniform cell width; `"sampled"` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// Squared-speed floor.
    pub mu_minus: ValuesDto,
    /// Squared-speed cap.
    pub mu_plus: ValuesDto,
    /// Lower slope bound (nonpositive).
    pub alpha_minus: ValuesDto,
    /// Upper slope bound (nonnegative).
    pub alpha_plus: ValuesDto,
}

/// A directed arc row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcDto {
    /// Tail node id.
    pub from: u32,
    /// Head node id.
    pub to: u32,
    /// Arc length.
    pub length: f64,
    /// Speed and slope bounds along the arc.
    pub bounds: BoundsDto,
}

/// The routing query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryDto {
    /// Start node id.
    pub source: u32,
    /// Accepted goal node ids.
    pub targets: Vec<u32>,
    /// Entry squared speed at the source.
    pub w_source: f64,
    /// Exit squared speed at a target, or `"free"`.
    pub w_target: WTargetDto,
}

/// The whole instance document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDto {
    /// Declared nodes.
    pub nodes: Vec<NodeDto>,
    /// Directed arcs.
    pub arcs: Vec<ArcDto>,
    /// The routing query.
    pub query: QueryDto,
}

/// Why an instance file could not be loaded or written.
#[derive(Debug)]
pub enum FormatError {
    /// The file could not be read or written.
    Io {
        /// The offending path.
        path: PathBuf,
        /// The underlying error.
        source: io::Error,
    },
    /// The document is not valid JSON (message carries line and column).
    Syntax(serde_json::Error),
    /// The document is valid JSON but violates the schema.
    Schema {
        /// Path of the offending field, e.g. `arcs[3].bounds.step`.
        field: String,
        /// What is wrong with it.
        message: String,
    },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Io { path, source } => {
                write!(f, "{}: {}", path.display(), source)
            }
            FormatError::Syntax(e) => write!(f, "invalid JSON: {e}"),
            FormatError::Schema { field, message } => write!(f, "{field}: {message}"),
        }
    }
}

impl std::error::Error for FormatError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            FormatError::Io { source, .. } => Some(source),
            FormatError::Syntax(e) => Some(e),
            FormatError::Schema { .. } => None,
        }
    }
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn one(v: &ValuesDto, field: &str) -> Result<f64, FormatError> {
    match v {
        ValuesDto::One(x) => Ok(x.0),
        ValuesDto::Many(_) => Err(schema(field, "expected a single value for kind \"constant\"")),
    }
}

fn many(v: &ValuesDto, field: &str, want: usize) -> Result<Vec<f64>, FormatError> {
    match v {
        ValuesDto::One(_) => Err(schema(field, "expected a list of values")),
        ValuesDto::Many(xs) if xs.len() == want => Ok(xs.iter().map(|x| x.0).collect()),
        ValuesDto::Many(xs) => Err(schema(
            field,
            format!("expected {want} values, found {}", xs.len()),
        )),
    }
}

fn bounds_from_dto(b: &BoundsDto, field: &str) -> Result<ArcBounds, FormatError> {
    let reject = |name: &str, present: bool| -> Result<(), FormatError> {
        if present {
            Err(schema(
                format!("{field}.{name}"),
                format!("not allowed for kind \"{}\"", b.kind),
            ))
        } else {
            Ok(())
        }
    };
    let built = match b.kind.as_str() {
        "constant" => {
            reject("breakpoints", b.breakpoints.is_some())?;
            reject("step", b.step.is_some())?;
            ArcBounds::constant(
                one(&b.mu_minus, &format!("{field}.mu_minus"))?,
                one(&b.mu_plus, &format!("{field}.mu_plus"))?,
                one(&b.alpha_minus, &format!("{field}.alpha_minus"))?,
                one(&b.alpha_plus, &format!("{field}.alpha_plus"))?,
            )
        }
        "piecewise" => {
            reject("step", b.step.is_some())?;
            let bp = b
                .breakpoints
                .clone()
                .ok_or_else(|| schema(format!("{field}.breakpoints"), "required for kind \"piecewise\""))?;
            let n = bp.len();
            ArcBounds::piecewise(
                bp,
                many(&b.mu_minus, &format!("{field}.mu_minus"), n)?,
                many(&b.mu_plus, &format!("{field}.mu_plus"), n)?,
                many(&b.alpha_minus, &format!("{field}.alpha_minus"), n)?,
                many(&b.alpha_plus, &format!("{field}.alpha_plus"), n)?,
            )
        }
        "sampled" => {
            reject("breakpoints", b.breakpoints.is_some())?;
            let step = b
                .step
                .ok_or_else(|| schema(format!("{field}.step"), "required for kind \"sampled\""))?;
            let n = match &b.mu_minus {
                ValuesDto::Many(xs) => xs.len(),
                ValuesDto::One(_) => {
                    return Err(schema(format!("{field}.mu_minus"), "expected a list of values"))
                }
            };
            ArcBounds::sampled(
                step,
                many(&b.mu_minus, &format!("{field}.mu_minus"), n)?,
                many(&b.mu_plus, &format!("{field}.mu_plus"), n)?,
                many(&b.alpha_minus, &format!("{field}.alpha_minus"), n)?,
                many(&b.alpha_plus, &format!("{field}.alpha_plus"), n)?,
            )
        }
        other => {
            return Err(schema(
                format!("{field}.kind"),
                format!("unknown kind \"{other}\" (expected \"constant\", \"piecewise\" or \"sampled\")"),
            ))
        }
    };
    built.map_err(|e| schema(field, e.to_string()))
}

/// Builds a road graph from a parsed document, validating ids, bounds and
/// the query; errors name the offending field.
pub fn graph_from_dto(dto: &InstanceDto) -> Result<RoadGraph, FormatError> {
    if dto.nodes.is_empty() {
        return Err(schema("nodes", "at least one node is required"));
    }
    let mut declared = std::collections::BTreeSet::new();
    for (i, n) in dto.nodes.iter().enumerate() {
        if !declared.insert(n.id) {
            return Err(schema(format!("nodes[{i}].id"), format!("duplicate id {}", n.id)));
        }
        if n.x.is_some() != n.y.is_some() {
            return Err(schema(
                format!("nodes[{i}]"),
                "x and y must be given together",
            ));
        }
    }
    let count = dto.nodes.iter().map(|n| n.id).max().unwrap() as usize + 1;
    let mut g = RoadGraph::new(count);
    for (i, n) in dto.nodes.iter().enumerate() {
        let id = NodeId(n.id);
        if let Some(name) = &n.name {
            g.set_name(id, name)
                .map_err(|e| schema(format!("nodes[{i}].name"), e.to_string()))?;
        }
        if let (Some(x), Some(y)) = (n.x, n.y) {
            g.set_position(id, x, y)
                .map_err(|e| schema(format!("nodes[{i}]"), e.to_string()))?;
        }
        if let Some(h) = n.heading {
            g.set_heading(id, h)
                .map_err(|e| schema(format!("nodes[{i}].heading"), e.to_string()))?;
        }
    }
    for (i, a) in dto.arcs.iter().enumerate() {
        for (key, id) in [("from", a.from), ("to", a.to)] {
            if !declared.contains(&id) {
                return Err(schema(
                    format!("arcs[{i}].{key}"),
                    format!("undeclared node id {id}"),
                ));
            }
        }
        let bounds = bounds_from_dto(&a.bounds, &format!("arcs[{i}].bounds"))?;
        g.add_arc(NodeId(a.from), NodeId(a.to), a.length, bounds)
            .map_err(|e| match e {
                GraphError::BadLength => schema(format!("arcs[{i}].length"), e.to_string()),
                _ => schema(format!("arcs[{i}]"), e.to_string()),
            })?;
    }
    if dto.query.targets.is_empty() {
        return Err(schema("query.targets", "at least one target is required"));
    }
    if !declared.contains(&dto.query.source) {
        return Err(schema(
            "query.source",
            format!("undeclared node id {}", dto.query.source),
        ));
    }
    for (i, t) in dto.query.targets.iter().enumerate() {
        if !declared.contains(t) {
            return Err(schema(
                format!("query.targets[{i}]"),
                format!("undeclared node id {t}"),
            ));
        }
    }
    let targets: Vec<NodeId> = dto.query.targets.iter().map(|&t| NodeId(t)).collect();
    g.set_query(
        NodeId(dto.query.source),
        &targets,
        dto.query.w_source,
        dto.query.w_target.0,
    )
    .map_err(|e| schema("query", e.to_string()))?;
    Ok(g)
}

fn values_dto(values: &[f64]) -> ValuesDto {
    ValuesDto::Many(values.iter().map(|&v| ExtFloat(v)).collect())
}

fn bounds_to_dto(b: &ArcBounds, len: f64) -> BoundsDto {
    let fns = [&b.mu_minus, &b.mu_plus, &b.alpha_minus, &b.alpha_plus];
    let constant = fns.iter().all(|f| match f {
        BoundFn::PiecewiseConstant { values, .. } => values.len() == 1,
        BoundFn::Sampled { .. } => false,
    });
    if constant {
        let [mm, mp, am, ap] = fns.map(|f| ExtFloat(f.value_at(0.0)));
        return BoundsDto {
            kind: "constant".into(),
            breakpoints: None,
            step: None,
            mu_minus: ValuesDto::One(mm),
            mu_plus: ValuesDto::One(mp),
            alpha_minus: ValuesDto::One(am),
            alpha_plus: ValuesDto::One(ap),
        };
    }
    let exact = fns
        .iter()
        .all(|f| matches!(f, BoundFn::PiecewiseConstant { .. }));
    if exact {
        // One shared breakpoint list: the union of the four functions'.
        let mut cuts: Vec<f64> = Vec::new();
        for f in fns {
            if let BoundFn::PiecewiseConstant { breakpoints, .. } = f {
                cuts.extend(breakpoints.iter().copied().filter(|&c| c < len));
            }
        }
        cuts.push(0.0);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let [mm, mp, am, ap] =
            fns.map(|f| cuts.iter().map(|&c| f.value_at(c)).collect::<Vec<f64>>());
        BoundsDto {
            kind: "piecewise".into(),
            breakpoints: Some(cuts),
            step: None,
            mu_minus: values_dto(&mm),
            mu_plus: values_dto(&mp),
            alpha_minus: values_dto(&am),
            alpha_plus: values_dto(&ap),
        }
    } else {
        // At least one function is sampled: resample everything onto the
        // finest sampled grid (cell starts, matching right-continuity).
        let step = fns
            .iter()
            .filter_map(|f| match f {
                BoundFn::Sampled { step, .. } => Some(*step),
                BoundFn::PiecewiseConstant { .. } => None,
            })
            .fold(f64::INFINITY, f64::min);
        let cells = ((len / step).ceil() as usize).max(1);
        let [mm, mp, am, ap] = fns.map(|f| {
            (0..cells)
                .map(|i| f.value_at(i as f64 * step))
                .collect::<Vec<f64>>()
        });
        BoundsDto {
            kind: "sampled".into(),
            breakpoints: None,
            step: Some(step),
            mu_minus: values_dto(&mm),
            mu_plus: values_dto(&mp),
            alpha_minus: values_dto(&am),
            alpha_plus: values_dto(&ap),
        }
    }
}

/// Serializes a road graph (and its query) into the document form.
pub fn instance_to_dto(g: &RoadGraph) -> InstanceDto {
    let nodes = (0..g.node_count() as u32)
        .map(|i| {
            let id = NodeId(i);
            let pos = g.position(id);
            NodeDto {
                id: i,
                name: g.name(id).map(str::to_string),
                x: pos.map(|p| p[0]),
                y: pos.map(|p| p[1]),
                heading: g.heading(id),
            }
        })
        .collect();
    let arcs = g
        .arcs()
        .iter()
        .map(|a| ArcDto {
            from: a.from.0,
            to: a.to.0,
            length: a.length,
            bounds: bounds_to_dto(&a.bounds, a.length),
        })
        .collect();
    InstanceDto {
        nodes,
        arcs,
        query: QueryDto {
            source: g.source().0,
            targets: g.targets().iter().map(|t| t.0).collect(),
            w_source: g.w_source(),
            w_target: WTargetDto(g.w_target()),
        },
    }
}

/// Parses an instance document from JSON text.
pub fn parse_instance(text: &str) -> Result<RoadGraph, FormatError> {
    let dto: InstanceDto = serde_json::from_str(text).map_err(FormatError::Syntax)?;
    graph_from_dto(&dto)
}

/// Reads and parses an instance file.
pub fn load_instance(path: &Path) -> Result<RoadGraph, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text)
}

/// Renders a road graph as pretty-printed instance JSON (trailing
/// newline included); identical graphs yield identical bytes.
pub fn render_instance(g: &RoadGraph) -> String {
    let mut text = serde_json::to_string_pretty(&instance_to_dto(g))
        .expect("instance documents always serialize");
    text.push('\n');
    text
}

/// Writes a road graph to an instance file.
pub fn save_instance(path: &Path, g: &RoadGraph) -> Result<(), FormatError> {
    fs::write(path, render_instance(g)).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}
