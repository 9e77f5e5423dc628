//! The `.squab.json` cellulation file format.
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "name": "...",
//!   "vertices": [{"id": 0, "open": false}, ...],
//!   "edges": [{"id": 0, "ends": [0, 1], "class": "interior"|"closed"|"open"}, ...],
//!   "faces": [{"id": 0, "edges": [0, 1, 2, 3]}, ...],
//!   "dual": {"vertices": [...], "edges": [...], "faces": [...],
//!            "edge_map": [[primal_edge_id, dual_edge_id], ...]}
//! }
//! ```
//!
//! The `dual` block is optional; when present it is used instead of
//! [`derive_dual`]. Unknown fields are ignored unless loading is strict.
//! [`save`] writes the canonical form: dense ids, one record per line.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    check_duality, derive_dual, validate, CellulationData, CellulationError, DualSurface,
    EdgeRecord, FaceRecord, Surface, ValidationReport, VertexRecord, Violation,
};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{path}` (line {line}, column {column}): {message}")]
    Field {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("unsupported format_version {0}")]
    Version(u64),
    #[error("duplicate-id: {section} {id}")]
    DuplicateId { section: String, id: u64 },
    #[error("edge_map: {0}")]
    EdgeMap(String),
    #[error(transparent)]
    Cellulation(#[from] CellulationError),
}

/// Explicit dual block of a cellulation file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualBlock {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub faces: Vec<FaceRecord>,
    pub edge_map: Vec<[u64; 2]>,
}

/// Parsed but unvalidated file content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellulationFile {
    pub format_version: u64,
    pub name: String,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub faces: Vec<FaceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualBlock>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Reject unknown fields.
    pub strict: bool,
}

/// A loaded surface and its dual.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub surface: Surface,
    pub dual: DualSurface,
    /// Whether the dual came from the file rather than [`derive_dual`].
    pub explicit_dual: bool,
}

impl CellulationFile {
    /// Parses JSON, reporting syntax errors by line and schema errors by field path.
    pub fn parse(payload: &[u8], options: LoadOptions) -> Result<CellulationFile, FormatError> {
        if options.strict {
            let value: Value = serde_json::from_slice(payload).map_err(syntax_error)?;
            check_known_fields(&value)?;
        }
        let mut de = serde_json::Deserializer::from_slice(payload);
        let file: CellulationFile = serde_path_to_error::deserialize(&mut de).map_err(|err| {
            let path = err.path().to_string();
            let inner = err.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                syntax_error(inner)
            } else {
                FormatError::Field {
                    path,
                    line: inner.line(),
                    column: inner.column(),
                    message: strip_position(&inner.to_string()),
                }
            }
        })?;
        if file.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(file.format_version));
        }
        Ok(file)
    }

    pub fn cellulation(&self) -> CellulationData {
        CellulationData {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            faces: self.faces.clone(),
        }
    }

    /// Every problem found in the primal, then in the dual block, as data.
    pub fn validation_report(&self) -> ValidationReport {
        let primal = validate(&self.cellulation());
        if !primal.ok || self.dual.is_none() {
            return primal;
        }
        let violations = match self.clone().into_loaded() {
            Ok(_) => Vec::new(),
            Err(FormatError::DuplicateId { section, id }) => {
                vec![Violation::new("duplicate-id", format!("{section} {id}"))]
            }
            Err(FormatError::EdgeMap(message)) => vec![Violation::new("edge-map", message)],
            Err(FormatError::Cellulation(CellulationError::Invalid(report))) => report
                .violations
                .into_iter()
                .map(|v| Violation::new(&v.rule, format!("dual {}", v.element)))
                .collect(),
            Err(FormatError::Cellulation(CellulationError::InconsistentDual(report))) => {
                report.violations
            }
            Err(other) => vec![Violation::new("dual", other.to_string())],
        };
        ValidationReport::from_violations(violations)
    }

    /// Validates the primal (and the dual block, if any) into surfaces.
    pub fn into_loaded(self) -> Result<Loaded, FormatError> {
        check_unique_ids("vertex", self.vertices.iter().map(|v| v.id))?;
        check_unique_ids("edge", self.edges.iter().map(|e| e.id))?;
        check_unique_ids("face", self.faces.iter().map(|f| f.id))?;
        let surface = Surface::from_data(&self.cellulation())?;
        let Some(block) = self.dual else {
            let dual = derive_dual(&surface);
            return Ok(Loaded {
                surface,
                dual,
                explicit_dual: false,
            });
        };

        check_unique_ids("dual vertex", block.vertices.iter().map(|v| v.id))?;
        check_unique_ids("dual edge", block.edges.iter().map(|e| e.id))?;
        check_unique_ids("dual face", block.faces.iter().map(|f| f.id))?;
        let dual_data = CellulationData {
            name: format!("{}*", self.name),
            vertices: block.vertices,
            edges: block.edges,
            faces: block.faces,
        };
        let dual_surface = Surface::from_data(&dual_data)?;

        let primal_qubit = qubit_lookup(&surface, self.edges.iter().map(|e| e.id));
        let dual_qubit = qubit_lookup(&dual_surface, dual_data.edges.iter().map(|e| e.id));
        let mut to_dual = vec![usize::MAX; surface.num_qubits()];
        for [p, d] in &block.edge_map {
            let q = *primal_qubit.get(p).ok_or_else(|| {
                FormatError::EdgeMap(format!("primal edge {p} is not a qubit edge"))
            })?;
            let dq = *dual_qubit.get(d).ok_or_else(|| {
                FormatError::EdgeMap(format!("dual edge {d} is not a qubit edge"))
            })?;
            if to_dual[q] != usize::MAX {
                return Err(FormatError::EdgeMap(format!(
                    "primal edge {p} mapped twice"
                )));
            }
            to_dual[q] = dq;
        }
        if let Some(q) = to_dual.iter().position(|&d| d == usize::MAX) {
            return Err(FormatError::EdgeMap(format!(
                "primal edge {} is not mapped",
                surface.edge_of_qubit(q)
            )));
        }
        let dual = DualSurface::new(dual_surface, to_dual)
            .map_err(|report| FormatError::EdgeMap(report.to_string()))?;
        let report = check_duality(&surface, &dual);
        if !report.ok {
            return Err(CellulationError::InconsistentDual(report).into());
        }
        Ok(Loaded {
            surface,
            dual,
            explicit_dual: true,
        })
    }

    /// Canonical file for a surface, with an explicit dual block when given.
    pub fn from_surface(surface: &Surface, dual: Option<&DualSurface>) -> CellulationFile {
        let data = surface.to_data();
        let dual = dual.map(|d| {
            let dd = d.dual.to_data();
            let edge_map = (0..surface.num_qubits())
                .map(|q| {
                    [
                        surface.edge_of_qubit(q) as u64,
                        d.dual.edge_of_qubit(d.edge_map()[q]) as u64,
                    ]
                })
                .collect();
            DualBlock {
                vertices: dd.vertices,
                edges: dd.edges,
                faces: dd.faces,
                edge_map,
            }
        });
        CellulationFile {
            format_version: FORMAT_VERSION,
            name: data.name,
            vertices: data.vertices,
            edges: data.edges,
            faces: data.faces,
            dual,
        }
    }

    /// Canonical serialization: fixed key order, one record per line.
    pub fn to_canonical_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"format_version\": {},", self.format_version);
        let _ = writeln!(out, "  \"name\": {},", json(&self.name));
        write_records(&mut out, "  ", "vertices", &self.vertices, true);
        write_records(&mut out, "  ", "edges", &self.edges, true);
        write_records(&mut out, "  ", "faces", &self.faces, self.dual.is_some());
        if let Some(dual) = &self.dual {
            out.push_str("  \"dual\": {\n");
            write_records(&mut out, "    ", "vertices", &dual.vertices, true);
            write_records(&mut out, "    ", "edges", &dual.edges, true);
            write_records(&mut out, "    ", "faces", &dual.faces, true);
            write_records(&mut out, "    ", "edge_map", &dual.edge_map, false);
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        out.into_bytes()
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn write_records<T: Serialize>(
    out: &mut String,
    indent: &str,
    key: &str,
    records: &[T],
    comma: bool,
) {
    let tail = if comma { "," } else { "" };
    if records.is_empty() {
        let _ = writeln!(out, "{indent}\"{key}\": []{tail}");
        return;
    }
    let _ = writeln!(out, "{indent}\"{key}\": [");
    for (i, record) in records.iter().enumerate() {
        let sep = if i + 1 < records.len() { "," } else { "" };
        let _ = writeln!(out, "{indent}  {}{sep}", json(record));
    }
    let _ = writeln!(out, "{indent}]{tail}");
}

/// Loads a surface with default (lenient) options.
pub fn load(payload: &[u8]) -> Result<Loaded, FormatError> {
    load_with(payload, LoadOptions::default())
}

pub fn load_with(payload: &[u8], options: LoadOptions) -> Result<Loaded, FormatError> {
    CellulationFile::parse(payload, options)?.into_loaded()
}

/// Canonical bytes for `surface`, with an explicit dual block when given.
pub fn save(surface: &Surface, dual: Option<&DualSurface>) -> Vec<u8> {
    CellulationFile::from_surface(surface, dual).to_canonical_bytes()
}

/// File id to qubit index, for qubit-carrying edges only.
fn qubit_lookup(s: &Surface, ids: impl Iterator<Item = u64>) -> HashMap<u64, usize> {
    let mut ids: Vec<u64> = ids.collect();
    ids.sort_unstable();
    ids.into_iter()
        .enumerate()
        .filter_map(|(e, id)| s.qubit_of_edge(e).map(|q| (id, q)))
        .collect()
}

fn check_unique_ids(section: &str, ids: impl Iterator<Item = u64>) -> Result<(), FormatError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(FormatError::DuplicateId {
                section: section.to_string(),
                id,
            });
        }
    }
    Ok(())
}

fn syntax_error(err: serde_json::Error) -> FormatError {
    FormatError::Syntax {
        line: err.line(),
        column: err.column(),
        message: strip_position(&err.to_string()),
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message.to_string(),
    }
}

fn check_known_fields(value: &Value) -> Result<(), FormatError> {
    const TOP: &[&str] = &[
        "format_version",
        "name",
        "vertices",
        "edges",
        "faces",
        "dual",
    ];
    const DUAL: &[&str] = &["vertices", "edges", "faces", "edge_map"];
    const VERTEX: &[&str] = &["id", "open"];
    const EDGE: &[&str] = &["id", "ends", "class"];
    const FACE: &[&str] = &["id", "edges"];

    fn keys(value: &Value, allowed: &[&str], path: &str) -> Result<(), FormatError> {
        if let Value::Object(map) = value {
            if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
                let full = if path.is_empty() {
                    key.clone()
                } else {
                    format!("{path}.{key}")
                };
                return Err(FormatError::UnknownField(full));
            }
        }
        Ok(())
    }

    fn sections(value: &Value, prefix: &str) -> Result<(), FormatError> {
        for (section, allowed) in [("vertices", VERTEX), ("edges", EDGE), ("faces", FACE)] {
            if let Some(Value::Array(items)) = value.get(section) {
                for (i, item) in items.iter().enumerate() {
                    keys(item, allowed, &format!("{prefix}{section}[{i}]"))?;
                }
            }
        }
        Ok(())
    }

    keys(value, TOP, "")?;
    sections(value, "")?;
    if let Some(dual) = value.get("dual") {
        keys(dual, DUAL, "dual")?;
        sections(dual, "dual.")?;
    }
    Ok(())
}
