use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BoundaryClass, CellulationData};

/// One failed structural rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub element: String,
}

impl Violation {
    pub fn new(rule: &str, element: impl Into<String>) -> Violation {
        Violation {
            rule: rule.to_string(),
            element: element.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.element)
    }
}

/// Outcome of [`validate`]. `ok` holds exactly when `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> ValidationReport {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        let shown: Vec<String> = self
            .violations
            .iter()
            .take(8)
            .map(|v| v.to_string())
            .collect();
        write!(f, "{}", shown.join("; "))?;
        if self.violations.len() > 8 {
            write!(f, "; ... ({} total)", self.violations.len())?;
        }
        Ok(())
    }
}

/// Checks the structural axioms of a candidate cellulation.
///
/// Rule ids:
/// - `duplicate-id`: an id repeats within its section
/// - `unknown-vertex`, `unknown-edge`: dangling references
/// - `empty-face`: a face lists no edges
/// - `repeated-edge-in-face`: a face lists the same edge twice
/// - `incidence-degree`: interior edge not on exactly 2 faces, or boundary edge not on exactly 1
/// - `open-flag`: vertex flag disagrees with "endpoint of an open edge"
/// - `open-only-vertex`: vertex with no qubit-carrying edge
/// - `non-open-loop`: qubit-carrying edge with equal endpoints
/// - `open-bridge`: qubit-carrying edge whose endpoints are both open
/// - `open-face`: face with no qubit-carrying edge
///
/// The last two are the dual images of `incidence-degree` and
/// `open-only-vertex`; surfaces violating them have no valid dual.
pub fn validate(data: &CellulationData) -> ValidationReport {
    let mut violations = Vec::new();

    let vertex_index = index_section(
        "vertex",
        data.vertices.iter().map(|v| v.id),
        &mut violations,
    );
    let edge_index = index_section("edge", data.edges.iter().map(|e| e.id), &mut violations);
    index_section("face", data.faces.iter().map(|f| f.id), &mut violations);

    // endpoints resolved to record positions; None when dangling
    let mut edge_ends: Vec<Option<[usize; 2]>> = Vec::with_capacity(data.edges.len());
    for edge in &data.edges {
        let a = vertex_index.get(&edge.ends[0]).copied();
        let b = vertex_index.get(&edge.ends[1]).copied();
        for (id, pos) in edge.ends.iter().zip([a, b]) {
            if pos.is_none() {
                violations.push(Violation::new(
                    "unknown-vertex",
                    format!("edge {} references vertex {}", edge.id, id),
                ));
            }
        }
        match (a, b) {
            (Some(a), Some(b)) => {
                if a == b && edge.class.carries_qubit() {
                    violations.push(Violation::new("non-open-loop", format!("edge {}", edge.id)));
                }
                edge_ends.push(Some([a, b]));
            }
            _ => edge_ends.push(None),
        }
    }

    let mut face_count = vec![0usize; data.edges.len()];
    let mut face_has_qubit = vec![false; data.faces.len()];
    for (fpos, face) in data.faces.iter().enumerate() {
        if face.edges.is_empty() {
            violations.push(Violation::new("empty-face", format!("face {}", face.id)));
        }
        let mut seen = HashSet::new();
        for id in &face.edges {
            if !seen.insert(*id) {
                violations.push(Violation::new(
                    "repeated-edge-in-face",
                    format!("face {} edge {}", face.id, id),
                ));
                continue;
            }
            match edge_index.get(id) {
                Some(&epos) => {
                    face_count[epos] += 1;
                    if data.edges[epos].class.carries_qubit() {
                        face_has_qubit[fpos] = true;
                    }
                }
                None => violations.push(Violation::new(
                    "unknown-edge",
                    format!("face {} references edge {}", face.id, id),
                )),
            }
        }
    }

    for (epos, edge) in data.edges.iter().enumerate() {
        // duplicates are already reported; count only the indexed record
        if edge_index.get(&edge.id) != Some(&epos) {
            continue;
        }
        let want = edge.class.face_degree();
        if face_count[epos] != want {
            violations.push(Violation::new(
                "incidence-degree",
                format!(
                    "edge {} ({}) lies on {} faces, expected {}",
                    edge.id,
                    class_name(edge.class),
                    face_count[epos],
                    want
                ),
            ));
        }
    }

    let mut derived_open = vec![false; data.vertices.len()];
    let mut qubit_degree = vec![0usize; data.vertices.len()];
    for (edge, ends) in data.edges.iter().zip(&edge_ends) {
        let Some(ends) = ends else { continue };
        for &v in ends {
            if edge.class.carries_qubit() {
                qubit_degree[v] += 1;
            } else {
                derived_open[v] = true;
            }
        }
    }
    for (vpos, vertex) in data.vertices.iter().enumerate() {
        if vertex.open != derived_open[vpos] {
            violations.push(Violation::new(
                "open-flag",
                format!(
                    "vertex {} flagged open={} but {} an open edge",
                    vertex.id,
                    vertex.open,
                    if derived_open[vpos] {
                        "touches"
                    } else {
                        "touches no"
                    }
                ),
            ));
        }
        if qubit_degree[vpos] == 0 {
            violations.push(Violation::new(
                "open-only-vertex",
                format!("vertex {}", vertex.id),
            ));
        }
    }

    for (edge, ends) in data.edges.iter().zip(&edge_ends) {
        let Some([a, b]) = ends else { continue };
        if edge.class.carries_qubit() && a != b && derived_open[*a] && derived_open[*b] {
            violations.push(Violation::new("open-bridge", format!("edge {}", edge.id)));
        }
    }

    for (face, has_qubit) in data.faces.iter().zip(&face_has_qubit) {
        if !face.edges.is_empty() && !has_qubit {
            violations.push(Violation::new("open-face", format!("face {}", face.id)));
        }
    }

    ValidationReport::from_violations(violations)
}

fn class_name(class: BoundaryClass) -> &'static str {
    match class {
        BoundaryClass::Interior => "interior",
        BoundaryClass::ClosedBoundary => "closed",
        BoundaryClass::OpenBoundary => "open",
    }
}

fn index_section(
    section: &str,
    ids: impl Iterator<Item = u64>,
    violations: &mut Vec<Violation>,
) -> HashMap<u64, usize> {
    let mut index = HashMap::new();
    for (pos, id) in ids.enumerate() {
        if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(id) {
            slot.insert(pos);
        } else {
            violations.push(Violation::new("duplicate-id", format!("{section} {id}")));
        }
    }
    index
}
