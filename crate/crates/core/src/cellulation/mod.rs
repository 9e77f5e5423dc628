//! Combinatorial surfaces with open and closed boundaries.
//!
//! A [`Surface`] is a cellulation `(V, E, F)`: vertices, edges given by their
//! endpoint pair, and faces given as sets of edges. Boundary edges (those on a
//! single face) are either open or closed. Open edges carry no qubit and make
//! both of their endpoints open; every other edge carries exactly one qubit.
//!
//! Surfaces are only constructed from data that passes [`validate`], so every
//! `Surface` value upholds the structural axioms. Candidate data lives in
//! [`CellulationData`], which mirrors the `.squab.json` file layout.

mod dual;
mod format;
mod iso;
mod validate;

use serde::{Deserialize, Serialize};

pub use dual::{check_duality, derive_dual, DualSurface};
pub use format::{
    load, load_with, save, CellulationFile, DualBlock, FormatError, LoadOptions, Loaded,
    FORMAT_VERSION,
};
pub use iso::{find_isomorphism, Isomorphism};
pub use validate::{validate, ValidationReport, Violation};

/// Boundary class of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryClass {
    Interior,
    #[serde(rename = "closed")]
    ClosedBoundary,
    #[serde(rename = "open")]
    OpenBoundary,
}

impl BoundaryClass {
    /// Number of faces an edge of this class must lie on.
    pub fn face_degree(self) -> usize {
        match self {
            BoundaryClass::Interior => 2,
            BoundaryClass::ClosedBoundary | BoundaryClass::OpenBoundary => 1,
        }
    }

    pub fn carries_qubit(self) -> bool {
        !matches!(self, BoundaryClass::OpenBoundary)
    }
}

/// Vertex record as it appears in a cellulation file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: u64,
    pub open: bool,
}

/// Edge record as it appears in a cellulation file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: u64,
    pub ends: [u64; 2],
    pub class: BoundaryClass,
}

/// Face record as it appears in a cellulation file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub id: u64,
    pub edges: Vec<u64>,
}

/// Unchecked cellulation: the candidate data handed to [`validate`].
///
/// Ids are arbitrary non-negative integers. Conversion into a [`Surface`]
/// renumbers every section densely in ascending id order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellulationData {
    pub name: String,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub faces: Vec<FaceRecord>,
}

/// An edge of a validated surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub ends: [usize; 2],
    pub class: BoundaryClass,
}

/// Errors raised when building surfaces.
#[derive(Debug, thiserror::Error)]
pub enum CellulationError {
    #[error("invalid cellulation: {0}")]
    Invalid(ValidationReport),
    #[error("inconsistent dual: {0}")]
    InconsistentDual(ValidationReport),
}

/// A validated, immutable combinatorial surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    name: String,
    vertex_open: Vec<bool>,
    edges: Vec<Edge>,
    faces: Vec<Vec<usize>>,
    // derived
    qubit_of_edge: Vec<Option<usize>>,
    qubit_edges: Vec<usize>,
    edge_faces: Vec<[usize; 2]>,
}

const NO_FACE: usize = usize::MAX;

impl Surface {
    /// Validates `data` and renumbers it densely by ascending id.
    pub fn from_data(data: &CellulationData) -> Result<Surface, CellulationError> {
        let report = validate(data);
        if !report.ok {
            return Err(CellulationError::Invalid(report));
        }

        let vertex_index = dense_index(data.vertices.iter().map(|v| v.id));
        let edge_index = dense_index(data.edges.iter().map(|e| e.id));

        let mut vertices: Vec<&VertexRecord> = data.vertices.iter().collect();
        vertices.sort_by_key(|v| v.id);
        let mut edges: Vec<&EdgeRecord> = data.edges.iter().collect();
        edges.sort_by_key(|e| e.id);
        let mut faces: Vec<&FaceRecord> = data.faces.iter().collect();
        faces.sort_by_key(|f| f.id);

        let vertex_open = vertices.iter().map(|v| v.open).collect();
        let edges = edges
            .iter()
            .map(|e| Edge {
                ends: [vertex_index[&e.ends[0]], vertex_index[&e.ends[1]]],
                class: e.class,
            })
            .collect();
        let faces = faces
            .iter()
            .map(|f| f.edges.iter().map(|id| edge_index[id]).collect())
            .collect();

        Ok(Surface::assemble(
            data.name.clone(),
            vertex_open,
            edges,
            faces,
        ))
    }

    /// Builds a surface from dense parts, validating them.
    pub fn from_parts(
        name: impl Into<String>,
        vertex_open: Vec<bool>,
        edges: Vec<Edge>,
        faces: Vec<Vec<usize>>,
    ) -> Result<Surface, CellulationError> {
        let data = CellulationData {
            name: name.into(),
            vertices: vertex_open
                .iter()
                .enumerate()
                .map(|(id, &open)| VertexRecord {
                    id: id as u64,
                    open,
                })
                .collect(),
            edges: edges
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeRecord {
                    id: id as u64,
                    ends: [e.ends[0] as u64, e.ends[1] as u64],
                    class: e.class,
                })
                .collect(),
            faces: faces
                .iter()
                .enumerate()
                .map(|(id, f)| FaceRecord {
                    id: id as u64,
                    edges: f.iter().map(|&e| e as u64).collect(),
                })
                .collect(),
        };
        let report = validate(&data);
        if !report.ok {
            return Err(CellulationError::Invalid(report));
        }
        Ok(Surface::assemble(data.name, vertex_open, edges, faces))
    }

    /// Assembles derived indices. Callers guarantee validity.
    fn assemble(
        name: String,
        vertex_open: Vec<bool>,
        edges: Vec<Edge>,
        mut faces: Vec<Vec<usize>>,
    ) -> Surface {
        for face in &mut faces {
            face.sort_unstable();
        }
        let mut qubit_of_edge = vec![None; edges.len()];
        let mut qubit_edges = Vec::new();
        for (id, edge) in edges.iter().enumerate() {
            if edge.class.carries_qubit() {
                qubit_of_edge[id] = Some(qubit_edges.len());
                qubit_edges.push(id);
            }
        }
        let mut edge_faces = vec![[NO_FACE; 2]; edges.len()];
        for (f, face) in faces.iter().enumerate() {
            for &e in face {
                let slot = &mut edge_faces[e];
                if slot[0] == NO_FACE {
                    slot[0] = f;
                } else {
                    slot[1] = f;
                }
            }
        }
        Surface {
            name,
            vertex_open,
            edges,
            faces,
            qubit_of_edge,
            qubit_edges,
            edge_faces,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Surface {
        self.name = name.into();
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_open.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Number of qubits `n = |E̊|`.
    pub fn num_qubits(&self) -> usize {
        self.qubit_edges.len()
    }

    pub fn is_open_vertex(&self, v: usize) -> bool {
        self.vertex_open[v]
    }

    pub fn vertex_open_flags(&self) -> &[bool] {
        &self.vertex_open
    }

    pub fn num_non_open_vertices(&self) -> usize {
        self.vertex_open.iter().filter(|&&open| !open).count()
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted edge ids of face `f`.
    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Faces containing edge `e` (one or two).
    pub fn faces_of_edge(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.edge_faces[e].iter().copied().filter(|&f| f != NO_FACE)
    }

    /// Qubit index of edge `e`, or `None` for open edges.
    pub fn qubit_of_edge(&self, e: usize) -> Option<usize> {
        self.qubit_of_edge[e]
    }

    /// Edge carrying qubit `q`.
    pub fn edge_of_qubit(&self, q: usize) -> usize {
        self.qubit_edges[q]
    }

    /// Edge ids of the qubit-carrying edges, in qubit order.
    pub fn qubit_edges(&self) -> &[usize] {
        &self.qubit_edges
    }

    /// `|V| - |E| + |F|` over the full (not just non-open) sets.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn count_class(&self, class: BoundaryClass) -> usize {
        self.edges.iter().filter(|e| e.class == class).count()
    }

    /// Converts back to candidate data with dense ids.
    pub fn to_data(&self) -> CellulationData {
        CellulationData {
            name: self.name.clone(),
            vertices: self
                .vertex_open
                .iter()
                .enumerate()
                .map(|(id, &open)| VertexRecord {
                    id: id as u64,
                    open,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeRecord {
                    id: id as u64,
                    ends: [e.ends[0] as u64, e.ends[1] as u64],
                    class: e.class,
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .enumerate()
                .map(|(id, f)| FaceRecord {
                    id: id as u64,
                    edges: f.iter().map(|&e| e as u64).collect(),
                })
                .collect(),
        }
    }
}

/// Free-function form of [`Surface::euler_characteristic`].
pub fn euler_characteristic(s: &Surface) -> i64 {
    s.euler_characteristic()
}

fn dense_index(ids: impl Iterator<Item = u64>) -> std::collections::HashMap<u64, usize> {
    let mut ids: Vec<u64> = ids.collect();
    ids.sort_unstable();
    ids.into_iter().enumerate().map(|(i, id)| (id, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_disk() -> Surface {
        let closed = BoundaryClass::ClosedBoundary;
        Surface::from_parts(
            "disk",
            vec![false; 4],
            vec![
                Edge {
                    ends: [0, 1],
                    class: closed,
                },
                Edge {
                    ends: [1, 2],
                    class: closed,
                },
                Edge {
                    ends: [2, 3],
                    class: closed,
                },
                Edge {
                    ends: [3, 0],
                    class: closed,
                },
            ],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn single_square_is_a_disk() {
        let s = square_disk();
        assert_eq!(s.euler_characteristic(), 1);
        assert_eq!(s.num_qubits(), 4);
        assert_eq!(s.num_non_open_vertices(), 4);
    }

    #[test]
    fn sparse_ids_are_renumbered_in_ascending_order() {
        let data = CellulationData {
            name: "sparse".into(),
            vertices: [30, 10, 20, 0]
                .iter()
                .map(|&id| VertexRecord { id, open: false })
                .collect(),
            edges: vec![
                EdgeRecord {
                    id: 9,
                    ends: [0, 10],
                    class: BoundaryClass::ClosedBoundary,
                },
                EdgeRecord {
                    id: 5,
                    ends: [10, 20],
                    class: BoundaryClass::ClosedBoundary,
                },
                EdgeRecord {
                    id: 7,
                    ends: [20, 30],
                    class: BoundaryClass::ClosedBoundary,
                },
                EdgeRecord {
                    id: 100,
                    ends: [30, 0],
                    class: BoundaryClass::ClosedBoundary,
                },
            ],
            faces: vec![FaceRecord {
                id: 4,
                edges: vec![100, 9, 7, 5],
            }],
        };
        let s = Surface::from_data(&data).unwrap();
        // edge 5 -> 0, 7 -> 1, 9 -> 2, 100 -> 3; vertex 0 -> 0, 10 -> 1 ...
        assert_eq!(s.edge(0).ends, [1, 2]);
        assert_eq!(s.edge(2).ends, [0, 1]);
        assert_eq!(s.face(0), &[0, 1, 2, 3]);
        assert_eq!(s.edge_of_qubit(3), 3);
    }

    #[test]
    fn qubit_index_skips_open_edges() {
        let closed = BoundaryClass::ClosedBoundary;
        let open = BoundaryClass::OpenBoundary;
        let s = Surface::from_parts(
            "strip",
            vec![true, false, false, true],
            vec![
                Edge {
                    ends: [0, 1],
                    class: closed,
                },
                Edge {
                    ends: [1, 2],
                    class: closed,
                },
                Edge {
                    ends: [2, 3],
                    class: closed,
                },
                Edge {
                    ends: [3, 0],
                    class: open,
                },
            ],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert_eq!(s.num_qubits(), 3);
        assert_eq!(s.qubit_of_edge(3), None);
        assert_eq!(s.qubit_edges(), &[0, 1, 2]);
        assert_eq!(s.faces_of_edge(1).collect::<Vec<_>>(), vec![0]);
    }
}
