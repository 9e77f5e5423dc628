//! Code parameters and stabilizer weight statistics of a surface.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cellulation::{BoundaryClass, DualSurface, Surface};
use crate::homology::logical_qubit_count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCount {
    pub weight: usize,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCensus {
    pub interior: usize,
    pub closed: usize,
    pub open: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub name: String,
    pub n: usize,
    pub k: usize,
    /// Weights of the vertex operators `X_v`, one per non-open vertex.
    pub x_weights: Vec<WeightCount>,
    /// Weights of the face operators `Z_f`, one per face.
    pub z_weights: Vec<WeightCount>,
    pub edges: BoundaryCensus,
    pub vertices: usize,
    pub open_vertices: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
}

fn histogram(weights: impl IntoIterator<Item = usize>) -> Vec<WeightCount> {
    let mut counts = BTreeMap::new();
    for w in weights {
        *counts.entry(w).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|(weight, count)| WeightCount { weight, count })
        .collect()
}

impl CodeReport {
    pub fn new(s: &Surface, dual: &DualSurface) -> CodeReport {
        let mut vertex_weight = vec![0usize; s.num_vertices()];
        for &e in s.qubit_edges() {
            for v in s.edge(e).ends {
                vertex_weight[v] += 1;
            }
        }
        let x_weights = histogram(
            (0..s.num_vertices())
                .filter(|&v| !s.is_open_vertex(v))
                .map(|v| vertex_weight[v]),
        );
        let z_weights = histogram(s.faces().iter().map(|face| {
            face.iter()
                .filter(|&&e| s.qubit_of_edge(e).is_some())
                .count()
        }));
        CodeReport {
            name: s.name().to_string(),
            n: s.num_qubits(),
            k: logical_qubit_count(s, dual),
            x_weights,
            z_weights,
            edges: BoundaryCensus {
                interior: s.count_class(BoundaryClass::Interior),
                closed: s.count_class(BoundaryClass::ClosedBoundary),
                open: s.count_class(BoundaryClass::OpenBoundary),
            },
            vertices: s.num_vertices(),
            open_vertices: s.num_vertices() - s.num_non_open_vertices(),
            faces: s.num_faces(),
            euler_characteristic: s.euler_characteristic(),
        }
    }

    pub fn to_text(&self) -> String {
        let hist = |h: &[WeightCount]| {
            h.iter()
                .map(|wc| format!("{}:{}", wc.weight, wc.count))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "name: {}\nn = {}\nk = {}\nvertices: {} ({} open)\nedges: {} interior, {} closed, {} open\nfaces: {}\neuler characteristic: {}\nX weights (weight:count): {}\nZ weights (weight:count): {}\n",
            self.name,
            self.n,
            self.k,
            self.vertices,
            self.open_vertices,
            self.edges.interior,
            self.edges.closed,
            self.edges.open,
            self.faces,
            self.euler_characteristic,
            hist(&self.x_weights),
            hist(&self.z_weights),
        )
    }
}
