use std::collections::HashMap;

use super::{BoundaryClass, Edge, Surface, ValidationReport, Violation};
use crate::union_find::UnionFind;

/// The generalized dual `G*` of a surface together with the qubit bijection.
///
/// `to_dual[q]` is the dual qubit index of primal qubit `q`; `to_primal` is
/// its inverse. Both surfaces carry the same physical qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSurface {
    pub dual: Surface,
    to_dual: Vec<usize>,
    to_primal: Vec<usize>,
}

impl DualSurface {
    /// Pairs `dual` with a primal-to-dual qubit map, checking it is a bijection.
    pub fn new(dual: Surface, to_dual: Vec<usize>) -> Result<DualSurface, ValidationReport> {
        let n = dual.num_qubits();
        let mut to_primal = vec![usize::MAX; n];
        let mut violations = Vec::new();
        if to_dual.len() != n {
            violations.push(Violation::new(
                "edge-map",
                format!(
                    "maps {} primal qubits onto {} dual qubits",
                    to_dual.len(),
                    n
                ),
            ));
        }
        for (q, &d) in to_dual.iter().enumerate() {
            if d >= n {
                violations.push(Violation::new(
                    "edge-map",
                    format!("qubit {q} maps out of range"),
                ));
            } else if to_primal[d] != usize::MAX {
                violations.push(Violation::new(
                    "edge-map",
                    format!("dual qubit {d} hit twice"),
                ));
            } else {
                to_primal[d] = q;
            }
        }
        if !violations.is_empty() {
            return Err(ValidationReport::from_violations(violations));
        }
        Ok(DualSurface {
            dual,
            to_dual,
            to_primal,
        })
    }

    /// Primal qubit index to dual qubit index.
    pub fn edge_map(&self) -> &[usize] {
        &self.to_dual
    }

    /// Dual qubit index to primal qubit index.
    pub fn inverse_edge_map(&self) -> &[usize] {
        &self.to_primal
    }

    /// Views `primal` as the dual of `self.dual`.
    pub fn reversed(&self, primal: &Surface) -> DualSurface {
        DualSurface {
            dual: primal.clone(),
            to_dual: self.to_primal.clone(),
            to_primal: self.to_dual.clone(),
        }
    }
}

/// Builds the generalized dual.
///
/// - every face becomes a non-open dual vertex;
/// - every maximal run of closed boundary edges (joined through non-open
///   vertices) becomes one open dual vertex;
/// - every qubit edge becomes a dual qubit edge, between its two faces
///   (interior) or between its face and its run's open vertex (closed);
/// - every non-open primal vertex becomes a dual face holding the duals of
///   its qubit edges, plus one open loop at the run vertex when the primal
///   vertex touches a closed run.
///
/// Dual qubit edges come first, in primal qubit order, so the edge map of a
/// derived dual is the identity. Applied twice it returns the original
/// surface up to endpoint order when there are no open vertices; otherwise
/// each chain of open vertices joined by open edges collapses to one vertex.
pub fn derive_dual(s: &Surface) -> DualSurface {
    let num_faces = s.num_faces();

    // closed-boundary runs
    let mut runs = UnionFind::new(s.num_edges());
    let mut closed_at_vertex: Vec<Option<usize>> = vec![None; s.num_vertices()];
    for (id, edge) in s.edges().iter().enumerate() {
        if edge.class != BoundaryClass::ClosedBoundary {
            continue;
        }
        for &v in &edge.ends {
            if s.is_open_vertex(v) {
                continue;
            }
            match closed_at_vertex[v] {
                Some(other) => {
                    runs.union(other, id);
                }
                None => closed_at_vertex[v] = Some(id),
            }
        }
    }
    let mut run_vertex: HashMap<usize, usize> = HashMap::new();
    for (id, edge) in s.edges().iter().enumerate() {
        if edge.class == BoundaryClass::ClosedBoundary {
            let root = runs.find(id);
            let next = num_faces + run_vertex.len();
            run_vertex.entry(root).or_insert(next);
        }
    }
    let num_dual_vertices = num_faces + run_vertex.len();
    let mut dual_open = vec![false; num_faces];
    dual_open.resize(num_dual_vertices, true);

    let mut dual_edges = Vec::with_capacity(s.num_qubits());
    for &e in s.qubit_edges() {
        let edge = s.edge(e);
        let mut faces = s.faces_of_edge(e);
        let first = faces.next().expect("validated edge lies on a face");
        let other = match edge.class {
            BoundaryClass::Interior => faces.next().expect("interior edge lies on two faces"),
            _ => run_vertex[&runs.find(e)],
        };
        let non_open_ends = edge.ends.iter().filter(|&&v| !s.is_open_vertex(v)).count();
        let class = if non_open_ends == 2 {
            BoundaryClass::Interior
        } else {
            BoundaryClass::ClosedBoundary
        };
        dual_edges.push(Edge {
            ends: [first, other],
            class,
        });
    }

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); s.num_vertices()];
    for (q, &e) in s.qubit_edges().iter().enumerate() {
        let [a, b] = s.edge(e).ends;
        incident[a].push(q);
        if b != a {
            incident[b].push(q);
        }
    }
    let mut dual_faces = Vec::with_capacity(s.num_non_open_vertices());
    for v in 0..s.num_vertices() {
        if s.is_open_vertex(v) {
            continue;
        }
        let mut face = incident[v].clone();
        if let Some(closed) = closed_at_vertex[v] {
            let w = run_vertex[&runs.find(closed)];
            face.push(dual_edges.len());
            dual_edges.push(Edge {
                ends: [w, w],
                class: BoundaryClass::OpenBoundary,
            });
        }
        dual_faces.push(face);
    }

    let dual = Surface::assemble(format!("{}*", s.name()), dual_open, dual_edges, dual_faces);
    debug_assert!(super::validate(&dual.to_data()).ok);
    let n = s.num_qubits();
    DualSurface {
        dual,
        to_dual: (0..n).collect(),
        to_primal: (0..n).collect(),
    }
}

/// Checks that `dual` realizes the transposed chain complex of `primal`
/// under its edge map: faces of `primal` match non-open vertices of the dual
/// and non-open vertices of `primal` match dual faces, by qubit support.
pub fn check_duality(primal: &Surface, dual: &DualSurface) -> ValidationReport {
    let mut violations = Vec::new();
    let d = &dual.dual;
    if primal.num_qubits() != d.num_qubits() {
        violations.push(Violation::new(
            "dual-mismatch",
            format!(
                "primal has {} qubits, dual {}",
                primal.num_qubits(),
                d.num_qubits()
            ),
        ));
        return ValidationReport::from_violations(violations);
    }
    let map = dual.edge_map();

    let mapped_face = |face: &[usize]| -> Vec<usize> {
        let mut qs: Vec<usize> = face
            .iter()
            .filter_map(|&e| primal.qubit_of_edge(e))
            .map(|q| map[q])
            .collect();
        qs.sort_unstable();
        qs
    };
    let mut primal_faces: Vec<Vec<usize>> = primal.faces().iter().map(|f| mapped_face(f)).collect();
    let mut dual_stars = qubit_stars(d, |q| q);
    primal_faces.sort();
    dual_stars.sort();
    if primal_faces != dual_stars {
        violations.push(Violation::new(
            "dual-mismatch",
            "faces of the primal do not match non-open vertices of the dual",
        ));
    }

    let mut primal_stars = qubit_stars(primal, |q| map[q]);
    let mut dual_faces: Vec<Vec<usize>> = d
        .faces()
        .iter()
        .map(|face| {
            let mut qs: Vec<usize> = face.iter().filter_map(|&e| d.qubit_of_edge(e)).collect();
            qs.sort_unstable();
            qs
        })
        .collect();
    primal_stars.sort();
    dual_faces.sort();
    if primal_stars != dual_faces {
        violations.push(Violation::new(
            "dual-mismatch",
            "non-open vertices of the primal do not match faces of the dual",
        ));
    }
    ValidationReport::from_violations(violations)
}

/// Qubits incident to each non-open vertex, relabeled by `relabel`.
fn qubit_stars(s: &Surface, relabel: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut stars: Vec<Vec<usize>> = vec![Vec::new(); s.num_vertices()];
    for (q, &e) in s.qubit_edges().iter().enumerate() {
        let [a, b] = s.edge(e).ends;
        stars[a].push(relabel(q));
        if b != a {
            stars[b].push(relabel(q));
        }
    }
    stars
        .into_iter()
        .enumerate()
        .filter(|(v, _)| !s.is_open_vertex(*v))
        .map(|(_, mut star)| {
            star.sort_unstable();
            star
        })
        .collect()
}
