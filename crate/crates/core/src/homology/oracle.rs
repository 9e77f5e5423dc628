//! Reference computation of the induced homology rank by GF(2) linear algebra.
//!
//! With boundary matrices `∂₁` (non-open vertices × qubits) and `∂₂`
//! (qubits × faces), the cycles supported in `ℰ` form the kernel of `∂₁`
//! restricted to the columns in `ℰ`, and the face chains whose boundary lies
//! in `ℰ` form the kernel of `∂₂` restricted to the rows in `Ē`. Hence
//!
//! ```text
//! dim Ker ∂₁^ℰ = |ℰ| - rank ∂₁[:, ℰ]
//! dim C₂^ℰ     = |F| - rank ∂₂[Ē, :]
//! dim im ∂₂^ℰ  = rank ∂₂ - rank ∂₂[Ē, :]
//! ```
//!
//! Intended for small surfaces (a few thousand edges).

use fixedbitset::FixedBitSet;

use super::ErasurePattern;
use crate::cellulation::Surface;

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<FixedBitSet>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Gf2Matrix {
        Gf2Matrix {
            cols,
            rows: vec![FixedBitSet::with_capacity(cols); rows],
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].contains(c)
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r].toggle(c);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|row| row.is_clear())
    }

    /// Keeps the columns selected by `keep`.
    pub fn select_cols(&self, keep: impl Fn(usize) -> bool) -> Gf2Matrix {
        let kept: Vec<usize> = (0..self.cols).filter(|&c| keep(c)).collect();
        let mut out = Gf2Matrix::zeros(self.rows.len(), kept.len());
        for (r, row) in self.rows.iter().enumerate() {
            for (new_c, &c) in kept.iter().enumerate() {
                if row.contains(c) {
                    out.rows[r].insert(new_c);
                }
            }
        }
        out
    }

    /// Keeps the rows selected by `keep`.
    pub fn select_rows(&self, keep: impl Fn(usize) -> bool) -> Gf2Matrix {
        Gf2Matrix {
            cols: self.cols,
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|(r, _)| keep(*r))
                .map(|(_, row)| row.clone())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.num_rows(), "dimension mismatch");
        let mut out = Gf2Matrix::zeros(self.rows.len(), other.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for k in row.ones() {
                out.rows[r].symmetric_difference_with(&other.rows[k]);
            }
        }
        out
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].contains(c)) else {
                continue;
            };
            rows.swap(rank, pivot);
            let (done, rest) = rows.split_at_mut(rank + 1);
            let pivot_row = &done[rank];
            for row in rest.iter_mut() {
                if row.contains(c) {
                    row.symmetric_difference_with(pivot_row);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

/// The chain complex `C₂ → C₁ → C₀` of a surface.
#[derive(Debug, Clone)]
pub struct BoundaryMaps {
    /// Rows: non-open vertices. Columns: qubits.
    pub d1: Gf2Matrix,
    /// Rows: qubits. Columns: faces.
    pub d2: Gf2Matrix,
}

impl BoundaryMaps {
    pub fn new(s: &Surface) -> BoundaryMaps {
        let mut row_of_vertex = vec![usize::MAX; s.num_vertices()];
        let mut next = 0;
        for (v, slot) in row_of_vertex.iter_mut().enumerate() {
            if !s.is_open_vertex(v) {
                *slot = next;
                next += 1;
            }
        }
        let mut d1 = Gf2Matrix::zeros(next, s.num_qubits());
        for (q, &e) in s.qubit_edges().iter().enumerate() {
            for v in s.edge(e).ends {
                if !s.is_open_vertex(v) {
                    d1.flip(row_of_vertex[v], q);
                }
            }
        }
        let mut d2 = Gf2Matrix::zeros(s.num_qubits(), s.num_faces());
        for (f, face) in s.faces().iter().enumerate() {
            for &e in face {
                if let Some(q) = s.qubit_of_edge(e) {
                    d2.flip(q, f);
                }
            }
        }
        BoundaryMaps { d1, d2 }
    }

    /// Whether `∂₁ ∘ ∂₂ = 0`.
    pub fn is_chain_complex(&self) -> bool {
        self.d1.mul(&self.d2).is_zero()
    }

    /// `dim Ker ∂₁^ℰ`: cycles supported in `e`.
    pub fn cycle_dim(&self, e: &ErasurePattern) -> usize {
        e.weight() - self.d1.select_cols(|q| e.contains(q)).rank()
    }

    /// `dim C₂^ℰ`: face chains with boundary inside `e`.
    pub fn face_chain_dim(&self, e: &ErasurePattern) -> usize {
        self.d2.num_cols() - self.kept_rank(e)
    }

    /// `dim im ∂₂^ℰ`: boundaries supported in `e`.
    pub fn boundary_dim(&self, e: &ErasurePattern) -> usize {
        self.d2.rank() - self.kept_rank(e)
    }

    fn kept_rank(&self, e: &ErasurePattern) -> usize {
        self.d2.select_rows(|q| !e.contains(q)).rank()
    }

    pub fn h1(&self, e: &ErasurePattern) -> usize {
        self.cycle_dim(e) - self.boundary_dim(e)
    }
}

/// `dim H₁(G_ℰ)` by matrix ranks.
pub fn oracle_h1(s: &Surface, e: &ErasurePattern) -> usize {
    BoundaryMaps::new(s).h1(e)
}
