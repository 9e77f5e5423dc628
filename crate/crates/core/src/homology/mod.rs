//! Induced homology of erasure patterns and the correctability verdict.
//!
//! For an erasure `ℰ ⊆ E̊` of a surface `G` with dual `G*`, the rank of the
//! homology covered by `ℰ` is
//!
//! ```text
//! h1(G, ℰ) = |ℰ| - |V̊| + κ(G_ℰ; no open vertex) - κ(G*_Ē; no open vertex) + κ(G; no closed edge)
//! ```
//!
//! where `G_ℰ = (V, ℰ)`, `G*_Ē = (V*, E̊ \ ℰ)` and the last term counts the
//! components of `(V, E̊)` containing no closed boundary edge. The erasure is
//! correctable iff `h1(G, ℰ) + h1(G*, ℰ*) = 0`. Every term is a connected
//! component count, so a verdict costs a handful of union-find passes.
//!
//! [`oracle`] recomputes the same rank from the boundary matrices by GF(2)
//! elimination, independently of the component counts.

pub mod oracle;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::cellulation::{BoundaryClass, DualSurface, Surface};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("erasure pattern has length {found}, surface has {expected} qubits")]
    LengthMismatch { expected: usize, found: usize },
}

/// Erased qubits, as a bit-vector over the qubit index of a surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    bits: FixedBitSet,
}

impl ErasurePattern {
    /// No qubit erased.
    pub fn empty(n: usize) -> ErasurePattern {
        ErasurePattern {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    /// Every qubit erased.
    pub fn full(n: usize) -> ErasurePattern {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        ErasurePattern { bits }
    }

    pub fn from_indices(n: usize, erased: impl IntoIterator<Item = usize>) -> ErasurePattern {
        let mut bits = FixedBitSet::with_capacity(n);
        for q in erased {
            bits.insert(q);
        }
        ErasurePattern { bits }
    }

    pub fn from_bools(erased: &[bool]) -> ErasurePattern {
        ErasurePattern::from_indices(
            erased.len(),
            erased
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(q, _)| q),
        )
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of erased qubits `|ℰ|`.
    pub fn weight(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn contains(&self, q: usize) -> bool {
        self.bits.contains(q)
    }

    pub fn set(&mut self, q: usize, erased: bool) {
        self.bits.set(q, erased);
    }

    /// Clears every bit, keeping the length.
    pub fn clear(&mut self) {
        self.bits.clear();
    }

    pub fn erased(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn kept(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.zeroes()
    }

    /// The complement `Ē = E̊ \ ℰ`.
    pub fn complement(&self) -> ErasurePattern {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        ErasurePattern { bits }
    }

    /// Relabels qubits: bit `q` moves to `map[q]`.
    pub fn mapped(&self, map: &[usize]) -> ErasurePattern {
        ErasurePattern::from_indices(self.len(), self.erased().map(|q| map[q]))
    }

    pub fn is_subset(&self, other: &ErasurePattern) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn as_bitset(&self) -> &FixedBitSet {
        &self.bits
    }

    pub(crate) fn bits_mut(&mut self) -> &mut FixedBitSet {
        &mut self.bits
    }
}

/// Rank of the homology covered by an erasure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct H1Rank(pub usize);

impl H1Rank {
    pub fn value(self) -> usize {
        self.0
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }
}

/// Outcome of the correctability test.
///
/// `h1_primal > 0` iff the erasure covers a logical Z error, `h1_dual > 0`
/// iff it covers a logical X error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub correctable: bool,
    pub h1_primal: H1Rank,
    pub h1_dual: H1Rank,
}

/// The individual terms of the `h1` formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct H1Terms {
    /// `|ℰ|`
    pub erased: usize,
    /// `|V̊|`
    pub non_open_vertices: usize,
    /// Components of `(V, ℰ)` without an open vertex.
    pub erased_components: usize,
    /// Components of `(V*, Ē)` without an open dual vertex.
    pub dual_kept_components: usize,
    /// Components of `(V, E̊)` without a closed boundary edge.
    pub closed_free_components: usize,
}

impl H1Terms {
    /// `dim Ker ∂₁` restricted to chains supported in `ℰ`.
    pub fn cycle_dim(&self) -> usize {
        self.erased + self.erased_components - self.non_open_vertices
    }

    /// `dim C₂^ℰ`, the face sets whose boundary lies inside `ℰ`.
    pub fn face_chain_dim(&self) -> usize {
        self.dual_kept_components
    }

    /// `dim im ∂₂^ℰ`.
    pub fn boundary_dim(&self) -> usize {
        self.dual_kept_components - self.closed_free_components
    }

    pub fn rank(&self) -> H1Rank {
        H1Rank(self.cycle_dim() - self.boundary_dim())
    }
}

/// Which elements exclude a component from [`filtered_components`].
#[derive(Debug, Clone, Copy)]
pub enum Forbidden<'a> {
    Nothing,
    Vertices(&'a [usize]),
    /// Indices into the edge list.
    Edges(&'a [usize]),
}

/// Counts connected components of `(0..num_vertices, edges)` that contain no
/// forbidden element. Isolated vertices are components.
pub fn filtered_components(
    num_vertices: usize,
    edges: &[[usize; 2]],
    forbidden: Forbidden<'_>,
) -> usize {
    let mut uf = UnionFind::new(num_vertices);
    for &[a, b] in edges {
        uf.union(a, b);
    }
    let mut tainted = vec![false; num_vertices];
    match forbidden {
        Forbidden::Nothing => {}
        Forbidden::Vertices(vs) => {
            for &v in vs {
                let root = uf.find(v);
                tainted[root] = true;
            }
        }
        Forbidden::Edges(es) => {
            for &e in es {
                let root = uf.find(edges[e][0]);
                tainted[root] = true;
            }
        }
    }
    (0..num_vertices)
        .filter(|&v| uf.find(v) == v && !tainted[v])
        .count()
}

/// One surface prepared for repeated component counting, with its qubit
/// edges listed in the order of the erasure patterns it will receive.
#[derive(Debug, Clone)]
struct Side {
    // open vertices pre-merged into a sentinel at index num_vertices
    template: UnionFind,
    ends: Vec<[u32; 2]>,
    non_open_vertices: usize,
    closed_free_components: usize,
}

impl Side {
    /// `qubit_edges[q]` is the edge of `s` carrying pattern position `q`.
    fn new(s: &Surface, qubit_edges: impl Iterator<Item = usize>) -> Side {
        let nv = s.num_vertices();
        let mut template = UnionFind::new(nv + 1);
        for v in 0..nv {
            if s.is_open_vertex(v) {
                template.union(v, nv);
            }
        }
        let ends: Vec<[u32; 2]> = qubit_edges
            .map(|e| {
                let [a, b] = s.edge(e).ends;
                [a as u32, b as u32]
            })
            .collect();

        let edge_list: Vec<[usize; 2]> = s.qubit_edges().iter().map(|&e| s.edge(e).ends).collect();
        let closed: Vec<usize> = s
            .qubit_edges()
            .iter()
            .enumerate()
            .filter(|(_, &e)| s.edge(e).class == BoundaryClass::ClosedBoundary)
            .map(|(q, _)| q)
            .collect();
        let closed_free_components = filtered_components(nv, &edge_list, Forbidden::Edges(&closed));

        Side {
            template,
            ends,
            non_open_vertices: s.num_non_open_vertices(),
            closed_free_components,
        }
    }

    /// Components without an open vertex in the graph keeping the qubit
    /// edges listed by `qubits`.
    fn open_free_components(
        &self,
        uf: &mut UnionFind,
        qubits: impl Iterator<Item = usize>,
    ) -> usize {
        uf.reset_from(&self.template);
        for q in qubits {
            let [a, b] = self.ends[q];
            uf.union(a as usize, b as usize);
        }
        // the sentinel component holds every open vertex
        uf.components() - 1
    }
}

/// Reusable union-find buffer for [`Decider`] calls.
#[derive(Debug, Clone)]
pub struct Scratch {
    uf: UnionFind,
}

/// A surface and its dual prepared for fast verdicts on many erasures.
///
/// Patterns are indexed by the primal qubit order.
#[derive(Debug, Clone)]
pub struct Decider {
    primal: Side,
    dual: Side,
    n: usize,
}

impl Decider {
    pub fn new(s: &Surface, dual: &DualSurface) -> Decider {
        let map = dual.edge_map();
        Decider {
            primal: Side::new(s, s.qubit_edges().iter().copied()),
            dual: Side::new(&dual.dual, map.iter().map(|&d| dual.dual.edge_of_qubit(d))),
            n: s.num_qubits(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn scratch(&self) -> Scratch {
        let size = self.primal.template.len().max(self.dual.template.len());
        Scratch {
            uf: UnionFind::new(size),
        }
    }

    fn check(&self, e: &ErasurePattern) -> Result<(), HomologyError> {
        if e.len() != self.n {
            return Err(HomologyError::LengthMismatch {
                expected: self.n,
                found: e.len(),
            });
        }
        Ok(())
    }

    fn terms(
        &self,
        side: &Side,
        other: &Side,
        e: &ErasurePattern,
        scratch: &mut Scratch,
    ) -> H1Terms {
        H1Terms {
            erased: e.weight(),
            non_open_vertices: side.non_open_vertices,
            erased_components: side.open_free_components(&mut scratch.uf, e.erased()),
            dual_kept_components: other.open_free_components(&mut scratch.uf, e.kept()),
            closed_free_components: side.closed_free_components,
        }
    }

    /// Terms of `h1(G, ℰ)`.
    pub fn primal_terms(
        &self,
        e: &ErasurePattern,
        scratch: &mut Scratch,
    ) -> Result<H1Terms, HomologyError> {
        self.check(e)?;
        Ok(self.terms(&self.primal, &self.dual, e, scratch))
    }

    /// Terms of `h1(G*, ℰ*)`.
    pub fn dual_terms(
        &self,
        e: &ErasurePattern,
        scratch: &mut Scratch,
    ) -> Result<H1Terms, HomologyError> {
        self.check(e)?;
        Ok(self.terms(&self.dual, &self.primal, e, scratch))
    }

    pub fn h1_primal(
        &self,
        e: &ErasurePattern,
        scratch: &mut Scratch,
    ) -> Result<H1Rank, HomologyError> {
        Ok(self.primal_terms(e, scratch)?.rank())
    }

    pub fn h1_dual(
        &self,
        e: &ErasurePattern,
        scratch: &mut Scratch,
    ) -> Result<H1Rank, HomologyError> {
        Ok(self.dual_terms(e, scratch)?.rank())
    }

    pub fn verdict(
        &self,
        e: &ErasurePattern,
        scratch: &mut Scratch,
    ) -> Result<Verdict, HomologyError> {
        let h1_primal = self.h1_primal(e, scratch)?;
        let h1_dual = self.h1_dual(e, scratch)?;
        Ok(Verdict {
            correctable: h1_primal.0 + h1_dual.0 == 0,
            h1_primal,
            h1_dual,
        })
    }
}

/// Terms of the `h1` formula for `e` on `s`.
pub fn induced_h1_terms(
    s: &Surface,
    dual: &DualSurface,
    e: &ErasurePattern,
) -> Result<H1Terms, HomologyError> {
    let decider = Decider::new(s, dual);
    let mut scratch = decider.scratch();
    decider.primal_terms(e, &mut scratch)
}

/// Rank of the homology of `s` covered by `e`.
pub fn induced_h1(
    s: &Surface,
    dual: &DualSurface,
    e: &ErasurePattern,
) -> Result<H1Rank, HomologyError> {
    Ok(induced_h1_terms(s, dual, e)?.rank())
}

/// Decides whether `e` is a correctable erasure for the surface code of `s`.
pub fn is_correctable(
    s: &Surface,
    dual: &DualSurface,
    e: &ErasurePattern,
) -> Result<Verdict, HomologyError> {
    let decider = Decider::new(s, dual);
    let mut scratch = decider.scratch();
    decider.verdict(e, &mut scratch)
}

/// Number of logical qubits `k`, the rank covered by erasing every qubit.
pub fn logical_qubit_count(s: &Surface, dual: &DualSurface) -> usize {
    induced_h1(s, dual, &ErasurePattern::full(s.num_qubits()))
        .expect("full pattern has the surface length")
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_toric;

    #[test]
    fn edgeless_graph_counts_unforbidden_singletons() {
        assert_eq!(filtered_components(5, &[], Forbidden::Vertices(&[1, 3])), 3);
    }

    #[test]
    fn path_with_forbidden_endpoint() {
        // a - b - c, d isolated
        let edges = [[0, 1], [1, 2]];
        assert_eq!(filtered_components(4, &edges, Forbidden::Vertices(&[0])), 1);
        assert_eq!(filtered_components(4, &edges, Forbidden::Edges(&[1])), 1);
        assert_eq!(filtered_components(4, &edges, Forbidden::Nothing), 2);
    }

    #[test]
    fn toric_graph_is_connected() {
        let (s, _) = gen_toric(2).unwrap();
        let edges: Vec<[usize; 2]> = s.edges().iter().map(|e| e.ends).collect();
        assert_eq!(
            filtered_components(s.num_vertices(), &edges, Forbidden::Nothing),
            1
        );
    }

    #[test]
    fn pattern_basics() {
        let e = ErasurePattern::from_indices(6, [1, 4]);
        assert_eq!(e.weight(), 2);
        assert_eq!(e.complement().weight(), 4);
        assert!(e.is_subset(&ErasurePattern::full(6)));
        assert_eq!(
            e.mapped(&[5, 4, 3, 2, 1, 0]).erased().collect::<Vec<_>>(),
            vec![1, 4]
        );
        assert_eq!(e.kept().count(), 4);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let (s, d) = gen_toric(2).unwrap();
        let err = is_correctable(&s, &d, &ErasurePattern::empty(7)).unwrap_err();
        assert_eq!(
            err,
            HomologyError::LengthMismatch {
                expected: 8,
                found: 7
            }
        );
    }

    #[test]
    fn toric_code_has_two_logical_qubits() {
        for d in 2..=5 {
            let (s, dual) = gen_toric(d).unwrap();
            assert_eq!(logical_qubit_count(&s, &dual), 2);
        }
    }

    #[test]
    fn empty_erasure_is_trivial() {
        let (s, dual) = gen_toric(3).unwrap();
        let v = is_correctable(&s, &dual, &ErasurePattern::empty(18)).unwrap();
        assert!(v.correctable);
        assert_eq!((v.h1_primal, v.h1_dual), (H1Rank(0), H1Rank(0)));
    }
}
