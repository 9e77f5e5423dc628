mod common;

use common::{corpus, fixture, patterns_of_weight, random_pattern};
use proptest::prelude::*;
use squab::cellulation::load;
use squab::generators::{gen_bravyi_kitaev, gen_toric};
use squab::homology::oracle::{oracle_h1, BoundaryMaps};
use squab::homology::{
    filtered_components, induced_h1, induced_h1_terms, is_correctable, logical_qubit_count,
    Decider, ErasurePattern, Forbidden,
};

const PS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[test]
fn filtered_component_examples() {
    assert_eq!(filtered_components(5, &[], Forbidden::Vertices(&[1, 3])), 3);
    assert_eq!(
        filtered_components(4, &[[0, 1], [1, 2]], Forbidden::Vertices(&[0])),
        1
    );
    assert_eq!(
        filtered_components(4, &[[0, 1], [1, 2]], Forbidden::Edges(&[1])),
        1
    );
    assert_eq!(
        filtered_components(4, &[[0, 1], [1, 2]], Forbidden::Nothing),
        2
    );
    let (t, _) = gen_toric(2).unwrap();
    let edges: Vec<[usize; 2]> = t.edges().iter().map(|e| e.ends).collect();
    assert_eq!(
        filtered_components(t.num_vertices(), &edges, Forbidden::Nothing),
        1
    );
}

#[test]
fn boundary_maps_compose_to_zero() {
    for case in corpus() {
        assert!(
            BoundaryMaps::new(&case.surface).is_chain_complex(),
            "{}",
            case.surface.name()
        );
        assert!(
            BoundaryMaps::new(&case.dual.dual).is_chain_complex(),
            "dual of {}",
            case.surface.name()
        );
    }
}

#[test]
fn empty_erasure_has_no_homology() {
    for case in corpus() {
        let empty = ErasurePattern::empty(case.surface.num_qubits());
        assert_eq!(
            induced_h1(&case.surface, &case.dual, &empty)
                .unwrap()
                .value(),
            0,
            "{}",
            case.surface.name()
        );
        assert!(
            is_correctable(&case.surface, &case.dual, &empty)
                .unwrap()
                .correctable
        );
    }
}

#[test]
fn full_erasure_gives_twice_the_genus() {
    let (t, td) = gen_toric(5).unwrap();
    assert_eq!(
        induced_h1(&t, &td, &ErasurePattern::full(t.num_qubits()))
            .unwrap()
            .value(),
        2
    );
    let g2 = load(&fixture("genus2.squab.json")).unwrap();
    assert_eq!(g2.surface.euler_characteristic(), -2);
    let full = ErasurePattern::full(g2.surface.num_qubits());
    assert_eq!(induced_h1(&g2.surface, &g2.dual, &full).unwrap().value(), 4);
    assert_eq!(oracle_h1(&g2.surface, &full), 4);
}

#[test]
fn full_erasure_matches_oracle_and_dual_count() {
    for case in corpus() {
        let s = &case.surface;
        let k = logical_qubit_count(s, &case.dual);
        assert_eq!(
            k,
            oracle_h1(s, &ErasurePattern::full(s.num_qubits())),
            "{}",
            s.name()
        );
        assert_eq!(
            k,
            logical_qubit_count(&case.dual.dual, &case.dual.reversed(s)),
            "{}",
            s.name()
        );
        assert_eq!(s.num_qubits(), case.dual.dual.num_qubits());
        if k > 0 {
            assert!(
                !is_correctable(s, &case.dual, &ErasurePattern::full(s.num_qubits()))
                    .unwrap()
                    .correctable
            );
        }
    }
}

#[test]
fn toric_horizontal_loop_and_face_boundary() {
    let (t, td) = gen_toric(3).unwrap();
    // horizontal edges of row 0 have ids 0, 1, 2 and form a non-contractible loop
    let row = ErasurePattern::from_indices(18, [0, 1, 2]);
    assert_eq!(induced_h1(&t, &td, &row).unwrap().value(), 1);
    assert_eq!(oracle_h1(&t, &row), 1);
    let face: Vec<usize> = t
        .face(0)
        .iter()
        .filter_map(|&e| t.qubit_of_edge(e))
        .collect();
    let face = ErasurePattern::from_indices(18, face);
    assert_eq!(induced_h1(&t, &td, &face).unwrap().value(), 0);
    assert_eq!(oracle_h1(&t, &face), 0);
}

#[test]
fn toric_d2_small_erasures() {
    let (t, td) = gen_toric(2).unwrap();
    for e in patterns_of_weight(8, 1) {
        assert!(is_correctable(&t, &td, &e).unwrap().correctable);
    }
    let lp = ErasurePattern::from_indices(8, [0, 1]);
    let v = is_correctable(&t, &td, &lp).unwrap();
    assert!(!v.correctable);
    assert_eq!(v.h1_primal.value(), 1);
    assert_eq!(oracle_h1(&t, &lp), 1);
}

#[test]
fn length_mismatch_is_an_error() {
    let (t, td) = gen_bravyi_kitaev(3).unwrap();
    assert!(induced_h1(&t, &td, &ErasurePattern::empty(12)).is_err());
    assert!(is_correctable(&t, &td, &ErasurePattern::empty(14)).is_err());
}

fn corpus_strategy() -> impl Strategy<Value = (usize, usize, u64)> {
    let len = corpus().len();
    (0..len, 0..PS.len(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn formula_equals_oracle((idx, pi, seed) in corpus_strategy()) {
        let case = &corpus()[idx];
        let s = &case.surface;
        let e = random_pattern(s.num_qubits(), PS[pi], seed);
        prop_assert_eq!(induced_h1(s, &case.dual, &e).unwrap().value(), oracle_h1(s, &e));
        let dual_e = e.mapped(case.dual.edge_map());
        let v = is_correctable(s, &case.dual, &e).unwrap();
        prop_assert_eq!(v.h1_dual.value(), oracle_h1(&case.dual.dual, &dual_e));
        prop_assert_eq!(v.correctable, v.h1_primal.value() + v.h1_dual.value() == 0);
    }

    #[test]
    fn formula_terms_match_linear_algebra((idx, pi, seed) in corpus_strategy()) {
        let case = &corpus()[idx];
        let s = &case.surface;
        let maps = BoundaryMaps::new(s);
        let e = random_pattern(s.num_qubits(), PS[pi], seed);
        let terms = induced_h1_terms(s, &case.dual, &e).unwrap();
        prop_assert_eq!(terms.cycle_dim(), maps.cycle_dim(&e));
        prop_assert_eq!(terms.face_chain_dim(), maps.face_chain_dim(&e));
        prop_assert_eq!(terms.boundary_dim(), maps.boundary_dim(&e));
    }

    #[test]
    fn covered_homology_only_grows((idx, pi, seed) in corpus_strategy(), extra in any::<u64>()) {
        let case = &corpus()[idx];
        let s = &case.surface;
        let decider = Decider::new(s, &case.dual);
        let mut scratch = decider.scratch();
        let small = random_pattern(s.num_qubits(), PS[pi], seed);
        let mut big = small.clone();
        for q in random_pattern(s.num_qubits(), 0.3, extra).erased() {
            big.set(q, true);
        }
        prop_assert!(small.is_subset(&big));
        let a = decider.verdict(&small, &mut scratch).unwrap();
        let b = decider.verdict(&big, &mut scratch).unwrap();
        prop_assert!(a.h1_primal.value() <= b.h1_primal.value());
        prop_assert!(a.h1_dual.value() <= b.h1_dual.value());
        prop_assert!(a.h1_primal.value() <= small.weight());
    }
}
