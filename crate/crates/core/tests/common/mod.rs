#![allow(dead_code)]

use squab::benchmark::{sample_erasure, trial_stream};
use squab::cellulation::{load, DualSurface, Surface};
use squab::generators::{
    gen_bravyi_kitaev, gen_planar, gen_toric, HoleSpec, PlanarSpec, SideClass, Sides,
};
use squab::homology::ErasurePattern;

pub struct Case {
    pub surface: Surface,
    pub dual: DualSurface,
}

pub fn fixture(name: &str) -> Vec<u8> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn planar_fixtures() -> Vec<PlanarSpec> {
    use SideClass::*;
    let closed = Sides::all(Closed);
    let lr_open = Sides {
        top: Closed,
        bottom: Closed,
        left: Open,
        right: Open,
    };
    vec![
        PlanarSpec::new(4, 4, closed),
        PlanarSpec::new(6, 6, closed).with_hole(HoleSpec::uniform(2, 2, 2, 2, Closed)),
        PlanarSpec::new(6, 6, closed).with_hole(HoleSpec::uniform(2, 2, 2, 2, Open)),
        PlanarSpec::new(6, 6, lr_open),
        PlanarSpec::new(6, 6, closed).with_hole("2,2,2x2:oooocccc".parse().unwrap()),
        PlanarSpec::new(8, 8, closed)
            .with_hole(HoleSpec::uniform(1, 1, 2, 2, Closed))
            .with_hole(HoleSpec::uniform(5, 5, 2, 2, Open)),
        PlanarSpec::new(5, 7, lr_open).with_hole(HoleSpec::uniform(2, 2, 1, 3, Closed)),
    ]
}

/// Toric d = 2..6, Bravyi-Kitaev d = 2..5, the planar fixtures and the genus-2 surface.
pub fn corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for d in 2..=6 {
        let (surface, dual) = gen_toric(d).unwrap();
        out.push(Case { surface, dual });
    }
    for d in 2..=5 {
        let (surface, dual) = gen_bravyi_kitaev(d).unwrap();
        out.push(Case { surface, dual });
    }
    for spec in planar_fixtures() {
        let (surface, dual) = gen_planar(&spec).unwrap();
        out.push(Case { surface, dual });
    }
    let genus2 = load(&fixture("genus2.squab.json")).unwrap();
    out.push(Case {
        surface: genus2.surface,
        dual: genus2.dual,
    });
    out
}

pub fn random_pattern(n: usize, p: f64, seed: u64) -> ErasurePattern {
    sample_erasure(n, p, &mut trial_stream(seed, 0, 0))
}

/// All patterns on `n` qubits with exactly `weight` erased, in lexicographic order.
pub fn patterns_of_weight(n: usize, weight: usize) -> Vec<ErasurePattern> {
    fn rec(
        n: usize,
        start: usize,
        left: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<ErasurePattern>,
    ) {
        if left == 0 {
            out.push(ErasurePattern::from_indices(n, chosen.iter().copied()));
            return;
        }
        for q in start..=n - left {
            chosen.push(q);
            rec(n, q + 1, left - 1, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, weight, &mut Vec::new(), &mut out);
    out
}
