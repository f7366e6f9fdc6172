#![allow(dead_code)]

pub mod geometry;

use conevol::generator::{generate, GenSpec};
use conevol::Polytope;
use std::sync::OnceLock;

pub const MAX_ATOMS: usize = 20;

/// Deterministic corpus of centered polytopes in dimensions 2, 3 and 4 with
/// at most 12 vertices and at most `MAX_ATOMS` facets.
pub fn corpus() -> &'static [Polytope] {
    static CORPUS: OnceLock<Vec<Polytope>> = OnceLock::new();
    CORPUS.get_or_init(|| build_corpus(200))
}

pub fn build_corpus(count: usize) -> Vec<Polytope> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let n = 2 + out.len() % 3;
        seed += 1;
        let symmetrize = out.len() % 5 == 4;
        let max_points = match (n, symmetrize) {
            (_, true) => 6,
            (4, false) => 9,
            _ => 12,
        };
        let min_points = if symmetrize { n } else { n + 1 };
        let m = min_points + (seed as usize * 7) % (max_points - min_points + 1);
        let spec = GenSpec { symmetrize, coord_range: 4, ..GenSpec::new(n, m, 1000 + seed) };
        let p = generate(&spec).expect("generation succeeds");
        if p.facets().len() <= MAX_ATOMS && p.vertices().len() <= 12 {
            out.push(p);
        }
    }
    out
}
