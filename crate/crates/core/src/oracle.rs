//! Statistical and brute-force oracles used to cross-check the exact kernels.
//!
//! Random streams come from ChaCha8 keyed by the 64-bit seed (expanded with
//! `seed_from_u64`), one stream per chunk of [`CHUNK`] samples selected with
//! `set_stream(chunk_index)`. Chunk results are reduced in chunk order, so a
//! seed determines the answer regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::audit::{concentration_bound, SubspaceKind};
use crate::linalg::{AffineSubspace, Vector};
use crate::measure::ConeVolumeMeasure;
use crate::polytope::Polytope;
use crate::scalar::{frac, to_f64, Rational};

pub const CHUNK: u64 = 8192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub sample_count: u64,
    pub seed: u64,
    pub bounding_box: (Vector, Vector),
}

impl OracleConfig {
    /// Box spanned by the vertex coordinate extremes of `p`.
    pub fn for_polytope(p: &Polytope, sample_count: u64, seed: u64) -> Self {
        OracleConfig { sample_count: sample_count.max(1), seed, bounding_box: p.bounding_box() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
}

struct Sampler {
    lo: Vec<f64>,
    hi: Vec<f64>,
    normals: Vec<Vec<f64>>,
}

impl Sampler {
    fn new(p: &Polytope, cfg: &OracleConfig) -> Self {
        let (lo, hi) = &cfg.bounding_box;
        Sampler {
            lo: lo.iter().map(to_f64).collect(),
            hi: hi.iter().map(to_f64).collect(),
            normals: p.polar_vertices().map(|a| a.iter().map(to_f64).collect()).collect(),
        }
    }

    fn box_volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    fn draw(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        for (k, x) in out.iter_mut().enumerate() {
            let (l, h) = (self.lo[k], self.hi[k]);
            *x = if h > l { rng.random_range(l..h) } else { l };
        }
    }

    fn inside(&self, x: &[f64]) -> bool {
        self.normals.iter().all(|a| a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>() <= 1.0)
    }
}

fn chunks(cfg: &OracleConfig) -> Vec<(u64, u64)> {
    let n = cfg.sample_count;
    (0..n.div_ceil(CHUNK)).map(|c| (c, CHUNK.min(n - c * CHUNK))).collect()
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Hit-or-miss volume estimate with standard error
/// `box_vol · sqrt(f(1-f)/N)`.
pub fn mc_volume(p: &Polytope, cfg: &OracleConfig) -> Estimate {
    let sampler = Sampler::new(p, cfg);
    let dim = p.dim();
    let hits: u64 = chunks(cfg)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = chunk_rng(cfg.seed, c);
            let mut x = vec![0.0; dim];
            let mut hits = 0u64;
            for _ in 0..len {
                sampler.draw(&mut rng, &mut x);
                if sampler.inside(&x) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let n = cfg.sample_count as f64;
    let f = hits as f64 / n;
    let bv = sampler.box_volume();
    Estimate { estimate: f * bv, std_error: bv * (f * (1.0 - f) / n).sqrt() }
}

/// Sample-mean centroid of the hits, with per-coordinate standard errors.
pub fn mc_centroid(p: &Polytope, cfg: &OracleConfig) -> Vec<Estimate> {
    let sampler = Sampler::new(p, cfg);
    let dim = p.dim();
    let partials: Vec<(u64, Vec<f64>, Vec<f64>)> = chunks(cfg)
        .into_par_iter()
        .map(|(c, len)| {
            let mut rng = chunk_rng(cfg.seed, c);
            let mut x = vec![0.0; dim];
            let (mut hits, mut sum, mut sq) = (0u64, vec![0.0; dim], vec![0.0; dim]);
            for _ in 0..len {
                sampler.draw(&mut rng, &mut x);
                if sampler.inside(&x) {
                    hits += 1;
                    for k in 0..dim {
                        sum[k] += x[k];
                        sq[k] += x[k] * x[k];
                    }
                }
            }
            (hits, sum, sq)
        })
        .collect();
    let (mut hits, mut sum, mut sq) = (0u64, vec![0.0; dim], vec![0.0; dim]);
    for (h, s, q) in partials {
        hits += h;
        for k in 0..dim {
            sum[k] += s[k];
            sq[k] += q[k];
        }
    }
    let h = hits.max(1) as f64;
    (0..dim)
        .map(|k| {
            let mean = sum[k] / h;
            let var = (sq[k] / h - mean * mean).max(0.0);
            Estimate { estimate: mean, std_error: (var / h).sqrt() }
        })
        .collect()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.random_range(-3i64..=3), rng.random_range(1i64..=3))
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| random_rational(rng)).collect())
}

/// `lhs/rhs` for one explicit subspace, using its own dimension.
pub fn subspace_ratio(mu: &ConeVolumeMeasure, kind: SubspaceKind, sub: &AffineSubspace) -> Rational {
    let lhs = mu.measure_on_affine(sub);
    lhs / concentration_bound(kind, sub.dim(), mu.dim(), mu.total())
}

/// Worst `lhs/rhs` over randomly sampled subspaces, evaluated directly.
///
/// Subspaces are anchored at a random atom or a random rational point, with
/// directions mixing differences to further random atoms and random
/// rational vectors, so that samples actually hit atoms. The right-hand side
/// uses the sampled subspace's own dimension.
pub fn brute_force_audit(mu: &ConeVolumeMeasure, kind: SubspaceKind, trials: usize, seed: u64) -> Rational {
    let n = mu.dim();
    let m = mu.atoms().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Rational::from_integer(0.into());
    for _ in 0..trials {
        let target = match kind {
            SubspaceKind::Affine => rng.random_range(0..n),
            SubspaceKind::Linear => rng.random_range(1..n.max(2)),
        };
        let anchor = |rng: &mut ChaCha8Rng| {
            if m > 0 && rng.random_bool(0.8) {
                mu.atoms()[rng.random_range(0..m)].polar_vertex.clone()
            } else {
                random_vector(rng, n)
            }
        };
        let base = match kind {
            SubspaceKind::Affine => anchor(&mut rng),
            SubspaceKind::Linear => Vector::zeros(n),
        };
        let mut dirs = Vec::new();
        for _ in 0..target {
            let d = match kind {
                SubspaceKind::Affine if rng.random_bool(0.7) => anchor(&mut rng).sub(&base),
                SubspaceKind::Linear if rng.random_bool(0.7) => anchor(&mut rng),
                _ => random_vector(&mut rng, n),
            };
            dirs.push(d);
        }
        let Ok(sub) = AffineSubspace::new(base, &dirs) else { continue };
        let proper = match kind {
            SubspaceKind::Affine => sub.dim() < n,
            SubspaceKind::Linear => sub.dim() >= 1 && sub.dim() < n,
        };
        if !proper {
            continue;
        }
        let r = subspace_ratio(mu, kind, &sub);
        if r > worst {
            worst = r;
        }
    }
    worst
}
