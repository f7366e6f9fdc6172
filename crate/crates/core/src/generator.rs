//! Reproducible random polytopes and a few named bodies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::polytope::{convex_hull, Facet, Polytope};
use crate::scalar::{frac, int};

const RETRY_BUDGET: usize = 64;
const MAX_CANONICAL_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub dim: usize,
    pub vertex_count: usize,
    /// Numerators are drawn from `-coord_range..=coord_range`.
    pub coord_range: i64,
    pub denominator: i64,
    pub seed: u64,
    /// Append the antipode of every sampled point.
    pub symmetrize: bool,
    /// Translate the hull so that its centroid is the origin.
    pub center: bool,
}

impl GenSpec {
    pub fn new(dim: usize, vertex_count: usize, seed: u64) -> Self {
        GenSpec { dim, vertex_count, coord_range: 5, denominator: 1, seed, symmetrize: false, center: true }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if self.vertex_count < self.dim + 1 && !(self.symmetrize && 2 * self.vertex_count > self.dim) {
            return Err(Error::InvalidSpec(format!(
                "{} points cannot span R^{}",
                self.vertex_count, self.dim
            )));
        }
        if self.coord_range < 1 || self.denominator < 1 {
            return Err(Error::InvalidSpec("coordinate range and denominator must be positive".into()));
        }
        Ok(())
    }
}

/// Hull of sampled lattice points, optionally symmetrized and centered.
/// Degenerate samples are redrawn from the same stream.
pub fn generate(spec: &GenSpec) -> Result<Polytope> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..RETRY_BUDGET {
        let mut points: Vec<Vector> = (0..spec.vertex_count)
            .map(|_| {
                Vector::new(
                    (0..spec.dim)
                        .map(|_| frac(rng.random_range(-spec.coord_range..=spec.coord_range), spec.denominator))
                        .collect(),
                )
            })
            .collect();
        if spec.symmetrize {
            let antipodes: Vec<Vector> = points.iter().map(Vector::neg).collect();
            points.extend(antipodes);
        }
        if spec.center && !spec.symmetrize {
            // the vertex mean of a full-dimensional set is interior
            let mut mean = Vector::zeros(spec.dim);
            for p in &points {
                mean = mean.add(p);
            }
            let mean = mean.scale(&int(points.len() as i64).recip());
            points = points.iter().map(|p| p.sub(&mean)).collect();
        }
        match convex_hull(&points) {
            Ok(p) if spec.center => return Ok(p.center()),
            Ok(p) => return Ok(p),
            Err(Error::Degenerate { .. } | Error::OriginNotInterior) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed { attempts: RETRY_BUDGET })
}

pub const CANONICAL_NAMES: &[&str] =
    &["cube_n", "crosspolytope_n", "centered_simplex_n", "square_pyramid_3", "noncentered_triangle"];

/// Named bodies: `cube_n`, `crosspolytope_n`, `centered_simplex_n` for
/// `1 <= n <= 8`, plus `square_pyramid_3` and `noncentered_triangle`.
pub fn canonical(name: &str) -> Result<Polytope> {
    let unknown = || Error::UnknownCanonical(name.to_string());
    match name {
        "square_pyramid_3" => {
            let q = frac(-1, 4);
            let corner = |x: i64, y: i64| Vector::new(vec![int(x), int(y), q.clone()]);
            return convex_hull(&[
                corner(1, 1),
                corner(1, -1),
                corner(-1, 1),
                corner(-1, -1),
                Vector::new(vec![int(0), int(0), frac(3, 4)]),
            ]);
        }
        "noncentered_triangle" => {
            let h = frac(-1, 2);
            return convex_hull(&[
                Vector::from_ints(&[1, 0]),
                Vector::from_ints(&[0, 1]),
                Vector::new(vec![h.clone(), h]),
            ]);
        }
        _ => {}
    }
    let (family, n) = name.rsplit_once('_').ok_or_else(unknown)?;
    let n: usize = n.parse().map_err(|_| unknown())?;
    if n == 0 || n > MAX_CANONICAL_DIM {
        return Err(unknown());
    }
    match family {
        "cube" => Ok(cube(n)),
        "crosspolytope" => Ok(cube(n).polar()),
        "centered_simplex" => {
            let mut pts: Vec<Vector> = (0..n).map(|i| Vector::unit(n, i)).collect();
            pts.push(Vector::new(vec![int(-1); n]));
            convex_hull(&pts)
        }
        _ => Err(unknown()),
    }
}

/// `[-1, 1]^n`, assembled directly from its known facet structure.
fn cube(n: usize) -> Polytope {
    let vertices: Vec<Vector> = (0..1usize << n)
        .map(|bits| Vector::from_ints(&(0..n).map(|k| if bits >> k & 1 == 1 { 1 } else { -1 }).collect::<Vec<_>>()))
        .collect();
    let mut facets = Vec::with_capacity(2 * n);
    for k in 0..n {
        for (sign, bit) in [(1, 1), (-1, 0)] {
            let incident = (0..vertices.len()).filter(|&b| b >> k & 1 == bit).collect();
            facets.push(Facet { polar_vertex: Vector::unit(n, k).scale(&int(sign)), incident });
        }
    }
    Polytope::from_parts(n, vertices, facets)
}
