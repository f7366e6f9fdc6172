//! The pyramid tower `K^(j)` and the bookkeeping that carries an affine
//! subspace `A` of polar vertices up the tower as the linear subspace
//! `L^(j) = lin(ψ(A))`.
//!
//! `K^(j)` is the pyramid over `K^(j-1) × {1}` with apex `-(n+j) e_{n+j}`.
//! Its lateral facets are in bijection with the facets of `K^(j-1)`, with
//! polar vertices `φ(a)`; the top facet has polar vertex `e_{n+j}` and is
//! never tracked.

use num_traits::Zero;
use std::sync::Arc;

use crate::audit::{concentration_bound, SubspaceKind};
use crate::error::{Error, Result};
use crate::linalg::{AffineSubspace, Vector};
use crate::measure::{cone_volumes, ConeVolumeMeasure};
use crate::polytope::{convex_hull, Polytope};
use crate::scalar::{frac, int, Rational};

pub const DEFAULT_DEPTH_CAP: usize = 4;

fn ratio(num: usize, den: usize) -> Rational {
    frac(num as i64, den as i64)
}

/// `φ_k(x) = ((k+2)/(k+1) x, -1/(k+1))`.
pub fn phi_embed(k: usize, a: &Vector) -> Result<Vector> {
    if k == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    a.check_dim(k)?;
    Ok(a.scale(&ratio(k + 2, k + 1)).extend_with(-ratio(1, k + 1)))
}

/// `ψ = φ_{n+j-1} ∘ … ∘ φ_n`, the identity for `j = 0`.
pub fn psi_embed(n: usize, j: usize, a: &Vector) -> Result<Vector> {
    a.check_dim(n)?;
    let mut v = a.clone();
    for k in n..n + j {
        v = phi_embed(k, &v)?;
    }
    Ok(v)
}

/// Image of an affine subspace of R^k under `φ_k`.
fn phi_subspace(k: usize, a: &AffineSubspace) -> Result<AffineSubspace> {
    let base = phi_embed(k, a.base())?;
    let factor = ratio(k + 2, k + 1);
    let dirs: Vec<Vector> =
        a.directions().iter().map(|d| d.scale(&factor).extend_with(Rational::zero())).collect();
    AffineSubspace::new(base, &dirs)
}

/// `conv((p × {1}) ∪ {-(n+1) e_{n+1}})`, with facets found by a fresh hull.
pub fn lift_once(p: &Polytope) -> Result<Polytope> {
    let n = p.dim();
    let mut points: Vec<Vector> = p.vertices().iter().map(|v| v.extend_with(int(1))).collect();
    points.push(Vector::unit(n + 1, n).scale(&-int(n as i64 + 1)));
    convex_hull(&points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerOptions {
    pub depth_cap: usize,
    pub allow_noncentered: bool,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions { depth_cap: DEFAULT_DEPTH_CAP, allow_noncentered: false }
    }
}

#[derive(Clone, Debug)]
pub struct LiftLevel {
    pub j: usize,
    pub polytope: Arc<Polytope>,
    pub measure: Arc<ConeVolumeMeasure>,
    pub volume: Rational,
    /// Facet indices (into `polytope`) of the tracked part of the boundary.
    pub tracked: Vec<usize>,
    /// `ψ(A)` at this level (affine).
    pub embedded: AffineSubspace,
    /// `L^(j) = lin(ψ(A))`.
    pub subspace: AffineSubspace,
}

#[derive(Clone, Debug)]
pub struct LiftTower {
    base_dim: usize,
    affine: AffineSubspace,
    levels: Vec<LiftLevel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBound {
    pub j: usize,
    /// `((dim A + 1)(n+j+1)) / ((n+j)(n+1)) · vol(K)`.
    pub bound: Rational,
    /// `(dim A + 1)/(n+j) · vol(K^(j))` from the lifted volume.
    pub lifted_bound: Rational,
    /// Cone volume measure of `K^(j)` on `L^(j)`.
    pub linear_measure: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub bounds: Vec<ChainBound>,
    /// `(dim A + 1)/(n+1) · vol(K)`.
    pub limit: Rational,
    /// `Σ_{a_i ∈ A} w_i` on the base body.
    pub measure: Rational,
}

/// Builds `K^(0..=depth)` and tracks the facets whose polar vertices lie in
/// `affine`.
pub fn build_tower(p: &Polytope, affine: &AffineSubspace, depth: usize, opts: &TowerOptions) -> Result<LiftTower> {
    if depth > opts.depth_cap {
        return Err(Error::DepthCap { requested: depth, cap: opts.depth_cap });
    }
    if !opts.allow_noncentered {
        let c = p.centroid();
        if !c.is_zero() {
            return Err(Error::NotCentered { centroid: c.to_string() });
        }
    }
    let mut polytopes = vec![Arc::new(p.clone())];
    for _ in 0..depth {
        let next = lift_once(polytopes.last().expect("non-empty"))?;
        polytopes.push(Arc::new(next));
    }
    let levels = polytopes
        .into_iter()
        .enumerate()
        .map(|(j, polytope)| {
            let measure = Arc::new(cone_volumes(&polytope));
            let volume = polytope.volume();
            LiftLevel {
                j,
                polytope,
                measure,
                volume,
                tracked: Vec::new(),
                embedded: AffineSubspace::whole_space(0),
                subspace: AffineSubspace::whole_space(0),
            }
        })
        .collect();
    let shell = LiftTower { base_dim: p.dim(), affine: AffineSubspace::whole_space(0), levels };
    shell.retrack(affine)
}

impl LiftTower {
    /// The same tower of polytopes with a different tracked subspace.
    pub fn retrack(&self, affine: &AffineSubspace) -> Result<LiftTower> {
        let n = self.base_dim;
        if affine.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: affine.ambient_dim() });
        }
        let base_tracked = self.levels[0].measure.atoms_in(affine);
        let base_vertices: Vec<&Vector> =
            base_tracked.iter().map(|&i| &self.levels[0].measure.atoms()[i].polar_vertex).collect();

        let mut levels = Vec::with_capacity(self.levels.len());
        let mut embedded = affine.clone();
        for level in &self.levels {
            let j = level.j;
            if j > 0 {
                embedded = phi_subspace(n + j - 1, &embedded)?;
            }
            let mut tracked = Vec::with_capacity(base_vertices.len());
            for a in &base_vertices {
                let image = psi_embed(n, j, a)?;
                let idx = level.polytope.facet_index(&image).ok_or_else(|| {
                    Error::LiftInvariant(format!("ψ-image {image} is not a facet at level {j}"))
                })?;
                tracked.push(idx);
            }
            tracked.sort_unstable();
            levels.push(LiftLevel {
                tracked,
                subspace: embedded.linear_hull(),
                embedded: embedded.clone(),
                ..level.clone()
            });
        }
        Ok(LiftTower { base_dim: n, affine: affine.clone(), levels })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn affine(&self) -> &AffineSubspace {
        &self.affine
    }

    pub fn levels(&self) -> &[LiftLevel] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> Result<&LiftLevel> {
        self.levels.get(j).ok_or(Error::IndexOutOfRange { index: j, len: self.levels.len() })
    }

    /// Volume of the star pyramid `[F^(j), 0]`: the tracked facet cones at
    /// level `j`, which have pairwise disjoint interiors.
    pub fn star_pyramid_volume(&self, j: usize) -> Result<Rational> {
        let level = self.level(j)?;
        Ok(level.tracked.iter().map(|&i| &level.measure.atoms()[i].weight).sum())
    }

    /// Bounds from the linear inequality on each lifted body, computed both
    /// in closed form and from the lifted volume; the two must agree.
    pub fn chain_bounds(&self) -> Result<ChainReport> {
        let n = self.base_dim;
        let k = self.affine.dim();
        let vol = &self.levels[0].volume;
        let mut bounds = Vec::new();
        for level in &self.levels[1..] {
            let j = level.j;
            let bound = vol * ratio((k + 1) * (n + j + 1), (n + j) * (n + 1));
            let lifted_bound = &level.volume * ratio(k + 1, n + j);
            if bound != lifted_bound {
                return Err(Error::LiftInvariant(format!(
                    "level {j}: closed-form bound {bound} differs from lifted bound {lifted_bound}"
                )));
            }
            let linear_measure = level.measure.measure_on_affine(&level.subspace);
            bounds.push(ChainBound { j, bound, lifted_bound, linear_measure });
        }
        Ok(ChainReport {
            bounds,
            limit: concentration_bound(SubspaceKind::Affine, k, n, vol),
            measure: self.star_pyramid_volume(0)?,
        })
    }
}
