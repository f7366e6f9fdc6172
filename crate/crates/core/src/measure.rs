//! The cone volume measure of a polytope.
//!
//! For a polytope with the origin in its interior the measure is atomic:
//! facet `i` contributes the volume of `conv(F_i ∪ {0})` at its normal
//! direction. Atoms are keyed by the exact polar vertex `a_i` rather than the
//! unit normal `a_i/|a_i|`, which keeps everything rational; the two are in
//! bijection.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{AffineSubspace, Vector};
use crate::polytope::{simplex_volume, Polytope, Triangulator};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub polar_vertex: Vector,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeVolumeMeasure {
    dim: usize,
    atoms: Vec<Atom>,
    total: Rational,
}

impl ConeVolumeMeasure {
    /// Builds a measure from explicit atoms; `total` is their weight sum.
    pub fn from_atoms(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            a.polar_vertex.check_dim(dim)?;
        }
        let total = atoms.iter().map(|a| &a.weight).sum();
        Ok(ConeVolumeMeasure { dim, atoms, total })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    /// `Σ w_i a_i`, which vanishes for every polytope with interior origin.
    pub fn closure_sum(&self) -> Vector {
        self.atoms
            .iter()
            .fold(Vector::zeros(self.dim), |acc, a| acc.add(&a.polar_vertex.scale(&a.weight)))
    }

    /// Indices of atoms whose polar vertex lies in `subspace`.
    pub fn atoms_in(&self, subspace: &AffineSubspace) -> Vec<usize> {
        (0..self.atoms.len()).filter(|&i| subspace.contains(&self.atoms[i].polar_vertex)).collect()
    }

    /// Total weight of the atoms whose polar vertex lies in `subspace`.
    pub fn measure_on_affine(&self, subspace: &AffineSubspace) -> Rational {
        self.atoms
            .iter()
            .filter(|a| subspace.contains(&a.polar_vertex))
            .map(|a| &a.weight)
            .sum()
    }

    pub fn weight_of(&self, omega: &[usize]) -> Result<Rational> {
        omega
            .iter()
            .map(|&i| {
                self.atoms
                    .get(i)
                    .map(|a| a.weight.clone())
                    .ok_or(Error::IndexOutOfRange { index: i, len: self.atoms.len() })
            })
            .sum()
    }

    /// `f_ω(x) = Σ_{i∈ω} w_i (1 - <x, a_i>)`: the cone volume of `K - x` on
    /// the normals indexed by `omega`. Affine in `x`.
    pub fn translated_weight(&self, omega: &[usize], x: &Vector) -> Result<Rational> {
        x.check_dim(self.dim)?;
        if self.atoms.iter().any(|a| a.polar_vertex.dot(x) > Rational::one()) {
            return Err(Error::OutsidePolytope);
        }
        let mut acc = Rational::zero();
        for &i in omega {
            let atom = self
                .atoms
                .get(i)
                .ok_or(Error::IndexOutOfRange { index: i, len: self.atoms.len() })?;
            acc += &atom.weight * (Rational::one() - atom.polar_vertex.dot(x));
        }
        Ok(acc)
    }
}

/// One atom per facet, in facet order. The weight of facet `i` is the exact
/// volume of `conv(F_i ∪ {0})`, summed over the cones from the origin over a
/// triangulation of the facet.
pub fn cone_volumes(p: &Polytope) -> ConeVolumeMeasure {
    let mut tri = Triangulator::new(p);
    let origin = Vector::zeros(p.dim());
    let atoms: Vec<Atom> = (0..p.facets().len())
        .map(|i| {
            let weight = tri
                .facet(i)
                .iter()
                .map(|s| {
                    let mut pts: Vec<&Vector> = Vec::with_capacity(s.len() + 1);
                    pts.push(&origin);
                    pts.extend(s.iter().map(|&k| &p.vertices()[k]));
                    simplex_volume(&pts)
                })
                .sum();
            Atom { polar_vertex: p.facets()[i].polar_vertex.clone(), weight }
        })
        .collect();
    ConeVolumeMeasure::from_atoms(p.dim(), atoms).expect("atoms share the polytope's dimension")
}

/// `f_ω(x)` evaluated on `p` directly.
pub fn translated_weight(p: &Polytope, omega: &[usize], x: &Vector) -> Result<Rational> {
    cone_volumes(p).translated_weight(omega, x)
}
