//! Exact audits of the linear and affine subspace concentration inequalities.
//!
//! The measure is atomic, so the left-hand side for a subspace `A` depends
//! only on which atoms lie in `A`, and shrinking `A` to the hull of those
//! atoms can only lower its dimension and hence the right-hand side. The
//! finite family of hulls of atom subsets (the flats of the atom
//! configuration) is therefore an exhaustive and strictest set of test
//! subspaces.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{rank_and_solve, AffineSubspace, Matrix, Vector};
use crate::measure::{cone_volumes, ConeVolumeMeasure};
use crate::polytope::Polytope;
use crate::scalar::{int, Rational};

pub const DEFAULT_MAX_ATOMS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceKind {
    Linear,
    Affine,
}

impl std::str::FromStr for SubspaceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "linear" => Ok(SubspaceKind::Linear),
            "affine" => Ok(SubspaceKind::Affine),
            other => Err(format!("unknown subspace kind `{other}` (expected linear or affine)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceCandidate {
    pub kind: SubspaceKind,
    /// Every atom index whose polar vertex lies in the hull, ascending.
    pub generators: Vec<usize>,
    pub hull: AffineSubspace,
}

impl SubspaceCandidate {
    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    /// The candidate whose hull is spanned by the given atoms.
    pub fn from_atoms(mu: &ConeVolumeMeasure, kind: SubspaceKind, atoms: &[usize]) -> Result<Self> {
        let points = atoms
            .iter()
            .map(|&i| {
                mu.atoms()
                    .get(i)
                    .map(|a| a.polar_vertex.clone())
                    .ok_or(Error::IndexOutOfRange { index: i, len: mu.atoms().len() })
            })
            .collect::<Result<Vec<_>>>()?;
        let hull = match kind {
            SubspaceKind::Affine => crate::linalg::affine_hull(&points)?,
            SubspaceKind::Linear => AffineSubspace::linear_span(&points, mu.dim())?,
        };
        let generators = mu.atoms_in(&hull);
        Ok(SubspaceCandidate { kind, generators, hull })
    }

    /// Right-hand side of the inequality for a subspace of this dimension.
    pub fn bound(&self, ambient: usize, total: &Rational) -> Rational {
        concentration_bound(self.kind, self.dim(), ambient, total)
    }
}

/// `dim/n · total` (linear) or `(dim+1)/(n+1) · total` (affine).
pub fn concentration_bound(kind: SubspaceKind, dim: usize, ambient: usize, total: &Rational) -> Rational {
    let (num, den) = match kind {
        SubspaceKind::Linear => (dim, ambient),
        SubspaceKind::Affine => (dim + 1, ambient + 1),
    };
    total * Rational::new(num.into(), den.into())
}

/// Every distinct proper hull of a non-empty set of atoms, each listed once
/// with its maximal generator set, sorted by `(dim, generators)`.
///
/// Flats are grown one rank at a time: every flat of rank `r + 1` is the
/// closure of some rank-`r` flat plus one atom outside it.
pub fn enumerate_candidates(
    mu: &ConeVolumeMeasure,
    kind: SubspaceKind,
    max_atoms: usize,
) -> Result<Vec<SubspaceCandidate>> {
    let m = mu.atoms().len();
    if m > max_atoms {
        return Err(Error::TooManyAtoms { count: m, cap: max_atoms });
    }
    let n = mu.dim();
    // rank of the homogenized span: dim + 1 for affine hulls, dim for spans
    let max_rank = match kind {
        SubspaceKind::Affine => n,
        SubspaceKind::Linear => n.saturating_sub(1),
    };
    let flats = match IntegerAtoms::new(mu, kind) {
        Some(ints) => grow_flats(m, max_rank, |basis| ints.closure(basis)),
        None => None,
    };
    let flats = match flats {
        Some(f) => f,
        None => grow_flats(m, max_rank, |basis| {
            let hull = span_of(mu, kind, basis).ok()?;
            let mut mask = FixedBitSet::with_capacity(m);
            mask.extend(mu.atoms_in(&hull));
            Some(mask)
        })
        .expect("rational closure is total"),
    };
    let mut out = flats
        .into_iter()
        .map(|(basis, mask)| {
            Ok(SubspaceCandidate { kind, generators: mask.ones().collect(), hull: span_of(mu, kind, &basis)? })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| (a.dim(), &a.generators).cmp(&(b.dim(), &b.generators)));
    Ok(out)
}

fn span_of(mu: &ConeVolumeMeasure, kind: SubspaceKind, basis: &[usize]) -> Result<AffineSubspace> {
    let points: Vec<Vector> = basis.iter().map(|&i| mu.atoms()[i].polar_vertex.clone()).collect();
    match kind {
        SubspaceKind::Affine => crate::linalg::affine_hull(&points),
        SubspaceKind::Linear => AffineSubspace::linear_span(&points, mu.dim()),
    }
}

/// Closed flats as `(independent basis, member mask)`, or `None` when
/// `closure` gives up.
fn grow_flats(
    m: usize,
    max_rank: usize,
    closure: impl Fn(&[usize]) -> Option<FixedBitSet>,
) -> Option<Vec<(Vec<usize>, FixedBitSet)>> {
    if max_rank == 0 {
        return Some(Vec::new());
    }
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut layer = Vec::new();
    for i in 0..m {
        let mask = closure(&[i])?;
        if seen.insert(mask.clone()) {
            layer.push((vec![i], mask));
        }
    }
    let mut out = Vec::new();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (basis, mask) in &layer {
            if basis.len() >= max_rank {
                continue;
            }
            let mut covered = mask.clone();
            for x in 0..m {
                if covered.contains(x) {
                    continue;
                }
                let mut grown = basis.clone();
                grown.push(x);
                let closed = closure(&grown)?;
                covered.union_with(&closed);
                if seen.insert(closed.clone()) {
                    next.push((grown, closed));
                }
            }
        }
        out.append(&mut layer);
        layer = next;
    }
    Some(out)
}

/// Atoms as primitive integer vectors, homogenized with a trailing 1 for
/// affine hulls, so that every flat is a linear span.
struct IntegerAtoms {
    vectors: Vec<Vec<i128>>,
}

impl IntegerAtoms {
    fn new(mu: &ConeVolumeMeasure, kind: SubspaceKind) -> Option<Self> {
        let vectors = mu
            .atoms()
            .iter()
            .map(|a| {
                let mut coords: Vec<Rational> = a.polar_vertex.coords().to_vec();
                if kind == SubspaceKind::Affine {
                    coords.push(Rational::one());
                }
                let lcm = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                let scaled: Vec<BigInt> = coords.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
                let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                scaled.iter().map(|x| (x / &g).to_i128()).collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(IntegerAtoms { vectors })
    }

    /// Atoms in the span of `basis`; `None` on arithmetic overflow.
    fn closure(&self, basis: &[usize]) -> Option<FixedBitSet> {
        let mut echelon: Vec<(usize, Vec<i128>)> = Vec::with_capacity(basis.len());
        for &b in basis {
            let mut v = self.vectors[b].clone();
            reduce_against(&mut v, &echelon)?;
            let pivot = v.iter().position(|&x| x != 0)?;
            echelon.push((pivot, v));
        }
        let mut mask = FixedBitSet::with_capacity(self.vectors.len());
        for (i, y) in self.vectors.iter().enumerate() {
            let mut v = y.clone();
            reduce_against(&mut v, &echelon)?;
            if v.iter().all(|&x| x == 0) {
                mask.insert(i);
            }
        }
        Some(mask)
    }
}

/// Fraction-free elimination of the pivot columns of `echelon` from `v`,
/// keeping `v` primitive.
fn reduce_against(v: &mut [i128], echelon: &[(usize, Vec<i128>)]) -> Option<()> {
    for (pc, row) in echelon {
        let a = v[*pc];
        if a == 0 {
            continue;
        }
        let p = row[*pc];
        let g = p.gcd(&a);
        let (s, t) = (p / g, a / g);
        for (x, r) in v.iter_mut().zip(row) {
            *x = x.checked_mul(s)?.checked_sub(r.checked_mul(t)?)?;
        }
        let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
        if g > 1 {
            v.iter_mut().for_each(|x| *x /= g);
        }
    }
    Some(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Diagnosis {
    /// Single polar vertex `a`: equality iff the body is a pyramid over the
    /// facet with polar vertex `a`.
    PyramidWithBase { facet: usize, confirmed: bool },
    /// Supporting hyperplane of the polar body: equality iff the body is a
    /// pyramid with apex `v_A`, the point with `<v_A, a> = 1` on the hull.
    PyramidWithApex {
        apex: Vector,
        apex_vertex: Option<usize>,
        confirmed: bool,
    },
    /// Linear equality clause: the measure is concentrated on `L ∪ L'` for a
    /// complementary subspace `L'`.
    ComplementaryLinear {
        complement: Option<Vec<usize>>,
        complement_dim: Option<usize>,
    },
    /// Tight, but outside the characterized cases.
    Uncharacterized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRow {
    pub candidate: SubspaceCandidate,
    pub lhs: Rational,
    pub rhs: Rational,
    pub ratio: Rational,
    pub tight: bool,
    pub diagnosis: Option<Diagnosis>,
}

impl AuditRow {
    pub fn violates(&self) -> bool {
        self.lhs > self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub kind: SubspaceKind,
    pub dim: usize,
    pub total: Rational,
    pub rows: Vec<AuditRow>,
    pub max_ratio: Rational,
    pub pass: bool,
}

impl AuditReport {
    pub fn tight_rows(&self) -> impl Iterator<Item = (usize, &AuditRow)> {
        self.rows.iter().enumerate().filter(|(_, r)| r.tight)
    }

    pub fn violations(&self) -> impl Iterator<Item = (usize, &AuditRow)> {
        self.rows.iter().enumerate().filter(|(_, r)| r.violates())
    }

    pub fn row_for(&self, generators: &[usize]) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.candidate.generators == generators)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditOptions {
    /// Audit bodies whose centroid is not the origin (counterexample hunting).
    pub allow_noncentered: bool,
    pub max_atoms: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { allow_noncentered: false, max_atoms: DEFAULT_MAX_ATOMS }
    }
}

/// Evaluates every candidate of `mu` without equality diagnoses.
pub fn audit_measure(mu: &ConeVolumeMeasure, kind: SubspaceKind, max_atoms: usize) -> Result<AuditReport> {
    let candidates = enumerate_candidates(mu, kind, max_atoms)?;
    let n = mu.dim();
    let rows: Vec<AuditRow> = candidates
        .into_par_iter()
        .map(|candidate| {
            let lhs: Rational = candidate.generators.iter().map(|&i| &mu.atoms()[i].weight).sum();
            let rhs = candidate.bound(n, mu.total());
            let ratio = &lhs / &rhs;
            let tight = lhs == rhs;
            AuditRow { candidate, lhs, rhs, ratio, tight, diagnosis: None }
        })
        .collect();
    let max_ratio = rows.iter().map(|r| r.ratio.clone()).max().unwrap_or_else(Rational::zero);
    let pass = rows.iter().all(|r| !r.violates());
    Ok(AuditReport { kind, dim: n, total: mu.total().clone(), rows, max_ratio, pass })
}

/// Audits `p` against the linear or affine concentration inequality, with
/// equality diagnoses attached to every tight row.
pub fn check_scc(p: &Polytope, kind: SubspaceKind, opts: &AuditOptions) -> Result<AuditReport> {
    if !opts.allow_noncentered {
        let c = p.centroid();
        if !c.is_zero() {
            return Err(Error::NotCentered { centroid: c.to_string() });
        }
    }
    let mu = cone_volumes(p);
    let mut report = audit_measure(&mu, kind, opts.max_atoms)?;
    for row in report.rows.iter_mut().filter(|r| r.tight) {
        row.diagnosis = Some(equality_diagnosis(p, row)?);
    }
    Ok(report)
}

/// Classifies a tight row against the characterized equality cases.
pub fn equality_diagnosis(p: &Polytope, row: &AuditRow) -> Result<Diagnosis> {
    if !row.tight {
        return Err(Error::NotTight);
    }
    let c = &row.candidate;
    let n = p.dim();
    let polar: Vec<&Vector> = p.polar_vertices().collect();
    match c.kind {
        SubspaceKind::Affine if c.dim() == 0 => {
            let facet = c.generators[0];
            let confirmed = p.is_pyramid().iter().any(|&(_, base)| base == facet);
            Ok(Diagnosis::PyramidWithBase { facet, confirmed })
        }
        SubspaceKind::Affine if c.dim() + 1 == n && !c.hull.contains_origin() => {
            let apex = hyperplane_apex(&c.hull)?;
            if polar.iter().any(|a| a.dot(&apex) > Rational::one()) {
                return Ok(Diagnosis::Uncharacterized);
            }
            let apex_vertex = p.vertex_index(&apex);
            let confirmed = apex_vertex
                .is_some_and(|v| p.is_pyramid().iter().any(|&(a, _)| a == v));
            Ok(Diagnosis::PyramidWithApex { apex, apex_vertex, confirmed })
        }
        SubspaceKind::Linear => {
            let rest: Vec<Vector> = (0..polar.len())
                .filter(|i| !c.generators.contains(i))
                .map(|i| polar[i].clone())
                .collect();
            if rest.is_empty() {
                return Ok(Diagnosis::ComplementaryLinear { complement: None, complement_dim: None });
            }
            let other = AffineSubspace::linear_span(&rest, n)?;
            let mut both = c.hull.directions().to_vec();
            both.extend_from_slice(other.directions());
            let spans = crate::linalg::rank(&Matrix::with_cols(both, n)?) == n;
            if spans && c.dim() + other.dim() == n {
                let complement = (0..polar.len()).filter(|&i| other.contains(polar[i])).collect();
                Ok(Diagnosis::ComplementaryLinear {
                    complement: Some(complement),
                    complement_dim: Some(other.dim()),
                })
            } else {
                Ok(Diagnosis::ComplementaryLinear { complement: None, complement_dim: None })
            }
        }
        SubspaceKind::Affine => Ok(Diagnosis::Uncharacterized),
    }
}

/// The unique `v` with `<v, a> = 1` for all `a` in a hyperplane that misses
/// the origin.
fn hyperplane_apex(hull: &AffineSubspace) -> Result<Vector> {
    let n = hull.ambient_dim();
    let mut rows = vec![hull.base().clone()];
    rows.extend_from_slice(hull.directions());
    let mut rhs = vec![Rational::zero(); rows.len()];
    rhs[0] = int(1);
    let sol = rank_and_solve(&Matrix::with_cols(rows, n)?, Some(&Vector::new(rhs)))?;
    debug_assert_eq!(sol.rank, n);
    Ok(sol.solution.expect("hyperplane off the origin has a unique apex"))
}
