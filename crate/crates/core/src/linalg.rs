//! Small dense exact linear algebra: vectors, matrices, elimination,
//! determinants, solving and affine hulls.

use num_traits::{One, Zero};
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Deref, Index};

use crate::error::{Error, Result};
use crate::scalar::{bit_size, format_rational, int, literal, Rational};

/// A point or direction in R^n with exact coordinates.
///
/// Ordering is lexicographic by coordinate, which is what canonical
/// vertex and facet sorting relies on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector of R^dim (zero-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Rational) -> Vector {
        Vector(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }

    /// Appends one coordinate, embedding R^n into R^{n+1}.
    pub fn extend_with(&self, last: Rational) -> Vector {
        let mut coords = self.0.clone();
        coords.push(last);
        Vector(coords)
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found: self.dim() })
        }
    }
}

impl Deref for Vector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for Vector {
    fn from(coords: Vec<Rational>) -> Self {
        Vector(coords)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str(")")
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Elem(Rational);
        impl<'de> Deserialize<'de> for Elem {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                literal::deserialize(d).map(Elem)
            }
        }
        struct SeqVisitor;
        impl<'de> Visitor<'de> for SeqVisitor {
            type Value = Vector;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of rational literals")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vector, A::Error> {
                let mut coords = Vec::new();
                while let Some(Elem(c)) = seq.next_element()? {
                    coords.push(c);
                }
                Ok(Vector(coords))
            }
        }
        deserializer.deserialize_seq(SeqVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<Vector>,
    cols: usize,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vector::dim);
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.dim() });
        }
        Ok(Matrix { rows, cols })
    }

    /// Matrix with an explicit column count, so that zero-row matrices keep
    /// their shape.
    pub fn with_cols(rows: Vec<Vector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.dim() });
        }
        Ok(Matrix { rows, cols })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| Vector::from_ints(r)).collect())
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        Vector(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.cols)
            .map(|c| Vector(self.rows.iter().map(|r| r[c].clone()).collect()))
            .collect();
        Matrix { rows, cols: self.rows.len() }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.rows[r].0[c]
    }
}

/// Reduced row echelon form computed in place. Returns the pivot columns.
///
/// Among the nonzero candidates in a column the pivot with the smallest
/// bit size is chosen; ties go to the lowest row.
fn reduce(rows: &mut [Vec<Rational>], cols: usize) -> (Vec<usize>, bool) {
    let mut pivots = Vec::new();
    let mut odd_swaps = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| bit_size(&rows[i][c]))
        else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            odd_swaps = !odd_swaps;
        }
        let inv = rows[r][c].recip();
        for x in rows[r][c..].iter_mut() {
            *x *= &inv;
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let factor = other[c].clone();
            for (x, p) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, odd_swaps)
}

fn raw_rows(m: &Matrix) -> Vec<Vec<Rational>> {
    m.rows.iter().map(|r| r.0.clone()).collect()
}

pub fn determinant(m: &Matrix) -> Result<Rational> {
    let n = m.row_count();
    if n != m.col_count() {
        return Err(Error::DimensionMismatch { expected: n, found: m.col_count() });
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    // Fraction-carrying elimination without normalizing the pivot row.
    let mut rows = raw_rows(m);
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| bit_size(&rows[i][c]))
        else {
            return Ok(Rational::zero());
        };
        if p != c {
            rows.swap(p, c);
            det = -det;
        }
        let (head, tail) = rows.split_at_mut(c + 1);
        let pivot_row = &head[c];
        let inv = pivot_row[c].recip();
        for other in tail.iter_mut() {
            if other[c].is_zero() {
                continue;
            }
            let factor = &other[c] * &inv;
            for (x, p) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        det *= &pivot_row[c];
    }
    Ok(det)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub rank: usize,
    /// A particular solution with free variables set to zero, when a
    /// right-hand side was given and the system is consistent.
    pub solution: Option<Vector>,
}

pub fn rank_and_solve(m: &Matrix, rhs: Option<&Vector>) -> Result<Solution> {
    let cols = m.col_count();
    let mut rows = raw_rows(m);
    if let Some(b) = rhs {
        b.check_dim(m.row_count())?;
        for (row, bi) in rows.iter_mut().zip(b.iter()) {
            row.push(bi.clone());
        }
    }
    let width = if rhs.is_some() { cols + 1 } else { cols };
    let (mut pivots, _) = reduce(&mut rows, width);
    let solution = if rhs.is_some() {
        if pivots.last() == Some(&cols) {
            pivots.pop();
            None
        } else {
            let mut x = Vector::zeros(cols);
            for (r, &c) in pivots.iter().enumerate() {
                x.0[c] = rows[r][cols].clone();
            }
            Some(x)
        }
    } else {
        None
    };
    Ok(Solution { rank: pivots.len(), solution })
}

pub fn rank(m: &Matrix) -> usize {
    let mut rows = raw_rows(m);
    reduce(&mut rows, m.col_count()).0.len()
}

/// Nonzero rows of the reduced row echelon form: a canonical basis of the
/// row space.
pub fn row_space_basis(vectors: &[Vector], dim: usize) -> Vec<Vector> {
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.0.clone()).collect();
    let (pivots, _) = reduce(&mut rows, dim);
    rows.truncate(pivots.len());
    rows.into_iter().map(Vector).collect()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Matrix) -> Vec<Vector> {
    let cols = m.col_count();
    let mut rows = raw_rows(m);
    let (pivots, _) = reduce(&mut rows, cols);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut x = Vector::zeros(cols);
            x.0[free] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                x.0[c] = -rows[r][free].clone();
            }
            x
        })
        .collect()
}

/// An affine subspace `base + span(directions)` of R^n, stored canonically:
/// directions are in reduced row echelon form and the base point has zero
/// entries in the pivot columns. Two equal subspaces therefore compare equal.
///
/// The implicit description `normals · x = offsets` is kept alongside for
/// fast membership tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    ambient: usize,
    base: Vector,
    directions: Vec<Vector>,
    normals: Vec<Vector>,
    offsets: Vec<Rational>,
}

impl AffineSubspace {
    pub fn new(base: Vector, directions: &[Vector]) -> Result<Self> {
        let ambient = base.dim();
        for d in directions {
            d.check_dim(ambient)?;
        }
        let directions = row_space_basis(directions, ambient);
        let mut base = base;
        for d in &directions {
            let pivot = d.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero");
            if !base[pivot].is_zero() {
                base = base.sub(&d.scale(&base[pivot]));
            }
        }
        let normals = nullspace(&Matrix::with_cols(directions.clone(), ambient)?);
        let offsets = normals.iter().map(|nrm| nrm.dot(&base)).collect();
        Ok(AffineSubspace { ambient, base, directions, normals, offsets })
    }

    /// The linear span of `vectors` in R^ambient.
    pub fn linear_span(vectors: &[Vector], ambient: usize) -> Result<Self> {
        Self::new(Vector::zeros(ambient), vectors)
    }

    pub fn whole_space(ambient: usize) -> Self {
        let basis: Vec<Vector> = (0..ambient).map(|i| Vector::unit(ambient, i)).collect();
        Self::new(Vector::zeros(ambient), &basis).expect("dimensions agree")
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn base(&self) -> &Vector {
        &self.base
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    /// Rows of the implicit description `normal · x = offset`.
    pub fn equations(&self) -> impl Iterator<Item = (&Vector, &Rational)> {
        self.normals.iter().zip(&self.offsets)
    }

    pub fn contains(&self, point: &Vector) -> bool {
        point.dim() == self.ambient
            && self.normals.iter().zip(&self.offsets).all(|(nrm, off)| &nrm.dot(point) == off)
    }

    pub fn contains_origin(&self) -> bool {
        self.offsets.iter().all(Zero::is_zero)
    }

    /// Linear span of the subspace's points.
    pub fn linear_hull(&self) -> AffineSubspace {
        let mut gens = self.directions.clone();
        gens.push(self.base.clone());
        Self::linear_span(&gens, self.ambient).expect("dimensions agree")
    }
}

/// Affine hull of a non-empty point set.
pub fn affine_hull(points: &[Vector]) -> Result<AffineSubspace> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    for p in points {
        p.check_dim(first.dim())?;
    }
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p.sub(first)).collect();
    AffineSubspace::new(first.clone(), &diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use proptest::prelude::*;

    /// Laplace expansion along the first row.
    fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn int_matrix(n: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-range..=range, n), n)
    }

    fn to_matrix(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| Vector::from_ints(r)).collect()).unwrap()
    }

    #[test]
    fn determinant_basics() {
        let id = Matrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(determinant(&id).unwrap(), int(1));
        let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(determinant(&swap).unwrap(), int(-1));
        let rect = Matrix::from_ints(&[&[1, 2, 3], &[4, 5, 6]]).unwrap();
        assert!(matches!(determinant(&rect), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn determinant_with_fractions() {
        let m = Matrix::from_rows(vec![
            Vector::new(vec![frac(1, 2), frac(1, 3)]),
            Vector::new(vec![frac(1, 4), frac(1, 5)]),
        ])
        .unwrap();
        assert_eq!(determinant(&m).unwrap(), frac(1, 10) - frac(1, 12));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = Matrix::from_rows(vec![Vector::from_ints(&[1, 2]), Vector::from_ints(&[1])]);
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn solve_identity_and_zero() {
        let id = Matrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let e1 = Vector::unit(3, 0);
        let s = rank_and_solve(&id, Some(&e1)).unwrap();
        assert_eq!(s.rank, 3);
        assert_eq!(s.solution, Some(e1));

        let zero = Matrix::from_ints(&[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(rank_and_solve(&zero, None).unwrap().rank, 0);
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        let m = Matrix::from_ints(&[&[1, 1], &[2, 2]]).unwrap();
        let s = rank_and_solve(&m, Some(&Vector::from_ints(&[1, 3]))).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.solution, None);
    }

    #[test]
    fn rhs_length_is_checked() {
        let m = Matrix::from_ints(&[&[1, 1], &[2, 2]]).unwrap();
        assert!(rank_and_solve(&m, Some(&Vector::from_ints(&[1]))).is_err());
    }

    #[test]
    fn repeated_rows_drop_rank() {
        let m = Matrix::from_ints(&[&[1, 2, 3], &[1, 2, 3], &[0, 1, 5]]).unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn affine_hull_examples() {
        let e = |i| Vector::unit(3, i);
        assert_eq!(affine_hull(&[e(0)]).unwrap().dim(), 0);

        let line = affine_hull(&[Vector::unit(2, 0), Vector::unit(2, 1)]).unwrap();
        assert_eq!(line.dim(), 1);
        assert!(line.contains(&Vector::unit(2, 0)) && line.contains(&Vector::unit(2, 1)));
        assert!(line.contains(&Vector::new(vec![frac(1, 2), frac(1, 2)])));
        assert!(!line.contains(&Vector::zeros(2)));

        let third = frac(1, 3);
        let centroid = Vector::new(vec![third.clone(), third.clone(), third]);
        let plane = affine_hull(&[e(0), e(1), e(2), centroid]).unwrap();
        assert_eq!(plane.dim(), 2);
        assert!(!plane.contains_origin());

        assert_eq!(affine_hull(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn equal_subspaces_compare_equal() {
        let a = AffineSubspace::new(Vector::from_ints(&[1, 0]), &[Vector::from_ints(&[1, -1])]).unwrap();
        let b = AffineSubspace::new(Vector::from_ints(&[3, -2]), &[Vector::from_ints(&[-2, 2])]).unwrap();
        assert_eq!(a, b);
    }

    /// Gaussian elimination with an explicit pivot audit, kept separate from
    /// `reduce` so the rank check is independent.
    fn oracle_rank(mut m: Vec<Vec<Rational>>) -> usize {
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(rank, p);
            for i in rank + 1..m.len() {
                let f = &m[i][c] / &m[rank][c];
                for k in 0..cols {
                    let d = &f * &m[rank][k];
                    m[i][k] -= d;
                }
                assert!(m[i][c].is_zero(), "pivot audit: column {c} not cleared");
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor_expansion(rows in int_matrix(3, 5)) {
            let m = to_matrix(&rows);
            let raw: Vec<Vec<Rational>> = m.rows().iter().map(|r| r.to_vec()).collect();
            prop_assert_eq!(determinant(&m).unwrap(), cofactor_det(&raw));
        }

        #[test]
        fn determinant_4x4_matches_cofactor_expansion(rows in int_matrix(4, 4)) {
            let m = to_matrix(&rows);
            let raw: Vec<Vec<Rational>> = m.rows().iter().map(|r| r.to_vec()).collect();
            prop_assert_eq!(determinant(&m).unwrap(), cofactor_det(&raw));
        }

        #[test]
        fn repeated_row_determinant_vanishes(rows in int_matrix(4, 6), i in 0usize..4, j in 0usize..4) {
            prop_assume!(i != j);
            let mut rows = rows;
            rows[j] = rows[i].clone();
            prop_assert!(determinant(&to_matrix(&rows)).unwrap().is_zero());
        }

        #[test]
        fn rank_matches_oracle(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 1..6)) {
            let m = to_matrix(&rows);
            let raw: Vec<Vec<Rational>> = m.rows().iter().map(|r| r.to_vec()).collect();
            prop_assert_eq!(rank(&m), oracle_rank(raw));
        }

        #[test]
        fn two_equal_rows_rank_at_most_two(rows in int_matrix(3, 5)) {
            let mut rows = rows;
            rows[2] = rows[0].clone();
            let m = to_matrix(&rows);
            let raw: Vec<Vec<Rational>> = m.rows().iter().map(|r| r.to_vec()).collect();
            let r = rank(&m);
            prop_assert!(r <= 2);
            prop_assert_eq!(r, oracle_rank(raw));
        }

        #[test]
        fn solutions_satisfy_system(rows in int_matrix(3, 4), x in prop::collection::vec(-3i64..=3, 3)) {
            let m = to_matrix(&rows);
            let b = m.mul_vec(&Vector::from_ints(&x));
            let s = rank_and_solve(&m, Some(&b)).unwrap();
            let sol = s.solution.expect("constructed rhs is consistent");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }

        #[test]
        fn nullspace_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..5)) {
            let m = to_matrix(&rows);
            let ns = nullspace(&m);
            prop_assert_eq!(ns.len() + rank(&m), 5);
            for v in &ns {
                prop_assert!(m.mul_vec(v).is_zero());
            }
        }

        #[test]
        fn affine_hull_contains_inputs(pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..5)) {
            let points: Vec<Vector> = pts.iter().map(|p| Vector::from_ints(p)).collect();
            let hull = affine_hull(&points).unwrap();
            prop_assert!(hull.dim() < points.len());
            let diffs: Vec<Vector> = points[1..].iter().map(|p| p.sub(&points[0])).collect();
            let diff_rank = if diffs.is_empty() { 0 } else { rank(&Matrix::from_rows(diffs).unwrap()) };
            prop_assert_eq!(hull.dim(), diff_rank);
            for p in &points {
                prop_assert!(hull.contains(p));
            }
            if !hull.directions().is_empty() {
                prop_assert_eq!(rank(&Matrix::from_rows(hull.directions().to_vec()).unwrap()), hull.dim());
            }
        }
    }
}
