//! Full-dimensional polytopes with the origin in their interior, carried in
//! both representations at once.
//!
//! Facet `i` is `{x : <a_i, x> <= 1}`; the vectors `a_i` are the vertices of
//! the polar polytope. Vertices and facets are kept sorted lexicographically
//! so that structural equality is plain `==`.

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::linalg::{affine_hull, determinant, nullspace, rank, Matrix, Vector};
use crate::scalar::{abs, factorial, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    /// The `a_i` with `<a_i, x> <= 1` on the polytope.
    pub polar_vertex: Vector,
    /// Sorted indices of the vertices with `<a_i, v> = 1`.
    pub incident: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
}

impl Polytope {
    /// Assembles a polytope from already-known parts and sorts it into
    /// canonical order. The caller vouches for correctness of the incidence
    /// data; use [`convex_hull`] when starting from points.
    pub fn from_parts(dim: usize, vertices: Vec<Vector>, facets: Vec<Facet>) -> Self {
        let mut order: Vec<usize> = (0..vertices.len()).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        let mut remap = vec![0; vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut slots: Vec<Option<Vector>> = vertices.into_iter().map(Some).collect();
        let vertices = order.iter().map(|&old| slots[old].take().expect("permutation")).collect();
        let mut facets: Vec<Facet> = facets
            .into_iter()
            .map(|f| {
                let mut incident: Vec<usize> = f.incident.iter().map(|&k| remap[k]).collect();
                incident.sort_unstable();
                Facet { polar_vertex: f.polar_vertex, incident }
            })
            .collect();
        facets.sort_by(|a, b| a.polar_vertex.cmp(&b.polar_vertex));
        Polytope { dim, vertices, facets }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn polar_vertices(&self) -> impl Iterator<Item = &Vector> {
        self.facets.iter().map(|f| &f.polar_vertex)
    }

    pub fn vertex_index(&self, v: &Vector) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn facet_index(&self, polar_vertex: &Vector) -> Option<usize> {
        self.facets.binary_search_by(|f| f.polar_vertex.cmp(polar_vertex)).ok()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.dim && self.polar_vertices().all(|a| a.dot(x) <= Rational::one())
    }

    pub fn contains_in_interior(&self, x: &Vector) -> bool {
        x.dim() == self.dim && self.polar_vertices().all(|a| a.dot(x) < Rational::one())
    }

    pub fn volume(&self) -> Rational {
        let mut tri = Triangulator::new(self);
        tri.full().iter().map(|s| self.simplex_volume(s)).sum()
    }

    pub fn centroid(&self) -> Vector {
        self.volume_and_centroid().1
    }

    /// Volume and centroid from one triangulation pass.
    pub fn volume_and_centroid(&self) -> (Rational, Vector) {
        let mut tri = Triangulator::new(self);
        let simplices = tri.full();
        let mut volume = Rational::zero();
        let mut moment = Vector::zeros(self.dim);
        for s in simplices.iter() {
            let vol = self.simplex_volume(s);
            let mut sum = Vector::zeros(self.dim);
            for &k in s {
                sum = sum.add(&self.vertices[k]);
            }
            moment = moment.add(&sum.scale(&vol));
            volume += vol;
        }
        let denom = &volume * int(self.dim as i64 + 1);
        let centroid = moment.scale(&denom.recip());
        (volume, centroid)
    }

    pub fn is_centered(&self) -> bool {
        self.centroid().is_zero()
    }

    /// The polytope `self + shift`. The shifted body must still contain the
    /// origin in its interior.
    pub fn translate(&self, shift: &Vector) -> Result<Polytope> {
        shift.check_dim(self.dim)?;
        let vertices = self.vertices.iter().map(|v| v.add(shift)).collect();
        let mut facets = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            // <a, x - t> <= 1  <=>  <a/(1 + <a,t>), x> <= 1
            let denom = Rational::one() + f.polar_vertex.dot(shift);
            if !denom.is_positive() {
                return Err(Error::OriginNotInterior);
            }
            facets.push(Facet {
                polar_vertex: f.polar_vertex.scale(&denom.recip()),
                incident: f.incident.clone(),
            });
        }
        Ok(Polytope::from_parts(self.dim, vertices, facets))
    }

    /// Translate so that the centroid sits at the origin. Idempotent.
    pub fn center(&self) -> Polytope {
        let c = self.centroid();
        if c.is_zero() {
            return self.clone();
        }
        self.translate(&c.neg()).expect("the centroid is an interior point")
    }

    /// The polar polytope: vertices are the `a_i`, facets the old vertices.
    pub fn polar(&self) -> Polytope {
        let vertices = self.facets.iter().map(|f| f.polar_vertex.clone()).collect();
        let mut incident = vec![Vec::new(); self.vertices.len()];
        for (i, f) in self.facets.iter().enumerate() {
            for &k in &f.incident {
                incident[k].push(i);
            }
        }
        let facets = self
            .vertices
            .iter()
            .zip(incident)
            .map(|(v, incident)| Facet { polar_vertex: v.clone(), incident })
            .collect();
        Polytope::from_parts(self.dim, vertices, facets)
    }

    /// All `(apex vertex, base facet)` pairs such that every facet other than
    /// the base contains the apex.
    pub fn is_pyramid(&self) -> Vec<(usize, usize)> {
        let masks = self.facet_masks();
        let mut pairs = Vec::new();
        for (base, base_mask) in masks.iter().enumerate() {
            for apex in 0..self.vertices.len() {
                if base_mask.contains(apex) {
                    continue;
                }
                let on_rest = masks.iter().enumerate().all(|(j, m)| j == base || m.contains(apex));
                if on_rest {
                    pairs.push((apex, base));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// `max_{v} <u, v>` over the vertices.
    pub fn support_value(&self, u: &Vector) -> Result<Rational> {
        u.check_dim(self.dim)?;
        if u.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self.vertices.iter().map(|v| u.dot(v)).max().expect("polytopes have vertices"))
    }

    /// Lowest and highest coordinate per axis over the vertices.
    pub fn bounding_box(&self) -> (Vector, Vector) {
        let mut lo = self.vertices[0].clone().into_coords();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for (k, x) in v.iter().enumerate() {
                if *x < lo[k] {
                    lo[k] = x.clone();
                }
                if *x > hi[k] {
                    hi[k] = x.clone();
                }
            }
        }
        (Vector::new(lo), Vector::new(hi))
    }

    pub(crate) fn facet_masks(&self) -> Vec<FixedBitSet> {
        self.facets
            .iter()
            .map(|f| {
                let mut m = FixedBitSet::with_capacity(self.vertices.len());
                for &k in &f.incident {
                    m.insert(k);
                }
                m
            })
            .collect()
    }

    fn simplex_volume(&self, simplex: &[usize]) -> Rational {
        let pts: Vec<&Vector> = simplex.iter().map(|&k| &self.vertices[k]).collect();
        simplex_volume(&pts)
    }
}

/// `|det(p_1 - p_0, ..., p_d - p_0)| / d!` for `d + 1` points in R^d.
pub fn simplex_volume(points: &[&Vector]) -> Rational {
    let d = points.len() - 1;
    let rows = points[1..].iter().map(|p| p.sub(points[0])).collect();
    let m = Matrix::from_rows(rows).expect("points share a dimension");
    abs(&determinant(&m).expect("square by construction")) / factorial(d)
}

/// Pulling triangulation over the face lattice.
///
/// A face is triangulated by coning its lowest-index vertex over the
/// triangulations of the subfaces that avoid it. The subfaces of a face `G`
/// are the maximal sets among `G ∩ F_j` that differ from `G`, so the
/// recursion needs incidence data only.
pub(crate) struct Triangulator<'a> {
    polytope: &'a Polytope,
    masks: Vec<FixedBitSet>,
    memo: HashMap<FixedBitSet, Rc<Vec<Vec<usize>>>>,
}

impl<'a> Triangulator<'a> {
    pub(crate) fn new(polytope: &'a Polytope) -> Self {
        Triangulator { polytope, masks: polytope.facet_masks(), memo: HashMap::new() }
    }

    /// Full-dimensional simplices covering the polytope.
    pub(crate) fn full(&mut self) -> Rc<Vec<Vec<usize>>> {
        let mut all = FixedBitSet::with_capacity(self.polytope.vertices.len());
        all.insert_range(..);
        self.face(&all, self.polytope.dim)
    }

    /// (n-1)-simplices covering facet `i`.
    pub(crate) fn facet(&mut self, i: usize) -> Rc<Vec<Vec<usize>>> {
        let mask = self.masks[i].clone();
        self.face(&mask, self.polytope.dim - 1)
    }

    fn face(&mut self, face: &FixedBitSet, dim: usize) -> Rc<Vec<Vec<usize>>> {
        if let Some(hit) = self.memo.get(face) {
            return Rc::clone(hit);
        }
        let apex = face.minimum().expect("faces are non-empty");
        let result = if dim == 0 {
            vec![vec![apex]]
        } else {
            let mut simplices = Vec::new();
            for sub in self.subfaces(face) {
                if sub.contains(apex) {
                    continue;
                }
                for s in self.face(&sub, dim - 1).iter() {
                    let mut simplex = Vec::with_capacity(dim + 1);
                    simplex.push(apex);
                    simplex.extend_from_slice(s);
                    simplices.push(simplex);
                }
            }
            simplices
        };
        let result = Rc::new(result);
        self.memo.insert(face.clone(), Rc::clone(&result));
        result
    }

    fn subfaces(&self, face: &FixedBitSet) -> Vec<FixedBitSet> {
        let face_len = face.count_ones(..);
        let mut cands: Vec<FixedBitSet> = Vec::new();
        for m in &self.masks {
            let inter = face.intersection(m).collect::<FixedBitSet>();
            let len = inter.count_ones(..);
            if len == 0 || len == face_len {
                continue;
            }
            if !cands.contains(&inter) {
                cands.push(inter);
            }
        }
        let maximal: Vec<FixedBitSet> = cands
            .iter()
            .filter(|c| !cands.iter().any(|d| d != *c && c.is_subset(d)))
            .cloned()
            .collect();
        maximal
    }
}

/// Exact convex hull of a full-dimensional point set whose interior contains
/// the origin.
///
/// Facets are found by brute force over all `n`-subsets of the distinct
/// input points: the hyperplane through the subset is accepted when every
/// point lies weakly on one side. Subsets already inside a known facet are
/// skipped. Interior and repeated points are dropped.
pub fn convex_hull(points: &[Vector]) -> Result<Polytope> {
    let n = points.first().ok_or(Error::EmptyInput)?.dim();
    for p in points {
        p.check_dim(n)?;
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let hull_dim = affine_hull(&pts)?.dim();
    if n == 0 || hull_dim < n {
        return Err(Error::Degenerate { dim: n, affine_dim: hull_dim });
    }

    let m = pts.len();
    let lifted: Vec<Vector> = pts.iter().map(|p| p.extend_with(int(-1))).collect();
    let mut found: Vec<(Vector, FixedBitSet)> = Vec::new();
    for subset in (0..m).combinations(n) {
        if found.iter().any(|(_, mask)| subset.iter().all(|&k| mask.contains(k))) {
            continue;
        }
        let rows = subset.iter().map(|&k| lifted[k].clone()).collect();
        let kernel = nullspace(&Matrix::with_cols(rows, n + 1)?);
        let [h] = kernel.as_slice() else { continue };
        // Hyperplane <c, x> = d with h = (c, d).
        let mut mask = FixedBitSet::with_capacity(m);
        let (mut above, mut below) = (false, false);
        for (k, w) in lifted.iter().enumerate() {
            let s = h.dot(w);
            if s.is_zero() {
                mask.insert(k);
            } else if s.is_positive() {
                above = true;
            } else {
                below = true;
            }
            if above && below {
                break;
            }
        }
        if above && below {
            continue;
        }
        let mut d = h[n].clone();
        let mut c = Vector::new(h[..n].to_vec());
        if above {
            c = c.neg();
            d = -d;
        }
        if !d.is_positive() {
            return Err(Error::OriginNotInterior);
        }
        found.push((c.scale(&d.recip()), mask));
    }

    let mut keep = Vec::new();
    let mut remap = vec![usize::MAX; m];
    for k in 0..m {
        let normals: Vec<Vector> =
            found.iter().filter(|(_, mask)| mask.contains(k)).map(|(a, _)| a.clone()).collect();
        if normals.len() >= n && rank(&Matrix::from_rows(normals)?) == n {
            remap[k] = keep.len();
            keep.push(pts[k].clone());
        }
    }
    let facets = found
        .into_iter()
        .map(|(a, mask)| Facet {
            polar_vertex: a,
            incident: mask.ones().filter(|&k| remap[k] != usize::MAX).map(|k| remap[k]).collect(),
        })
        .collect();
    Ok(Polytope::from_parts(n, keep, facets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    fn pts(raw: &[&[i64]]) -> Vec<Vector> {
        raw.iter().map(|r| Vector::from_ints(r)).collect()
    }

    fn square() -> Polytope {
        convex_hull(&pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1], &[0, 0]])).unwrap()
    }

    /// Every candidate line through two vertices that keeps all points on one
    /// side; the normalized normals must equal the hull's facets.
    fn brute_force_facets_2d(points: &[Vector]) -> Vec<Vector> {
        let mut out = Vec::new();
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                let dir = q.sub(p);
                let normal = Vector::new(vec![dir[1].clone(), -dir[0].clone()]);
                let off = normal.dot(p);
                let sides: Vec<Rational> = points.iter().map(|w| normal.dot(w) - &off).collect();
                let one_sided = sides.iter().all(|s| !s.is_positive()) || sides.iter().all(|s| !s.is_negative());
                if !one_sided {
                    continue;
                }
                // off has the sign that puts the origin on the inner side
                let a = normal.scale(&off.recip());
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn square_hull() {
        let sq = square();
        assert_eq!(sq.vertices(), pts(&[&[-1, -1], &[-1, 1], &[1, -1], &[1, 1]]).as_slice());
        let normals: Vec<Vector> = sq.polar_vertices().cloned().collect();
        assert_eq!(normals, pts(&[&[-1, 0], &[0, -1], &[0, 1], &[1, 0]]));
        let oracle = brute_force_facets_2d(&pts(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]));
        assert_eq!(normals, oracle);
        for f in sq.facets() {
            assert_eq!(f.incident.len(), 2);
        }
    }

    #[test]
    fn triangle_hull() {
        let tri = convex_hull(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(tri.vertices().len(), 3);
        assert_eq!(tri.facets().len(), 3);
    }

    #[test]
    fn interior_and_boundary_points_are_dropped() {
        let p = convex_hull(&pts(&[&[2, 0], &[0, 2], &[-2, -2], &[1, 1], &[0, 0], &[2, 0]])).unwrap();
        assert_eq!(p.vertices().len(), 3);
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let coplanar = pts(&[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 0], &[0, 0, 0]]);
        assert!(matches!(convex_hull(&coplanar), Err(Error::Degenerate { dim: 3, affine_dim: 2 })));
        assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn origin_outside_is_rejected() {
        let shifted = pts(&[&[1, 1], &[3, 1], &[1, 3]]);
        assert_eq!(convex_hull(&shifted), Err(Error::OriginNotInterior));
        let on_boundary = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(convex_hull(&on_boundary), Err(Error::OriginNotInterior));
    }

    #[test]
    fn incidence_invariant_holds() {
        let p = convex_hull(&pts(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 1], &[-1, -1, -1], &[1, 1, -2]])).unwrap();
        for f in p.facets() {
            for (k, v) in p.vertices().iter().enumerate() {
                let s = f.polar_vertex.dot(v);
                assert!(s <= Rational::one());
                assert_eq!(s == Rational::one(), f.incident.contains(&k));
            }
            let fv: Vec<Vector> = f.incident.iter().map(|&k| p.vertices()[k].clone()).collect();
            assert_eq!(affine_hull(&fv).unwrap().dim(), 2);
        }
    }

    #[test]
    fn volumes() {
        assert_eq!(square().volume(), int(4));
        // conv{(0,0),(1,0),(0,1)} shifted so the origin is interior.
        let shift = Vector::new(vec![frac(-1, 3), frac(-1, 3)]);
        let tri = convex_hull(&[
            shift.clone(),
            Vector::from_ints(&[1, 0]).add(&shift),
            Vector::from_ints(&[0, 1]).add(&shift),
        ])
        .unwrap();
        assert_eq!(tri.volume(), frac(1, 2));
    }

    #[test]
    fn simplex_volume_matches_determinant_formula() {
        let v = pts(&[&[3, 0, 0], &[0, 2, 0], &[0, 0, 5], &[-1, -1, -1]]);
        let p = convex_hull(&v).unwrap();
        let refs: Vec<&Vector> = v.iter().collect();
        assert_eq!(p.volume(), simplex_volume(&refs));
    }

    #[test]
    fn centroids() {
        assert!(square().centroid().is_zero());
        let tri = convex_hull(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert!(tri.centroid().is_zero());
    }

    #[test]
    fn centering_the_skewed_triangle() {
        let h = frac(-1, 2);
        let tri = convex_hull(&[
            Vector::from_ints(&[1, 0]),
            Vector::from_ints(&[0, 1]),
            Vector::new(vec![h.clone(), h]),
        ])
        .unwrap();
        let c = tri.centroid();
        assert_eq!(c, Vector::new(vec![frac(1, 6), frac(1, 6)]));
        let centered = tri.center();
        assert!(centered.centroid().is_zero());
        for (v, w) in tri.vertices().iter().zip(centered.vertices()) {
            assert_eq!(&v.sub(&c), w);
        }
        assert_eq!(centered.center(), centered);
        assert_eq!(centered.volume(), tri.volume());
        // a' = a / (1 - <a, c>), and matches a hull recomputed from scratch
        for f in tri.facets() {
            let expect = f.polar_vertex.scale(&(Rational::one() - f.polar_vertex.dot(&c)).recip());
            assert!(centered.facet_index(&expect).is_some());
        }
        assert_eq!(convex_hull(centered.vertices()).unwrap(), centered);
    }

    #[test]
    fn square_polar_is_cross_polytope() {
        let cross = convex_hull(&pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])).unwrap();
        assert_eq!(square().polar(), cross);
        assert_eq!(cross.polar(), square());
    }

    #[test]
    fn triangle_polar() {
        let tri = convex_hull(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        let polar = tri.polar();
        let expected: Vec<Vector> = tri.polar_vertices().cloned().collect();
        let mut got = polar.vertices().to_vec();
        got.sort();
        let mut expected_sorted = expected.clone();
        expected_sorted.sort();
        assert_eq!(got, expected_sorted);
        assert_eq!(convex_hull(&expected).unwrap(), polar);
        assert_eq!(polar.polar(), tri);
    }

    #[test]
    fn pyramids() {
        let tri = convex_hull(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(tri.is_pyramid().len(), 3);
        let cube = convex_hull(&pts(&[
            &[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1],
            &[-1, 1, 1], &[-1, 1, -1], &[-1, -1, 1], &[-1, -1, -1],
        ]))
        .unwrap();
        assert!(cube.is_pyramid().is_empty());

        let q = frac(-1, 4);
        let lift = |x: i64, y: i64| Vector::new(vec![int(x), int(y), q.clone()]);
        let sqpyr = convex_hull(&[lift(1, 1), lift(1, -1), lift(-1, 1), lift(-1, -1), Vector::new(vec![int(0), int(0), frac(3, 4)])]).unwrap();
        let pairs = sqpyr.is_pyramid();
        assert_eq!(pairs.len(), 1);
        let (apex, base) = pairs[0];
        assert_eq!(sqpyr.vertices()[apex], Vector::new(vec![int(0), int(0), frac(3, 4)]));
        assert_eq!(sqpyr.facets()[base].polar_vertex, Vector::from_ints(&[0, 0, -4]));
    }

    #[test]
    fn support_values() {
        let sq = square();
        assert_eq!(sq.support_value(&Vector::from_ints(&[1, 0])).unwrap(), int(1));
        assert_eq!(sq.support_value(&Vector::from_ints(&[1, 1])).unwrap(), int(2));
        assert_eq!(sq.support_value(&Vector::zeros(2)), Err(Error::ZeroVector));
        let u = Vector::new(vec![frac(2, 3), frac(-5, 7)]);
        let lambda = frac(7, 2);
        assert_eq!(sq.support_value(&u.scale(&lambda)).unwrap(), &lambda * sq.support_value(&u).unwrap());
    }
}
