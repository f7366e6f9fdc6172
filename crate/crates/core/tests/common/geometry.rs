//! Independent exact geometry for cross-checking: a placing triangulation of
//! a point set built from orientation determinants alone. Shares nothing with
//! the library beyond the rational type.

use std::collections::HashMap;

use conevol::{Polytope, Rational, Vector};
use num_traits::{One, Signed, Zero};

pub type Point = Vec<Rational>;

pub fn point(v: &Vector) -> Point {
    v.coords().to_vec()
}

fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Determinant by elimination with the first non-zero pivot.
pub fn det(mut rows: Vec<Point>) -> Rational {
    let n = rows.len();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            rows.swap(piv, col);
            acc = -acc;
        }
        let p = rows[col][col].clone();
        acc *= &p;
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &p;
            for c in col..n {
                let d = &f * &rows[col][c];
                rows[r][c] -= d;
            }
        }
    }
    acc
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer((k as i64).into()))
}

/// `det(q_1 - q_0, ..., q_n - q_0)`.
fn orient(pts: &[&Point]) -> Rational {
    det(pts[1..].iter().map(|q| sub(q, pts[0])).collect())
}

pub fn simplex_volume(pts: &[&Point]) -> Rational {
    orient(pts).abs() / factorial(pts.len() - 1)
}

fn affinely_independent(pts: &[&Point]) -> bool {
    // Gram determinant of the difference vectors
    let diffs: Vec<Point> = pts[1..].iter().map(|q| sub(q, pts[0])).collect();
    let gram = diffs
        .iter()
        .map(|u| diffs.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
        .collect();
    !det(gram).is_zero()
}

/// Placing triangulation of the hull of a full-dimensional point set: each
/// new point is coned over every boundary facet it strictly sees.
pub fn triangulate(points: &[Point]) -> Vec<Vec<usize>> {
    let n = points[0].len();
    let mut start: Vec<usize> = vec![0];
    for i in 1..points.len() {
        if start.len() == n + 1 {
            break;
        }
        let mut trial: Vec<&Point> = start.iter().map(|&k| &points[k]).collect();
        trial.push(&points[i]);
        if affinely_independent(&trial) {
            start.push(i);
        }
    }
    assert_eq!(start.len(), n + 1, "point set is not full-dimensional");
    let mut simplices = vec![start.clone()];
    for i in 0..points.len() {
        if start.contains(&i) {
            continue;
        }
        let mut faces: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for s in &simplices {
            for &o in s {
                let f: Vec<usize> = s.iter().copied().filter(|&k| k != o).collect();
                faces.entry(f).and_modify(|e| e.0 += 1).or_insert((1, o));
            }
        }
        for (f, (count, opposite)) in faces {
            if count != 1 {
                continue;
            }
            let mut with: Vec<&Point> = f.iter().map(|&k| &points[k]).collect();
            with.push(&points[i]);
            let new_side = orient(&with);
            with.pop();
            with.push(&points[opposite]);
            let inner_side = orient(&with);
            if !new_side.is_zero() && new_side.is_positive() != inner_side.is_positive() {
                let mut s = f.clone();
                s.push(i);
                simplices.push(s);
            }
        }
    }
    simplices
}

/// Exact volume and centroid of the hull of `points`.
pub fn volume_and_centroid(points: &[Point]) -> (Rational, Point) {
    let n = points[0].len();
    let mut vol = Rational::zero();
    let mut moment = vec![Rational::zero(); n];
    for s in triangulate(points) {
        let pts: Vec<&Point> = s.iter().map(|&k| &points[k]).collect();
        let v = simplex_volume(&pts);
        for (c, m) in moment.iter_mut().enumerate() {
            let mean: Rational = pts.iter().map(|p| &p[c]).sum::<Rational>() / Rational::from_integer(((n + 1) as i64).into());
            *m += &v * mean;
        }
        vol += v;
    }
    let centroid = moment.into_iter().map(|m| m / &vol).collect();
    (vol, centroid)
}

pub fn volume(points: &[Point]) -> Rational {
    volume_and_centroid(points).0
}

/// Vertices of `p` on the hyperplane `<a, x> = 1`, found by evaluation.
pub fn facet_points(p: &Polytope, a: &Vector) -> Vec<Point> {
    p.vertices().iter().filter(|v| a.dot(v).is_one()).map(point).collect()
}

/// Volume of the cone with the given apex over the facet `<a, x> = 1`.
pub fn cone_volume(p: &Polytope, a: &Vector, apex: &Point) -> Rational {
    let mut pts = facet_points(p, a);
    pts.push(apex.clone());
    volume(&pts)
}
