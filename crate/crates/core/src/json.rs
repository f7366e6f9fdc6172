//! JSON documents exchanged by the command-line tool. Every rational travels
//! as a literal string `p/q` (or `p`).

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::audit::{AuditReport, Diagnosis, SubspaceKind};
use crate::error::{Error, Result};
use crate::lifting::{ChainReport, LiftTower};
use crate::linalg::Vector;
use crate::measure::ConeVolumeMeasure;
use crate::polytope::{convex_hull, Polytope};
use crate::scalar::{literal, Rational};

/// A rational that serializes as its literal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lit(pub Rational);

impl Serialize for Lit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        literal::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Lit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        literal::deserialize(d).map(Lit)
    }
}

impl From<&Rational> for Lit {
    fn from(r: &Rational) -> Self {
        Lit(r.clone())
    }
}

/// Input form: only the vertex list is read; any `facets` are recomputed.
#[derive(Debug, Deserialize)]
pub struct PolytopeInput {
    pub dim: usize,
    pub vertices: Vec<Vector>,
}

impl PolytopeInput {
    pub fn into_polytope(self) -> Result<Polytope> {
        for v in &self.vertices {
            v.check_dim(self.dim)?;
        }
        convex_hull(&self.vertices)
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FacetDoc {
    pub a: Vector,
    pub incident: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolytopeDoc {
    pub dim: usize,
    pub vertices: Vec<Vector>,
    pub facets: Vec<FacetDoc>,
}

impl From<&Polytope> for PolytopeDoc {
    fn from(p: &Polytope) -> Self {
        PolytopeDoc {
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
            facets: p
                .facets()
                .iter()
                .map(|f| FacetDoc { a: f.polar_vertex.clone(), incident: f.incident.clone() })
                .collect(),
        }
    }
}

pub fn parse_polytope(text: &str) -> Result<Polytope, InputError> {
    let input: PolytopeInput = serde_json::from_str(text).map_err(InputError::Json)?;
    input.into_polytope().map_err(InputError::Geometry)
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(serde_json::Error),
    #[error(transparent)]
    Geometry(Error),
}

#[derive(Debug, Serialize)]
pub struct AtomDoc {
    pub a: Vector,
    pub w: Lit,
}

#[derive(Debug, Serialize)]
pub struct MeasureDoc {
    pub atoms: Vec<AtomDoc>,
    pub total: Lit,
}

impl From<&ConeVolumeMeasure> for MeasureDoc {
    fn from(mu: &ConeVolumeMeasure) -> Self {
        MeasureDoc {
            atoms: mu
                .atoms()
                .iter()
                .map(|a| AtomDoc { a: a.polar_vertex.clone(), w: Lit::from(&a.weight) })
                .collect(),
            total: Lit::from(mu.total()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RowDoc {
    pub generators: Vec<usize>,
    /// Polar vertices of the generators.
    pub points: Vec<Vector>,
    pub dim: usize,
    pub lhs: Lit,
    pub rhs: Lit,
    pub ratio: Lit,
    pub tight: bool,
    pub diagnosis: Option<Diagnosis>,
}

#[derive(Debug, Serialize)]
pub struct ReportDoc {
    pub kind: SubspaceKind,
    pub pass: bool,
    pub max_ratio: Lit,
    pub total: Lit,
    pub rows: Vec<RowDoc>,
    /// Row indices with `lhs > rhs`.
    pub violating_rows: Vec<usize>,
}

impl ReportDoc {
    /// `mu` must be the measure the report was computed from.
    pub fn new(r: &AuditReport, mu: &ConeVolumeMeasure) -> Self {
        ReportDoc {
            kind: r.kind,
            pass: r.pass,
            max_ratio: Lit::from(&r.max_ratio),
            total: Lit::from(&r.total),
            rows: r
                .rows
                .iter()
                .map(|row| RowDoc {
                    generators: row.candidate.generators.clone(),
                    points: row.candidate.generators.iter().map(|&i| mu.atoms()[i].polar_vertex.clone()).collect(),
                    dim: row.candidate.dim(),
                    lhs: Lit::from(&row.lhs),
                    rhs: Lit::from(&row.rhs),
                    ratio: Lit::from(&row.ratio),
                    tight: row.tight,
                    diagnosis: row.diagnosis.clone(),
                })
                .collect(),
            violating_rows: r.violations().map(|(i, _)| i).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct LevelDoc {
    pub j: usize,
    pub dim: usize,
    pub volume: Lit,
    pub tracked: Vec<usize>,
    pub bound: Option<Lit>,
    pub linear_measure: Option<Lit>,
    pub cone_volume: Lit,
}

#[derive(Debug, Serialize)]
pub struct TowerDoc {
    pub subspace_dim: usize,
    pub levels: Vec<LevelDoc>,
    pub limit_bound: Lit,
    pub measure: Lit,
}

impl TowerDoc {
    pub fn new(tower: &LiftTower, chain: &ChainReport) -> Result<Self> {
        let mut levels = Vec::new();
        for level in tower.levels() {
            let bound = chain.bounds.iter().find(|b| b.j == level.j);
            levels.push(LevelDoc {
                j: level.j,
                dim: level.polytope.dim(),
                volume: Lit::from(&level.volume),
                tracked: level.tracked.clone(),
                bound: bound.map(|b| Lit::from(&b.bound)),
                linear_measure: bound.map(|b| Lit::from(&b.linear_measure)),
                cone_volume: Lit(tower.star_pyramid_volume(level.j)?),
            });
        }
        Ok(TowerDoc {
            subspace_dim: tower.affine().dim(),
            levels,
            limit_bound: Lit::from(&chain.limit),
            measure: Lit::from(&chain.measure),
        })
    }
}
