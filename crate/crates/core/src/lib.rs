//! Exact cone volume measures of rational polytopes, subspace concentration
//! audits, and the pyramid-lift machinery that turns the affine inequality
//! into a limit of linear ones.
//!
//! All geometry is done over arbitrary-precision rationals; floating point
//! appears only in the Monte Carlo [`oracle`] module.

pub mod audit;
pub mod error;
pub mod generator;
pub mod json;
pub mod lifting;
pub mod linalg;
pub mod measure;
pub mod oracle;
pub mod polytope;
pub mod scalar;

pub use audit::{
    check_scc, enumerate_candidates, equality_diagnosis, AuditOptions, AuditReport, AuditRow,
    Diagnosis, SubspaceCandidate, SubspaceKind,
};
pub use error::{Error, Result};
pub use lifting::{build_tower, lift_once, phi_embed, psi_embed, LiftTower, TowerOptions};
pub use linalg::{affine_hull, determinant, rank_and_solve, AffineSubspace, Matrix, Vector};
pub use measure::{cone_volumes, Atom, ConeVolumeMeasure};
pub use polytope::{convex_hull, Facet, Polytope};
pub use scalar::{format_rational, parse_rational, Rational};
