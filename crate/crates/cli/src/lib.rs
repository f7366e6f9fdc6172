//! Command-line front end: every verb reads a polytope document (a path or
//! `-` for standard input) and prints a JSON document on standard output.
//!
//! Exit codes: 0 success, 1 an audit found a violating subspace, 2 bad input.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conevol::audit::DEFAULT_MAX_ATOMS;
use conevol::generator::{canonical, generate, GenSpec};
use conevol::json::{parse_polytope, InputError, MeasureDoc, PolytopeDoc, ReportDoc, TowerDoc};
use conevol::lifting::DEFAULT_DEPTH_CAP;
use conevol::{
    affine_hull, build_tower, check_scc, cone_volumes, AuditOptions, Error, Polytope, SubspaceKind, TowerOptions,
};
use serde_json::{json, Value};

pub const DEPTH_CAP_VAR: &str = "CONEVOL_DEPTH_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser, PartialEq, Eq)]
#[command(name = "conevol", version, about = "Exact cone volume measures and subspace concentration audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Facets and vertices of the convex hull of the input vertices.
    Hull(Input),
    /// Translate so that the centroid is the origin.
    Center(Input),
    /// Polar body (the origin must be interior).
    Polar(Input),
    /// Cone volume measure: one atom per facet.
    Conevol(Input),
    /// Audit the linear or affine subspace concentration inequality.
    Audit(AuditArgs),
    /// Iterated pyramid lifts with a tracked set of facets.
    Lift(LiftArgs),
    /// Generate a random or named polytope.
    Gen(GenArgs),
    /// Equality-case diagnoses of the tight subspaces.
    Diagnose(AuditArgs),
}

#[derive(Debug, Args, PartialEq, Eq)]
pub struct Input {
    /// Polytope document, or `-` for standard input.
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Linear,
    Affine,
}

impl From<Mode> for SubspaceKind {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Linear => SubspaceKind::Linear,
            Mode::Affine => SubspaceKind::Affine,
        }
    }
}

#[derive(Debug, Args, PartialEq, Eq)]
pub struct AuditArgs {
    #[arg(long, value_enum, default_value = "affine")]
    pub mode: Mode,
    /// Accept bodies whose centroid is not the origin.
    #[arg(long)]
    pub allow_noncentered: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_ATOMS)]
    pub max_atoms: usize,
    pub input: PathBuf,
}

#[derive(Debug, Args, PartialEq, Eq)]
pub struct LiftArgs {
    /// Number of lifts `J`.
    #[arg(long, default_value_t = 1)]
    pub levels: usize,
    /// Facet indices whose polar vertices span the tracked affine subspace.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub track: Vec<usize>,
    #[arg(long)]
    pub allow_noncentered: bool,
    pub input: PathBuf,
}

#[derive(Debug, Args, PartialEq, Eq)]
pub struct GenArgs {
    /// One of cube_n, crosspolytope_n, centered_simplex_n, square_pyramid_3,
    /// noncentered_triangle.
    #[arg(long, conflicts_with_all = ["dim", "vertices"])]
    pub canonical: Option<String>,
    #[arg(long, required_unless_present = "canonical")]
    pub dim: Option<usize>,
    #[arg(long, required_unless_present = "canonical")]
    pub vertices: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub range: i64,
    #[arg(long, default_value_t = 1)]
    pub denominator: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub symmetrize: bool,
    #[arg(long)]
    pub no_center: bool,
}

/// Exit code plus the document to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

impl Outcome {
    fn ok(output: Value) -> Self {
        Outcome { code: EXIT_OK, output }
    }

    fn input_error(kind: &str, message: impl ToString) -> Self {
        Outcome { code: EXIT_INPUT, output: json!({ "error": { "kind": kind, "message": message.to_string() } }) }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::input_error("invalid_input", e)
    }
}

impl From<InputError> for Outcome {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Json(_) => Outcome::input_error("malformed_json", e),
            InputError::Geometry(g) => g.into(),
        }
    }
}

fn to_value<T: serde::Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

/// Runs `cli`, reading `-` from `stdin`.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    match dispatch(cli, stdin) {
        Ok(o) | Err(o) => o,
    }
}

fn read_polytope(path: &PathBuf, stdin: &mut dyn Read) -> Result<Polytope, Outcome> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Outcome::input_error("io", format!("{}: {e}", path.display())))?;
    Ok(parse_polytope(&text)?)
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome, Outcome> {
    let out = match &cli.command {
        Command::Hull(a) => Outcome::ok(to_value(&PolytopeDoc::from(&read_polytope(&a.input, stdin)?))),
        Command::Center(a) => Outcome::ok(to_value(&PolytopeDoc::from(&read_polytope(&a.input, stdin)?.center()))),
        Command::Polar(a) => Outcome::ok(to_value(&PolytopeDoc::from(&read_polytope(&a.input, stdin)?.polar()))),
        Command::Conevol(a) => Outcome::ok(to_value(&MeasureDoc::from(&cone_volumes(&read_polytope(&a.input, stdin)?)))),
        Command::Audit(a) => {
            let p = read_polytope(&a.input, stdin)?;
            let opts = AuditOptions { allow_noncentered: a.allow_noncentered, max_atoms: a.max_atoms };
            let report = check_scc(&p, a.mode.into(), &opts)?;
            let doc = ReportDoc::new(&report, &cone_volumes(&p));
            Outcome { code: if report.pass { EXIT_OK } else { EXIT_VIOLATION }, output: to_value(&doc) }
        }
        Command::Diagnose(a) => {
            let p = read_polytope(&a.input, stdin)?;
            let opts = AuditOptions { allow_noncentered: a.allow_noncentered, max_atoms: a.max_atoms };
            let report = check_scc(&p, a.mode.into(), &opts)?;
            let mut doc = ReportDoc::new(&report, &cone_volumes(&p));
            let tight: Vec<_> = doc.rows.drain(..).filter(|r| r.tight).collect();
            Outcome::ok(json!({ "kind": doc.kind, "pass": doc.pass, "tight_rows": to_value(&tight) }))
        }
        Command::Lift(a) => {
            let p = read_polytope(&a.input, stdin)?;
            let depth_cap = match std::env::var(DEPTH_CAP_VAR) {
                Ok(v) => v
                    .parse()
                    .map_err(|_| Outcome::input_error("invalid_input", format!("{DEPTH_CAP_VAR}={v} is not a count")))?,
                Err(_) => DEFAULT_DEPTH_CAP,
            };
            let mut points = Vec::with_capacity(a.track.len());
            for &i in &a.track {
                let facet = p.facets().get(i).ok_or(Error::IndexOutOfRange { index: i, len: p.facets().len() })?;
                points.push(facet.polar_vertex.clone());
            }
            let opts = TowerOptions { depth_cap, allow_noncentered: a.allow_noncentered };
            let tower = build_tower(&p, &affine_hull(&points)?, a.levels, &opts)?;
            let chain = tower.chain_bounds()?;
            Outcome::ok(to_value(&TowerDoc::new(&tower, &chain)?))
        }
        Command::Gen(a) => {
            let p = match (&a.canonical, a.dim, a.vertices) {
                (Some(name), _, _) => canonical(name)?,
                (None, Some(dim), Some(vertex_count)) => generate(&GenSpec {
                    dim,
                    vertex_count,
                    coord_range: a.range,
                    denominator: a.denominator,
                    seed: a.seed,
                    symmetrize: a.symmetrize,
                    center: !a.no_center,
                })?,
                _ => unreachable!("clap requires --dim and --vertices without --canonical"),
            };
            Outcome::ok(to_value(&PolytopeDoc::from(&p)))
        }
    };
    Ok(out)
}
