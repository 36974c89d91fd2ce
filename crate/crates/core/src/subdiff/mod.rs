//! Fréchet, limiting and Clarke subdifferentials, subjet pieces, and a
//! definitional sampling oracle.

pub mod engine;
pub mod oracle;
pub mod poly;

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::Result;
use crate::geometry::{covered_by_union, Dim, HPolyhedron, VRep};
use crate::piecewise::{PiecewiseFunction, Polynomial};
use crate::scalar::{json_vec, Rational};
use crate::{QPolyhedron, QVector};

pub use engine::{
    prune_pieces, pullback_graph, sum_rule_check, sum_rule_check_points, Engine, SumRuleReport,
};
pub use oracle::{engine_probe_points, oracle_subdiff, probe_points, OracleConfig, OracleSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Frechet,
    Limiting,
    Clarke,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Frechet, Kind::Limiting, Kind::Clarke];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Frechet => "frechet",
            Kind::Limiting => "limiting",
            Kind::Clarke => "clarke",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "frechet" => Ok(Kind::Frechet),
            "limiting" => Ok(Kind::Limiting),
            "clarke" => Ok(Kind::Clarke),
            _ => Err(format!(
                "unknown subdifferential kind {s:?} (expected frechet, limiting or clarke)"
            )),
        }
    }
}

/// A subdifferential value: a finite union of polyhedra (no pieces means ∅).
#[derive(Clone, Debug, PartialEq)]
pub struct SubdiffSet {
    pub kind: Kind,
    pub pieces: Vec<QPolyhedron>,
}

pub fn polyhedron_json(p: &QPolyhedron) -> Value {
    let rows = |rs: &[(QVector, Rational)]| -> Vec<Value> {
        rs.iter()
            .map(|(a, b)| json!({"a": json_vec(a), "b": crate::scalar::json_rat(b)}))
            .collect()
    };
    let mut out = json!({
        "dim": p.dim().to_json(),
        "ineqs": rows(p.ineqs()),
        "eqs": rows(p.eqs()),
    });
    if let Ok(v) = p.v_representation() {
        out["vertices"] = Value::Array(v.vertices.iter().map(|x| json_vec(x)).collect());
        out["rays"] = Value::Array(v.rays.iter().map(|x| json_vec(x)).collect());
        out["lines"] = Value::Array(v.lines.iter().map(|x| json_vec(x)).collect());
    }
    out
}

impl SubdiffSet {
    pub fn empty(kind: Kind) -> Self {
        SubdiffSet {
            kind,
            pieces: Vec::new(),
        }
    }

    /// Drops empty pieces and pieces contained in another one.
    pub fn normalized(kind: Kind, pieces: Vec<QPolyhedron>) -> Self {
        let pieces: Vec<QPolyhedron> = pieces
            .into_iter()
            .filter(|p| p.feasible())
            .map(|p| p.canonical())
            .collect();
        let mut kept: Vec<QPolyhedron> = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            let dominated = pieces
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && q.contains(p) && (!p.contains(q) || j < i));
            if !dominated {
                kept.push(p.clone());
            }
        }
        SubdiffSet { kind, pieces: kept }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(|p| !p.feasible())
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.pieces.iter().any(|p| p.contains_point(v))
    }

    pub fn dim(&self) -> Dim {
        self.pieces
            .iter()
            .map(|p| p.dim())
            .max()
            .unwrap_or(Dim::NegInfinity)
    }

    pub fn is_subset_of(&self, other: &SubdiffSet) -> bool {
        self.pieces
            .iter()
            .all(|p| covered_by_union(p, &other.pieces))
    }

    pub fn same_set(&self, other: &SubdiffSet) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Closed convex hull of the union.
    pub fn convex_hull(&self, ambient_dim: usize) -> QPolyhedron {
        let mut all = VRep {
            vertices: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
        };
        for p in &self.pieces {
            if let Ok(v) = p.v_representation() {
                all.vertices.extend(v.vertices);
                all.rays.extend(v.rays);
                all.lines.extend(v.lines);
            }
        }
        HPolyhedron::from_vrep(ambient_dim, &all).expect("pieces share the ambient dimension")
    }

    /// The single point when the set is one point.
    pub fn as_points(&self) -> Option<Vec<QVector>> {
        let mut pts = Vec::new();
        for p in &self.pieces {
            let v = p.v_representation().ok()?;
            if v.vertices.len() != 1 || !v.rays.is_empty() || !v.lines.is_empty() {
                return None;
            }
            pts.push(v.vertices[0].clone());
        }
        Some(pts)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "empty": self.is_empty(),
            "dim": self.dim().to_json(),
            "pieces": self.pieces.iter().map(polyhedron_json).collect::<Vec<_>>(),
        })
    }
}

/// One piece `base × subgrad` of a subdifferential graph.
#[derive(Clone, Debug)]
pub struct SubjetPiece {
    pub base: QPolyhedron,
    pub value: Polynomial,
    pub subgrad: QPolyhedron,
    /// The piece is `relint(base) × subgrad` rather than `base × subgrad`.
    pub relint_only: bool,
}

impl SubjetPiece {
    pub fn base_dim(&self) -> Dim {
        self.base.dim()
    }

    pub fn subgrad_dim(&self) -> Dim {
        self.subgrad.dim()
    }

    pub fn dim(&self) -> Dim {
        self.base_dim() + self.subgrad_dim()
    }

    /// Closure of the piece as a polyhedron in `R^(2n)` with coordinates `(x, v)`.
    pub fn graph_polyhedron(&self) -> QPolyhedron {
        self.base.product(&self.subgrad)
    }

    pub fn contains(&self, x: &[Rational], v: &[Rational]) -> bool {
        if !self.base.contains_point(x) || !self.subgrad.contains_point(v) {
            return false;
        }
        if !self.relint_only {
            return true;
        }
        let active = self.base.active_at(x);
        self.base.face_with(&active).dim() == self.base.dim()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": polyhedron_json(&self.base),
            "subgrad": polyhedron_json(&self.subgrad),
            "value": self.value.to_string(),
            "relint_only": self.relint_only,
            "dim": self.dim().to_json(),
        })
    }
}

pub fn frechet_subdiff(f: &PiecewiseFunction, x: &[Rational]) -> Result<SubdiffSet> {
    if f.is_affine() {
        Engine::new(f)?.frechet(x)
    } else {
        poly::frechet(f, x)
    }
}

pub fn limiting_subdiff(f: &PiecewiseFunction, x: &[Rational]) -> Result<SubdiffSet> {
    if f.is_affine() {
        Engine::new(f)?.limiting(x)
    } else {
        poly::limiting(f, x)
    }
}

pub fn clarke_subdiff(f: &PiecewiseFunction, x: &[Rational]) -> Result<SubdiffSet> {
    if f.is_affine() {
        Engine::new(f)?.clarke(x)
    } else {
        poly::clarke(f, x)
    }
}

pub fn subdiff(f: &PiecewiseFunction, x: &[Rational], kind: Kind) -> Result<SubdiffSet> {
    match kind {
        Kind::Frechet => frechet_subdiff(f, x),
        Kind::Limiting => limiting_subdiff(f, x),
        Kind::Clarke => clarke_subdiff(f, x),
    }
}

pub fn subjet_pieces(f: &PiecewiseFunction, kind: Kind) -> Result<Vec<SubjetPiece>> {
    if !f.is_affine() {
        return Err(crate::Error::Unsupported(
            "explicit subjet pieces need the affine tier; see the dimension module for symbolic pieces".into(),
        ));
    }
    Ok(Engine::new(f)?.subjet_pieces(kind))
}
