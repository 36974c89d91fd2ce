//! Exact local and global dimension of finite piece unions, graph unions
//! of subdifferentials, and the verification harness built on them.

pub mod build;
pub mod numeric;
pub mod verify;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::Dim;
use crate::lp::feasible_point;
use crate::piecewise::{point_text, Cell};
use crate::scalar::{int, json_vec, Rational};
use crate::subdiff::polyhedron_json;
use crate::{QPolyhedron, QVector};

pub use build::{pullback_union, subjet_union};
pub use numeric::{estimate_local_dim_numeric, sample_union, NumericEstimate};
pub use verify::{
    dim_identity_suite, documented_violations, matches_documentation, verify_local_dim_theorem,
    IdentityReport, PointStatus, VerificationReport,
};

#[derive(Clone, Debug)]
pub enum PieceShape {
    /// `base × fiber`, or `relint(base) × fiber` when `relint_base` is set.
    Product {
        base: QPolyhedron,
        fiber: QPolyhedron,
        relint_base: bool,
    },
    /// A closed polyhedron of the full space.
    Polyhedron(QPolyhedron),
    /// `{(x, 0) : |x| < 1}` in `R^2 × R^2`.
    DiscInterior,
    /// `{(x, ∇p(x)) : x ∈ cell}` for a full-dimensional cell.
    CellGradient(Cell),
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub label: String,
    pub shape: PieceShape,
}

impl Piece {
    pub fn product(
        label: impl Into<String>,
        base: QPolyhedron,
        fiber: QPolyhedron,
        relint_base: bool,
    ) -> Self {
        Piece {
            label: label.into(),
            shape: PieceShape::Product {
                base,
                fiber,
                relint_base,
            },
        }
    }

    pub fn polyhedron(label: impl Into<String>, p: QPolyhedron) -> Self {
        Piece {
            label: label.into(),
            shape: PieceShape::Polyhedron(p),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match &self.shape {
            PieceShape::Product { base, fiber, .. } => base.ambient_dim() + fiber.ambient_dim(),
            PieceShape::Polyhedron(p) => p.ambient_dim(),
            PieceShape::DiscInterior => 4,
            PieceShape::CellGradient(c) => 2 * c.region.ambient_dim(),
        }
    }

    pub fn dim(&self) -> Dim {
        match &self.shape {
            PieceShape::Product { base, fiber, .. } => base.dim() + fiber.dim(),
            PieceShape::Polyhedron(p) => p.dim(),
            PieceShape::DiscInterior => Dim::Finite(2),
            PieceShape::CellGradient(c) => Dim::Finite(c.region.ambient_dim()),
        }
    }

    /// Exact membership of `p` in the closure of the piece.
    pub fn closure_contains(&self, p: &[Rational]) -> bool {
        match &self.shape {
            PieceShape::Product { base, fiber, .. } => {
                let (x, v) = p.split_at(base.ambient_dim());
                base.contains_point(x) && fiber.contains_point(v)
            }
            PieceShape::Polyhedron(q) => q.contains_point(p),
            PieceShape::DiscInterior => {
                let r2 = p[0].clone() * p[0].clone() + p[1].clone() * p[1].clone();
                r2 <= int(1) && p[2..].iter().all(|t| *t == int(0))
            }
            PieceShape::CellGradient(c) => {
                let (x, v) = p.split_at(c.region.ambient_dim());
                c.contains(x) && c.formula.gradient(x) == v
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({"label": self.label, "dim": self.dim().to_json()});
        match &self.shape {
            PieceShape::Product {
                base,
                fiber,
                relint_base,
            } => {
                out["base"] = polyhedron_json(base);
                out["fiber"] = polyhedron_json(fiber);
                out["relint_base"] = json!(relint_base);
            }
            PieceShape::Polyhedron(p) => out["polyhedron"] = polyhedron_json(p),
            PieceShape::DiscInterior => out["shape"] = json!("open unit disc × {0}"),
            PieceShape::CellGradient(c) => {
                out["shape"] = json!(format!("graph of ∇({})", c.formula))
            }
        }
        out
    }
}

/// Cells whose pairwise interfaces are only resolved lazily at query points.
#[derive(Clone, Debug)]
pub struct InterfaceRule {
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug)]
pub struct PieceUnion {
    pub ambient_dim: usize,
    pub pieces: Vec<Piece>,
    /// Interface sets `{(x, v) : x ∈ ∩T, v ∈ conv ∇p_C(x)}` of a Clarke graph.
    pub interfaces: Option<InterfaceRule>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalDimReport {
    pub point: QVector,
    pub local_dim: Dim,
    pub witness: usize,
    /// Pieces whose closure contains the point.
    pub certificate: Vec<usize>,
}

impl LocalDimReport {
    pub fn to_json(&self) -> Value {
        json!({
            "point": json_vec(&self.point),
            "local_dim": self.local_dim.to_json(),
            "witness": self.witness,
            "certificate": self.certificate,
        })
    }
}

fn in_hull(points: &[QVector], v: &[Rational]) -> bool {
    let k = points.len();
    if k == 0 {
        return false;
    }
    let mut ineqs = Vec::new();
    for j in 0..k {
        let mut a = vec![int(0); k];
        a[j] = int(-1);
        ineqs.push((a, int(0)));
    }
    let mut eqs: Vec<(QVector, Rational)> = (0..v.len())
        .map(|i| (points.iter().map(|p| p[i].clone()).collect(), v[i].clone()))
        .collect();
    eqs.push((vec![int(1); k], int(1)));
    feasible_point(k, &ineqs, &eqs).is_some()
}

impl PieceUnion {
    pub fn new(ambient_dim: usize, pieces: Vec<Piece>) -> Self {
        PieceUnion {
            ambient_dim,
            pieces,
            interfaces: None,
        }
    }

    pub fn push(&mut self, p: Piece) -> Result<()> {
        if p.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: p.ambient_dim(),
            });
        }
        self.pieces.push(p);
        Ok(())
    }

    /// Interfaces that might contain `p` and whose dimension is not certified.
    ///
    /// By Carathéodory only sets of at most `n + 1` cells matter, and every pair
    /// in such a set must meet in a positive-dimensional linear hull.
    fn undecided_interfaces(&self, p: &[Rational]) -> Option<String> {
        let rule = self.interfaces.as_ref()?;
        let n = self.ambient_dim / 2;
        let (x, v) = p.split_at(n);
        let at: Vec<&Cell> = rule.cells.iter().filter(|c| c.contains(x)).collect();
        let grads: Vec<QVector> = at.iter().map(|c| c.formula.gradient(x)).collect();
        let k = at.len();
        let meet = |members: &[usize]| {
            let mut region = QPolyhedron::whole(n);
            for &i in members {
                region = region
                    .intersect(&at[i].region)
                    .expect("cells share the ambient dimension");
            }
            region
        };
        let linked: Vec<Vec<bool>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| i != j && meet(&[i, j]).dim() > Dim::Finite(0))
                    .collect()
            })
            .collect();
        let mut stack: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
        while let Some(set) = stack.pop() {
            if set.len() >= 2 {
                let g: Vec<QVector> = set.iter().map(|&i| grads[i].clone()).collect();
                if in_hull(&g, v) && meet(&set).dim() > Dim::Finite(0) {
                    return Some(format!(
                        "interface of {} cells through {} has a positive-dimensional linear hull",
                        set.len(),
                        point_text(x)
                    ));
                }
            }
            if set.len() > n {
                continue;
            }
            let last = *set.last().expect("nonempty");
            #[allow(clippy::needless_range_loop)]
            for j in last + 1..k {
                if set.iter().all(|&i| linked[i][j]) {
                    let mut next = set.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
        }
        None
    }

    /// `max { dim P : p ∈ cl P }`.
    pub fn local_dim(&self, p: &[Rational]) -> Result<LocalDimReport> {
        if p.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: p.len(),
            });
        }
        let certificate: Vec<usize> = (0..self.pieces.len())
            .filter(|&i| self.pieces[i].closure_contains(p))
            .collect();
        let best = certificate
            .iter()
            .copied()
            .max_by_key(|&i| self.pieces[i].dim());
        let decided = best
            .map(|i| self.pieces[i].dim())
            .unwrap_or(Dim::NegInfinity);
        // pieces of a Clarke graph never exceed half the ambient dimension
        if decided < Dim::Finite(self.ambient_dim / 2) {
            if let Some(why) = self.undecided_interfaces(p) {
                return Err(Error::Undecided(why));
            }
        }
        let Some(witness) = best else {
            return Err(Error::PointNotInUnion);
        };
        Ok(LocalDimReport {
            point: p.to_vec(),
            local_dim: decided,
            witness,
            certificate,
        })
    }

    pub fn global_dim(&self) -> Dim {
        self.pieces
            .iter()
            .map(|p| p.dim())
            .max()
            .unwrap_or(Dim::NegInfinity)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient_dim": self.ambient_dim,
            "global_dim": self.global_dim().to_json(),
            "pieces": self.pieces.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }
}

pub fn local_dim(u: &PieceUnion, p: &[Rational]) -> Result<LocalDimReport> {
    u.local_dim(p)
}

pub fn global_dim(u: &PieceUnion) -> Dim {
    u.global_dim()
}
