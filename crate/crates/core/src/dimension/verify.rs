//! Checking "local dimension n at every point" over a finite covering set of
//! test points, and the elementary dimension identities.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dimension::{subjet_union, PieceShape, PieceUnion};
use crate::error::{Error, Result};
use crate::geometry::{Dim, HPolyhedron, VRep};
use crate::linalg;
use crate::piecewise::PiecewiseFunction;
use crate::scalar::{int, json_vec, Rational};
use crate::subdiff::Kind;
use crate::{QPolyhedron, QVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    Violation,
    Undecided,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::Violation => "violation",
            PointStatus::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TestPoint {
    pub point: QVector,
    pub local_dim: Option<Dim>,
    pub status: PointStatus,
    pub detail: Option<String>,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub fixture: String,
    pub kind: Kind,
    pub n: usize,
    pub global_dim: Dim,
    pub points: Vec<TestPoint>,
}

impl VerificationReport {
    pub fn violations(&self) -> impl Iterator<Item = &TestPoint> {
        self.points
            .iter()
            .filter(|p| p.status == PointStatus::Violation)
    }

    pub fn undecided(&self) -> impl Iterator<Item = &TestPoint> {
        self.points
            .iter()
            .filter(|p| p.status == PointStatus::Undecided)
    }

    /// Every test point has local dimension `n` and so does the whole graph.
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.status == PointStatus::Ok)
            && self.global_dim == Dim::Finite(self.n)
    }

    pub fn to_json(&self) -> Value {
        let point = |p: &TestPoint| {
            json!({
                "point": json_vec(&p.point),
                "local_dim": p.local_dim.map(|d| d.to_json()),
                "status": p.status.as_str(),
                "detail": p.detail,
            })
        };
        json!({
            "fixture": self.fixture,
            "kind": self.kind.as_str(),
            "n": self.n,
            "global_dim": self.global_dim.to_json(),
            "passed": self.passed(),
            "test_points": self.points.iter().map(point).collect::<Vec<_>>(),
            "violations": self.violations().map(point).collect::<Vec<_>>(),
            "undecided": self.undecided().count(),
        })
    }
}

fn concat(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().chain(b).cloned().collect()
}

fn push(p: QVector, out: &mut Vec<QVector>) {
    if !out.contains(&p) {
        out.push(p);
    }
}

fn vertices(p: &QPolyhedron) -> Vec<QVector> {
    p.v_representation().map(|v| v.vertices).unwrap_or_default()
}

/// A constraint of `p` that every generator of `q` strictly violates, which
/// proves the two disjoint without an LP.
fn separated(p: &QPolyhedron, q: &VRep<Rational>) -> bool {
    if q.vertices.is_empty() {
        return false;
    }
    let zero = int(0);
    let flat = |a: &QVector| q.lines.iter().all(|l| linalg::dot(a, l) == zero);
    let above = |a: &QVector, b: &Rational| {
        flat(a)
            && q.vertices.iter().all(|v| linalg::dot(a, v) > *b)
            && q.rays.iter().all(|r| linalg::dot(a, r) >= zero)
    };
    let below = |a: &QVector, b: &Rational| {
        flat(a)
            && q.vertices.iter().all(|v| linalg::dot(a, v) < *b)
            && q.rays.iter().all(|r| linalg::dot(a, r) <= zero)
    };
    p.ineqs().iter().any(|(a, b)| above(a, b))
        || p.eqs().iter().any(|(a, b)| above(a, b) || below(a, b))
}

/// Vertices, relative-interior samples and pairwise-intersection samples of the
/// piece closures; point-based fibers also get vertex midpoints and the centroid.
type Rep = VRep<Rational>;

pub fn covering_points(u: &PieceUnion) -> Vec<QVector> {
    let mut out: Vec<QVector> = Vec::new();
    let products: Vec<(&QPolyhedron, &QPolyhedron)> = u
        .pieces
        .iter()
        .filter_map(|p| match &p.shape {
            PieceShape::Product { base, fiber, .. } => Some((base, fiber)),
            _ => None,
        })
        .collect();
    for piece in &u.pieces {
        match &piece.shape {
            PieceShape::Product { base, fiber, .. } => {
                let fv = vertices(fiber);
                for b in vertices(base) {
                    for v in &fv {
                        push(concat(&b, v), &mut out);
                    }
                }
                if let (Some(b), Some(v)) = (base.relint_point(), fiber.relint_point()) {
                    push(concat(&b, &v), &mut out);
                }
                if base.dim() == Dim::Finite(0) && fv.len() > 1 {
                    let b = base.relint_point().expect("nonempty base");
                    for i in 0..fv.len() {
                        for j in i + 1..fv.len() {
                            let mid = linalg::scale(
                                &Rational::new(1.into(), 2.into()),
                                &linalg::add(&fv[i], &fv[j]),
                            );
                            push(concat(&b, &mid), &mut out);
                        }
                    }
                    let sum = fv
                        .iter()
                        .fold(linalg::zeros(fv[0].len()), |acc, v| linalg::add(&acc, v));
                    let centroid =
                        linalg::scale(&Rational::new(1.into(), (fv.len() as i64).into()), &sum);
                    push(concat(&b, &centroid), &mut out);
                }
            }
            PieceShape::Polyhedron(p) => {
                for v in vertices(p) {
                    push(v, &mut out);
                }
                if let Some(r) = p.relint_point() {
                    push(r, &mut out);
                }
            }
            PieceShape::DiscInterior => push(vec![int(0); 4], &mut out),
            PieceShape::CellGradient(c) => {
                let x = c
                    .adjacency
                    .first()
                    .and_then(|a| a.witness_seq.first().cloned())
                    .or_else(|| c.region.relint_point().filter(|x| c.contains(x)));
                if let Some(x) = x {
                    push(concat(&x, &c.formula.gradient(&x)), &mut out);
                }
            }
        }
    }
    let reps: Vec<(Option<Rep>, Option<Rep>)> = products
        .iter()
        .map(|(b, f)| (b.v_representation().ok(), f.v_representation().ok()))
        .collect();
    let apart =
        |p: &QPolyhedron, q: &Option<VRep<Rational>>| q.as_ref().is_some_and(|q| separated(p, q));
    for i in 0..products.len() {
        for j in i + 1..products.len() {
            let (bi, fi) = products[i];
            let (bj, fj) = products[j];
            if apart(bi, &reps[j].0)
                || apart(bj, &reps[i].0)
                || apart(fi, &reps[j].1)
                || apart(fj, &reps[i].1)
            {
                continue;
            }
            let (Ok(b), Ok(f)) = (bi.intersect(bj), fi.intersect(fj)) else {
                continue;
            };
            if let (Some(x), Some(v)) = (b.relint_point(), f.relint_point()) {
                push(concat(&x, &v), &mut out);
            }
        }
    }
    out
}

fn check_point(u: &PieceUnion, n: usize, p: &QVector) -> TestPoint {
    match u.local_dim(p) {
        Ok(r) => TestPoint {
            point: p.clone(),
            local_dim: Some(r.local_dim),
            status: if r.local_dim == Dim::Finite(n) {
                PointStatus::Ok
            } else {
                PointStatus::Violation
            },
            detail: None,
        },
        Err(e) => TestPoint {
            point: p.clone(),
            local_dim: None,
            status: if matches!(e, Error::Undecided(_)) {
                PointStatus::Undecided
            } else {
                PointStatus::Violation
            },
            detail: Some(e.to_string()),
        },
    }
}

/// Local dimension of the graph at every covering test point, compared with `n`.
pub fn verify_local_dim_theorem(f: &PiecewiseFunction, kind: Kind) -> Result<VerificationReport> {
    let u = subjet_union(f, kind)?;
    let n = f.ambient_dim;
    let pts = covering_points(&u);
    let points: Vec<TestPoint> = pts.par_iter().map(|p| check_point(&u, n, p)).collect();
    Ok(VerificationReport {
        fixture: f.name.clone(),
        kind,
        n,
        global_dim: u.global_dim(),
        points,
    })
}

/// Violations the two counterexample fixtures are known to produce, if any.
pub fn documented_violations(fixture: &str, kind: Kind) -> Option<Vec<QVector>> {
    let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
    match (fixture, kind) {
        ("clarke3d", Kind::Clarke) => Some(vec![
            vec![int(0), int(0), int(0), q(1, 2), q(-1, 2), int(0)],
            vec![int(0), int(0), int(0), q(-1, 2), q(1, 2), int(0)],
        ]),
        ("disc_plus_point", Kind::Frechet | Kind::Limiting) => {
            Some(vec![vec![int(1), int(0), int(1), int(0)]])
        }
        _ => None,
    }
}

/// The report matches its documented violations exactly, or passes outright
/// when none are documented.
pub fn matches_documentation(r: &VerificationReport) -> bool {
    match documented_violations(&r.fixture, r.kind) {
        None => r.passed(),
        Some(expected) => {
            let found: Vec<&QVector> = r.violations().map(|p| &p.point).collect();
            found.len() == expected.len() && expected.iter().all(|e| found.contains(&e))
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn record(&mut self, name: String, pass: bool, detail: String) {
        self.checks.push(IdentityCheck { name, pass, detail });
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }
}

/// Union, product and inclusion identities over all pairs of `sets`, and
/// `dim gph F = dim dom F + dim fiber` for each `(dom, fiber)` in `maps`.
pub fn dim_identity_suite(
    sets: &[QPolyhedron],
    maps: &[(QPolyhedron, QPolyhedron)],
) -> IdentityReport {
    let mut rep = IdentityReport::default();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if j < i {
                continue;
            }
            let prod = a.product(b).dim();
            rep.record(
                format!("dim(S{i} × S{j}) = dim S{i} + dim S{j}"),
                prod == a.dim() + b.dim(),
                format!("{} vs {} + {}", prod, a.dim(), b.dim()),
            );
            if a.ambient_dim() != b.ambient_dim() || i == j {
                continue;
            }
            let union = PieceUnion::new(
                a.ambient_dim(),
                vec![
                    super::Piece::polyhedron(format!("S{i}"), a.clone()),
                    super::Piece::polyhedron(format!("S{j}"), b.clone()),
                ],
            );
            let sampled = [a.relint_point(), b.relint_point()]
                .into_iter()
                .flatten()
                .filter_map(|p| union.local_dim(&p).ok())
                .map(|r| r.local_dim)
                .max()
                .unwrap_or(Dim::NegInfinity);
            let want = a.dim().max(b.dim());
            rep.record(
                format!("dim(S{i} ∪ S{j}) = max"),
                sampled == want && union.global_dim() == want,
                format!("{sampled} vs {want}"),
            );
            if b.contains(a) {
                rep.record(
                    format!("S{i} ⊆ S{j} ⇒ dim S{i} ≤ dim S{j}"),
                    a.dim() <= b.dim(),
                    format!("{} ≤ {}", a.dim(), b.dim()),
                );
            }
            if let Ok(meet) = a.intersect(b) {
                rep.record(
                    format!("dim(S{i} ∩ S{j}) ≤ min"),
                    meet.dim() <= a.dim().min(b.dim()),
                    format!("{} vs {}", meet.dim(), a.dim().min(b.dim())),
                );
            }
        }
    }
    for (k, (dom, fiber)) in maps.iter().enumerate() {
        let g = HPolyhedron::product(dom, fiber).dim();
        rep.record(
            format!("dim gph F{k} = dim dom + dim fiber"),
            g == dom.dim() + fiber.dim(),
            format!("{} vs {} + {}", g, dom.dim(), fiber.dim()),
        );
    }
    rep
}
