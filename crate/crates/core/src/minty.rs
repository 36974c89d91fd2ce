//! The map `φ_A(x, v) = Ax + v` on polyhedral subdifferential graphs:
//! per-piece injectivity, finite-to-one and dense local diffeomorphism
//! certificates, exact preimages, and random-matrix sampling.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dimension::verify::covering_points;
use crate::dimension::{Piece, PieceShape, PieceUnion};
use crate::error::{Error, Result};
use crate::geometry::{covered_by_union, Dim};
use crate::linalg;
use crate::scalar::{int, json_vec, Rational};
use crate::{QPolyhedron, QVector};

pub type QMatrix = Vec<QVector>;

/// `φ_A` for a square rational `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct MintyMap {
    a: QMatrix,
}

impl MintyMap {
    pub fn new(a: QMatrix) -> Result<Self> {
        let n = a.len();
        if let Some(bad) = a.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(MintyMap { a })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.a
    }

    /// Rows of `[A I]`.
    pub fn rows(&self) -> QMatrix {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut r = self.a[i].clone();
                r.extend(linalg::unit::<Rational>(n, i));
                r
            })
            .collect()
    }

    pub fn apply(&self, p: &[Rational]) -> QVector {
        linalg::mat_vec(&self.rows(), p)
    }

    /// `(dim P, rank of [A I] on the direction space of P)`.
    fn rank_on(&self, piece: &QPolyhedron) -> Option<(usize, usize)> {
        let dirs = piece.direction_basis()?;
        let rows = self.rows();
        let images: Vec<QVector> = dirs.iter().map(|d| linalg::mat_vec(&rows, d)).collect();
        Some((dirs.len(), linalg::rank(&images, self.dim())))
    }

    pub fn to_json(&self) -> Value {
        json!(self.a.iter().map(|r| json_vec(r)).collect::<Vec<_>>())
    }
}

/// `ker [A I] ∩ directions(P) = {0}`; empty pieces count as injective.
pub fn injective_on_piece(map: &MintyMap, piece: &QPolyhedron) -> bool {
    map.rank_on(piece).is_none_or(|(d, r)| d == r)
}

/// Closed polyhedral pieces of `u` in `R^n × R^n`.
pub fn closed_pieces(u: &PieceUnion) -> Result<Vec<QPolyhedron>> {
    u.pieces
        .iter()
        .map(|p| match &p.shape {
            PieceShape::Product { base, fiber, .. } => Ok(base.product(fiber)),
            PieceShape::Polyhedron(q) => Ok(q.clone()),
            _ => Err(Error::Unsupported(format!(
                "piece {} is not polyhedral",
                p.label
            ))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PieceRank {
    pub dim: Dim,
    pub rank: usize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MintyCertificate {
    pub matrix: QMatrix,
    pub pieces: Vec<PieceRank>,
    pub finite_to_one: bool,
    /// At most one preimage point per piece.
    pub max_preimage_bound: usize,
    /// Full-dimensional pieces on which `φ_A` is an affine bijection onto an open set.
    pub dense_set: Vec<usize>,
    /// Every piece lies in the closure of the dense set.
    pub dense: bool,
    /// Test points where the local dimension is below `n`.
    pub hypothesis_failures: Vec<QVector>,
}

impl MintyCertificate {
    pub fn dense_local_diffeo(&self) -> bool {
        self.dense && self.hypothesis_failures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.finite_to_one && self.dense_local_diffeo()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "matrix": self.matrix.iter().map(|r| json_vec(r)).collect::<Vec<_>>(),
            "per_piece": self.pieces.iter().map(|p| json!({
                "dim": p.dim.to_json(),
                "rank": p.rank,
                "kernel_dim": p.kernel_dim,
            })).collect::<Vec<_>>(),
            "finite_to_one": self.finite_to_one,
            "max_preimage_bound": self.max_preimage_bound,
            "dense_set": self.dense_set,
            "dense": self.dense,
            "hypothesis_failures": self.hypothesis_failures.iter().map(|p| json_vec(p)).collect::<Vec<_>>(),
            "pass": self.passed(),
        })
    }
}

/// Precomputed data of a fixed piece union, reused across matrices.
pub struct MintyAnalysis {
    n: usize,
    pieces: Vec<QPolyhedron>,
    hypothesis_failures: Vec<QVector>,
    density: Mutex<HashMap<Vec<usize>, bool>>,
}

impl MintyAnalysis {
    pub fn new(u: &PieceUnion) -> Result<Self> {
        let n = u.ambient_dim / 2;
        let pieces = closed_pieces(u)?;
        let hypothesis_failures = covering_points(u)
            .into_iter()
            .filter(|p| !matches!(u.local_dim(p), Ok(r) if r.local_dim == Dim::Finite(n)))
            .collect();
        Ok(MintyAnalysis {
            n,
            pieces,
            hypothesis_failures,
            density: Mutex::new(HashMap::new()),
        })
    }

    pub fn pieces(&self) -> &[QPolyhedron] {
        &self.pieces
    }

    fn dense_for(&self, set: &[usize]) -> bool {
        if let Some(d) = self.density.lock().expect("density cache").get(set) {
            return *d;
        }
        let closures: Vec<QPolyhedron> = set.iter().map(|&i| self.pieces[i].clone()).collect();
        let d = self.pieces.iter().all(|p| covered_by_union(p, &closures));
        self.density
            .lock()
            .expect("density cache")
            .insert(set.to_vec(), d);
        d
    }

    pub fn certify(&self, map: &MintyMap) -> Result<MintyCertificate> {
        if map.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: map.dim(),
            });
        }
        let mut ranks = Vec::with_capacity(self.pieces.len());
        let mut dense_set = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let (d, r) = map.rank_on(p).unwrap_or((0, 0));
            if d == self.n && r == self.n {
                dense_set.push(i);
            }
            ranks.push(PieceRank {
                dim: p.dim(),
                rank: r,
                kernel_dim: d - r,
            });
        }
        let finite_to_one = ranks.iter().all(|r| r.kernel_dim == 0);
        Ok(MintyCertificate {
            matrix: map.matrix().clone(),
            pieces: ranks,
            finite_to_one,
            max_preimage_bound: self.pieces.len(),
            dense: self.dense_for(&dense_set),
            dense_set,
            hypothesis_failures: self.hypothesis_failures.clone(),
        })
    }
}

pub fn finite_to_one(map: &MintyMap, u: &PieceUnion) -> Result<MintyCertificate> {
    MintyAnalysis::new(u)?.certify(map)
}

/// Same certificate as [`finite_to_one`]; the dense-set fields are the point here.
pub fn dense_local_diffeo(map: &MintyMap, u: &PieceUnion) -> Result<MintyCertificate> {
    MintyAnalysis::new(u)?.certify(map)
}

/// `P ∩ {(x, v) : Ax + v = b}` classified by dimension.
#[derive(Clone, Debug, PartialEq)]
pub enum PieceSolution {
    Empty,
    Point(QVector),
    Positive { dim: usize, set: QPolyhedron },
}

impl PieceSolution {
    pub fn to_json(&self) -> Value {
        match self {
            PieceSolution::Empty => json!({"kind": "empty"}),
            PieceSolution::Point(p) => json!({"kind": "point", "point": json_vec(p)}),
            PieceSolution::Positive { dim, set } => json!({
                "kind": "positive",
                "dim": dim,
                "set": crate::subdiff::polyhedron_json(set),
            }),
        }
    }
}

pub fn solve_on_piece(
    map: &MintyMap,
    piece: &QPolyhedron,
    b: &[Rational],
) -> Result<PieceSolution> {
    let mut q = piece.clone();
    for (row, bi) in map.rows().into_iter().zip(b) {
        q = q.with_eq(row, bi.clone())?;
    }
    Ok(match q.dim() {
        Dim::NegInfinity => PieceSolution::Empty,
        Dim::Finite(0) => PieceSolution::Point(q.relint_point().expect("nonempty")),
        Dim::Finite(d) => PieceSolution::Positive {
            dim: d,
            set: q.canonical(),
        },
    })
}

/// Exact preimage `φ_A⁻¹(b)` piece by piece.
pub fn preimage(
    map: &MintyMap,
    pieces: &[QPolyhedron],
    b: &[Rational],
) -> Result<Vec<PieceSolution>> {
    if b.len() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            got: b.len(),
        });
    }
    pieces.iter().map(|p| solve_on_piece(map, p, b)).collect()
}

/// Distinct points of a finite preimage; `None` if some piece contributes a continuum.
pub fn preimage_points(parts: &[PieceSolution]) -> Option<Vec<QVector>> {
    let mut out: Vec<QVector> = Vec::new();
    for p in parts {
        match p {
            PieceSolution::Empty => {}
            PieceSolution::Point(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            PieceSolution::Positive { .. } => return None,
        }
    }
    Some(out)
}

/// Ranges of the sampled rationals `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleBounds {
    pub numerator: i64,
    pub denominator: i64,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds {
            numerator: 1000,
            denominator: 100,
        }
    }
}

/// A nonzero rational with numerator in `[-N, N]` and denominator in `[1, D]`.
pub fn random_rational(rng: &mut impl Rng, bounds: SampleBounds) -> Rational {
    loop {
        let p = rng.random_range(-bounds.numerator..=bounds.numerator);
        if p != 0 {
            let q = rng.random_range(1..=bounds.denominator);
            return Rational::new(p.into(), q.into());
        }
    }
}

/// Stream `trial` of the generator seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, bounds: SampleBounds) -> QMatrix {
    (0..n)
        .map(|_| (0..n).map(|_| random_rational(rng, bounds)).collect())
        .collect()
}

#[derive(Clone, Debug)]
pub struct GenericReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    /// Matrices that failed, in trial order.
    pub failures: Vec<(usize, QMatrix)>,
}

impl GenericReport {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.passed as f64 / self.trials as f64
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "fraction": self.fraction(),
            "failures": self.failures.iter().take(20).map(|(t, m)| json!({
                "trial": t,
                "matrix": m.iter().map(|r| json_vec(r)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Fraction of random matrices for which both certificates hold.
pub fn sample_generic(
    u: &PieceUnion,
    trials: usize,
    seed: u64,
    bounds: SampleBounds,
) -> Result<GenericReport> {
    let analysis = MintyAnalysis::new(u)?;
    let n = u.ambient_dim / 2;
    let outcomes: Vec<(usize, QMatrix, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = random_matrix(&mut trial_rng(seed, t as u64), n, bounds);
            let map = MintyMap::new(a.clone())?;
            Ok((t, a, analysis.certify(&map)?.passed()))
        })
        .collect::<Result<_>>()?;
    let passed = outcomes.iter().filter(|o| o.2).count();
    let failures = outcomes
        .into_iter()
        .filter(|o| !o.2)
        .map(|(t, a, _)| (t, a))
        .collect();
    Ok(GenericReport {
        seed,
        trials,
        passed,
        failures,
    })
}

/// Union of the images `φ_A(P)` in `R^n`.
pub fn image_union(map: &MintyMap, pieces: &[QPolyhedron]) -> Result<PieceUnion> {
    let n = map.dim();
    let rows = map.rows();
    let zero = linalg::zeros(n);
    let mut out = PieceUnion::new(n, Vec::new());
    for (i, p) in pieces.iter().enumerate() {
        let img = p.linear_image(&rows, &zero, n)?;
        if img.feasible() {
            out.push(Piece::polyhedron(format!("φ(piece {i})"), img))?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MonotonicityCheck {
    pub point: QVector,
    pub source_dim: Dim,
    pub image_dim: Dim,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    /// Set when the map is not certified finite-to-one and nothing was checked.
    pub skipped: Option<String>,
    pub checks: Vec<MonotonicityCheck>,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.skipped.is_none() && self.checks.iter().all(|c| c.holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "skipped": self.skipped,
            "holds": self.holds(),
            "checks": self.checks.iter().map(|c| json!({
                "point": json_vec(&c.point),
                "source_dim": c.source_dim.to_json(),
                "image_dim": c.image_dim.to_json(),
                "holds": c.holds,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `dim_U(p) ≤ dim_{φ(U)}(φ(p))` at each test point.
pub fn local_dim_monotonicity_check(
    cert: &MintyCertificate,
    u: &PieceUnion,
    points: &[QVector],
) -> Result<MonotonicityReport> {
    if !cert.finite_to_one {
        return Ok(MonotonicityReport {
            skipped: Some("map is not certified finite-to-one".into()),
            checks: Vec::new(),
        });
    }
    let map = MintyMap::new(cert.matrix.clone())?;
    let image = image_union(&map, &closed_pieces(u)?)?;
    let checks = points
        .par_iter()
        .map(|p| {
            let source_dim = u.local_dim(p)?.local_dim;
            let image_dim = image.local_dim(&map.apply(p))?.local_dim;
            Ok(MonotonicityCheck {
                point: p.clone(),
                source_dim,
                image_dim,
                holds: source_dim <= image_dim,
            })
        })
        .collect::<Result<_>>()?;
    Ok(MonotonicityReport {
        skipped: None,
        checks,
    })
}

/// `λ I` as a map, the convex case of the classical parametrization.
pub fn scaled_identity(n: usize, lambda: Rational) -> MintyMap {
    let a = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { lambda.clone() } else { int(0) })
                .collect()
        })
        .collect();
    MintyMap { a }
}
