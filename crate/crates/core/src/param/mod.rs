//! The parametric system `v ∈ ∂f(x), Ax + v = b` on the affine tier: exact
//! solution sets, a sensitivity experiment around an anchor solution, and the
//! constructive accessibility solver.

pub mod access;
pub mod sensitivity;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::minty::{solve_on_piece, MintyMap, PieceSolution, QMatrix};
use crate::piecewise::PiecewiseFunction;
use crate::scalar::{json_vec, Rational};
use crate::subdiff::{Engine, Kind, SubjetPiece};
use crate::QVector;

pub use crate::minty::local_dim_monotonicity_check;
pub use access::{access_point, AccessConfig, AccessRoute, AccessStep, AccessWitness, Triple};
pub use sensitivity::{sensitivity_experiment, SensitivityConfig, SensitivityReport};

#[derive(Clone, Debug)]
pub struct ParamSystem {
    pub f: PiecewiseFunction,
    pub a: QMatrix,
    pub b: QVector,
}

impl ParamSystem {
    pub fn new(f: PiecewiseFunction, a: QMatrix, b: QVector) -> Result<Self> {
        let n = f.ambient_dim;
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.len(),
            });
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        Ok(ParamSystem { f, a, b })
    }
}

/// `S(A, b)` as a list of per-piece outcomes; points are `(x, v)` pairs.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub pieces: Vec<PieceSolution>,
    pub points: Vec<QVector>,
}

impl SolutionSet {
    pub fn is_finite(&self) -> bool {
        !self
            .pieces
            .iter()
            .any(|p| matches!(p, PieceSolution::Positive { .. }))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(|p| *p == PieceSolution::Empty)
    }

    /// Some solution lies in the closed ball of radius `eps` around `center`.
    pub fn meets_ball(&self, center: &[Rational], eps: &Rational) -> bool {
        let r2 = eps.clone() * eps.clone();
        let near = |p: &[Rational]| crate::linalg::norm2(&crate::linalg::sub(p, center)) <= r2;
        self.pieces.iter().any(|s| match s {
            PieceSolution::Empty => false,
            PieceSolution::Point(p) => near(p),
            PieceSolution::Positive { set, .. } => crate::geometry::project(center, set)
                .map(|pr| pr.dist2 <= r2)
                .unwrap_or(false),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "finite": self.is_finite(),
            "empty": self.is_empty(),
            "points": self.points.iter().map(|p| json_vec(p)).collect::<Vec<_>>(),
            "per_piece": self.pieces.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Solves on precomputed subjet pieces. Fréchet pieces only keep solutions
/// whose base point lies in the relative interior of the piece's base.
pub fn solve_pieces(pieces: &[SubjetPiece], a: &QMatrix, b: &[Rational]) -> Result<SolutionSet> {
    let map = MintyMap::new(a.clone())?;
    let n = map.dim();
    let mut out = Vec::with_capacity(pieces.len());
    let mut points: Vec<QVector> = Vec::new();
    for piece in pieces {
        let mut s = solve_on_piece(&map, &piece.graph_polyhedron(), b)?;
        if piece.relint_only {
            let keep = match &s {
                PieceSolution::Empty => true,
                PieceSolution::Point(p) => piece.contains(&p[..n], &p[n..]),
                // relint of the intersection meets relint(base) iff the intersection does
                PieceSolution::Positive { set, .. } => {
                    let p = set.relint_point().expect("nonempty");
                    piece.contains(&p[..n], &p[n..])
                }
            };
            if !keep {
                s = PieceSolution::Empty;
            }
        }
        if let PieceSolution::Point(p) = &s {
            if !points.contains(p) {
                points.push(p.clone());
            }
        }
        out.push(s);
    }
    Ok(SolutionSet {
        pieces: out,
        points,
    })
}

pub fn solve(sys: &ParamSystem, kind: Kind) -> Result<SolutionSet> {
    let pieces = Engine::new(&sys.f)?.subjet_pieces(kind);
    solve_pieces(&pieces, &sys.a, &sys.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{min_of_affine, negate};
    use crate::scalar::{int, ivec, rat};

    fn neg_abs() -> PiecewiseFunction {
        min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap()
    }

    fn sys(f: PiecewiseFunction, a: i64, b: Rational) -> ParamSystem {
        ParamSystem::new(f, vec![ivec(&[a])], vec![b]).unwrap()
    }

    #[test]
    fn abs_examples() {
        let abs = negate(&neg_abs()).unwrap();
        let s = solve(&sys(abs.clone(), 1, int(2)), Kind::Limiting).unwrap();
        assert_eq!(s.points, vec![ivec(&[1, 1])]);
        let s = solve(&sys(abs, 1, rat(1, 2)), Kind::Limiting).unwrap();
        assert_eq!(s.points, vec![vec![int(0), rat(1, 2)]]);
        assert!(s.is_finite());
    }

    #[test]
    fn neg_abs_two_solutions() {
        let mut s = solve(&sys(neg_abs(), 1, int(0)), Kind::Limiting)
            .unwrap()
            .points;
        s.sort();
        assert_eq!(s, vec![ivec(&[-1, 1]), ivec(&[1, -1])]);
    }

    #[test]
    fn frechet_drops_the_kink() {
        // -|x| with A = 0, b = 1: the limiting solution (0, 1) is not a Fréchet one
        let lim = solve(&sys(neg_abs(), 0, int(1)), Kind::Limiting).unwrap();
        assert!(!lim.is_finite());
        let fr = solve(&sys(neg_abs(), 0, int(1)), Kind::Frechet).unwrap();
        assert!(fr.meets_ball(&ivec(&[-1, 1]), &int(0)));
        assert!(!fr.meets_ball(&ivec(&[1, 1]), &rat(1, 2)));
    }
}
