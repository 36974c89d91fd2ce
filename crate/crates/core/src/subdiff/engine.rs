//! Exact subdifferentials of piecewise-affine functions over a
//! face-to-face refinement of their cells.

use crate::error::{Error, Result};
use crate::geometry::{
    covered_by_union, normal_cone_at, normal_cone_of_tight, tangent_cone_at, Dim,
};
use crate::linalg;
use crate::piecewise::{
    complex_faces, point_text, refine, sum, ComplexFace, PiecewiseFunction, Polynomial,
};
use crate::scalar::Rational;
use crate::subdiff::{Kind, SubdiffSet, SubjetPiece};
use crate::{QPolyhedron, QVector};

struct FaceData {
    face: ComplexFace,
    /// `∩ (∇f_C + N_C(F))` over the cells `C` containing the face.
    subgrad: QPolyhedron,
}

/// Precomputed face structure of one piecewise-affine function.
pub struct Engine {
    f: PiecewiseFunction,
    grads: Vec<QVector>,
    full: Vec<bool>,
    faces: Vec<FaceData>,
}

impl Engine {
    pub fn new(f: &PiecewiseFunction) -> Result<Self> {
        if !f.is_affine() {
            return Err(Error::Unsupported(format!(
                "{} is not piecewise affine",
                f.name
            )));
        }
        let f = refine(f)?;
        let n = f.ambient_dim;
        let grads: Vec<QVector> = f
            .cells
            .iter()
            .map(|c| c.formula.affine_parts().expect("affine tier").0)
            .collect();
        let full = f
            .cells
            .iter()
            .map(|c| c.region.dim() == Dim::Finite(n))
            .collect();
        let mut faces = Vec::new();
        for face in complex_faces(&f) {
            let mut s = QPolyhedron::whole(n);
            for (k, tight) in &face.cells {
                let cone = normal_cone_of_tight(&f.cells[*k].region, tight);
                s = s.intersect(&cone.as_polyhedron().translate(&grads[*k])?)?;
            }
            faces.push(FaceData {
                face,
                subgrad: s.canonical(),
            });
        }
        Ok(Engine {
            f,
            grads,
            full,
            faces,
        })
    }

    /// The refined function the engine works on.
    pub fn function(&self) -> &PiecewiseFunction {
        &self.f
    }

    pub fn faces(&self) -> impl Iterator<Item = (&ComplexFace, &QPolyhedron)> {
        self.faces.iter().map(|d| (&d.face, &d.subgrad))
    }

    fn check(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.f.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.f.ambient_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// True when the cells around `x` cover a neighbourhood of it.
    pub fn is_lipschitz_at(&self, x: &[Rational]) -> Result<bool> {
        self.check(x)?;
        let cones: Vec<QPolyhedron> = self
            .f
            .cells_at(x)
            .into_iter()
            .map(|k| tangent_cone_at(&self.f.cells[k].region, x).map(|c| c.into_polyhedron()))
            .collect::<Result<_>>()?;
        Ok(covered_by_union(
            &QPolyhedron::whole(self.f.ambient_dim),
            &cones,
        ))
    }

    pub fn frechet(&self, x: &[Rational]) -> Result<SubdiffSet> {
        self.check(x)?;
        let cells = self.f.cells_at(x);
        if cells.is_empty() {
            return Ok(SubdiffSet::empty(Kind::Frechet));
        }
        let mut s = QPolyhedron::whole(self.f.ambient_dim);
        for k in cells {
            let cone = normal_cone_at(&self.f.cells[k].region, x)?;
            s = s.intersect(&cone.as_polyhedron().translate(&self.grads[k])?)?;
        }
        Ok(SubdiffSet::normalized(Kind::Frechet, vec![s]))
    }

    pub fn limiting(&self, x: &[Rational]) -> Result<SubdiffSet> {
        self.check(x)?;
        let pieces = self
            .faces
            .iter()
            .filter(|d| d.face.poly.contains_point(x))
            .map(|d| d.subgrad.clone())
            .collect();
        Ok(SubdiffSet::normalized(Kind::Limiting, pieces))
    }

    fn full_gradients(&self, cells: impl Iterator<Item = usize>) -> Vec<QVector> {
        cells
            .filter(|&k| self.full[k])
            .map(|k| self.grads[k].clone())
            .collect()
    }

    pub fn clarke(&self, x: &[Rational]) -> Result<SubdiffSet> {
        if !self.is_lipschitz_at(x)? {
            return Err(Error::NotLipschitz(format!(
                "{} is not locally Lipschitz at {}",
                self.f.name,
                point_text(x)
            )));
        }
        let g = self.full_gradients(self.f.cells_at(x).into_iter());
        let hull = QPolyhedron::convex_hull(self.f.ambient_dim, &g)?;
        Ok(SubdiffSet::normalized(Kind::Clarke, vec![hull]))
    }

    pub fn subdiff(&self, x: &[Rational], kind: Kind) -> Result<SubdiffSet> {
        match kind {
            Kind::Frechet => self.frechet(x),
            Kind::Limiting => self.limiting(x),
            Kind::Clarke => self.clarke(x),
        }
    }

    fn value_on(&self, face: &ComplexFace) -> Polynomial {
        self.f.cells[face.cells[0].0].formula.clone()
    }

    /// Polyhedral pieces whose union is the graph of the subdifferential.
    pub fn subjet_pieces(&self, kind: Kind) -> Vec<SubjetPiece> {
        let mut out = Vec::new();
        for d in &self.faces {
            let subgrad = match kind {
                Kind::Frechet | Kind::Limiting => d.subgrad.clone(),
                Kind::Clarke => {
                    if !self.is_lipschitz_at(&d.face.relint).unwrap_or(false) {
                        continue;
                    }
                    let g = self.full_gradients(d.face.cells.iter().map(|(k, _)| *k));
                    QPolyhedron::convex_hull(self.f.ambient_dim, &g)
                        .expect("gradients share the ambient dimension")
                        .canonical()
                }
            };
            if !subgrad.feasible() {
                continue;
            }
            out.push(SubjetPiece {
                base: d.face.poly.clone(),
                value: self.value_on(&d.face),
                subgrad,
                relint_only: kind == Kind::Frechet,
            });
        }
        if kind == Kind::Frechet {
            out
        } else {
            prune_pieces(out)
        }
    }
}

/// Drops closed pieces contained in another piece.
pub fn prune_pieces(pieces: Vec<SubjetPiece>) -> Vec<SubjetPiece> {
    // a relative interior point of p inside q is necessary and cheap to test
    let relints: Vec<Option<(QVector, QVector)>> = pieces
        .iter()
        .map(|p| Some((p.base.relint_point()?, p.subgrad.relint_point()?)))
        .collect();
    let inside = |i: usize, j: usize| {
        let (p, q) = (&pieces[i], &pieces[j]);
        relints[i]
            .as_ref()
            .is_none_or(|(x, v)| q.base.contains_point(x) && q.subgrad.contains_point(v))
            && q.base.contains(&p.base)
            && q.subgrad.contains(&p.subgrad)
    };
    let mut kept = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let dominated =
            (0..pieces.len()).any(|j| j != i && inside(i, j) && (!inside(j, i) || j < i));
        if !dominated {
            kept.push(p.clone());
        }
    }
    kept
}

/// Pieces `{(x, Mᵀv) : (Mx + c, v) ∈ gph ∂g}` of the limiting graph of `g`
/// pulled back along `x ↦ Mx + c`, with `m` holding `g.ambient_dim` rows of length `k`.
pub fn pullback_graph(
    g: &PiecewiseFunction,
    m: &[Vec<Rational>],
    c: &[Rational],
    k: usize,
) -> Result<Vec<SubjetPiece>> {
    let engine = Engine::new(g)?;
    let mt = linalg::transpose(m, k);
    let zero = linalg::zeros(k);
    let mut out = Vec::new();
    for p in engine.subjet_pieces(Kind::Limiting) {
        let base = p.base.preimage(m, c, k)?;
        if !base.feasible() {
            continue;
        }
        out.push(SubjetPiece {
            base: base.canonical(),
            value: p.value.compose_affine(m, c, k)?,
            subgrad: p.subgrad.linear_image(&mt, &zero, k)?.canonical(),
            relint_only: false,
        });
    }
    Ok(prune_pieces(out))
}

#[derive(Clone, Debug)]
pub struct SumRuleReport {
    pub lhs: SubdiffSet,
    /// Pairwise Minkowski sums of the pieces of `∂f1(x)` and `∂f2(x)`.
    pub rhs: SubdiffSet,
    pub holds: bool,
}

/// Tests `∂(f1 + f2)(x) ⊆ ∂f1(x) + ∂f2(x)` for limiting subdifferentials,
/// which needs `f1` to be locally Lipschitz at `x`.
pub fn sum_rule_check(
    f1: &PiecewiseFunction,
    f2: &PiecewiseFunction,
    x: &[Rational],
) -> Result<SumRuleReport> {
    Ok(sum_rule_check_points(f1, f2, &[x.to_vec()])?.remove(0))
}

/// [`sum_rule_check`] at several points, building each complex once.
pub fn sum_rule_check_points(
    f1: &PiecewiseFunction,
    f2: &PiecewiseFunction,
    points: &[QVector],
) -> Result<Vec<SumRuleReport>> {
    let e1 = Engine::new(f1)?;
    let e2 = Engine::new(f2)?;
    let es = Engine::new(&sum(f1, f2)?)?;
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        if !e1.is_lipschitz_at(x)? {
            return Err(Error::HypothesisViolated(format!(
                "{} is not locally Lipschitz at {}",
                f1.name,
                point_text(x)
            )));
        }
        let lhs = es.limiting(x)?;
        let (s1, s2) = (e1.limiting(x)?, e2.limiting(x)?);
        let mut pieces = Vec::new();
        for a in &s1.pieces {
            for b in &s2.pieces {
                pieces.push(a.minkowski_sum(b)?);
            }
        }
        let rhs = SubdiffSet::normalized(Kind::Limiting, pieces);
        let holds = lhs.is_subset_of(&rhs);
        out.push(SumRuleReport { lhs, rhs, holds });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{indicator, min_of_affine, negate};
    use crate::scalar::{int, ivec, rat};

    fn abs1() -> PiecewiseFunction {
        negate(&min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap()).unwrap()
    }

    fn interval(lo: Rational, hi: Rational) -> QPolyhedron {
        QPolyhedron::boxed(&[lo], &[hi]).unwrap()
    }

    #[test]
    fn abs_at_zero() {
        let e = Engine::new(&abs1()).unwrap();
        let z = ivec(&[0]);
        let want = SubdiffSet::normalized(Kind::Limiting, vec![interval(int(-1), int(1))]);
        assert!(e.frechet(&z).unwrap().same_set(&want));
        assert!(e.limiting(&z).unwrap().same_set(&want));
        assert!(e.clarke(&z).unwrap().same_set(&want));
        assert_eq!(e.subjet_pieces(Kind::Limiting).len(), 3);
    }

    #[test]
    fn neg_abs_at_zero() {
        let f = min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap();
        let e = Engine::new(&f).unwrap();
        let z = ivec(&[0]);
        assert!(e.frechet(&z).unwrap().is_empty());
        let lim = e.limiting(&z).unwrap();
        assert_eq!(lim.as_points().unwrap().len(), 2);
        assert!(lim.contains(&ivec(&[1])) && lim.contains(&ivec(&[-1])));
        assert!(!lim.contains(&ivec(&[0])));
        assert!(e.clarke(&z).unwrap().same_set(&SubdiffSet::normalized(
            Kind::Clarke,
            vec![interval(int(-1), int(1))]
        )));
        assert_eq!(e.subjet_pieces(Kind::Limiting).len(), 2);
    }

    #[test]
    fn min_kink_at_half() {
        let f = min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(1))]).unwrap();
        let e = Engine::new(&f).unwrap();
        let h = vec![rat(1, 2)];
        assert!(e.frechet(&h).unwrap().is_empty());
        let lim = e.limiting(&h).unwrap();
        assert!(lim.contains(&ivec(&[1])) && lim.contains(&ivec(&[-1])));
        assert_eq!(lim.pieces.len(), 2);
    }

    #[test]
    fn indicator_of_interval() {
        let f = indicator(&interval(int(0), int(1))).unwrap();
        let e = Engine::new(&f).unwrap();
        let s = e.limiting(&ivec(&[0])).unwrap();
        let ray = QPolyhedron::new(1, vec![(ivec(&[1]), int(0))], vec![]).unwrap();
        assert!(s.same_set(&SubdiffSet::normalized(Kind::Limiting, vec![ray])));
        assert!(e.frechet(&ivec(&[2])).unwrap().is_empty());
        assert!(matches!(e.clarke(&ivec(&[0])), Err(Error::NotLipschitz(_))));
        assert!(e.clarke(&[rat(1, 2)]).unwrap().contains(&ivec(&[0])));
    }

    #[test]
    fn orthant_indicator_pieces() {
        let orthant = QPolyhedron::new(
            2,
            vec![(ivec(&[-1, 0]), int(0)), (ivec(&[0, -1]), int(0))],
            vec![],
        )
        .unwrap();
        let e = Engine::new(&indicator(&orthant).unwrap()).unwrap();
        let pieces = e.subjet_pieces(Kind::Limiting);
        assert_eq!(pieces.len(), 4);
        assert!(pieces.iter().all(|p| p.dim() == Dim::Finite(2)));
    }

    #[test]
    fn pullback_of_neg_l1() {
        let g = min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap();
        // −|x| − |y| as a sum of two pulled back copies
        let gx = crate::piecewise::affine_precompose(&g, &[ivec(&[1, 0])], &ivec(&[0]), 2).unwrap();
        let gy = crate::piecewise::affine_precompose(&g, &[ivec(&[0, 1])], &ivec(&[0]), 2).unwrap();
        let l1 = sum(&gx, &gy).unwrap();
        let pieces = pullback_graph(&l1, &[ivec(&[1]), ivec(&[1])], &ivec(&[0, 0]), 1).unwrap();
        assert_eq!(pieces.len(), 3);
        let at = |x: i64, v: i64| pieces.iter().any(|p| p.contains(&ivec(&[x]), &ivec(&[v])));
        assert!(at(-1, 2) && at(1, -2) && at(0, 0) && at(0, 2) && at(0, -2));
        assert!(!at(1, 2) && !at(0, 1));
    }

    #[test]
    fn sum_rule_needs_lipschitz_first_term() {
        let a = abs1();
        let ind = indicator(&interval(int(0), int(1))).unwrap();
        let r = sum_rule_check(&a, &ind, &ivec(&[0])).unwrap();
        assert!(r.holds);
        assert!(matches!(
            sum_rule_check(&ind, &a, &ivec(&[0])),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
