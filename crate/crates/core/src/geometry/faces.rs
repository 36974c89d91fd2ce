use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::polyhedron::{HPolyhedron, PolyCone};
use crate::scalar::Field;

/// A nonempty face together with the inequality indices of the parent that
/// are tight on it.
#[derive(Clone, Debug)]
pub struct Face<F> {
    pub poly: HPolyhedron<F>,
    pub tight: Vec<usize>,
    pub dim: usize,
    pub relint: Vec<F>,
}

fn closure<F: Field>(p: &HPolyhedron<F>, tight: &[usize]) -> Option<Face<F>> {
    let q = p.face_with(tight);
    let an = q.analyze()?;
    let remaining: Vec<usize> = (0..p.ineqs().len())
        .filter(|i| !tight.contains(i))
        .collect();
    let mut t: Vec<usize> = tight.to_vec();
    t.extend(an.implicit.iter().map(|&j| remaining[j]));
    t.sort_unstable();
    Some(Face {
        poly: p.face_with(&t),
        tight: t,
        dim: an.dim,
        relint: an.relint,
    })
}

/// All nonempty faces, the polyhedron itself first.
pub fn faces<F: Field>(p: &HPolyhedron<F>) -> Vec<Face<F>> {
    let Some(root) = closure(p, &[]) else {
        return Vec::new();
    };
    let m = p.ineqs().len();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(root.tight.clone());
    let mut queue = VecDeque::from([root.tight.clone()]);
    let mut out = vec![root];
    while let Some(s) = queue.pop_front() {
        for i in 0..m {
            if s.contains(&i) {
                continue;
            }
            let mut t = s.clone();
            t.push(i);
            let Some(f) = closure(p, &t) else {
                continue;
            };
            if seen.insert(f.tight.clone()) {
                queue.push_back(f.tight.clone());
                out.push(f);
            }
        }
    }
    out
}

/// Face of `p` whose relative interior contains `x`.
pub fn minimal_face_at<F: Field>(p: &HPolyhedron<F>, x: &[F]) -> Result<Face<F>> {
    if !p.contains_point(x) {
        return Err(Error::OutsideCell);
    }
    let active = p.active_at(x);
    let q = p.face_with(&active);
    let an = q.analyze().ok_or(Error::EmptyPolyhedron)?;
    Ok(Face {
        poly: q,
        tight: active,
        dim: an.dim,
        relint: an.relint,
    })
}

/// Cone generated by the outer normals of the listed inequalities and the
/// equality normals of `p`.
pub fn normal_cone_of_tight<F: Field>(p: &HPolyhedron<F>, tight: &[usize]) -> PolyCone<F> {
    let rays: Vec<Vec<F>> = tight.iter().map(|&i| p.ineqs()[i].0.clone()).collect();
    let lines: Vec<Vec<F>> = p.eqs().iter().map(|(a, _)| a.clone()).collect();
    PolyCone::from_generators(p.ambient_dim(), &rays, &lines)
        .expect("rows of a polyhedron share its dimension")
}

/// Normal cone of `p` at the relative interior of the face `f`.
pub fn normal_cone<F: Field>(p: &HPolyhedron<F>, f: &HPolyhedron<F>) -> Result<PolyCone<F>> {
    if f.ambient_dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            got: f.ambient_dim(),
        });
    }
    if !f.feasible() || !p.contains(f) {
        return Err(Error::NotAFace);
    }
    let tight = p.tight_on(f);
    if !f.contains(&p.face_with(&tight)) {
        return Err(Error::NotAFace);
    }
    Ok(normal_cone_of_tight(p, &tight))
}

pub fn normal_cone_at<F: Field>(p: &HPolyhedron<F>, x: &[F]) -> Result<PolyCone<F>> {
    if !p.contains_point(x) {
        return Err(Error::OutsideCell);
    }
    Ok(normal_cone_of_tight(p, &p.active_at(x)))
}

/// Tangent cone `{d : x + t d ∈ p for small t > 0}` at `x ∈ p`.
pub fn tangent_cone_at<F: Field>(p: &HPolyhedron<F>, x: &[F]) -> Result<PolyCone<F>> {
    if !p.contains_point(x) {
        return Err(Error::OutsideCell);
    }
    let ineqs: Vec<Vec<F>> = p
        .active_at(x)
        .iter()
        .map(|&i| p.ineqs()[i].0.clone())
        .collect();
    let eqs: Vec<Vec<F>> = p.eqs().iter().map(|(a, _)| a.clone()).collect();
    PolyCone::from_normals(p.ambient_dim(), &ineqs, &eqs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ivec, Rational};

    type Q = HPolyhedron<Rational>;

    fn orthant() -> Q {
        Q::new(
            2,
            vec![(ivec(&[-1, 0]), int(0)), (ivec(&[0, -1]), int(0))],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn faces_of_interval() {
        let p = Q::boxed(&ivec(&[0]), &ivec(&[1])).unwrap();
        let fs = faces(&p);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().any(|f| f.poly.same_set(&Q::point(&ivec(&[0])))));
        assert!(fs.iter().any(|f| f.poly.same_set(&Q::point(&ivec(&[1])))));
        assert!(fs[0].poly.same_set(&p));
    }

    #[test]
    fn faces_of_orthant() {
        let fs = faces(&orthant());
        assert_eq!(fs.len(), 4);
        let dims: Vec<usize> = fs.iter().map(|f| f.dim).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 2);
        assert!(fs
            .iter()
            .any(|f| f.poly.same_set(&Q::point(&ivec(&[0, 0])))));
    }

    #[test]
    fn faces_of_point_and_square() {
        let fs = faces(&Q::point(&ivec(&[3, 4])));
        assert_eq!(fs.len(), 1);
        let sq = Q::boxed(&ivec(&[0, 0]), &ivec(&[1, 1])).unwrap();
        assert_eq!(faces(&sq).len(), 9);
    }

    #[test]
    fn normal_cone_examples() {
        let n = normal_cone(&orthant(), &Q::point(&ivec(&[0, 0]))).unwrap();
        assert!(n.contains_vector(&ivec(&[-2, -5])));
        assert!(!n.contains_vector(&ivec(&[1, -1])));
        assert_eq!(n.dim(), 2);

        let sq = Q::boxed(&ivec(&[0, 0]), &ivec(&[1, 1])).unwrap();
        let edge = Q::boxed(&ivec(&[0, 0]), &ivec(&[1, 0])).unwrap();
        let n = normal_cone(&sq, &edge).unwrap();
        assert!(n.contains_vector(&ivec(&[0, -3])));
        assert!(!n.contains_vector(&ivec(&[0, 1])));
        assert!(!n.contains_vector(&ivec(&[-1, -1])));

        let half = Q::new(2, vec![(ivec(&[1, 0]), int(0))], vec![]).unwrap();
        let line = Q::new(2, vec![], vec![(ivec(&[1, 0]), int(0))]).unwrap();
        let n = normal_cone(&half, &line).unwrap();
        assert!(n.contains_vector(&ivec(&[4, 0])));
        assert!(!n.contains_vector(&ivec(&[-1, 0])));
        assert!(!n.contains_vector(&ivec(&[0, 1])));
    }

    #[test]
    fn non_face_is_rejected() {
        let sq = Q::boxed(&ivec(&[0, 0]), &ivec(&[1, 1])).unwrap();
        let half_edge = Q::boxed(&ivec(&[0, 0]), &ivec(&[0, 0])).unwrap();
        assert!(normal_cone(&sq, &half_edge).is_ok());
        let inner = Q::boxed(&ivec(&[0, 0]), &ivec(&[1, 0]))
            .unwrap()
            .with_ineq(ivec(&[2, 0]), int(1))
            .unwrap();
        assert!(matches!(normal_cone(&sq, &inner), Err(Error::NotAFace)));
    }
}
