//! Covering tests for finite unions of polyhedra.
//!
//! `p` is recursively split by the hyperplanes of the covering pieces. A cell
//! of that arrangement meets each piece in all of its relative interior or in
//! none of it, so a cell is covered iff one piece contains it outright.

use crate::geometry::polyhedron::{HPolyhedron, Row};
use crate::linalg;
use crate::lp::LpOutcome;
use crate::scalar::Field;

/// True when the hyperplane `a·x = b` meets the relative interior of `r` with `r` on both sides.
pub fn cuts<F: Field>(r: &HPolyhedron<F>, a: &[F], b: &F) -> bool {
    let above = match r.maximize(a) {
        LpOutcome::Optimal { value, .. } => value > *b,
        LpOutcome::Unbounded => true,
        LpOutcome::Infeasible => false,
    };
    let below = match r.maximize(&linalg::neg(a)) {
        LpOutcome::Optimal { value, .. } => -value < *b,
        LpOutcome::Unbounded => true,
        LpOutcome::Infeasible => false,
    };
    above && below
}

fn search<F: Field>(
    r: HPolyhedron<F>,
    pieces: &[HPolyhedron<F>],
    planes: &[Row<F>],
) -> Option<Vec<F>> {
    if pieces.iter().any(|q| q.contains(&r)) {
        return None;
    }
    let cut = planes.iter().position(|(a, b)| cuts(&r, a, b));
    let Some(k) = cut else {
        return Some(
            r.relint_point()
                .expect("cells handed to search are nonempty"),
        );
    };
    let (a, b) = &planes[k];
    let rest = &planes[k + 1..];
    let lower = r
        .clone()
        .with_ineq(a.clone(), b.clone())
        .expect("same dimension");
    if let Some(w) = search(lower, pieces, rest) {
        return Some(w);
    }
    let upper = r
        .with_ineq(linalg::neg(a), -b.clone())
        .expect("same dimension");
    search(upper, pieces, rest)
}

/// A point of `p` outside every piece, or `None` when the pieces cover `p`.
pub fn uncovered_point<F: Field>(p: &HPolyhedron<F>, pieces: &[HPolyhedron<F>]) -> Option<Vec<F>> {
    if !p.feasible() {
        return None;
    }
    let relevant: Vec<HPolyhedron<F>> = pieces
        .iter()
        .filter(|q| q.ambient_dim() == p.ambient_dim())
        .filter(|q| p.intersect(q).map(|x| x.feasible()).unwrap_or(false))
        .cloned()
        .collect();
    let mut planes: Vec<Row<F>> = Vec::new();
    for q in &relevant {
        for r in q.ineqs().iter().chain(q.eqs()) {
            if linalg::is_zero_vec(&r.0) || planes.contains(r) {
                continue;
            }
            planes.push(r.clone());
        }
    }
    search(p.clone(), &relevant, &planes)
}

pub fn covered_by_union<F: Field>(p: &HPolyhedron<F>, pieces: &[HPolyhedron<F>]) -> bool {
    uncovered_point(p, pieces).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ivec, Rational};

    type Q = HPolyhedron<Rational>;

    fn half(a: &[i64], b: i64) -> Q {
        Q::new(a.len(), vec![(ivec(a), int(b))], vec![]).unwrap()
    }

    #[test]
    fn two_halfplanes_cover_plane() {
        let pieces = vec![half(&[1, 0], 0), half(&[-1, 0], 0)];
        assert!(covered_by_union(&Q::whole(2), &pieces));
    }

    #[test]
    fn three_quadrants_miss_one() {
        let quad = |sx: i64, sy: i64| {
            Q::new(
                2,
                vec![(ivec(&[-sx, 0]), int(0)), (ivec(&[0, -sy]), int(0))],
                vec![],
            )
            .unwrap()
        };
        let pieces = vec![quad(1, 1), quad(-1, 1), quad(-1, -1)];
        let w = uncovered_point(&Q::whole(2), &pieces).unwrap();
        assert!(w[0] > int(0) && w[1] < int(0));
        let mut all = pieces.clone();
        all.push(quad(1, -1));
        assert!(covered_by_union(&Q::whole(2), &all));
    }

    #[test]
    fn lower_dimensional_target() {
        let seg = Q::boxed(&ivec(&[0, 0]), &ivec(&[2, 0])).unwrap();
        let a = Q::boxed(&ivec(&[0, -1]), &ivec(&[1, 1])).unwrap();
        let b = Q::boxed(&ivec(&[1, -1]), &ivec(&[2, 1])).unwrap();
        assert!(covered_by_union(&seg, &[a.clone(), b]));
        assert!(!covered_by_union(&seg, &[a]));
    }
}
