use crate::error::{Error, Result};
use crate::geometry::faces::faces;
use crate::geometry::polyhedron::HPolyhedron;
use crate::linalg::{self, dot, independent_rows, norm2, solve};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Projection<F> {
    pub point: Vec<F>,
    pub dist2: F,
}

/// Orthogonal projection of `x` onto `{y : E y = e}`; `None` if the system is inconsistent.
fn project_affine<F: Field>(x: &[F], rows: &[(Vec<F>, F)], n: usize) -> Option<Vec<F>> {
    let normals: Vec<Vec<F>> = rows.iter().map(|(a, _)| a.clone()).collect();
    let keep = independent_rows(&normals, n);
    if keep.is_empty() {
        return Some(x.to_vec());
    }
    let e: Vec<Vec<F>> = keep.iter().map(|&i| normals[i].clone()).collect();
    let gram: Vec<Vec<F>> = e
        .iter()
        .map(|r| e.iter().map(|s| dot(r, s)).collect())
        .collect();
    let resid: Vec<F> = keep
        .iter()
        .map(|&i| dot(&rows[i].0, x) - rows[i].1.clone())
        .collect();
    let lam = solve(&gram, &resid)?;
    let mut y = x.to_vec();
    for (r, l) in e.iter().zip(&lam) {
        y = linalg::sub(&y, &linalg::scale(l, r));
    }
    rows.iter().all(|(a, b)| dot(a, &y) == *b).then_some(y)
}

/// Nearest point of the convex polyhedron `p` to `x`, with the squared distance.
pub fn project<F: Field>(x: &[F], p: &HPolyhedron<F>) -> Result<Projection<F>> {
    let n = p.ambient_dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if p.contains_point(x) {
        return Ok(Projection {
            point: x.to_vec(),
            dist2: F::zero(),
        });
    }
    let mut best: Option<Projection<F>> = None;
    for f in faces(p) {
        let Some(y) = project_affine(x, f.poly.eqs(), n) else {
            continue;
        };
        if !f.poly.contains_point(&y) {
            continue;
        }
        let d2 = norm2(&linalg::sub(x, &y));
        if best.as_ref().is_none_or(|b| d2 < b.dist2) {
            best = Some(Projection {
                point: y,
                dist2: d2,
            });
        }
    }
    best.ok_or(Error::EmptyPolyhedron)
}

/// Nearest points of a finite union of polyhedra: every per-piece projection
/// that attains the minimum distance.
pub fn project_union<F: Field>(x: &[F], pieces: &[HPolyhedron<F>]) -> Result<(Vec<Vec<F>>, F)> {
    let mut found: Vec<Projection<F>> = Vec::new();
    for p in pieces {
        match project(x, p) {
            Ok(pr) => found.push(pr),
            Err(Error::EmptyPolyhedron) => continue,
            Err(e) => return Err(e),
        }
    }
    let min = found
        .iter()
        .map(|p| p.dist2.clone())
        .reduce(|a, b| if b < a { b } else { a })
        .ok_or(Error::EmptyPolyhedron)?;
    let mut points: Vec<Vec<F>> = Vec::new();
    for p in found {
        if p.dist2 == min && !points.contains(&p.point) {
            points.push(p.point);
        }
    }
    Ok((points, min))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QpSolution<F> {
    pub point: Vec<F>,
    pub value: F,
}

/// Minimizes `½ wᵀ H w + g·w` over `p`, assuming `H` is positive definite.
///
/// The minimizer lies in the relative interior of exactly one face, where it is
/// the stationary point on the face's affine hull, so every face's KKT system
/// is solved and the best feasible candidate kept.
pub fn minimize_quadratic<F: Field>(
    h: &[Vec<F>],
    g: &[F],
    p: &HPolyhedron<F>,
) -> Result<QpSolution<F>> {
    let n = p.ambient_dim();
    if h.len() != n || g.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.len(),
        });
    }
    let objective = |w: &[F]| {
        let hw = linalg::mat_vec(h, w);
        dot(w, &hw) / (F::one() + F::one()) + dot(g, w)
    };
    let mut best: Option<QpSolution<F>> = None;
    for f in faces(p) {
        let rows = f.poly.eqs();
        let normals: Vec<Vec<F>> = rows.iter().map(|(a, _)| a.clone()).collect();
        let keep = independent_rows(&normals, n);
        let k = keep.len();
        let mut kkt: Vec<Vec<F>> = Vec::with_capacity(n + k);
        for i in 0..n {
            let mut row = h[i].clone();
            row.extend(keep.iter().map(|&j| normals[j][i].clone()));
            kkt.push(row);
        }
        for &j in &keep {
            let mut row = normals[j].clone();
            row.extend(std::iter::repeat_n(F::zero(), k));
            kkt.push(row);
        }
        let mut rhs: Vec<F> = g.iter().map(|x| -x.clone()).collect();
        rhs.extend(keep.iter().map(|&j| rows[j].1.clone()));
        let Some(sol) = solve(&kkt, &rhs) else {
            continue;
        };
        let w = sol[..n].to_vec();
        if !p.contains_point(&w) {
            continue;
        }
        let value = objective(&w);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(QpSolution { point: w, value });
        }
    }
    best.ok_or(Error::EmptyPolyhedron)
}
