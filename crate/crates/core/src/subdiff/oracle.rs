//! Brute-force subdifferentials straight from the definitions, by sampling
//! difference quotients along directions and nearby points. Used as a test
//! reference for the exact engine.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{project, Row};
use crate::linalg::{self, dot};
use crate::lp::{feasible_point, maximize, LpOutcome};
use crate::piecewise::{ExtendedRational, PiecewiseFunction};
use crate::scalar::{floor_to_grid, int, rat, Rational};
use crate::subdiff::{Engine, Kind, SubdiffSet};
use crate::{QPolyhedron, QVector};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Step of the difference quotients.
    pub t: Rational,
    /// Max-norm distance of the nearby base points.
    pub s: Rational,
    /// Step of the finite-difference gradients.
    pub h: Rational,
    /// Membership slack.
    pub tol: Rational,
    /// Largest entry of the integer probe directions.
    pub radius: i64,
    /// Number of generic sample directions.
    pub generic: usize,
}

impl OracleConfig {
    pub fn for_dim(n: usize) -> Self {
        OracleConfig {
            t: rat(1, 10_000_000),
            s: rat(1, 10_000),
            h: rat(1, 1_000_000_000),
            tol: rat(1, 1_000_000),
            radius: if n <= 2 { 4 } else { 2 },
            generic: if n <= 2 { 36 } else { 64 },
        }
    }
}

/// The sampled set. Fréchet and limiting values are outer approximations by
/// half-spaces; the Clarke value is the hull of sampled gradients.
#[derive(Clone, Debug)]
pub enum OracleSet {
    /// `None` is the empty set.
    Frechet(Option<Vec<Row<Rational>>>),
    Limiting(Vec<Vec<Row<Rational>>>),
    Clarke(Vec<QVector>),
}

fn within(rows: &[Row<Rational>], v: &[Rational], tol: &Rational) -> bool {
    rows.iter().all(|(d, b)| {
        let l1: Rational = d.iter().map(|x| x.abs()).sum();
        dot(d, v) <= b.clone() + tol.clone() * l1
    })
}

fn in_hull(points: &[QVector], v: &[Rational], tol: &Rational) -> bool {
    if points.is_empty() {
        return false;
    }
    let k = points.len();
    let n = v.len();
    let mut ineqs: Vec<(QVector, Rational)> = Vec::new();
    for j in 0..k {
        ineqs.push((linalg::neg(&linalg::unit(k, j)), int(0)));
    }
    for i in 0..n {
        let row: QVector = points.iter().map(|p| p[i].clone()).collect();
        ineqs.push((row.clone(), v[i].clone() + tol.clone()));
        ineqs.push((linalg::neg(&row), tol.clone() - v[i].clone()));
    }
    let eqs = vec![(vec![int(1); k], int(1))];
    feasible_point(k, &ineqs, &eqs).is_some()
}

impl OracleSet {
    pub fn contains(&self, v: &[Rational], tol: &Rational) -> bool {
        match self {
            OracleSet::Frechet(None) => false,
            OracleSet::Frechet(Some(rows)) => within(rows, v, tol),
            OracleSet::Limiting(sets) => sets.iter().any(|rows| within(rows, v, tol)),
            OracleSet::Clarke(g) => in_hull(g, v, tol),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            OracleSet::Frechet(s) => s.is_none(),
            OracleSet::Limiting(s) => s.is_empty(),
            OracleSet::Clarke(g) => g.is_empty(),
        }
    }

    /// The sampled set as polyhedra in `R^n`.
    pub fn polyhedra(&self, n: usize) -> Vec<QPolyhedron> {
        let poly = |rows: &Vec<Row<Rational>>| {
            QPolyhedron::new(n, rows.clone(), vec![]).expect("rows of length n")
        };
        match self {
            OracleSet::Frechet(None) => Vec::new(),
            OracleSet::Frechet(Some(rows)) => vec![poly(rows)],
            OracleSet::Limiting(sets) => sets.iter().map(poly).collect(),
            OracleSet::Clarke(g) if g.is_empty() => Vec::new(),
            OracleSet::Clarke(g) => {
                vec![QPolyhedron::convex_hull(n, g).expect("gradients of length n")]
            }
        }
    }
}

/// Vertices of `p`, plus each vertex pushed by `reach` along every ray and line.
fn generator_points(p: &QPolyhedron, reach: &Rational) -> Result<Vec<QVector>> {
    let v = p.v_representation()?;
    let mut out = v.vertices.clone();
    for base in &v.vertices {
        for r in &v.rays {
            out.push(linalg::add(base, &linalg::scale(reach, r)));
        }
        for l in &v.lines {
            out.push(linalg::add(base, &linalg::scale(reach, l)));
            out.push(linalg::sub(base, &linalg::scale(reach, l)));
        }
    }
    Ok(out)
}

/// An upper bound for `max a·v` over the sampled rows: the sampled bound when
/// `a` is a positive multiple of a probe direction, the LP value otherwise.
/// `None` when unbounded.
fn support_bound(rows: &[Row<Rational>], a: &[Rational], n: usize) -> Option<Rational> {
    for (d, q) in rows {
        if let Some(lambda) = positive_multiple(a, d) {
            return Some(lambda * q.clone());
        }
    }
    match maximize(n, a, rows, &[]) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

fn positive_multiple(a: &[Rational], d: &[Rational]) -> Option<Rational> {
    let k = d.iter().position(|x| !x.is_zero())?;
    let lambda = a[k].clone() / d[k].clone();
    (lambda.is_positive()
        && a.iter()
            .zip(d)
            .all(|(x, y)| *x == lambda.clone() * y.clone()))
    .then_some(lambda)
}

/// Whether `{v : rows}` lies in `e` enlarged by `tol` per unit of `‖a‖₁` in each constraint.
fn rows_within(rows: &[Row<Rational>], e: &QPolyhedron, tol: &Rational) -> bool {
    let n = e.ambient_dim();
    let slack = |a: &[Rational]| tol.clone() * a.iter().map(|x| x.abs()).sum::<Rational>();
    let below = |a: &[Rational], b: &Rational| {
        support_bound(rows, a, n).is_some_and(|s| s <= b.clone() + slack(a))
    };
    e.ineqs().iter().all(|(a, b)| below(a, b))
        && e.eqs()
            .iter()
            .all(|(a, b)| below(a, b) && below(&linalg::neg(a), &-b.clone()))
}

impl OracleSet {
    /// Agreement with an exact set up to `tol`: the generators of every exact
    /// piece lie in the sampled set, and every sampled piece lies in one exact
    /// piece enlarged by `tol`. Unbounded directions are probed at distance 1000.
    pub fn agrees_with(&self, exact: &SubdiffSet, n: usize, tol: &Rational) -> Result<bool> {
        let reach = int(1000);
        if self.is_empty() || exact.is_empty() {
            return Ok(self.is_empty() == exact.is_empty());
        }
        for piece in &exact.pieces {
            for g in generator_points(piece, &reach)? {
                if !self.contains(&g, tol) {
                    return Ok(false);
                }
            }
        }
        let row_sets: Vec<&Vec<Row<Rational>>> = match self {
            OracleSet::Frechet(Some(rows)) => vec![rows],
            OracleSet::Limiting(sets) => {
                let mut out: Vec<&Vec<Row<Rational>>> = Vec::new();
                for r in sets {
                    if !out.contains(&r) {
                        out.push(r);
                    }
                }
                out
            }
            OracleSet::Clarke(_) => {
                let tol2 = tol.clone() * tol.clone();
                for p in self.polyhedra(n) {
                    for g in generator_points(&p, &reach)? {
                        let d = exact
                            .pieces
                            .iter()
                            .map(|e| project(&g, e).map(|pr| pr.dist2))
                            .collect::<Result<Vec<_>>>()?;
                        if !d.iter().any(|x| *x <= tol2) {
                            return Ok(false);
                        }
                    }
                }
                return Ok(true);
            }
            OracleSet::Frechet(None) => unreachable!("empty handled above"),
        };
        Ok(row_sets
            .iter()
            .all(|rows| exact.pieces.iter().any(|e| rows_within(rows, e, tol))))
    }
}

/// `count` deterministic test points for an affine-tier function: relative
/// interior points of the faces of its complex first, then small offsets from
/// them, then seeded points on a 1/7 grid in `[-3, 3]^n`.
pub fn probe_points(f: &PiecewiseFunction, count: usize, seed: u64) -> Result<Vec<QVector>> {
    Ok(engine_probe_points(&Engine::new(f)?, count, seed))
}

/// [`probe_points`] for an already built engine.
pub fn engine_probe_points(engine: &Engine, count: usize, seed: u64) -> Vec<QVector> {
    let n = engine.function().ambient_dim;
    let mut faces: Vec<QVector> = engine
        .faces()
        .map(|(face, _)| face.relint.clone())
        .collect();
    faces.sort_by_key(|p| linalg::norm2(p));
    let mut out: Vec<QVector> = Vec::new();
    let push = |p: QVector, out: &mut Vec<QVector>| {
        if out.len() < count && !out.contains(&p) {
            out.push(p);
        }
    };
    for p in &faces {
        push(p.clone(), &mut out);
    }
    for (k, p) in faces.iter().enumerate() {
        let mut q = p.clone();
        q[k % n] += rat(1, 97);
        push(q, &mut out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let p: QVector = (0..n).map(|_| rat(rng.random_range(-21..=21), 7)).collect();
        push(p, &mut out);
    }
    out
}

/// Primitive integer vectors with entries in `[-r, r]`.
pub fn integer_directions(n: usize, r: i64) -> Vec<QVector> {
    let mut out = Vec::new();
    let side = (2 * r + 1) as usize;
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push((c % side) as i64 - r);
            c /= side;
        }
        let g = v.iter().fold(0, |acc, &x| gcd(acc, x));
        if g == 1 {
            out.push(v.into_iter().map(int).collect());
        }
    }
    out
}

/// Directions rounded to a 1/1000 grid, chosen to avoid small rational slopes.
pub fn generic_directions(n: usize, count: usize) -> Vec<QVector> {
    let snap = |x: f64| floor_to_grid(x, 1000);
    match n {
        0 => Vec::new(),
        1 => vec![vec![int(1)], vec![int(-1)]],
        2 => (0..count)
            .map(|k| {
                let th = (k as f64 + 0.5) * std::f64::consts::TAU / count as f64 + 0.0137;
                vec![snap(th.cos()), snap(th.sin())]
            })
            .collect(),
        _ => {
            // Fibonacci sphere on the first three coordinates, small tilt on the rest
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = golden * k as f64 + 0.0137;
                    let mut v = vec![snap(r * th.cos()), snap(r * th.sin()), snap(z)];
                    for i in 3..n {
                        v.push(snap(0.1 * ((k + i) as f64).sin()));
                    }
                    v
                })
                .collect()
        }
    }
}

fn finite_value(f: &PiecewiseFunction, x: &[Rational]) -> Result<Option<Rational>> {
    Ok(match f.evaluate(x)? {
        ExtendedRational::Finite(v) => Some(v),
        ExtendedRational::PosInf => None,
    })
}

fn frechet_rows(
    f: &PiecewiseFunction,
    x: &[Rational],
    dirs: &[QVector],
    cfg: &OracleConfig,
) -> Result<Option<Vec<Row<Rational>>>> {
    let Some(fx) = finite_value(f, x)? else {
        return Ok(None);
    };
    let mut rows = Vec::new();
    for d in dirs {
        let y = linalg::add(x, &linalg::scale(&cfg.t, d));
        if let Some(fy) = finite_value(f, &y)? {
            rows.push((d.clone(), (fy - fx.clone()) / cfg.t.clone()));
        }
    }
    Ok(Some(rows))
}

/// Rows `⟨v,d⟩ <= p` and `⟨v,-d⟩ <= q` with `p + q < 0`: a cheap infeasibility certificate.
fn opposite_clash(rows: &[Row<Rational>]) -> bool {
    let bounds: HashMap<&QVector, &Rational> = rows.iter().map(|(d, q)| (d, q)).collect();
    rows.iter().any(|(d, q)| {
        bounds
            .get(&linalg::neg(d))
            .is_some_and(|p| q.clone() + (*p).clone() < int(0))
    })
}

fn fd_gradient(f: &PiecewiseFunction, y: &[Rational], h: &Rational) -> Result<Option<QVector>> {
    let Some(fy) = finite_value(f, y)? else {
        return Ok(None);
    };
    let mut g = Vec::with_capacity(y.len());
    for i in 0..y.len() {
        let mut z = y.to_vec();
        z[i] += h.clone();
        match finite_value(f, &z)? {
            Some(fz) => g.push((fz - fy.clone()) / h.clone()),
            None => return Ok(None),
        }
    }
    Ok(Some(g))
}

pub fn oracle_subdiff(
    f: &PiecewiseFunction,
    x: &[Rational],
    kind: Kind,
    cfg: &OracleConfig,
) -> Result<OracleSet> {
    let n = f.ambient_dim;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let probes: Vec<QVector> = integer_directions(n, cfg.radius)
        .into_iter()
        .chain(generic_directions(n, cfg.generic))
        .collect();
    match kind {
        Kind::Frechet => {
            let rows = frechet_rows(f, x, &probes, cfg)?;
            Ok(OracleSet::Frechet(rows.filter(|r| {
                QPolyhedron::new(n, r.clone(), vec![]).is_ok_and(|p| p.feasible())
            })))
        }
        Kind::Limiting => {
            let mut sets = Vec::new();
            let mut rejected = Vec::new();
            if finite_value(f, x)?.is_none() {
                return Ok(OracleSet::Limiting(sets));
            }
            let mut bases = vec![x.to_vec()];
            bases.extend(probes.iter().map(|d| {
                let linf = d.iter().map(|c| c.abs()).max().expect("nonzero probe");
                linalg::add(x, &linalg::scale(&(cfg.s.clone() / linf), d))
            }));
            for b in bases {
                if let Some(rows) = frechet_rows(f, &b, &probes, cfg)? {
                    if sets.contains(&rows) || rejected.contains(&rows) {
                        continue;
                    }
                    // the local gradient is usually a witness and saves the LP
                    let witness =
                        fd_gradient(f, &b, &cfg.h)?.is_some_and(|g| within(&rows, &g, &int(0)));
                    let feasible = witness
                        || (!opposite_clash(&rows)
                            && QPolyhedron::new(n, rows.clone(), vec![])?.feasible());
                    if rows.is_empty() || !feasible {
                        rejected.push(rows);
                    } else {
                        sets.push(rows);
                    }
                }
            }
            Ok(OracleSet::Limiting(sets))
        }
        Kind::Clarke => {
            let mut grads: Vec<QVector> = Vec::new();
            for d in generic_directions(n, cfg.generic) {
                let y = linalg::add(x, &linalg::scale(&cfg.s, &d));
                if let Some(g) = fd_gradient(f, &y, &cfg.h)? {
                    if !grads.contains(&g) {
                        grads.push(g);
                    }
                }
            }
            Ok(OracleSet::Clarke(grads))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{indicator, min_of_affine, negate};
    use crate::scalar::ivec;

    fn neg_abs() -> PiecewiseFunction {
        min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap()
    }

    #[test]
    fn neg_abs_limiting_is_two_points() {
        let cfg = OracleConfig::for_dim(1);
        let s = oracle_subdiff(&neg_abs(), &ivec(&[0]), Kind::Limiting, &cfg).unwrap();
        let tol = cfg.tol.clone();
        assert!(s.contains(&ivec(&[1]), &tol) && s.contains(&ivec(&[-1]), &tol));
        assert!(!s.contains(&ivec(&[0]), &tol) && !s.contains(&[rat(1, 2)], &tol));
    }

    #[test]
    fn abs_frechet_is_interval() {
        let cfg = OracleConfig::for_dim(1);
        let f = negate(&neg_abs()).unwrap();
        let s = oracle_subdiff(&f, &ivec(&[0]), Kind::Frechet, &cfg).unwrap();
        assert!(s.contains(&ivec(&[1]), &cfg.tol) && s.contains(&ivec(&[0]), &cfg.tol));
        assert!(!s.contains(&[rat(11, 10)], &cfg.tol));
    }

    #[test]
    fn interval_indicator_endpoint() {
        let cfg = OracleConfig::for_dim(1);
        let f = indicator(&QPolyhedron::boxed(&[int(0)], &[int(1)]).unwrap()).unwrap();
        let s = oracle_subdiff(&f, &ivec(&[1]), Kind::Frechet, &cfg).unwrap();
        assert!(s.contains(&ivec(&[1000]), &cfg.tol) && !s.contains(&[rat(-1, 100)], &cfg.tol));
    }
}
