//! Constructive accessibility: Fréchet triples off a closed set `M` that
//! converge to a given triple of the subjet restricted to `M`.
//!
//! Lemma route, for `v̄ ∈ ∂̂f(x̄)`: for each penalty `m`, pick `y` just outside
//! `U_m = ∪_{x∈M} m(x − x̄) + ∂f(x)` near `v̄`, minimize
//! `−⟨y, x − x̄⟩ + m(d_M(x)² + |x − x̄|²) + f(x)` over a box around `x̄`
//! exactly, and read off `v = y − 2m(x − P_M x) − 2m(x − x̄) ∈ ∂̂f(x)`.
//!
//! Corollary route, for `v̄ ∈ ∂f(x̄)` when `dim [∂f]|_M < n`: walk into a
//! Fréchet piece whose closure holds `(x̄, v̄)`, a step of `1/m²` each time.

use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{minimize_quadratic, tangent_cone_at, uncovered_point, Dim};
use crate::linalg;
use crate::piecewise::{point_text, PiecewiseFunction};
use crate::scalar::{int, json_rat, json_vec, Rational};
use crate::subdiff::{Engine, Kind, SubjetPiece};
use crate::{QPolyhedron, QVector};

#[derive(Clone, Debug)]
pub struct AccessConfig {
    /// Required final distance to the target triple.
    pub tolerance: Rational,
    /// Penalties `m_i`; `y_i` sits at max-norm distance `1/m_i` from `v̄`.
    pub schedule: Vec<Rational>,
    /// Half-width of the box the objective is restricted to.
    pub radius: Rational,
    pub min_triples: usize,
}

impl Default for AccessConfig {
    fn default() -> Self {
        AccessConfig {
            tolerance: Rational::new(1.into(), 1000.into()),
            schedule: (0..=10).map(|k| int(1 << k)).collect(),
            radius: int(1),
            min_triples: 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccessRoute {
    Lemma,
    Corollary,
}

impl AccessRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            AccessRoute::Lemma => "lemma",
            AccessRoute::Corollary => "corollary",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub x: QVector,
    pub value: Rational,
    pub v: QVector,
    /// Max-norm distance to the target triple.
    pub dist: Rational,
}

impl Triple {
    pub fn to_json(&self) -> Value {
        json!({
            "x": json_vec(&self.x),
            "value": json_rat(&self.value),
            "v": json_vec(&self.v),
            "dist": json_rat(&self.dist),
        })
    }
}

#[derive(Clone, Debug)]
pub struct AccessStep {
    pub m: Rational,
    pub y: Option<QVector>,
    pub status: String,
    pub triple: Option<Triple>,
}

#[derive(Clone, Debug)]
pub struct AccessWitness {
    pub route: AccessRoute,
    pub x_bar: QVector,
    pub value: Rational,
    pub v_bar: QVector,
    pub steps: Vec<AccessStep>,
}

impl AccessWitness {
    pub fn triples(&self) -> Vec<&Triple> {
        self.steps
            .iter()
            .filter_map(|s| s.triple.as_ref())
            .collect()
    }

    /// Strictly decreasing distances, enough triples, and the last one within tolerance.
    pub fn converged(&self, cfg: &AccessConfig) -> bool {
        let t = self.triples();
        t.len() >= cfg.min_triples
            && t.windows(2).all(|w| w[1].dist < w[0].dist)
            && t.last().is_some_and(|l| l.dist <= cfg.tolerance)
    }

    pub fn to_json(&self, cfg: &AccessConfig) -> Value {
        json!({
            "route": self.route.as_str(),
            "x_bar": json_vec(&self.x_bar),
            "value": json_rat(&self.value),
            "v_bar": json_vec(&self.v_bar),
            "tolerance": json_rat(&cfg.tolerance),
            "converged": self.converged(cfg),
            "steps": self.steps.iter().map(|s| json!({
                "m": json_rat(&s.m),
                "y": s.y.as_ref().map(|y| json_vec(y)),
                "status": s.status,
                "triple": s.triple.as_ref().map(|t| t.to_json()),
            })).collect::<Vec<_>>(),
        })
    }
}

fn in_union(m: &[QPolyhedron], x: &[Rational]) -> bool {
    m.iter().any(|p| p.contains_point(x))
}

fn cube(center: &[Rational], r: &Rational) -> QPolyhedron {
    let lo: QVector = center.iter().map(|c| c.clone() - r.clone()).collect();
    let hi: QVector = center.iter().map(|c| c.clone() + r.clone()).collect();
    QPolyhedron::boxed(&lo, &hi).expect("matching bounds")
}

fn strictly_inside_cube(center: &[Rational], r: &Rational, x: &[Rational]) -> bool {
    x.iter()
        .zip(center)
        .all(|(a, c)| (a.clone() - c.clone()).abs() < *r)
}

struct Setup<'a> {
    engine: Engine,
    m_set: &'a [QPolyhedron],
    x_bar: QVector,
    value: Rational,
    v_bar: QVector,
    n: usize,
}

impl Setup<'_> {
    fn triple(&self, x: QVector, v: QVector) -> Result<Triple> {
        let value = self
            .engine
            .function()
            .evaluate(&x)?
            .finite()
            .cloned()
            .ok_or_else(|| {
                Error::HypothesisViolated(format!("f is infinite at {}", point_text(&x)))
            })?;
        let dist = linalg::sub(&x, &self.x_bar)
            .into_iter()
            .chain(linalg::sub(&v, &self.v_bar))
            .chain(std::iter::once(value.clone() - self.value.clone()))
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        Ok(Triple { x, value, v, dist })
    }

    /// Pieces of `U_m` as polyhedra in `R^n`.
    fn penalized_union(&self, limiting: &[SubjetPiece], m: &Rational) -> Result<Vec<QPolyhedron>> {
        let n = self.n;
        let rows: Vec<QVector> = (0..n)
            .map(|i| {
                let mut r = linalg::scale(m, &linalg::unit::<Rational>(n, i));
                r.extend(linalg::unit::<Rational>(n, i));
                r
            })
            .collect();
        let shift = linalg::neg(&linalg::scale(m, &self.x_bar));
        let mut out = Vec::new();
        for p in limiting {
            for comp in self.m_set {
                let base = p.base.intersect(comp)?;
                if base.feasible() {
                    out.push(base.product(&p.subgrad).linear_image(&rows, &shift, n)?);
                }
            }
        }
        Ok(out)
    }

    /// A direction leaving `U` at `v̄`, or `None` when `v̄` is interior.
    fn exit_direction(&self, union: &[QPolyhedron]) -> Result<Option<QVector>> {
        let mut cones = Vec::new();
        for p in union.iter().filter(|p| p.contains_point(&self.v_bar)) {
            cones.push(tangent_cone_at(p, &self.v_bar)?.into_polyhedron());
        }
        if cones.is_empty() {
            return Err(Error::HypothesisViolated(format!(
                "{} is not in the penalized union",
                point_text(&self.v_bar)
            )));
        }
        Ok(uncovered_point(&QPolyhedron::whole(self.n), &cones))
    }

    /// Exact minimizer of the penalized problem, with the projection `z` of `x` on `M`.
    fn penalized_minimizer(
        &self,
        y: &[Rational],
        m: &Rational,
        radius: &Rational,
    ) -> Result<(QVector, QVector)> {
        let n = self.n;
        let two_m = m.clone() * int(2);
        // Hessian of m(|x − z|² + |x − x̄|²) in (x, z)
        let h: Vec<QVector> = (0..2 * n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        let (bi, bj) = (i < n, j < n);
                        if i % n != j % n {
                            int(0)
                        } else if bi && bj {
                            two_m.clone() * int(2)
                        } else if bi != bj {
                            -two_m.clone()
                        } else {
                            two_m.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let big = cube(&self.x_bar, radius);
        let small = cube(&self.x_bar, &(radius.clone() / int(2)));
        let mut best: Option<(Rational, QVector, QVector)> = None;
        for cell in &self.engine.function().cells {
            let (a, b) = cell.formula.affine_parts().expect("affine tier");
            let region = cell.region.intersect(&big)?;
            if !region.feasible() {
                continue;
            }
            let mut g: QVector = (0..n)
                .map(|i| a[i].clone() - y[i].clone() - two_m.clone() * self.x_bar[i].clone())
                .collect();
            g.extend(linalg::zeros::<Rational>(n));
            for comp in self.m_set {
                let target = comp.intersect(&small)?;
                if !target.feasible() {
                    continue;
                }
                let sol = minimize_quadratic(&h, &g, &region.product(&target))?;
                let value = sol.value + b.clone();
                if best.as_ref().is_none_or(|(bv, _, _)| value < *bv) {
                    best = Some((value, sol.point[..n].to_vec(), sol.point[n..].to_vec()));
                }
            }
        }
        let (_, x, z) = best.ok_or(Error::EmptyPolyhedron)?;
        Ok((x, z))
    }

    fn lemma_step(
        &self,
        limiting: &[SubjetPiece],
        m: &Rational,
        cfg: &AccessConfig,
    ) -> Result<AccessStep> {
        let union = self.penalized_union(limiting, m)?;
        let Some(d) = self.exit_direction(&union)? else {
            return Ok(AccessStep {
                m: m.clone(),
                y: None,
                status: "v̄ is interior to the penalized union".into(),
                triple: None,
            });
        };
        let dmax = d.iter().map(|t| t.abs()).max().expect("nonzero direction");
        let mut step = int(1) / (m.clone() * dmax);
        let mut y = linalg::add(&self.v_bar, &linalg::scale(&step, &d));
        for _ in 0..32 {
            if !in_union(&union, &y) {
                break;
            }
            step /= int(2);
            y = linalg::add(&self.v_bar, &linalg::scale(&step, &d));
        }
        let mut out = AccessStep {
            m: m.clone(),
            y: Some(y.clone()),
            status: String::new(),
            triple: None,
        };
        if in_union(&union, &y) {
            out.status = "no exit point found along the exit direction".into();
            return Ok(out);
        }
        let (x, z) = self.penalized_minimizer(&y, m, &cfg.radius)?;
        let two_m = m.clone() * int(2);
        let v = linalg::sub(
            &linalg::sub(&y, &linalg::scale(&two_m, &linalg::sub(&x, &z))),
            &linalg::scale(&two_m, &linalg::sub(&x, &self.x_bar)),
        );
        out.status = if in_union(self.m_set, &x) {
            "minimizer lies in M".into()
        } else if !strictly_inside_cube(&self.x_bar, &cfg.radius, &x) {
            "minimizer on the localization box".into()
        } else if !self.engine.frechet(&x)?.contains(&v) {
            "v is not a Fréchet subgradient at the minimizer".into()
        } else {
            out.triple = Some(self.triple(x, v)?);
            "ok".into()
        };
        Ok(out)
    }

    fn corollary_steps(&self, cfg: &AccessConfig) -> Result<Vec<AccessStep>> {
        let frechet = self.engine.subjet_pieces(Kind::Frechet);
        let candidates: Vec<&SubjetPiece> = frechet
            .iter()
            .filter(|p| p.base.contains_point(&self.x_bar) && p.subgrad.contains_point(&self.v_bar))
            .filter(|p| p.base.dim() > Dim::Finite(0))
            .collect();
        let mut best: Vec<AccessStep> = Vec::new();
        for p in candidates {
            let r = p.base.relint_point().expect("nonempty base");
            let dir = linalg::sub(&r, &self.x_bar);
            let mut steps = Vec::new();
            for m in &cfg.schedule {
                let t = int(1) / (m.clone() * m.clone());
                let x = linalg::add(&self.x_bar, &linalg::scale(&t, &dir));
                let mut s = AccessStep {
                    m: m.clone(),
                    y: None,
                    status: String::new(),
                    triple: None,
                };
                s.status = if in_union(self.m_set, &x) {
                    "point lies in M".into()
                } else if !self.engine.frechet(&x)?.contains(&self.v_bar) {
                    "v̄ is not a Fréchet subgradient there".into()
                } else {
                    s.triple = Some(self.triple(x, self.v_bar.clone())?);
                    "ok".into()
                };
                steps.push(s);
            }
            let count = |s: &[AccessStep]| s.iter().filter(|t| t.triple.is_some()).count();
            if count(&steps) > count(&best) {
                best = steps;
            }
        }
        Ok(best)
    }
}

/// Builds a witness sequence for `(x̄, f(x̄), v̄)` from outside `M`, a finite
/// union of polyhedra. Refuses with [`Error::HypothesisViolated`] when neither
/// route's hypothesis holds.
pub fn access_point(
    f: &PiecewiseFunction,
    m_set: &[QPolyhedron],
    x_bar: &[Rational],
    v_bar: &[Rational],
    cfg: &AccessConfig,
) -> Result<AccessWitness> {
    let engine = Engine::new(f)?;
    let n = f.ambient_dim;
    if !in_union(m_set, x_bar) {
        return Err(Error::HypothesisViolated(format!(
            "{} is not in M",
            point_text(x_bar)
        )));
    }
    let value = f.evaluate(x_bar)?.finite().cloned().ok_or_else(|| {
        Error::HypothesisViolated(format!("f is infinite at {}", point_text(x_bar)))
    })?;
    if !engine.limiting(x_bar)?.contains(v_bar) {
        return Err(Error::HypothesisViolated(format!(
            "{} is not a limiting subgradient at {}",
            point_text(v_bar),
            point_text(x_bar)
        )));
    }
    let is_frechet = engine.frechet(x_bar)?.contains(v_bar);
    let limiting = engine.subjet_pieces(Kind::Limiting);
    let setup = Setup {
        engine,
        m_set,
        x_bar: x_bar.to_vec(),
        value,
        v_bar: v_bar.to_vec(),
        n,
    };
    let mut restricted = Dim::NegInfinity;
    for p in &limiting {
        for comp in m_set {
            restricted = restricted.max(p.base.intersect(comp)?.dim() + p.subgrad.dim());
        }
    }
    let low_dim = restricted < Dim::Finite(n);
    let witness = |route, steps| AccessWitness {
        route,
        x_bar: setup.x_bar.clone(),
        value: setup.value.clone(),
        v_bar: setup.v_bar.clone(),
        steps,
    };
    if is_frechet {
        let steps: Vec<AccessStep> = cfg
            .schedule
            .iter()
            .map(|m| setup.lemma_step(&limiting, m, cfg))
            .collect::<Result<_>>()?;
        if steps.iter().all(|s| s.y.is_none()) {
            return Err(Error::HypothesisViolated(format!(
                "{} is interior to ∪_(x∈M) m(x − x̄) + ∂f(x) for every scheduled m (tangent cones cover R^{n})",
                point_text(v_bar)
            )));
        }
        return Ok(witness(AccessRoute::Lemma, steps));
    }
    if !low_dim {
        return Err(Error::HypothesisViolated(format!(
            "{} is not a Fréchet subgradient and dim [∂f]|_M = {restricted} is not below {n}",
            point_text(v_bar)
        )));
    }
    Ok(witness(AccessRoute::Corollary, setup.corollary_steps(cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{indicator, min_of_affine, negate};
    use crate::scalar::ivec;

    fn neg_abs() -> PiecewiseFunction {
        min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap()
    }

    fn origin(n: usize) -> Vec<QPolyhedron> {
        vec![QPolyhedron::point(&linalg::zeros(n))]
    }

    #[test]
    fn abs_boundary_subgradient() {
        let cfg = AccessConfig::default();
        let w = access_point(
            &negate(&neg_abs()).unwrap(),
            &origin(1),
            &ivec(&[0]),
            &ivec(&[1]),
            &cfg,
        )
        .unwrap();
        assert_eq!(w.route, AccessRoute::Lemma);
        assert!(w.converged(&cfg), "{:?}", w.steps);
        // x_m = 1/(4m²)
        let first = w.triples()[0];
        assert_eq!(
            (first.x.clone(), first.v.clone()),
            (vec![Rational::new(1.into(), 4.into())], ivec(&[1]))
        );
    }

    #[test]
    fn abs_interior_subgradient_is_refused() {
        let r = access_point(
            &negate(&neg_abs()).unwrap(),
            &origin(1),
            &ivec(&[0]),
            &ivec(&[0]),
            &AccessConfig::default(),
        );
        assert!(matches!(r, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn neg_abs_by_corollary() {
        let cfg = AccessConfig::default();
        let w = access_point(&neg_abs(), &origin(1), &ivec(&[0]), &ivec(&[1]), &cfg).unwrap();
        assert_eq!(w.route, AccessRoute::Corollary);
        assert!(w.converged(&cfg));
        assert!(w
            .triples()
            .iter()
            .all(|t| t.x[0] < int(0) && t.v == ivec(&[1])));
    }

    #[test]
    fn orthant_edge_normal() {
        let q = QPolyhedron::new(
            2,
            vec![(ivec(&[-1, 0]), int(0)), (ivec(&[0, -1]), int(0))],
            vec![],
        )
        .unwrap();
        let f = indicator(&q).unwrap();
        let cfg = AccessConfig::default();
        let w = access_point(&f, &origin(2), &ivec(&[0, 0]), &ivec(&[0, -1]), &cfg).unwrap();
        assert!(w.converged(&cfg), "{:?}", w.steps);
    }
}
