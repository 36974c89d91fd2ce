//! Polynomial-tier and special-fixture subdifferentials.
//!
//! Cells whose closure meets `x` only through their boundary must declare
//! adjacency at `x`; the normal cone of such a cell is the linearized one,
//! generated by the active linear normals and the gradients of the active
//! sign conditions.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{covered_by_union, tangent_cone_at, PolyCone};
use crate::piecewise::{point_text, Cell, PiecewiseFunction, SpecialOracle};
use crate::scalar::{int, Rational};
use crate::subdiff::{Kind, SubdiffSet};
use crate::{QPolyhedron, QVector};

fn check_dim(f: &PiecewiseFunction, x: &[Rational]) -> Result<()> {
    if x.len() != f.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_dim,
            got: x.len(),
        });
    }
    Ok(())
}

/// Cells containing `x`, each checked for declared adjacency unless `x` is interior to it.
fn adjacent_cells<'a>(f: &'a PiecewiseFunction, x: &[Rational]) -> Result<Vec<(usize, &'a Cell)>> {
    let cells: Vec<(usize, &Cell)> = f
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.contains(x))
        .collect();
    for (k, c) in &cells {
        if !c.strictly_inside(x) && c.adjacency_at(x).is_none() {
            return Err(Error::MissingAdjacency(format!(
                "{}: cell {k} declares no adjacency at {}",
                f.name,
                point_text(x)
            )));
        }
    }
    Ok(cells)
}

/// Linearized normal cone of a sign-region cell at `x`.
pub fn linearized_normal_cone(c: &Cell, x: &[Rational]) -> PolyCone<Rational> {
    let n = c.region.ambient_dim();
    let mut rays: Vec<QVector> = c
        .region
        .active_at(x)
        .iter()
        .map(|&i| c.region.ineqs()[i].0.clone())
        .collect();
    for q in &c.sign_ineqs {
        if q.evaluate(x).is_zero() {
            rays.push(q.gradient(x));
        }
    }
    let lines: Vec<QVector> = c.region.eqs().iter().map(|(a, _)| a.clone()).collect();
    PolyCone::from_generators(n, &rays, &lines).expect("cell rows share the ambient dimension")
}

fn ray_plus_x() -> QPolyhedron {
    QPolyhedron::new(
        2,
        vec![(vec![int(-1), int(0)], int(0))],
        vec![(vec![int(0), int(1)], int(0))],
    )
    .expect("two coordinates")
}

fn special_subdiff(oracle: SpecialOracle, x: &[Rational], kind: Kind) -> Result<SubdiffSet> {
    match oracle {
        SpecialOracle::DiscPlusPoint => {
            if kind == Kind::Clarke {
                return Err(Error::NotLipschitz(
                    "an indicator is not locally Lipschitz".into(),
                ));
            }
            let r2 = x[0].clone() * x[0].clone() + x[1].clone() * x[1].clone();
            if r2 < int(1) {
                Ok(SubdiffSet::normalized(
                    kind,
                    vec![QPolyhedron::point(&[int(0), int(0)])],
                ))
            } else if x[0] == int(1) && x[1].is_zero() {
                Ok(SubdiffSet::normalized(kind, vec![ray_plus_x()]))
            } else {
                Ok(SubdiffSet::empty(kind))
            }
        }
    }
}

pub fn frechet(f: &PiecewiseFunction, x: &[Rational]) -> Result<SubdiffSet> {
    check_dim(f, x)?;
    if let Some(s) = f.special {
        return special_subdiff(s, x, Kind::Frechet);
    }
    let cells = adjacent_cells(f, x)?;
    if cells.is_empty() {
        return Ok(SubdiffSet::empty(Kind::Frechet));
    }
    let mut s = QPolyhedron::whole(f.ambient_dim);
    for (_, c) in cells {
        let cone = linearized_normal_cone(c, x);
        s = s.intersect(&cone.as_polyhedron().translate(&c.formula.gradient(x))?)?;
    }
    Ok(SubdiffSet::normalized(Kind::Frechet, vec![s]))
}

pub fn limiting(f: &PiecewiseFunction, x: &[Rational]) -> Result<SubdiffSet> {
    check_dim(f, x)?;
    if let Some(s) = f.special {
        return special_subdiff(s, x, Kind::Limiting);
    }
    let cells = adjacent_cells(f, x)?;
    match cells.as_slice() {
        [] => Ok(SubdiffSet::empty(Kind::Limiting)),
        [(_, c)] if c.strictly_inside(x) => Ok(SubdiffSet::normalized(
            Kind::Limiting,
            vec![QPolyhedron::point(&c.formula.gradient(x))],
        )),
        _ => Err(Error::Unsupported(format!(
            "limiting subdifferential of polynomial-tier {} on a cell boundary at {}",
            f.name,
            point_text(x)
        ))),
    }
}

pub fn clarke(f: &PiecewiseFunction, x: &[Rational]) -> Result<SubdiffSet> {
    check_dim(f, x)?;
    if let Some(s) = f.special {
        return special_subdiff(s, x, Kind::Clarke);
    }
    let cells = adjacent_cells(f, x)?;
    let cones: Vec<QPolyhedron> = cells
        .iter()
        .map(|(_, c)| tangent_cone_at(&c.region, x).map(|t| t.into_polyhedron()))
        .collect::<Result<_>>()?;
    if !covered_by_union(&QPolyhedron::whole(f.ambient_dim), &cones) {
        return Err(Error::NotLipschitz(format!(
            "{} is not locally Lipschitz at {}",
            f.name,
            point_text(x)
        )));
    }
    let grads: Vec<QVector> = cells.iter().map(|(_, c)| c.formula.gradient(x)).collect();
    let hull = QPolyhedron::convex_hull(f.ambient_dim, &grads)?;
    Ok(SubdiffSet::normalized(Kind::Clarke, vec![hull]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ivec, rat};

    #[test]
    fn disc_plus_point() {
        let f = PiecewiseFunction::special("d", 2, SpecialOracle::DiscPlusPoint);
        let s = frechet(&f, &ivec(&[1, 0])).unwrap();
        assert!(
            s.contains(&ivec(&[5, 0]))
                && !s.contains(&ivec(&[-1, 0]))
                && !s.contains(&ivec(&[1, 1]))
        );
        let inner = limiting(&f, &[rat(1, 2), int(0)]).unwrap();
        assert_eq!(inner.as_points().unwrap(), vec![ivec(&[0, 0])]);
        assert!(frechet(&f, &ivec(&[0, 1])).unwrap().is_empty());
        assert!(clarke(&f, &ivec(&[0, 0])).is_err());
    }
}
