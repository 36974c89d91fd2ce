use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::cover::cuts;
use crate::geometry::faces::faces;
use crate::linalg;
use crate::piecewise::function::{Cell, PiecewiseFunction};
use crate::{QPolyhedron, QVector};

/// True when `g ⊆ p` is a face of `p`.
pub fn is_face(p: &QPolyhedron, g: &QPolyhedron) -> bool {
    if !g.feasible() || !p.contains(g) {
        return false;
    }
    let t = p.tight_on(g);
    g.contains(&p.face_with(&t))
}

fn cutting_row(target: &QPolyhedron, by: &QPolyhedron) -> Option<(QVector, crate::Rational)> {
    let rows = by
        .ineqs()
        .iter()
        .cloned()
        .chain(by.eqs().iter().cloned())
        .chain(by.eqs().iter().map(|(a, b)| (linalg::neg(a), -b.clone())));
    rows.into_iter().find(|(a, b)| cuts(target, a, b))
}

/// Common refinement in which any two cells meet in a common face.
pub fn refine(f: &PiecewiseFunction) -> Result<PiecewiseFunction> {
    if !f.is_affine() {
        return Err(Error::Unsupported(
            "refinement needs the affine tier".into(),
        ));
    }
    let mut cells: Vec<Cell> = f
        .cells
        .iter()
        .filter(|c| c.region.feasible())
        .cloned()
        .collect();
    'outer: loop {
        for i in 0..cells.len() {
            for j in 0..cells.len() {
                if i == j {
                    continue;
                }
                let g = cells[i].region.intersect(&cells[j].region)?;
                if !g.feasible() || is_face(&cells[i].region, &g) {
                    continue;
                }
                let (a, b) = cutting_row(&cells[i].region, &cells[j].region).ok_or_else(|| {
                    Error::Unsupported("no separating hyperplane between overlapping cells".into())
                })?;
                let c = cells[i].clone();
                let lower = c.region.clone().with_ineq(a.clone(), b.clone())?;
                let upper = c.region.clone().with_ineq(linalg::neg(&a), -b)?;
                cells[i] = Cell::new(lower, c.formula.clone());
                cells.push(Cell::new(upper, c.formula));
                continue 'outer;
            }
        }
        break;
    }
    Ok(PiecewiseFunction { cells, ..f.clone() })
}

/// A face of the cell complex with every cell that contains it.
#[derive(Clone, Debug)]
pub struct ComplexFace {
    pub poly: QPolyhedron,
    pub dim: usize,
    pub relint: QVector,
    /// `(cell index, indices of that cell's inequalities tight on the face)`.
    pub cells: Vec<(usize, Vec<usize>)>,
}

/// Distinct faces of all cells of a face-to-face complex.
pub fn complex_faces(f: &PiecewiseFunction) -> Vec<ComplexFace> {
    let mut index: HashMap<QPolyhedron, usize> = HashMap::new();
    let mut out: Vec<ComplexFace> = Vec::new();
    for c in &f.cells {
        for face in faces(&c.region) {
            let key = face.poly.canonical();
            if index.contains_key(&key) {
                continue;
            }
            index.insert(key.clone(), out.len());
            out.push(ComplexFace {
                poly: key,
                dim: face.dim,
                relint: face.relint,
                cells: Vec::new(),
            });
        }
    }
    for face in out.iter_mut() {
        for (k, c) in f.cells.iter().enumerate() {
            if c.region.contains_point(&face.relint) {
                face.cells.push((k, c.region.active_at(&face.relint)));
            }
        }
    }
    out
}
