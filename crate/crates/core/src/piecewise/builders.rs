use crate::error::{Error, Result};
use crate::geometry::Dim;
use crate::linalg;
use crate::piecewise::function::{Cell, PiecewiseFunction, Tier};
use crate::piecewise::polynomial::Polynomial;
use crate::scalar::Rational;
use crate::{QPolyhedron, QVector};

fn need_affine(f: &PiecewiseFunction) -> Result<()> {
    if f.is_affine() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{} is not on the affine tier",
            f.name
        )))
    }
}

/// Drops empty cells and cells contained in an earlier or larger kept cell.
fn prune(cells: Vec<Cell>) -> Vec<Cell> {
    let cells: Vec<Cell> = cells.into_iter().filter(|c| c.region.feasible()).collect();
    let mut kept: Vec<Cell> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        let swallowed = cells.iter().enumerate().any(|(j, d)| {
            j != i && d.region.contains(&c.region) && (!c.region.contains(&d.region) || j < i)
        });
        if !swallowed {
            kept.push(c.clone());
        }
    }
    kept
}

/// Pointwise minimum of the affine functions `a·x + b`.
pub fn min_of_affine(dim: usize, pieces: &[(QVector, Rational)]) -> Result<PiecewiseFunction> {
    if let Some((a, _)) = pieces.iter().find(|(a, _)| a.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: a.len(),
        });
    }
    let mut distinct: Vec<(QVector, Rational)> = Vec::new();
    for p in pieces {
        if !distinct.contains(p) {
            distinct.push(p.clone());
        }
    }
    let mut cells = Vec::new();
    for (i, (ai, bi)) in distinct.iter().enumerate() {
        let mut region = QPolyhedron::whole(dim);
        for (j, (aj, bj)) in distinct.iter().enumerate() {
            if i != j {
                region = region.with_ineq(linalg::sub(ai, aj), bj.clone() - bi.clone())?;
            }
        }
        if region.dim() == Dim::Finite(dim) {
            cells.push(Cell::new(region, Polynomial::affine(ai, bi.clone())));
        }
    }
    PiecewiseFunction::new("min_of_affine", dim, Tier::Affine, cells)
}

pub fn indicator(p: &QPolyhedron) -> Result<PiecewiseFunction> {
    let n = p.ambient_dim();
    PiecewiseFunction::new(
        "indicator",
        n,
        Tier::Affine,
        vec![Cell::new(p.clone(), Polynomial::zero(n))],
    )
}

pub fn negate(f: &PiecewiseFunction) -> Result<PiecewiseFunction> {
    if f.special.is_some() {
        return Err(Error::Unsupported(
            "hand-coded functions cannot be negated".into(),
        ));
    }
    let mut g = f.clone();
    for c in g.cells.iter_mut() {
        c.formula = c.formula.neg();
    }
    g.name = format!("neg_{}", f.name);
    Ok(g)
}

/// `f + g` on the common refinement of both cell lists; the domain is the intersection.
pub fn sum(f: &PiecewiseFunction, g: &PiecewiseFunction) -> Result<PiecewiseFunction> {
    need_affine(f)?;
    need_affine(g)?;
    if f.ambient_dim != g.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_dim,
            got: g.ambient_dim,
        });
    }
    let mut cells = Vec::new();
    for c in &f.cells {
        for d in &g.cells {
            cells.push(Cell::new(
                c.region.intersect(&d.region)?,
                c.formula.add(&d.formula),
            ));
        }
    }
    PiecewiseFunction::new(
        format!("{}+{}", f.name, g.name),
        f.ambient_dim,
        Tier::Affine,
        prune(cells),
    )
}

/// `x ↦ g(M x + c)` for `m` with `g.ambient_dim` rows of length `k`.
pub fn affine_precompose(
    g: &PiecewiseFunction,
    m: &[Vec<Rational>],
    c: &[Rational],
    k: usize,
) -> Result<PiecewiseFunction> {
    need_affine(g)?;
    let mut cells = Vec::new();
    for cell in &g.cells {
        cells.push(Cell::new(
            cell.region.preimage(m, c, k)?,
            cell.formula.compose_affine(m, c, k)?,
        ));
    }
    PiecewiseFunction::new(
        format!("{}_pullback", g.name),
        k,
        Tier::Affine,
        prune(cells),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::function::ExtendedRational;
    use crate::scalar::{int, ivec, rat};

    fn val(f: &PiecewiseFunction, x: &[Rational]) -> ExtendedRational {
        f.evaluate(x).unwrap()
    }

    #[test]
    fn min_gives_neg_abs() {
        let f = min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap();
        assert_eq!(f.cells.len(), 2);
        assert_eq!(val(&f, &ivec(&[-3])), ExtendedRational::Finite(int(-3)));
        assert_eq!(val(&f, &ivec(&[2])), ExtendedRational::Finite(int(-2)));
    }

    #[test]
    fn min_drops_dominated_pieces() {
        let f = min_of_affine(1, &[(ivec(&[0]), int(0)), (ivec(&[0]), int(5))]).unwrap();
        assert_eq!(f.cells.len(), 1);
    }

    #[test]
    fn indicator_of_interval() {
        let f = indicator(&QPolyhedron::boxed(&ivec(&[0]), &ivec(&[1])).unwrap()).unwrap();
        assert_eq!(val(&f, &[rat(1, 2)]), ExtendedRational::Finite(int(0)));
        assert_eq!(val(&f, &ivec(&[2])), ExtendedRational::PosInf);
    }

    #[test]
    fn pullback_of_separable_sum() {
        // g(x, y) = -|x| - |y| pulled back along x ↦ (x, x) is -2|x|
        let nabs = min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap();
        let gx = affine_precompose(&nabs, &[ivec(&[1, 0])], &ivec(&[0]), 2).unwrap();
        let gy = affine_precompose(&nabs, &[ivec(&[0, 1])], &ivec(&[0]), 2).unwrap();
        let g = sum(&gx, &gy).unwrap();
        assert_eq!(g.cells.len(), 4);
        let h = affine_precompose(&g, &[ivec(&[1]), ivec(&[1])], &ivec(&[0, 0]), 1).unwrap();
        for x in [-3, -1, 0, 2, 5] {
            assert_eq!(
                val(&h, &ivec(&[x])),
                ExtendedRational::Finite(int(-2 * x.abs()))
            );
        }
    }

    #[test]
    fn sum_with_indicator_restricts_domain() {
        let abs =
            negate(&min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap())
                .unwrap();
        let box1 = indicator(&QPolyhedron::boxed(&ivec(&[0]), &ivec(&[1])).unwrap()).unwrap();
        let s = sum(&abs, &box1).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert_eq!(val(&s, &[rat(1, 3)]), ExtendedRational::Finite(rat(1, 3)));
        assert_eq!(val(&s, &ivec(&[-1])), ExtendedRational::PosInf);
    }
}
