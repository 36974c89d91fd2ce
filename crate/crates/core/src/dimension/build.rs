//! Piece unions for subdifferential graphs.

use crate::dimension::{InterfaceRule, Piece, PieceShape, PieceUnion};
use crate::error::{Error, Result};
use crate::piecewise::{PiecewiseFunction, SpecialOracle};
use crate::scalar::{int, Rational};
use crate::subdiff::{poly, pullback_graph, Engine, Kind, SubjetPiece};
use crate::{QPolyhedron, QVector};

fn from_subjet(n: usize, pieces: Vec<SubjetPiece>) -> PieceUnion {
    let pieces = pieces
        .into_iter()
        .enumerate()
        .map(|(i, p)| Piece::product(format!("face {i}"), p.base, p.subgrad, p.relint_only))
        .collect();
    PieceUnion::new(2 * n, pieces)
}

fn disc_union() -> PieceUnion {
    let ray = QPolyhedron::new(
        2,
        vec![(vec![int(-1), int(0)], int(0))],
        vec![(vec![int(0), int(1)], int(0))],
    )
    .expect("two coordinates");
    PieceUnion::new(
        4,
        vec![
            Piece {
                label: "open disc × {0}".into(),
                shape: PieceShape::DiscInterior,
            },
            Piece::product(
                "(1,0) × R+(1,0)",
                QPolyhedron::point(&[int(1), int(0)]),
                ray,
                false,
            ),
        ],
    )
}

/// Clarke graph of a polynomial-tier function: one gradient graph per cell, the
/// full fiber at each declared adjacency point, and lazily resolved interfaces.
fn clarke_union(f: &PiecewiseFunction) -> Result<PieceUnion> {
    let n = f.ambient_dim;
    let mut pieces: Vec<Piece> = f
        .cells
        .iter()
        .enumerate()
        .map(|(k, c)| Piece {
            label: format!("cell {k} gradient graph"),
            shape: PieceShape::CellGradient(c.clone()),
        })
        .collect();
    let mut declared: Vec<QVector> = Vec::new();
    for c in &f.cells {
        for a in &c.adjacency {
            if !declared.contains(&a.point) {
                declared.push(a.point.clone());
            }
        }
    }
    for x in declared {
        let fiber = poly::clarke(f, &x)?;
        let fiber = fiber
            .pieces
            .into_iter()
            .next()
            .unwrap_or_else(|| QPolyhedron::empty(n));
        pieces.push(Piece::product(
            format!("fiber at {}", crate::piecewise::point_text(&x)),
            QPolyhedron::point(&x),
            fiber,
            false,
        ));
    }
    Ok(PieceUnion {
        ambient_dim: 2 * n,
        pieces,
        interfaces: Some(InterfaceRule {
            cells: f.cells.clone(),
        }),
    })
}

/// Pieces of `gph ∂̂f`, `gph ∂f` or `gph ∂_c f` in `R^n × R^n`.
pub fn subjet_union(f: &PiecewiseFunction, kind: Kind) -> Result<PieceUnion> {
    if let Some(SpecialOracle::DiscPlusPoint) = f.special {
        return match kind {
            Kind::Clarke => Err(Error::NotLipschitz(
                "an indicator is not locally Lipschitz".into(),
            )),
            _ => Ok(disc_union()),
        };
    }
    if f.is_affine() {
        let e = Engine::new(f)?;
        if kind == Kind::Clarke {
            for (face, _) in e.faces() {
                if !e.is_lipschitz_at(&face.relint)? {
                    return Err(Error::NotLipschitz(crate::piecewise::point_text(
                        &face.relint,
                    )));
                }
            }
        }
        return Ok(from_subjet(f.ambient_dim, e.subjet_pieces(kind)));
    }
    match kind {
        Kind::Clarke => clarke_union(f),
        _ => Err(Error::Unsupported(format!(
            "{} graph of polynomial-tier {} away from declared points",
            kind, f.name
        ))),
    }
}

/// Graph of `x ↦ Mᵀ ∂g(Mx + c)` as a piece union.
pub fn pullback_union(
    g: &PiecewiseFunction,
    m: &[Vec<Rational>],
    c: &[Rational],
    k: usize,
) -> Result<PieceUnion> {
    Ok(from_subjet(k, pullback_graph(g, m, c, k)?))
}
