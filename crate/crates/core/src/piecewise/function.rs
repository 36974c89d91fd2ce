use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::polynomial::Polynomial;
use crate::scalar::{format_rational, json_rat, Rational};
use crate::{QPolyhedron, QVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Affine,
    Polynomial,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Affine => "affine",
            Tier::Polynomial => "polynomial",
        }
    }
}

/// Hand-coded functions that are not representable on polyhedral cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialOracle {
    /// Indicator of the open unit disc together with the boundary point (1, 0).
    DiscPlusPoint,
}

impl SpecialOracle {
    pub fn tag(self) -> &'static str {
        match self {
            SpecialOracle::DiscPlusPoint => "disc_plus_point",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "disc_plus_point" => Some(SpecialOracle::DiscPlusPoint),
            _ => None,
        }
    }
}

/// A point of a cell's closure together with a sequence inside the cell converging to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    pub point: QVector,
    pub witness_seq: Vec<QVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub region: QPolyhedron,
    /// Extra closed conditions `q(x) ≤ 0` (polynomial tier only).
    pub sign_ineqs: Vec<Polynomial>,
    pub formula: Polynomial,
    pub adjacency: Vec<Adjacency>,
}

impl Cell {
    pub fn new(region: QPolyhedron, formula: Polynomial) -> Self {
        Cell {
            region,
            sign_ineqs: Vec::new(),
            formula,
            adjacency: Vec::new(),
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        self.sign_ineqs.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.region.contains_point(x)
            && self.sign_ineqs.iter().all(|q| !q.evaluate(x).is_positive())
    }

    /// True when every defining inequality is strict at `x` and there are no equalities.
    pub fn strictly_inside(&self, x: &[Rational]) -> bool {
        self.region.eqs().is_empty()
            && self.region.active_at(x).is_empty()
            && self.region.contains_point(x)
            && self.sign_ineqs.iter().all(|q| q.evaluate(x).is_negative())
    }

    pub fn adjacency_at(&self, x: &[Rational]) -> Option<&Adjacency> {
        self.adjacency.iter().find(|a| a.point == x)
    }

    /// Exact gradient of the cell formula at `x`, which must lie in the cell.
    pub fn gradient_at(&self, x: &[Rational]) -> Result<QVector> {
        if !self.contains(x) {
            return Err(Error::OutsideCell);
        }
        Ok(self.formula.gradient(x))
    }
}

pub fn gradient_on_cell(c: &Cell, x: &[Rational]) -> Result<QVector> {
    c.gradient_at(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(Rational),
    PosInf,
}

impl ExtendedRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            ExtendedRational::PosInf => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedRational::Finite(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ExtendedRational::Finite(r) => json_rat(r),
            ExtendedRational::PosInf => serde_json::Value::from("+inf"),
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(r) => write!(f, "{}", format_rational(r)),
            ExtendedRational::PosInf => write!(f, "+inf"),
        }
    }
}

/// Extended-real function given by polynomial formulas on closed cells; `+∞` off their union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFunction {
    pub name: String,
    pub ambient_dim: usize,
    pub tier: Tier,
    pub cells: Vec<Cell>,
    pub special: Option<SpecialOracle>,
}

impl PiecewiseFunction {
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        tier: Tier,
        cells: Vec<Cell>,
    ) -> Result<Self> {
        for c in &cells {
            let dims = [c.region.ambient_dim(), c.formula.dim()]
                .into_iter()
                .chain(c.sign_ineqs.iter().map(|q| q.dim()))
                .chain(c.adjacency.iter().map(|a| a.point.len()))
                .chain(
                    c.adjacency
                        .iter()
                        .flat_map(|a| a.witness_seq.iter().map(|w| w.len())),
                );
            for d in dims {
                if d != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        expected: ambient_dim,
                        got: d,
                    });
                }
            }
            if tier == Tier::Affine && (!c.formula.is_affine() || !c.sign_ineqs.is_empty()) {
                return Err(Error::Unsupported(
                    "affine tier cells need affine formulas and polyhedral regions".into(),
                ));
            }
        }
        Ok(PiecewiseFunction {
            name: name.into(),
            ambient_dim,
            tier,
            cells,
            special: None,
        })
    }

    pub fn special(name: impl Into<String>, ambient_dim: usize, oracle: SpecialOracle) -> Self {
        PiecewiseFunction {
            name: name.into(),
            ambient_dim,
            tier: Tier::Polynomial,
            cells: Vec::new(),
            special: Some(oracle),
        }
    }

    pub fn is_affine(&self) -> bool {
        self.tier == Tier::Affine && self.special.is_none()
    }

    /// Indices of the cells containing `x`.
    pub fn cells_at(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].contains(x))
            .collect()
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<ExtendedRational> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        if let Some(SpecialOracle::DiscPlusPoint) = self.special {
            let r2 = x[0].clone() * x[0].clone() + x[1].clone() * x[1].clone();
            let corner = x[0].is_one() && x[1].is_zero();
            return Ok(if r2 < Rational::one() || corner {
                ExtendedRational::Finite(Rational::zero())
            } else {
                ExtendedRational::PosInf
            });
        }
        let mut value: Option<Rational> = None;
        for i in self.cells_at(x) {
            let v = self.cells[i].formula.evaluate(x);
            match &value {
                None => value = Some(v),
                Some(w) if *w != v => {
                    return Err(Error::InconsistentValues {
                        point: point_text(x),
                        detail: format!("{} vs {}", format_rational(w), format_rational(&v)),
                    })
                }
                _ => {}
            }
        }
        Ok(value.map_or(ExtendedRational::PosInf, ExtendedRational::Finite))
    }

    pub fn in_domain(&self, x: &[Rational]) -> bool {
        matches!(self.evaluate(x), Ok(ExtendedRational::Finite(_)))
    }
}

pub fn point_text(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}
