//! JSON fixture format.
//!
//! `sign_ineqs` is an optional per-cell extension holding the polynomial
//! conditions `q(x) ≤ 0` of polynomial-tier cells.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::function::{Adjacency, Cell, PiecewiseFunction, SpecialOracle, Tier};
use crate::piecewise::polynomial::Polynomial;
use crate::scalar::{serde_rational, Rational};
use crate::QPolyhedron;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowFile {
    #[serde(with = "serde_rational::vec")]
    a: Vec<Rational>,
    #[serde(with = "serde_rational")]
    b: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialFile {
    exp: Vec<u32>,
    #[serde(with = "serde_rational")]
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyFile {
    monomials: Vec<MonomialFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdjacencyFile {
    #[serde(with = "serde_rational::vec")]
    point: Vec<Rational>,
    #[serde(with = "serde_rational::vecvec")]
    witness_seq: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellFile {
    ineqs: Vec<RowFile>,
    #[serde(default)]
    eqs: Vec<RowFile>,
    poly: PolyFile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sign_ineqs: Vec<PolyFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjacency_at: Option<Vec<AdjacencyFile>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    name: String,
    ambient_dim: usize,
    tier: Tier,
    cells: Vec<CellFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    special_oracle: Option<String>,
}

fn schema_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Fixture {
        location: location.into(),
        message: message.into(),
    }
}

fn poly_from_file(p: PolyFile, n: usize, at: &str) -> Result<Polynomial> {
    let terms: Vec<(Vec<u32>, Rational)> =
        p.monomials.into_iter().map(|m| (m.exp, m.coef)).collect();
    Polynomial::from_terms(n, terms).map_err(|e| schema_error(at, e.to_string()))
}

fn poly_to_file(p: &Polynomial) -> PolyFile {
    PolyFile {
        monomials: p
            .terms()
            .map(|(e, c)| MonomialFile {
                exp: e.clone(),
                coef: c.clone(),
            })
            .collect(),
    }
}

fn rows(v: Vec<RowFile>) -> Vec<(Vec<Rational>, Rational)> {
    v.into_iter().map(|r| (r.a, r.b)).collect()
}

fn rows_to_file(v: &[(Vec<Rational>, Rational)]) -> Vec<RowFile> {
    v.iter()
        .map(|(a, b)| RowFile {
            a: a.clone(),
            b: b.clone(),
        })
        .collect()
}

fn from_file(file: FixtureFile, source: &str) -> Result<PiecewiseFunction> {
    let n = file.ambient_dim;
    if let Some(tag) = &file.special_oracle {
        let oracle = SpecialOracle::from_tag(tag).ok_or_else(|| {
            schema_error(
                format!("{source}: special_oracle"),
                format!("unknown oracle {tag:?}"),
            )
        })?;
        return Ok(PiecewiseFunction::special(file.name, n, oracle));
    }
    let mut cells = Vec::with_capacity(file.cells.len());
    for (i, c) in file.cells.into_iter().enumerate() {
        let at = |field: &str| format!("{source}: cells[{i}].{field}");
        let region = QPolyhedron::new(n, rows(c.ineqs), rows(c.eqs))
            .map_err(|e| schema_error(at("ineqs"), e.to_string()))?;
        let formula = poly_from_file(c.poly, n, &at("poly"))?;
        let sign_ineqs = c
            .sign_ineqs
            .into_iter()
            .enumerate()
            .map(|(k, q)| poly_from_file(q, n, &at(&format!("sign_ineqs[{k}]"))))
            .collect::<Result<Vec<_>>>()?;
        let adjacency = c
            .adjacency_at
            .unwrap_or_default()
            .into_iter()
            .map(|a| Adjacency {
                point: a.point,
                witness_seq: a.witness_seq,
            })
            .collect();
        cells.push(Cell {
            region,
            sign_ineqs,
            formula,
            adjacency,
        });
    }
    PiecewiseFunction::new(file.name, n, file.tier, cells)
        .map_err(|e| schema_error(format!("{source}: cells"), e.to_string()))
}

fn to_file(f: &PiecewiseFunction) -> FixtureFile {
    FixtureFile {
        name: f.name.clone(),
        ambient_dim: f.ambient_dim,
        tier: f.tier,
        cells: f
            .cells
            .iter()
            .map(|c| CellFile {
                ineqs: rows_to_file(c.region.ineqs()),
                eqs: rows_to_file(c.region.eqs()),
                poly: poly_to_file(&c.formula),
                sign_ineqs: c.sign_ineqs.iter().map(poly_to_file).collect(),
                adjacency_at: (!c.adjacency.is_empty()).then(|| {
                    c.adjacency
                        .iter()
                        .map(|a| AdjacencyFile {
                            point: a.point.clone(),
                            witness_seq: a.witness_seq.clone(),
                        })
                        .collect()
                }),
            })
            .collect(),
        special_oracle: f.special.map(|s| s.tag().to_string()),
    }
}

/// Parses fixture JSON; `source` names the input in error messages.
pub fn parse_fixture(text: &str, source: &str) -> Result<PiecewiseFunction> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: FixtureFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        schema_error(
            format!("{source}:{}:{} at {path}", inner.line(), inner.column()),
            inner.to_string(),
        )
    })?;
    from_file(file, source)
}

pub fn load_fixture(path: impl AsRef<Path>) -> Result<PiecewiseFunction> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_fixture(&text, &path.display().to_string())
}

pub fn fixture_to_string(f: &PiecewiseFunction) -> String {
    let mut s =
        serde_json::to_string_pretty(&to_file(f)).expect("fixture serialization cannot fail");
    s.push('\n');
    s
}

pub fn save_fixture(f: &PiecewiseFunction, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, fixture_to_string(f))?;
    Ok(())
}

/// Corpus directory: `SUBJET_CORPUS` if set, otherwise the in-repo `corpus/`.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os("SUBJET_CORPUS") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

/// Loads `<corpus>/<name>.json`.
pub fn load_corpus(name: &str) -> Result<PiecewiseFunction> {
    load_fixture(corpus_dir().join(format!("{name}.json")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ivec};

    const NEG_ABS: &str = r#"{
        "name": "neg_abs", "ambient_dim": 1, "tier": "affine",
        "cells": [
            {"ineqs": [{"a": ["1"], "b": "0"}], "eqs": [], "poly": {"monomials": [{"exp": [1], "coef": "1"}]}},
            {"ineqs": [{"a": ["-1"], "b": "0"}], "eqs": [], "poly": {"monomials": [{"exp": [1], "coef": "-1"}]}}
        ]
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let f = parse_fixture(NEG_ABS, "inline").unwrap();
        assert_eq!(f.cells.len(), 2);
        assert_eq!(
            f.evaluate(&ivec(&[-3])).unwrap().finite().unwrap(),
            &int(-3)
        );
        let again = parse_fixture(&fixture_to_string(&f), "again").unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn zero_denominator_is_a_schema_error() {
        let bad = NEG_ABS.replacen("\"b\": \"0\"", "\"b\": \"1/0\"", 1);
        let e = parse_fixture(&bad, "inline").unwrap_err();
        let Error::Fixture { location, message } = e else {
            panic!("wrong error {e:?}");
        };
        assert!(location.contains("cells[0].ineqs[0].b"), "{location}");
        assert!(message.contains("zero denominator"), "{message}");
    }

    #[test]
    fn wrong_exponent_length_is_reported() {
        let bad = NEG_ABS.replacen("\"exp\": [1]", "\"exp\": [1, 0]", 1);
        let e = parse_fixture(&bad, "inline").unwrap_err();
        assert!(
            matches!(e, Error::Fixture { ref location, .. } if location.contains("cells[0].poly"))
        );
    }

    #[test]
    fn special_oracle_tag() {
        let text = r#"{"name": "d", "ambient_dim": 2, "tier": "polynomial", "cells": [], "special_oracle": "disc_plus_point"}"#;
        let f = parse_fixture(text, "inline").unwrap();
        assert_eq!(f.special, Some(SpecialOracle::DiscPlusPoint));
        let bad = text.replace("disc_plus_point", "torus");
        assert!(parse_fixture(&bad, "inline").is_err());
    }
}
