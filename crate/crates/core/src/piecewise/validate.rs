use serde_json::{json, Value};

use crate::linalg::{dot, sub};
use crate::piecewise::function::{PiecewiseFunction, SpecialOracle, Tier};
use crate::scalar::{int, json_vec, to_f64, Rational};
use crate::QVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
    pub witnesses: Vec<QVector>,
}

impl Check {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        Check {
            name,
            status: CheckStatus::Pass,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Check {
            name,
            status: CheckStatus::Skipped,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>, witnesses: Vec<QVector>) -> Self {
        Check {
            name,
            status: CheckStatus::Fail,
            detail: detail.into(),
            witnesses,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub function: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": c.status.as_str(),
                    "detail": c.detail,
                    "witnesses": c.witnesses.iter().map(|w| json_vec(w)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "function": self.function, "valid": self.is_valid(), "checks": checks })
    }
}

fn validate_special(f: &PiecewiseFunction, oracle: SpecialOracle) -> Vec<Check> {
    match oracle {
        SpecialOracle::DiscPlusPoint => vec![
            Check::pass("properness", "value 0 on a nonempty set"),
            Check::fail(
                "lsc",
                "domain is not closed: boundary points of the disc other than (1,0) have value +inf \
                 but are limits of points with value 0",
                vec![vec![int(-1), int(0)]],
            ),
            Check::skipped("continuity", format!("{} is hand-coded", f.name)),
        ],
    }
}

/// Pairwise agreement of neighbouring formulas on the whole shared set:
/// equal values at vertices, equal slopes along rays and lines.
fn continuity_affine(f: &PiecewiseFunction) -> Check {
    for i in 0..f.cells.len() {
        for j in i + 1..f.cells.len() {
            let Ok(g) = f.cells[i].region.intersect(&f.cells[j].region) else {
                continue;
            };
            let Ok(v) = g.v_representation() else {
                continue;
            };
            let (pi, pj) = (&f.cells[i].formula, &f.cells[j].formula);
            for p in &v.vertices {
                if pi.evaluate(p) != pj.evaluate(p) {
                    return Check::fail(
                        "continuity",
                        format!("cells {i} and {j} disagree on their common set"),
                        vec![p.clone()],
                    );
                }
            }
            let (ai, _) = pi.affine_parts().expect("affine tier");
            let (aj, _) = pj.affine_parts().expect("affine tier");
            let diff = sub(&ai, &aj);
            for r in v.rays.iter().chain(&v.lines) {
                if !num_traits::Zero::is_zero(&dot(&diff, r)) {
                    let far: QVector = v.vertices[0]
                        .iter()
                        .zip(r)
                        .map(|(a, b)| a.clone() + b.clone())
                        .collect();
                    return Check::fail(
                        "continuity",
                        format!("cells {i} and {j} diverge along a shared ray"),
                        vec![far],
                    );
                }
            }
        }
    }
    Check::pass(
        "continuity",
        "formulas agree on every pairwise intersection",
    )
}

fn disjoint_interiors(f: &PiecewiseFunction) -> Check {
    for i in 0..f.cells.len() {
        for j in i + 1..f.cells.len() {
            let (a, b) = (&f.cells[i].region, &f.cells[j].region);
            let Ok(g) = a.intersect(b) else { continue };
            let Some(an) = g.analyze() else { continue };
            let ai = a.analyze().map(|x| x.implicit).unwrap_or_default();
            let bi = b.analyze().map(|x| x.implicit).unwrap_or_default();
            let m = a.ineqs().len();
            let separated = an.implicit.iter().any(|&k| {
                if k < m {
                    !ai.contains(&k)
                } else {
                    !bi.contains(&(k - m))
                }
            });
            if !separated {
                return Check::fail(
                    "interior_disjointness",
                    format!("relative interiors of cells {i} and {j} overlap"),
                    vec![an.relint],
                );
            }
        }
    }
    Check::pass(
        "interior_disjointness",
        "relative interiors are pairwise disjoint",
    )
}

fn adjacency_check(f: &PiecewiseFunction) -> Check {
    let mut declared = 0;
    for (ci, c) in f.cells.iter().enumerate() {
        for adj in &c.adjacency {
            declared += 1;
            let residual = c
                .region
                .ineqs()
                .iter()
                .map(|(a, b)| to_f64(&(dot(a, &adj.point) - b.clone())))
                .chain(c.sign_ineqs.iter().map(|q| to_f64(&q.evaluate(&adj.point))))
                .fold(0.0_f64, f64::max);
            if residual > 1e-9 {
                return Check::fail(
                    "adjacency",
                    format!("declared point is not in the closure of cell {ci}"),
                    vec![adj.point.clone()],
                );
            }
            let mut last = f64::INFINITY;
            for w in &adj.witness_seq {
                if !c.contains(w) {
                    return Check::fail(
                        "adjacency",
                        format!("witness point outside cell {ci}"),
                        vec![w.clone()],
                    );
                }
                let d: Rational = sub(w, &adj.point)
                    .iter()
                    .map(|x| x.clone() * x.clone())
                    .sum();
                let d = to_f64(&d).sqrt();
                if d >= last {
                    return Check::fail(
                        "adjacency",
                        format!("witness sequence of cell {ci} does not approach the point"),
                        vec![w.clone()],
                    );
                }
                last = d;
            }
            if adj.witness_seq.is_empty() || last >= 1e-9 {
                return Check::fail(
                    "adjacency",
                    format!("witness sequence of cell {ci} ends at distance {last:e}"),
                    vec![adj.point.clone()],
                );
            }
        }
    }
    Check::pass(
        "adjacency",
        format!("{declared} declared adjacencies verified"),
    )
}

fn continuity_declared(f: &PiecewiseFunction) -> Check {
    let mut points: Vec<&QVector> = Vec::new();
    for c in &f.cells {
        for a in &c.adjacency {
            if !points.contains(&&a.point) {
                points.push(&a.point);
            }
        }
    }
    for p in points {
        if f.evaluate(p).is_err() {
            return Check::fail(
                "continuity",
                "cell values disagree at a declared point",
                vec![p.clone()],
            );
        }
    }
    Check::pass("continuity", "cell values agree at every declared point")
}

pub fn validate(f: &PiecewiseFunction) -> ValidationReport {
    let mut checks = Vec::new();
    if let Some(oracle) = f.special {
        checks.extend(validate_special(f, oracle));
        return ValidationReport {
            function: f.name.clone(),
            checks,
        };
    }
    let nonempty: Vec<usize> = (0..f.cells.len())
        .filter(|&i| f.cells[i].region.feasible())
        .collect();
    checks.push(if nonempty.is_empty() {
        Check::fail("properness", "the domain is empty", Vec::new())
    } else {
        Check::pass("properness", "finite values on a nonempty domain")
    });
    checks.push(match (0..f.cells.len()).find(|i| !nonempty.contains(i)) {
        Some(i) => Check::fail("cells_nonempty", format!("cell {i} is empty"), Vec::new()),
        None => Check::pass("cells_nonempty", "every cell region is nonempty"),
    });
    match f.tier {
        Tier::Affine => {
            checks.push(Check::pass(
                "affine_degree",
                "every formula has degree at most one",
            ));
            checks.push(disjoint_interiors(f));
            let cont = continuity_affine(f);
            let lsc = match cont.status {
                CheckStatus::Pass => Check::pass("lsc", "closed domain and continuous on it"),
                _ => Check::fail(
                    "lsc",
                    "discontinuous across a shared face; only continuous functions on closed domains are supported",
                    cont.witnesses.clone(),
                ),
            };
            checks.push(cont);
            checks.push(lsc);
            checks.push(Check::skipped(
                "adjacency",
                "affine tier computes adjacency exactly",
            ));
        }
        Tier::Polynomial => {
            checks.push(Check::skipped(
                "interior_disjointness",
                "sign regions are taken as declared",
            ));
            let cont = continuity_declared(f);
            let lsc = match cont.status {
                CheckStatus::Pass => {
                    Check::pass("lsc", "closed cells, values agree at declared points")
                }
                _ => Check::fail("lsc", "cell values disagree", cont.witnesses.clone()),
            };
            checks.push(cont);
            checks.push(lsc);
            checks.push(adjacency_check(f));
        }
    }
    ValidationReport {
        function: f.name.clone(),
        checks,
    }
}
