use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use subjet::dimension::{
    matches_documentation, pullback_union, subjet_union, verify_local_dim_theorem, PieceUnion,
};
use subjet::minty::{self, MintyAnalysis, MintyMap, QMatrix, SampleBounds};
use subjet::param::{self, AccessConfig, ParamSystem, SensitivityConfig};
use subjet::piecewise::{
    corpus_dir, fixture_to_string, parse_fixture, random_piecewise_affine, validate,
    GeneratorConfig, PiecewiseFunction,
};
use subjet::scalar::{json_vec, parse_csv, parse_rational, Rational};
use subjet::subdiff::{self, Kind};
use subjet::{Error, QPolyhedron, QVector};

use crate::args::Command;
use crate::report::{fixture_entry, Report};

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 2.
    Usage(String),
    /// A check failed or a hypothesis does not hold; exit code 1.
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesisViolated(_) | Error::NotLipschitz(_) | Error::Undecided(_) => {
                CliError::Failure(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn resolve(arg: &str) -> PathBuf {
    let p = PathBuf::from(arg);
    if p.exists() {
        return p;
    }
    let mut q = corpus_dir().join(arg);
    if q.extension().is_none() {
        q.set_extension("json");
    }
    q
}

struct Loaded {
    f: PiecewiseFunction,
    entry: (String, String),
}

fn load(arg: &str) -> Result<Loaded> {
    let path = resolve(arg);
    let bytes = std::fs::read(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let text =
        String::from_utf8(bytes.clone()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let f = parse_fixture(&text, &path.display().to_string())?;
    Ok(Loaded {
        f,
        entry: fixture_entry(&path, &bytes),
    })
}

fn corpus_files() -> Result<Vec<PathBuf>> {
    let dir = corpus_dir();
    let mut out: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

fn rationals(text: &str, what: &str) -> Result<QVector> {
    let flat = text.replace(';', ",");
    parse_csv(&flat).map_err(|e| usage(format!("--{what}: {e}")))
}

fn vector(text: &str, n: usize, what: &str) -> Result<QVector> {
    let v = rationals(text, what)?;
    if v.len() != n {
        return Err(usage(format!(
            "--{what} needs {n} entries, got {}",
            v.len()
        )));
    }
    Ok(v)
}

fn rational(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| usage(format!("--{what}: {e}")))
}

/// Row-major `n × n` matrix.
fn matrix(text: &str, n: usize) -> Result<QMatrix> {
    let v = vector(text, n * n, "A")?;
    Ok(v.chunks(n).map(|c| c.to_vec()).collect())
}

/// Rows separated by ';', all of the same length.
fn rows(text: &str, n: usize) -> Result<(QMatrix, usize)> {
    let m: QMatrix = text
        .split(';')
        .map(|r| parse_csv(r).map_err(|e| usage(format!("--pullback: {e}"))))
        .collect::<Result<_>>()?;
    let k = m.first().map(|r| r.len()).unwrap_or(0);
    if m.len() != n || k == 0 || m.iter().any(|r| r.len() != k) {
        return Err(usage(format!("--pullback needs {n} rows of equal length")));
    }
    Ok((m, k))
}

fn graph_union(f: &PiecewiseFunction, kind: Kind, pullback: Option<&str>) -> Result<PieceUnion> {
    match pullback {
        Some(text) => {
            let (m, k) = rows(text, f.ambient_dim)?;
            Ok(pullback_union(
                f,
                &m,
                &vec![Rational::from_integer(0.into()); f.ambient_dim],
                k,
            )?)
        }
        None => Ok(subjet_union(f, kind)?),
    }
}

fn matrix_json(m: &QMatrix) -> Value {
    json!(m.iter().map(|r| json_vec(r)).collect::<Vec<_>>())
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Subdiff {
            fixture,
            point,
            kind,
            ..
        } => {
            let l = load(&fixture.fixture)?;
            let x = vector(point, l.f.ambient_dim, "point")?;
            let mut r = Report::new(
                "subdiff",
                json!({"point": json_vec(&x), "kind": kind.as_str()}),
            );
            r.fixtures.push(l.entry);
            r.results = subdiff::subdiff(&l.f, &x, *kind)?.to_json();
            Ok(r)
        }
        Command::Graph {
            fixture,
            kind,
            pullback,
            ..
        } => {
            let l = load(&fixture.fixture)?;
            let u = graph_union(&l.f, *kind, pullback.as_deref())?;
            let mut r = Report::new(
                "graph",
                json!({"kind": kind.as_str(), "pullback": pullback}),
            );
            r.fixtures.push(l.entry);
            r.results = u.to_json();
            Ok(r)
        }
        Command::Localdim {
            fixture,
            point,
            kind,
            pullback,
            ..
        } => {
            let l = load(&fixture.fixture)?;
            let u = graph_union(&l.f, *kind, pullback.as_deref())?;
            let p = vector(point, u.ambient_dim, "point")?;
            let mut r = Report::new(
                "localdim",
                json!({"point": json_vec(&p), "kind": kind.as_str(), "pullback": pullback}),
            );
            r.fixtures.push(l.entry);
            r.results = u.local_dim(&p)?.to_json();
            Ok(r)
        }
        Command::Verify { fixture, kind, .. } => verify(fixture.as_deref(), *kind),
        Command::Minty {
            fixture,
            a,
            b,
            trials,
            seed,
            kind,
            ..
        } => {
            let l = load(&fixture.fixture)?;
            let n = l.f.ambient_dim;
            let u = subjet_union(&l.f, *kind)?;
            let bounds = SampleBounds::default();
            let mut r = Report::new(
                "minty",
                json!({
                    "kind": kind.as_str(),
                    "A": a,
                    "b": b,
                    "trials": trials,
                    "seed": seed,
                    "numerator_bound": bounds.numerator,
                    "denominator_bound": bounds.denominator,
                }),
            );
            r.fixtures.push(l.entry);
            if let Some(a) = a {
                let map = MintyMap::new(matrix(a, n)?)?;
                let analysis = MintyAnalysis::new(&u)?;
                let cert = analysis.certify(&map)?;
                let mut results = cert.to_json();
                if let Some(b) = b {
                    let target = vector(b, n, "b")?;
                    let parts = minty::preimage(&map, analysis.pieces(), &target)?;
                    results["preimage"] =
                        json!(parts.iter().map(|p| p.to_json()).collect::<Vec<_>>());
                }
                r.pass = cert.passed();
                if !r.pass {
                    r.violations.push(json!({"matrix": matrix_json(map.matrix()), "reason": "certificate failed"}));
                }
                r.results = results;
            } else {
                let seed = seed.ok_or_else(|| usage("sampling needs --seed"))?;
                let rep = minty::sample_generic(&u, *trials, seed, bounds)?;
                r.pass = rep.fraction() >= 0.99;
                r.violations = rep
                    .failures
                    .iter()
                    .take(20)
                    .map(|(t, m)| json!({"trial": t, "matrix": matrix_json(m)}))
                    .collect();
                r.results = rep.to_json();
            }
            Ok(r)
        }
        Command::Solve {
            fixture,
            a,
            b,
            kind,
            ..
        } => {
            let l = load(&fixture.fixture)?;
            let n = l.f.ambient_dim;
            let sys = ParamSystem::new(l.f, matrix(a, n)?, vector(b, n, "b")?)?;
            let mut r = Report::new(
                "solve",
                json!({"A": matrix_json(&sys.a), "b": json_vec(&sys.b), "kind": kind.as_str()}),
            );
            r.fixtures.push(l.entry);
            r.results = param::solve(&sys, *kind)?.to_json();
            Ok(r)
        }
        Command::Sensitivity {
            fixture,
            a,
            b,
            anchor,
            eps,
            delta,
            trials,
            seed,
            ..
        } => {
            let l = load(&fixture.fixture)?;
            let n = l.f.ambient_dim;
            let sys = ParamSystem::new(l.f, matrix(a, n)?, vector(b, n, "b")?)?;
            let anchor = vector(anchor, 2 * n, "anchor")?;
            let cfg = SensitivityConfig {
                eps: rational(eps, "eps")?,
                delta: rational(delta, "delta")?,
                trials: *trials,
                seed: *seed,
            };
            let mut r = Report::new(
                "sensitivity",
                json!({
                    "A": matrix_json(&sys.a),
                    "b": json_vec(&sys.b),
                    "anchor": json_vec(&anchor),
                    "eps": subjet::scalar::json_rat(&cfg.eps),
                    "delta": subjet::scalar::json_rat(&cfg.delta),
                    "trials": trials,
                    "seed": seed,
                }),
            );
            r.fixtures.push(l.entry);
            r.results = param::sensitivity_experiment(&sys, &anchor, &cfg)?.to_json();
            Ok(r)
        }
        Command::Access {
            fixture,
            m,
            point,
            v,
            schedule,
            tol,
            ..
        } => {
            let l = load(&fixture.fixture)?;
            let n = l.f.ambient_dim;
            let zero = vec![Rational::from_integer(0.into()); n];
            let m_set: Vec<QPolyhedron> = if m == "origin" {
                vec![QPolyhedron::point(&zero)]
            } else {
                m.split(';')
                    .map(|p| vector(p, n, "M").map(|x| QPolyhedron::point(&x)))
                    .collect::<Result<_>>()?
            };
            let x_bar = match point {
                Some(p) => vector(p, n, "point")?,
                None => zero,
            };
            let v_bar = vector(v, n, "v")?;
            let mut cfg = AccessConfig {
                tolerance: rational(tol, "tol")?,
                ..AccessConfig::default()
            };
            if let Some(s) = schedule {
                cfg.schedule = rationals(s, "schedule")?;
                if cfg
                    .schedule
                    .iter()
                    .any(|m| *m <= Rational::from_integer(0.into()))
                {
                    return Err(usage("--schedule entries must be positive"));
                }
            }
            let mut r = Report::new(
                "access",
                json!({
                    "M": m,
                    "point": json_vec(&x_bar),
                    "v": json_vec(&v_bar),
                    "schedule": json_vec(&cfg.schedule),
                    "tolerance": subjet::scalar::json_rat(&cfg.tolerance),
                }),
            );
            r.fixtures.push(l.entry);
            match param::access_point(&l.f, &m_set, &x_bar, &v_bar, &cfg) {
                Ok(w) => {
                    r.pass = w.converged(&cfg);
                    if !r.pass {
                        r.violations.push(
                            json!({"reason": "witness sequence did not converge within tolerance"}),
                        );
                    }
                    r.results = w.to_json(&cfg);
                }
                Err(Error::HypothesisViolated(msg)) => {
                    r.pass = false;
                    r.results = json!({"refused": true, "certificate": msg});
                    r.violations
                        .push(json!({"reason": "hypothesis violated", "detail": msg}));
                }
                Err(e) => return Err(e.into()),
            }
            Ok(r)
        }
        Command::Validate { fixture, .. } => {
            let paths = match fixture {
                Some(f) => vec![resolve(f)],
                None => corpus_files()?,
            };
            let mut r = Report::new("validate", json!({"fixture": fixture}));
            let mut results = Vec::new();
            for p in paths {
                let l = load(&p.display().to_string())?;
                let rep = validate(&l.f);
                if !rep.is_valid() {
                    r.pass = false;
                    r.violations.push(json!({"fixture": l.entry.0, "failures": rep.failures().map(|c| c.name).collect::<Vec<_>>()}));
                }
                results.push(json!({"fixture": l.entry.0, "report": rep.to_json()}));
                r.fixtures.push(l.entry);
            }
            r.results = json!(results);
            Ok(r)
        }
        Command::Gen { .. } => unreachable!("gen writes a fixture, not a report"),
    }
}

fn verify(fixture: Option<&str>, kind: Option<Kind>) -> Result<Report> {
    let paths = match fixture {
        Some(f) => vec![resolve(f)],
        None => corpus_files()?,
    };
    let mut r = Report::new(
        "verify",
        json!({"fixture": fixture, "kind": kind.map(|k| k.as_str())}),
    );
    let mut results = Vec::new();
    for p in paths {
        let l = load(&p.display().to_string())?;
        let kinds: Vec<Kind> = match kind {
            Some(k) => vec![k],
            None if l.f.name == "clarke3d" => vec![Kind::Clarke],
            None => vec![Kind::Frechet, Kind::Limiting],
        };
        for k in kinds {
            match verify_local_dim_theorem(&l.f, k) {
                Ok(rep) => {
                    let ok = matches_documentation(&rep);
                    if !ok {
                        r.pass = false;
                    }
                    for v in rep.violations() {
                        r.violations.push(json!({
                            "fixture": l.f.name,
                            "kind": k.as_str(),
                            "point": json_vec(&v.point),
                            "local_dim": v.local_dim.map(|d| d.to_json()),
                            "documented": !rep.passed() && ok,
                        }));
                    }
                    let mut j = rep.to_json();
                    j["matches_documentation"] = json!(ok);
                    results.push(j);
                }
                Err(e @ (Error::Unsupported(_) | Error::NotLipschitz(_))) => {
                    results.push(
                        json!({"fixture": l.f.name, "kind": k.as_str(), "skipped": e.to_string()}),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
        r.fixtures.push(l.entry);
    }
    r.results = json!(results);
    Ok(r)
}

pub fn gen(seed: u64, dim: usize, out: Option<&Path>) -> Result<()> {
    if !(1..=3).contains(&dim) {
        return Err(usage("--dim must be 1, 2 or 3"));
    }
    let f = random_piecewise_affine(seed, &GeneratorConfig::new(dim));
    let text = fixture_to_string(&f);
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
