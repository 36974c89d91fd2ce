//! Seeded random piecewise-affine functions
//! `f(x) = a·x + b + Σ λ_k |h_k(x)|` over a small hyperplane arrangement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::cover::cuts;
use crate::linalg::{self, dot};
use crate::piecewise::function::{Cell, PiecewiseFunction, Tier};
use crate::piecewise::polynomial::Polynomial;
use crate::scalar::{int, Rational};
use crate::{QPolyhedron, QVector};

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub dim: usize,
    pub max_hyperplanes: usize,
    /// Restrict the domain to `[-3, 3]^n` with this probability.
    pub box_probability: f64,
}

impl GeneratorConfig {
    pub fn new(dim: usize) -> Self {
        GeneratorConfig {
            dim,
            max_hyperplanes: if dim >= 3 { 4 } else { 6 },
            box_probability: 1.0 / 3.0,
        }
    }
}

fn small_vec(rng: &mut ChaCha8Rng, n: usize) -> QVector {
    loop {
        let v: QVector = (0..n).map(|_| int(rng.random_range(-2..=2))).collect();
        if !linalg::is_zero_vec(&v) {
            return v;
        }
    }
}

/// The hyperplane `a·x = b` scaled so that the first nonzero coefficient is one.
fn plane_key(a: &[Rational], b: &Rational) -> (QVector, Rational) {
    let lead = a
        .iter()
        .find(|x| !num_traits::Zero::is_zero(*x))
        .expect("nonzero normal")
        .clone();
    (linalg::scale(&(int(1) / lead.clone()), a), b.clone() / lead)
}

fn split(
    region: QPolyhedron,
    planes: &[(QVector, Rational)],
    k: usize,
    out: &mut Vec<QPolyhedron>,
) {
    if k == planes.len() {
        out.push(region);
        return;
    }
    let (a, b) = &planes[k];
    if cuts(&region, a, b) {
        let lower = region
            .clone()
            .with_ineq(a.clone(), b.clone())
            .expect("same dimension");
        let upper = region
            .with_ineq(linalg::neg(a), -b.clone())
            .expect("same dimension");
        split(lower, planes, k + 1, out);
        split(upper, planes, k + 1, out);
    } else {
        split(region, planes, k + 1, out);
    }
}

pub fn random_piecewise_affine(seed: u64, cfg: &GeneratorConfig) -> PiecewiseFunction {
    let n = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.random_range(1..=cfg.max_hyperplanes.max(1));
    let mut planes: Vec<(QVector, Rational)> = Vec::new();
    let mut weights: Vec<Rational> = Vec::new();
    while planes.len() < count {
        let a = small_vec(&mut rng, n);
        let b = int(rng.random_range(-2..=2));
        let lam = int([-2, -1, 1, 2][rng.random_range(0..4)]);
        let key = plane_key(&a, &b);
        let dup = planes.iter().any(|(c, d)| plane_key(c, d) == key);
        if dup {
            continue;
        }
        planes.push((a, b));
        weights.push(lam);
    }
    let base_a = small_vec(&mut rng, n);
    let base_b = int(rng.random_range(-2..=2));
    let boxed = rng.random_bool(cfg.box_probability);
    let domain = if boxed {
        QPolyhedron::boxed(&vec![int(-3); n], &vec![int(3); n]).expect("matching bounds")
    } else {
        QPolyhedron::whole(n)
    };
    let mut regions = Vec::new();
    split(domain, &planes, 0, &mut regions);
    let cells = regions
        .into_iter()
        .map(|r| {
            let x = r.relint_point().expect("split cells are nonempty");
            let mut formula = Polynomial::affine(&base_a, base_b.clone());
            for ((a, b), lam) in planes.iter().zip(&weights) {
                let s = if dot(a, &x) - b.clone() >= int(0) {
                    lam.clone()
                } else {
                    -lam.clone()
                };
                // s·(a·x − b)
                let h = Polynomial::affine(&linalg::scale(&s, a), -(s * b.clone()));
                formula = formula.add(&h);
            }
            Cell::new(r, formula)
        })
        .collect();
    PiecewiseFunction::new(format!("random_n{n}_s{seed}"), n, Tier::Affine, cells)
        .expect("generated cells share the ambient dimension")
}
