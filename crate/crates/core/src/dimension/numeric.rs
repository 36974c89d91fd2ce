//! Floating-point cross-check of local dimension: log-count slope over a
//! geometric sequence of radii, and PCA rank at the smallest radius.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dimension::{PieceShape, PieceUnion};
use crate::error::{Error, Result};
use crate::scalar::{vec_to_f64, Rational};
use crate::QPolyhedron;

pub const MIN_SAMPLES: usize = 200;
pub const MIN_RADII: usize = 4;
/// Singular values below this fraction of the largest one count as zero.
pub const PCA_CUTOFF: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericEstimate {
    pub radii: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub slope_dim: usize,
    pub pca_rank: usize,
    pub agree: bool,
}

/// `r_max, r_max/2, …` with `count` entries.
pub fn default_radii(r_max: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| r_max / f64::powi(2.0, k as i32))
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn pca_rank(points: &[&Vec<f64>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let d = points[0].len();
    let m = points.len();
    let mean: Vec<f64> = (0..d)
        .map(|j| points.iter().map(|p| p[j]).sum::<f64>() / m as f64)
        .collect();
    let mat = DMatrix::from_fn(m, d, |i, j| points[i][j] - mean[j]);
    let sv = mat.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top <= 1e-12 {
        return 0;
    }
    sv.iter().filter(|s| **s > PCA_CUTOFF * top).count()
}

pub fn estimate_local_dim_numeric(
    samples: &[Vec<f64>],
    p: &[f64],
    radii: &[f64],
) -> Result<NumericEstimate> {
    if radii.len() < MIN_RADII {
        return Err(Error::HypothesisViolated(format!(
            "need at least {MIN_RADII} radii, got {}",
            radii.len()
        )));
    }
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| b.partial_cmp(a).expect("finite radii"));
    let near: Vec<(&Vec<f64>, f64)> = samples
        .iter()
        .map(|s| (s, dist(s, p)))
        .filter(|(_, d)| *d <= radii[0])
        .collect();
    if near.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            need: MIN_SAMPLES,
            have: near.len(),
        });
    }
    let counts: Vec<usize> = radii
        .iter()
        .map(|r| near.iter().filter(|(_, d)| d <= r).count())
        .collect();
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(&counts)
        .filter(|(_, c)| **c > 0)
        .map(|(r, c)| (r.ln(), (*c as f64).ln()))
        .collect();
    let slope = if pts.len() < 2 {
        0.0
    } else {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|q| q.0).sum::<f64>() / k;
        let my = pts.iter().map(|q| q.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|q| (q.0 - mx) * (q.0 - mx)).sum();
        sxy / sxx
    };
    let slope_dim = slope.round().max(0.0) as usize;
    let smallest = radii[radii.len() - 1];
    let inner: Vec<&Vec<f64>> = near
        .iter()
        .filter(|(_, d)| *d <= smallest)
        .map(|(s, _)| *s)
        .collect();
    let pca = pca_rank(&inner);
    Ok(NumericEstimate {
        radii,
        counts,
        slope,
        slope_dim,
        pca_rank: pca,
        agree: slope_dim == pca,
    })
}

/// `(rows, rhs, is_eq)` in floating point.
struct FloatPoly(Vec<(Vec<f64>, f64, bool)>);

impl FloatPoly {
    fn new(p: &QPolyhedron) -> Self {
        let ineq = p
            .ineqs()
            .iter()
            .map(|(a, b)| (vec_to_f64(a), crate::scalar::to_f64(b), false));
        let eq = p
            .eqs()
            .iter()
            .map(|(a, b)| (vec_to_f64(a), crate::scalar::to_f64(b), true));
        FloatPoly(ineq.chain(eq).collect())
    }

    fn contains(&self, x: &[f64]) -> bool {
        let tol = 1e-9;
        self.0.iter().all(|(a, b, is_eq)| {
            let v: f64 = a.iter().zip(x).map(|(u, w)| u * w).sum();
            if *is_eq {
                (v - b).abs() <= tol
            } else {
                v <= b + tol
            }
        })
    }
}

fn gram_schmidt(vs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in vs {
        for u in &out {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= d * ui;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    out
}

fn unit_ball(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        if u.iter().map(|a| a * a).sum::<f64>() <= 1.0 {
            return u;
        }
    }
}

/// Uniform samples of `piece ∩ B_R(center)` inside the flat `c + span(basis)`.
fn sample_flat(
    rng: &mut ChaCha8Rng,
    c: Vec<f64>,
    basis: Vec<Vec<f64>>,
    center: &[f64],
    radius: f64,
    count: usize,
    inside: impl Fn(&[f64]) -> bool,
) -> Vec<Vec<f64>> {
    let basis = gram_schmidt(basis);
    let mut q = c.clone();
    for b in &basis {
        let t: f64 = b
            .iter()
            .zip(center.iter().zip(&c))
            .map(|(bi, (p, ci))| bi * (p - ci))
            .sum();
        for (qi, bi) in q.iter_mut().zip(b) {
            *qi += t * bi;
        }
    }
    let h = dist(&q, center);
    if h > radius {
        return Vec::new();
    }
    if basis.is_empty() {
        return if inside(&q) {
            vec![q; count]
        } else {
            Vec::new()
        };
    }
    let rho = (radius * radius - h * h).sqrt();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let u = unit_ball(rng, basis.len());
        let mut y = q.clone();
        for (ui, b) in u.iter().zip(&basis) {
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi += rho * ui * bi;
            }
        }
        if inside(&y) {
            out.push(y);
        }
    }
    out
}

fn padded(v: &[Rational], before: usize, after: usize) -> Vec<f64> {
    let mut out = vec![0.0; before];
    out.extend(vec_to_f64(v));
    out.extend(vec![0.0; after]);
    out
}

/// About `per_piece` samples from each piece of `u` inside `B_R(center)`,
/// uniform with respect to the piece's own dimension.
pub fn sample_union(
    u: &PieceUnion,
    center: &[Rational],
    radius: f64,
    per_piece: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let cf = vec_to_f64(center);
    let mut out = Vec::new();
    for (i, piece) in u.pieces.iter().enumerate() {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let got = match &piece.shape {
            PieceShape::Product { base, fiber, .. } => {
                let (Some(b0), Some(f0)) = (base.relint_point(), fiber.relint_point()) else {
                    continue;
                };
                let (nb, nf) = (base.ambient_dim(), fiber.ambient_dim());
                let mut basis: Vec<Vec<f64>> = base
                    .direction_basis()
                    .unwrap_or_default()
                    .iter()
                    .map(|d| padded(d, 0, nf))
                    .collect();
                basis.extend(
                    fiber
                        .direction_basis()
                        .unwrap_or_default()
                        .iter()
                        .map(|d| padded(d, nb, 0)),
                );
                let c = padded(&b0, 0, 0)
                    .into_iter()
                    .chain(vec_to_f64(&f0))
                    .collect();
                let (fb, ff) = (FloatPoly::new(base), FloatPoly::new(fiber));
                sample_flat(&mut rng, c, basis, &cf, radius, per_piece, |y| {
                    fb.contains(&y[..nb]) && ff.contains(&y[nb..])
                })
            }
            PieceShape::Polyhedron(p) => {
                let Some(c) = p.relint_point() else {
                    continue;
                };
                let basis = p
                    .direction_basis()
                    .unwrap_or_default()
                    .iter()
                    .map(|d| vec_to_f64(d))
                    .collect();
                let fp = FloatPoly::new(p);
                sample_flat(
                    &mut rng,
                    vec_to_f64(&c),
                    basis,
                    &cf,
                    radius,
                    per_piece,
                    |y| fp.contains(y),
                )
            }
            PieceShape::DiscInterior => {
                let basis = vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]];
                sample_flat(&mut rng, vec![0.0; 4], basis, &cf, radius, per_piece, |y| {
                    y[0] * y[0] + y[1] * y[1] < 1.0
                })
            }
            PieceShape::CellGradient(c) => {
                let n = c.region.ambient_dim();
                let region = FloatPoly::new(&c.region);
                let mut got = Vec::new();
                let mut attempts = 0;
                while got.len() < per_piece && attempts < per_piece * 200 {
                    attempts += 1;
                    // a piece that misses the ball entirely shows up as a long run of rejections
                    if attempts == per_piece * 10 && got.is_empty() {
                        break;
                    }
                    let u = unit_ball(&mut rng, n);
                    let x: Vec<f64> = (0..n).map(|j| cf[j] + radius * u[j]).collect();
                    if !region.contains(&x) || c.sign_ineqs.iter().any(|q| q.evaluate_f64(&x) > 0.0)
                    {
                        continue;
                    }
                    let mut y = x.clone();
                    y.extend(c.formula.gradient_f64(&x));
                    if dist(&y, &cf) <= radius {
                        got.push(y);
                    }
                }
                got
            }
        };
        out.extend(got);
    }
    out
}
