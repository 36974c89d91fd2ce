//! Monte Carlo over perturbed `(A, b)` around an anchor solution.

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::minty::{trial_rng, PieceSolution, QMatrix};
use crate::param::{solve_pieces, ParamSystem};
use crate::scalar::{floor_to_grid, json_rat, Rational};
use crate::subdiff::{Engine, Kind};
use crate::QVector;

/// Jitter steps per unit of half-width.
const GRID: i64 = 1000;

#[derive(Clone, Debug)]
pub struct SensitivityConfig {
    pub eps: Rational,
    pub delta: Rational,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SensitivityReport {
    pub seed: u64,
    pub trials: usize,
    /// Half-width of the max-norm box inscribed in `B_δ`.
    pub half_width: Rational,
    /// Finite solution set meeting `B_ε(anchor)`.
    pub local_finite: usize,
    pub infinite: usize,
    pub nonempty: usize,
}

impl SensitivityReport {
    fn ratio(&self, k: usize) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            k as f64 / self.trials as f64
        }
    }

    pub fn fraction(&self) -> f64 {
        self.ratio(self.local_finite)
    }

    pub fn infinite_fraction(&self) -> f64 {
        self.ratio(self.infinite)
    }

    pub fn nonempty_fraction(&self) -> f64 {
        self.ratio(self.nonempty)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "half_width": json_rat(&self.half_width),
            "fraction": self.fraction(),
            "infinite_fraction": self.infinite_fraction(),
            "nonempty_fraction": self.nonempty_fraction(),
        })
    }
}

/// Largest grid rational `w` with `w·sqrt(k) ≤ 1`, for `k` perturbed coordinates.
fn inscribed_factor(k: usize) -> Rational {
    let den = 1_000_000;
    floor_to_grid(1.0 / (k as f64).sqrt(), den) - Rational::new(1.into(), den.into())
}

fn jitter(rng: &mut impl Rng, center: &Rational, w: &Rational) -> Rational {
    let k = rng.random_range(-GRID..=GRID);
    center.clone() + w.clone() * Rational::new(k.into(), GRID.into())
}

pub fn sensitivity_experiment(
    sys: &ParamSystem,
    anchor: &[Rational],
    cfg: &SensitivityConfig,
) -> Result<SensitivityReport> {
    let n = sys.f.ambient_dim;
    if anchor.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: anchor.len(),
        });
    }
    let pieces = Engine::new(&sys.f)?.subjet_pieces(Kind::Limiting);
    let base = solve_pieces(&pieces, &sys.a, &sys.b)?;
    let hit = base.pieces.iter().any(|s| match s {
        PieceSolution::Empty => false,
        PieceSolution::Point(p) => p == anchor,
        PieceSolution::Positive { set, .. } => set.contains_point(anchor),
    });
    if !hit {
        return Err(Error::AnchorNotSolution);
    }
    let w = cfg.delta.clone() * inscribed_factor(n * n + n);
    let outcomes: Vec<(bool, bool, bool)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let a: QMatrix = sys
                .a
                .iter()
                .map(|r| r.iter().map(|x| jitter(&mut rng, x, &w)).collect())
                .collect();
            let b: QVector = sys.b.iter().map(|x| jitter(&mut rng, x, &w)).collect();
            let s = solve_pieces(&pieces, &a, &b)?;
            let finite = s.is_finite();
            Ok((
                finite && s.meets_ball(anchor, &cfg.eps),
                !finite,
                !s.is_empty(),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(SensitivityReport {
        seed: cfg.seed,
        trials: cfg.trials,
        half_width: w,
        local_finite: outcomes.iter().filter(|o| o.0).count(),
        infinite: outcomes.iter().filter(|o| o.1).count(),
        nonempty: outcomes.iter().filter(|o| o.2).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::{min_of_affine, negate};
    use crate::scalar::{int, ivec, rat};

    fn neg_abs() -> crate::piecewise::PiecewiseFunction {
        min_of_affine(1, &[(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap()
    }

    fn cfg(trials: usize, seed: u64) -> SensitivityConfig {
        SensitivityConfig {
            eps: rat(1, 10),
            delta: rat(1, 10),
            trials,
            seed,
        }
    }

    #[test]
    fn rejects_non_solution_anchor() {
        let sys = ParamSystem::new(neg_abs(), vec![ivec(&[0])], ivec(&[1])).unwrap();
        assert!(matches!(
            sensitivity_experiment(&sys, &ivec(&[1, 1]), &cfg(10, 1)),
            Err(Error::AnchorNotSolution)
        ));
    }

    #[test]
    fn strongly_monotone_case_is_stable() {
        let sys = ParamSystem::new(
            negate(&neg_abs()).unwrap(),
            vec![ivec(&[1])],
            vec![rat(1, 2)],
        )
        .unwrap();
        let r = sensitivity_experiment(&sys, &[int(0), rat(1, 2)], &cfg(300, 3)).unwrap();
        assert_eq!(r.fraction(), 1.0);
        assert_eq!(r.infinite, 0);
    }

    #[test]
    fn deterministic_in_seed() {
        let sys = ParamSystem::new(neg_abs(), vec![ivec(&[0])], ivec(&[1])).unwrap();
        let a = sensitivity_experiment(&sys, &ivec(&[0, 1]), &cfg(200, 9)).unwrap();
        let b = sensitivity_experiment(&sys, &ivec(&[0, 1]), &cfg(200, 9)).unwrap();
        assert_eq!((a.local_finite, a.nonempty), (b.local_finite, b.nonempty));
        assert!(a.half_width < rat(1, 10));
    }
}
