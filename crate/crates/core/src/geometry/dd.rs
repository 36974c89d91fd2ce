//! Double description for homogeneous cones `{x : A x <= 0, E x = 0}`.
//!
//! Constraints are added one at a time. Lineality is tracked separately so the
//! ray set is always the set of extreme rays of the pointed quotient, which is
//! what makes the combinatorial adjacency test valid.

use crate::linalg::{self, dot, normalize_direction, nullspace};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct ConeGenerators<F> {
    pub rays: Vec<Vec<F>>,
    pub lines: Vec<Vec<F>>,
}

struct Ray<F> {
    v: Vec<F>,
    zero_set: Vec<bool>,
}

pub fn cone_generators<F: Field>(
    dim: usize,
    ineqs: &[Vec<F>],
    eqs: &[Vec<F>],
) -> ConeGenerators<F> {
    let mut lines: Vec<Vec<F>> = if eqs.is_empty() {
        linalg::identity(dim)
    } else {
        nullspace(eqs, dim)
    };
    let mut rays: Vec<Ray<F>> = Vec::new();
    let m = ineqs.len();

    for (k, a) in ineqs.iter().enumerate() {
        if let Some(p) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let l0 = lines.swap_remove(p);
            let al0 = dot(a, &l0);
            lines = lines
                .iter()
                .map(|l| {
                    let f = dot(a, l) / al0.clone();
                    linalg::sub(l, &linalg::scale(&f, &l0))
                })
                .collect();
            for r in rays.iter_mut() {
                let f = dot(a, &r.v) / al0.clone();
                r.v = normalize_direction(&linalg::sub(&r.v, &linalg::scale(&f, &l0)));
                r.zero_set[k] = true;
            }
            let dir = if al0.is_negative() {
                l0
            } else {
                linalg::neg(&l0)
            };
            rays.push(Ray {
                v: normalize_direction(&dir),
                zero_set: (0..m).map(|j| j < k).collect(),
            });
            continue;
        }

        let vals: Vec<F> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        if pos.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zero_set[k] = true;
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray<F>> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<bool> = rays[p]
                    .zero_set
                    .iter()
                    .zip(&rays[q].zero_set)
                    .map(|(x, y)| *x && *y)
                    .collect();
                let adjacent = !rays.iter().enumerate().any(|(i, r)| {
                    i != p && i != q && common.iter().zip(&r.zero_set).all(|(c, z)| !*c || *z)
                });
                if !adjacent {
                    continue;
                }
                let v = linalg::sub(
                    &linalg::scale(&vals[p], &rays[q].v),
                    &linalg::scale(&vals[q], &rays[p].v),
                );
                let mut zero_set = common;
                zero_set[k] = true;
                next.push(Ray {
                    v: normalize_direction(&v),
                    zero_set,
                });
            }
        }
        let mut kept: Vec<Ray<F>> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                continue;
            }
            if vals[i].is_zero() {
                r.zero_set[k] = true;
            }
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
    }

    let mut out: Vec<Vec<F>> = Vec::new();
    for r in rays {
        if linalg::is_zero_vec(&r.v) {
            continue;
        }
        if !out.contains(&r.v) {
            out.push(r.v);
        }
    }
    ConeGenerators { rays: out, lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ivec, Rational};

    #[test]
    fn orthant_rays() {
        let ineqs: Vec<Vec<Rational>> = vec![ivec(&[-1, 0]), ivec(&[0, -1])];
        let g = cone_generators(2, &ineqs, &[]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays.len(), 2);
        assert!(g.rays.contains(&ivec(&[1, 0])));
        assert!(g.rays.contains(&ivec(&[0, 1])));
    }

    #[test]
    fn halfplane_has_line() {
        let ineqs: Vec<Vec<Rational>> = vec![ivec(&[1, 0])];
        let g = cone_generators(2, &ineqs, &[]);
        assert_eq!(g.lines.len(), 1);
        assert_eq!(g.rays, vec![ivec(&[-1, 0])]);
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square |x|,|y| <= z has four extreme rays
        let ineqs: Vec<Vec<Rational>> = vec![
            ivec(&[1, 0, -1]),
            ivec(&[-1, 0, -1]),
            ivec(&[0, 1, -1]),
            ivec(&[0, -1, -1]),
        ];
        let g = cone_generators(3, &ineqs, &[]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays.len(), 4);
        for s in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            assert!(g.rays.contains(&ivec(&[s[0], s[1], 1])));
        }
    }

    #[test]
    fn equality_restricted() {
        let eqs: Vec<Vec<Rational>> = vec![ivec(&[0, 0, 1])];
        let ineqs: Vec<Vec<Rational>> = vec![ivec(&[-1, 0, 0])];
        let g = cone_generators(3, &ineqs, &eqs);
        assert_eq!(g.lines.len(), 1);
        assert_eq!(g.rays.len(), 1);
    }

    #[test]
    fn trivial_cone() {
        let ineqs: Vec<Vec<Rational>> = vec![ivec(&[1]), ivec(&[-1])];
        let g = cone_generators(1, &ineqs, &[]);
        assert!(g.rays.is_empty() && g.lines.is_empty());
    }
}
