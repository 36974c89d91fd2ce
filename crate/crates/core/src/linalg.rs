//! Dense Gaussian elimination over a [`Field`].

use crate::scalar::Field;

pub type Vector<F> = Vec<F>;
pub type Matrix<F> = Vec<Vec<F>>;

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add<F: Field>(a: &[F], b: &[F]) -> Vector<F> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vector<F> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn scale<F: Field>(s: &F, a: &[F]) -> Vector<F> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn neg<F: Field>(a: &[F]) -> Vector<F> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn zeros<F: Field>(n: usize) -> Vector<F> {
    vec![F::zero(); n]
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vector<F> {
    let mut v = zeros(n);
    v[i] = F::one();
    v
}

pub fn norm2<F: Field>(a: &[F]) -> F {
    dot(a, a)
}

pub fn is_zero_vec<F: Field>(a: &[F]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn mat_vec<F: Field>(m: &[Vec<F>], v: &[F]) -> Vector<F> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose<F: Field>(m: &[Vec<F>], cols: usize) -> Matrix<F> {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n).map(|i| unit(n, i)).collect()
}

/// Scales `v` so that its first nonzero entry has absolute value one.
pub fn normalize_direction<F: Field>(v: &[F]) -> Vector<F> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let s = p.abs();
            v.iter().map(|x| x.clone() / s.clone()).collect()
        }
        None => v.to_vec(),
    }
}

/// Reduced row echelon form of `rows` (each of length `cols`), zero rows dropped.
/// Returns the reduced rows and their pivot columns.
pub fn rref<F: Field>(rows: &[Vec<F>], cols: usize) -> (Matrix<F>, Vec<usize>) {
    let mut m: Matrix<F> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..m[i].len() {
                    let delta = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace<F: Field>(rows: &[Vec<F>], cols: usize) -> Matrix<F> {
    let (r, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(cols);
            v[f] = F::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Indices of a maximal linearly independent subset of `rows`, chosen greedily.
pub fn independent_rows<F: Field>(rows: &[Vec<F>], cols: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut basis: Matrix<F> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis, cols) == basis.len() {
            kept.push(i);
        } else {
            basis.pop();
        }
    }
    kept
}

/// Solves the square system `m x = b`; `None` when `m` is singular.
pub fn solve<F: Field>(m: &[Vec<F>], b: &[F]) -> Option<Vector<F>> {
    let n = m.len();
    let aug: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, n + 1);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// Any solution of the (possibly non-square) system `m x = b`, if consistent.
pub fn solve_any<F: Field>(m: &[Vec<F>], b: &[F], cols: usize) -> Option<Vector<F>> {
    let aug: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, cols + 1);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = zeros(cols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ivec, rat, Rational};
    use num_traits::Zero;

    #[test]
    fn rank_and_nullspace() {
        let m = vec![ivec(&[1, 1, 0]), ivec(&[2, 2, 0])];
        assert_eq!(rank(&m, 3), 1);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_square() {
        let m = vec![ivec(&[2, 1]), ivec(&[1, 3])];
        let x = solve(&m, &ivec(&[3, 5])).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let singular = vec![ivec(&[1, 2]), ivec(&[2, 4])];
        assert!(solve(&singular, &ivec(&[1, 1])).is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let m = vec![ivec(&[1, 1])];
        let x = solve_any(&m, &[int(2)], 2).unwrap();
        assert_eq!(dot(&m[0], &x), int(2));
        let inconsistent = vec![ivec(&[1, 1]), ivec(&[1, 1])];
        assert!(solve_any(&inconsistent, &ivec(&[1, 2]), 2).is_none());
    }

    #[test]
    fn works_over_f64() {
        let m: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert_eq!(rank(&m, 2), 2);
        let x = solve(&m, &[5.0, 6.0]).unwrap();
        assert!((x[0] + 4.0).abs() < 1e-12 && (x[1] - 4.5).abs() < 1e-12);
    }

    #[test]
    fn independent_rows_greedy() {
        let m: Vec<Vec<Rational>> = vec![ivec(&[1, 0]), ivec(&[2, 0]), ivec(&[0, 1])];
        assert_eq!(independent_rows(&m, 2), vec![0, 2]);
    }
}
