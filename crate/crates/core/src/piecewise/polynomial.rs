use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, to_f64, Rational};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Zero coefficients are never stored, so equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, Rational::one());
        p
    }

    /// `a·x + b`.
    pub fn affine(a: &[Rational], b: Rational) -> Self {
        let dim = a.len();
        let mut p = Self::constant(dim, b);
        for (i, ai) in a.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 1;
            p.add_term(e, ai.clone());
        }
        p
    }

    pub fn from_terms(dim: usize, terms: Vec<(Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    /// `(a, b)` with `p(x) = a·x + b`, when the degree is at most one.
    pub fn affine_parts(&self) -> Option<(Vec<Rational>, Rational)> {
        if !self.is_affine() {
            return None;
        }
        let mut a = vec![Rational::zero(); self.dim];
        let mut b = Rational::zero();
        for (e, c) in &self.terms {
            match e.iter().position(|&k| k == 1) {
                Some(i) => a[i] = c.clone(),
                None => b = c.clone(),
            }
        }
        Some((a, b))
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(to_f64(c), |t, (&k, xi)| t * xi.powi(k as i32))
            })
            .sum()
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c.clone() * Rational::from_integer(e[i].into()));
        }
        p
    }

    pub fn gradient(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.dim).map(|i| self.partial(i).evaluate(x)).collect()
    }

    pub fn gradient_f64(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.partial(i).evaluate_f64(x))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut p = Self::zero(self.dim);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone() * s.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut p = Self::constant(self.dim, Rational::one());
        for _ in 0..k {
            p = p.mul(self);
        }
        p
    }

    /// `x ↦ p(M x + c)` where `m` has `dim` rows of length `k`.
    pub fn compose_affine(&self, m: &[Vec<Rational>], c: &[Rational], k: usize) -> Result<Self> {
        if m.len() != self.dim || c.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: m.len().min(c.len()),
            });
        }
        let subs: Vec<Polynomial> = m
            .iter()
            .zip(c)
            .map(|(row, ci)| Polynomial::affine(row, ci.clone()))
            .collect();
        if let Some(bad) = subs.iter().find(|p| p.dim != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: bad.dim,
            });
        }
        let mut out = Polynomial::zero(k);
        for (e, coef) in &self.terms {
            let mut t = Polynomial::constant(k, coef.clone());
            for (s, &ei) in subs.iter().zip(e) {
                if ei > 0 {
                    t = t.mul(&s.pow(ei));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ivec, rat};

    #[test]
    fn affine_round_trip() {
        let p = Polynomial::affine(&ivec(&[2, -1]), rat(1, 3));
        assert!(p.is_affine());
        assert_eq!(p.affine_parts().unwrap(), (ivec(&[2, -1]), rat(1, 3)));
        assert_eq!(p.evaluate(&ivec(&[1, 1])), rat(4, 3));
        assert_eq!(p.gradient(&ivec(&[5, 7])), ivec(&[2, -1]));
    }

    #[test]
    fn square_gradient() {
        // z^2 in R^3
        let z2 = Polynomial::var(3, 2).pow(2);
        assert_eq!(z2.degree(), 2);
        assert_eq!(z2.gradient(&ivec(&[0, 0, 0])), ivec(&[0, 0, 0]));
        assert_eq!(z2.gradient(&ivec(&[0, 0, 3])), ivec(&[0, 0, 6]));
        assert_eq!(z2.evaluate(&ivec(&[1, 2, 1])), int(1));
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Polynomial::var(2, 0);
        assert!(x.sub(&x).is_zero());
        let p = x
            .add(&Polynomial::var(2, 1))
            .mul(&x.sub(&Polynomial::var(2, 1)));
        // x^2 - y^2
        assert_eq!(p.terms().count(), 2);
    }

    #[test]
    fn compose_with_diagonal() {
        // g(u, v) = u - v^2 at (x, x)
        let g = Polynomial::var(2, 0).sub(&Polynomial::var(2, 1).pow(2));
        let h = g
            .compose_affine(&[ivec(&[1]), ivec(&[1])], &ivec(&[0, 0]), 1)
            .unwrap();
        assert_eq!(h.evaluate(&ivec(&[3])), int(-6));
        assert_eq!(h.degree(), 2);
    }

    #[test]
    fn float_evaluation_matches() {
        let p = Polynomial::var(2, 0)
            .mul(&Polynomial::var(2, 1))
            .scale(&rat(1, 2));
        assert!((p.evaluate_f64(&[2.0, 3.0]) - 3.0).abs() < 1e-12);
        assert_eq!(p.to_string(), "1/2*x0*x1");
    }
}
