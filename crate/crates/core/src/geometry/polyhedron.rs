use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::dd::{cone_generators, ConeGenerators};
use crate::linalg::{self, dot, normalize_direction, rank, rref};
use crate::lp::{self, LpOutcome};
use crate::scalar::Field;

/// `(a, b)`: the constraint `⟨a, x⟩ ≤ b` or `⟨a, x⟩ = b` depending on context.
pub type Row<F> = (Vec<F>, F);

/// Dimension of a possibly empty set; the empty set sits below every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    NegInfinity,
    Finite(usize),
}

impl Dim {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dim::Finite(d) => Some(d),
            Dim::NegInfinity => None,
        }
    }

    pub fn to_json(self) -> serde_json::Value {
        match self {
            Dim::Finite(d) => serde_json::Value::from(d),
            Dim::NegInfinity => serde_json::Value::from("-inf"),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::NegInfinity => write!(f, "-inf"),
        }
    }
}

impl std::ops::Add for Dim {
    type Output = Dim;

    fn add(self, rhs: Dim) -> Dim {
        match (self, rhs) {
            (Dim::Finite(a), Dim::Finite(b)) => Dim::Finite(a + b),
            _ => Dim::NegInfinity,
        }
    }
}

/// Closed convex polyhedron `{x : A x ≤ b, E x = e}` in `R^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPolyhedron<F> {
    ambient_dim: usize,
    ineqs: Vec<Row<F>>,
    eqs: Vec<Row<F>>,
}

/// Result of one feasibility analysis: implicit equalities, a relative
/// interior point, and the affine dimension.
#[derive(Clone, Debug)]
pub struct Analysis<F> {
    pub implicit: Vec<usize>,
    pub relint: Vec<F>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VRep<F> {
    pub vertices: Vec<Vec<F>>,
    pub rays: Vec<Vec<F>>,
    pub lines: Vec<Vec<F>>,
}

fn check_len<F>(n: usize, rows: &[Row<F>]) -> Result<()> {
    match rows.iter().find(|(a, _)| a.len() != n) {
        Some((a, _)) => Err(Error::DimensionMismatch {
            expected: n,
            got: a.len(),
        }),
        None => Ok(()),
    }
}

fn lex_cmp<F: Field>(a: &[F], b: &[F]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn row_cmp<F: Field>(a: &Row<F>, b: &Row<F>) -> Ordering {
    lex_cmp(&a.0, &b.0).then_with(|| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
}

impl<F: Field> HPolyhedron<F> {
    pub fn new(ambient_dim: usize, ineqs: Vec<Row<F>>, eqs: Vec<Row<F>>) -> Result<Self> {
        check_len(ambient_dim, &ineqs)?;
        check_len(ambient_dim, &eqs)?;
        Ok(HPolyhedron {
            ambient_dim,
            ineqs,
            eqs,
        })
    }

    pub fn whole(ambient_dim: usize) -> Self {
        HPolyhedron {
            ambient_dim,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        HPolyhedron {
            ambient_dim,
            ineqs: vec![(linalg::zeros(ambient_dim), -F::one())],
            eqs: Vec::new(),
        }
    }

    pub fn point(p: &[F]) -> Self {
        let n = p.len();
        HPolyhedron {
            ambient_dim: n,
            ineqs: Vec::new(),
            eqs: (0..n).map(|i| (linalg::unit(n, i), p[i].clone())).collect(),
        }
    }

    /// Axis-aligned box `lo ≤ x ≤ hi`.
    pub fn boxed(lo: &[F], hi: &[F]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        let n = lo.len();
        let mut ineqs = Vec::with_capacity(2 * n);
        for i in 0..n {
            ineqs.push((linalg::unit(n, i), hi[i].clone()));
            ineqs.push((linalg::neg(&linalg::unit(n, i)), -lo[i].clone()));
        }
        Ok(HPolyhedron {
            ambient_dim: n,
            ineqs,
            eqs: Vec::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn ineqs(&self) -> &[Row<F>] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Row<F>] {
        &self.eqs
    }

    pub fn with_ineq(mut self, a: Vec<F>, b: F) -> Result<Self> {
        check_len(
            self.ambient_dim,
            std::slice::from_ref(&(a.clone(), b.clone())),
        )?;
        self.ineqs.push((a, b));
        Ok(self)
    }

    pub fn with_eq(mut self, a: Vec<F>, b: F) -> Result<Self> {
        check_len(
            self.ambient_dim,
            std::slice::from_ref(&(a.clone(), b.clone())),
        )?;
        self.eqs.push((a, b));
        Ok(self)
    }

    fn check_point(&self, x: &[F]) -> Result<()> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn contains_point(&self, x: &[F]) -> bool {
        x.len() == self.ambient_dim
            && self.ineqs.iter().all(|(a, b)| dot(a, x) <= *b)
            && self.eqs.iter().all(|(a, b)| dot(a, x) == *b)
    }

    /// Indices of inequalities holding with equality at `x`.
    pub fn active_at(&self, x: &[F]) -> Vec<usize> {
        (0..self.ineqs.len())
            .filter(|&i| dot(&self.ineqs[i].0, x) == self.ineqs[i].1)
            .collect()
    }

    pub fn maximize(&self, c: &[F]) -> LpOutcome<F> {
        lp::maximize(self.ambient_dim, c, &self.ineqs, &self.eqs)
    }

    pub fn feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    pub fn feasible_point(&self) -> Option<Vec<F>> {
        lp::feasible_point(self.ambient_dim, &self.ineqs, &self.eqs)
    }

    fn slack_lp(&self, skip: &[usize]) -> LpOutcome<F> {
        let n = self.ambient_dim;
        let mut ineqs: Vec<Row<F>> = Vec::with_capacity(self.ineqs.len() + 1);
        let mut eqs: Vec<Row<F>> = self
            .eqs
            .iter()
            .map(|(a, b)| {
                let mut a = a.clone();
                a.push(F::zero());
                (a, b.clone())
            })
            .collect();
        for (i, (a, b)) in self.ineqs.iter().enumerate() {
            let mut a = a.clone();
            if skip.contains(&i) {
                a.push(F::zero());
                eqs.push((a, b.clone()));
            } else {
                a.push(F::one());
                ineqs.push((a, b.clone()));
            }
        }
        ineqs.push((linalg::unit(n + 1, n), F::one()));
        lp::maximize(n + 1, &linalg::unit(n + 1, n), &ineqs, &eqs)
    }

    /// Implicit equalities, a relative interior point and the dimension;
    /// `None` when the polyhedron is empty.
    pub fn analyze(&self) -> Option<Analysis<F>> {
        let n = self.ambient_dim;
        let (x, t) = match self.slack_lp(&[]) {
            LpOutcome::Optimal { x, value } => (x, value),
            _ => return None,
        };
        if t.is_negative() {
            return None;
        }
        let (implicit, relint) = if t.is_positive() {
            (Vec::new(), x[..n].to_vec())
        } else {
            let implicit: Vec<usize> = (0..self.ineqs.len())
                .filter(|&i| {
                    let (a, b) = &self.ineqs[i];
                    match self.maximize(&linalg::neg(a)) {
                        LpOutcome::Optimal { value, .. } => value == -b.clone(),
                        _ => false,
                    }
                })
                .collect();
            let relint = match self.slack_lp(&implicit) {
                LpOutcome::Optimal { x, .. } => x[..n].to_vec(),
                _ => return None,
            };
            (implicit, relint)
        };
        let mut normals: Vec<Vec<F>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        normals.extend(implicit.iter().map(|&i| self.ineqs[i].0.clone()));
        let dim = n - rank(&normals, n);
        Some(Analysis {
            implicit,
            relint,
            dim,
        })
    }

    pub fn dim(&self) -> Dim {
        match self.analyze() {
            Some(a) => Dim::Finite(a.dim),
            None => Dim::NegInfinity,
        }
    }

    pub fn relint_point(&self) -> Option<Vec<F>> {
        self.analyze().map(|a| a.relint)
    }

    /// Equality rows describing the affine hull (explicit plus implicit).
    pub fn affine_hull_rows(&self) -> Option<Vec<Row<F>>> {
        let an = self.analyze()?;
        let mut rows = self.eqs.clone();
        rows.extend(an.implicit.iter().map(|&i| self.ineqs[i].clone()));
        Some(rows)
    }

    /// Basis of the linear subspace parallel to the affine hull.
    pub fn direction_basis(&self) -> Option<Vec<Vec<F>>> {
        let rows = self.affine_hull_rows()?;
        let normals: Vec<Vec<F>> = rows.into_iter().map(|(a, _)| a).collect();
        Some(linalg::nullspace(&normals, self.ambient_dim))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let mut out = self.clone();
        out.ineqs.extend(other.ineqs.iter().cloned());
        out.eqs.extend(other.eqs.iter().cloned());
        Ok(out)
    }

    /// Cartesian product `self × other` in `R^(n+m)`.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.ambient_dim;
        let m = other.ambient_dim;
        let left = |(a, b): &Row<F>| {
            let mut v = a.clone();
            v.extend(linalg::zeros::<F>(m));
            (v, b.clone())
        };
        let right = |(a, b): &Row<F>| {
            let mut v = linalg::zeros::<F>(n);
            v.extend(a.iter().cloned());
            (v, b.clone())
        };
        HPolyhedron {
            ambient_dim: n + m,
            ineqs: self
                .ineqs
                .iter()
                .map(left)
                .chain(other.ineqs.iter().map(right))
                .collect(),
            eqs: self
                .eqs
                .iter()
                .map(left)
                .chain(other.eqs.iter().map(right))
                .collect(),
        }
    }

    /// `v + self`.
    pub fn translate(&self, v: &[F]) -> Result<Self> {
        self.check_point(v)?;
        let shift = |(a, b): &Row<F>| (a.clone(), b.clone() + dot(a, v));
        Ok(HPolyhedron {
            ambient_dim: self.ambient_dim,
            ineqs: self.ineqs.iter().map(shift).collect(),
            eqs: self.eqs.iter().map(shift).collect(),
        })
    }

    /// `{x ∈ R^k : M x + c ∈ self}` where `m` has `ambient_dim` rows of length `k`.
    pub fn preimage(&self, m: &[Vec<F>], c: &[F], k: usize) -> Result<Self> {
        self.check_point(c)?;
        if m.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: m.len(),
            });
        }
        if let Some(r) = m.iter().find(|r| r.len() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: r.len(),
            });
        }
        let mt = linalg::transpose(m, k);
        let pull = |(a, b): &Row<F>| (linalg::mat_vec(&mt, a), b.clone() - dot(a, c));
        Ok(HPolyhedron {
            ambient_dim: k,
            ineqs: self.ineqs.iter().map(pull).collect(),
            eqs: self.eqs.iter().map(pull).collect(),
        })
    }

    /// Keeps the inequalities listed in `tight` as equalities.
    pub fn face_with(&self, tight: &[usize]) -> Self {
        let mut out = HPolyhedron {
            ambient_dim: self.ambient_dim,
            ineqs: Vec::new(),
            eqs: self.eqs.clone(),
        };
        for (i, r) in self.ineqs.iter().enumerate() {
            if tight.contains(&i) {
                out.eqs.push(r.clone());
            } else {
                out.ineqs.push(r.clone());
            }
        }
        out
    }

    /// True when `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        if other.ambient_dim != self.ambient_dim {
            return false;
        }
        if !other.feasible() {
            return true;
        }
        let below = |a: &[F], b: &F| match other.maximize(a) {
            LpOutcome::Optimal { value, .. } => value <= *b,
            _ => false,
        };
        self.ineqs.iter().all(|(a, b)| below(a, b))
            && self
                .eqs
                .iter()
                .all(|(a, b)| below(a, b) && below(&linalg::neg(a), &-b.clone()))
    }

    pub fn same_set(&self, other: &Self) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// Indices of inequalities of `self` that hold with equality on all of `set`.
    pub fn tight_on(&self, set: &Self) -> Vec<usize> {
        (0..self.ineqs.len())
            .filter(|&i| {
                let (a, b) = &self.ineqs[i];
                match set.maximize(&linalg::neg(a)) {
                    LpOutcome::Optimal { value, .. } => value == -b.clone(),
                    _ => false,
                }
            })
            .collect()
    }

    /// Unique description of the set: reduced equalities plus irredundant,
    /// normalized, sorted inequalities.
    pub fn canonical(&self) -> Self {
        let n = self.ambient_dim;
        let Some(an) = self.analyze() else {
            return Self::empty(n);
        };
        let mut eq_aug: Vec<Vec<F>> = self
            .eqs
            .iter()
            .chain(an.implicit.iter().map(|&i| &self.ineqs[i]))
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let (reduced, pivots) = rref(&eq_aug, n + 1);
        eq_aug = reduced;
        let eqs: Vec<Row<F>> = eq_aug
            .iter()
            .map(|r| (r[..n].to_vec(), r[n].clone()))
            .collect();

        let mut ineqs: Vec<Row<F>> = Vec::new();
        for (i, (a, b)) in self.ineqs.iter().enumerate() {
            if an.implicit.contains(&i) {
                continue;
            }
            let mut a = a.clone();
            let mut b = b.clone();
            for (row, &p) in eq_aug.iter().zip(&pivots) {
                if !a[p].is_zero() {
                    let f = a[p].clone();
                    for j in 0..n {
                        a[j] = a[j].clone() - f.clone() * row[j].clone();
                    }
                    b = b - f * row[n].clone();
                }
            }
            let Some(lead) = a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
                continue;
            };
            let a: Vec<F> = a.iter().map(|x| x.clone() / lead.clone()).collect();
            let b = b / lead;
            match ineqs.iter_mut().find(|(c, _)| *c == a) {
                Some(existing) => {
                    if b < existing.1 {
                        existing.1 = b;
                    }
                }
                None => ineqs.push((a, b)),
            }
        }
        let mut i = 0;
        while i < ineqs.len() {
            let mut rest = ineqs.clone();
            let (a, b) = rest.remove(i);
            let redundant = match lp::maximize(n, &a, &rest, &eqs) {
                LpOutcome::Optimal { value, .. } => value <= b,
                _ => false,
            };
            if redundant {
                ineqs.remove(i);
            } else {
                i += 1;
            }
        }
        ineqs.sort_by(row_cmp);
        HPolyhedron {
            ambient_dim: n,
            ineqs,
            eqs,
        }
    }

    /// Vertices, extreme rays and a lineality basis. Errors on the empty set.
    pub fn v_representation(&self) -> Result<VRep<F>> {
        let n = self.ambient_dim;
        let hom = |(a, b): &Row<F>| {
            let mut r = a.clone();
            r.push(-b.clone());
            r
        };
        let mut ineqs: Vec<Vec<F>> = self.ineqs.iter().map(hom).collect();
        ineqs.push(linalg::neg(&linalg::unit(n + 1, n)));
        let eqs: Vec<Vec<F>> = self.eqs.iter().map(hom).collect();
        let g = cone_generators(n + 1, &ineqs, &eqs);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in g.rays {
            let t = r[n].clone();
            if t.is_zero() {
                rays.push(normalize_direction(&r[..n]));
            } else {
                vertices.push(r[..n].iter().map(|x| x.clone() / t.clone()).collect());
            }
        }
        if vertices.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        let lines = g.lines.into_iter().map(|l| l[..n].to_vec()).collect();
        Ok(VRep {
            vertices,
            rays,
            lines,
        })
    }

    /// `conv(vertices) + cone(rays) + span(lines)`; empty when there are no vertices.
    pub fn from_vrep(ambient_dim: usize, v: &VRep<F>) -> Result<Self> {
        let n = ambient_dim;
        for p in v.vertices.iter().chain(&v.rays).chain(&v.lines) {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
        }
        if v.vertices.is_empty() {
            return Ok(Self::empty(n));
        }
        // Polar of the homogenized cone: (a, c) with a·v + c ≤ 0, a·r ≤ 0, a·l = 0.
        let lift = |p: &Vec<F>, t: F| {
            let mut r = p.clone();
            r.push(t);
            r
        };
        let ineqs: Vec<Vec<F>> = v
            .vertices
            .iter()
            .map(|p| lift(p, F::one()))
            .chain(v.rays.iter().map(|p| lift(p, F::zero())))
            .collect();
        let eqs: Vec<Vec<F>> = v.lines.iter().map(|p| lift(p, F::zero())).collect();
        let g = cone_generators(n + 1, &ineqs, &eqs);
        let mut out = Self::whole(n);
        for r in g.rays {
            if linalg::is_zero_vec(&r[..n]) {
                continue;
            }
            out.ineqs.push((r[..n].to_vec(), -r[n].clone()));
        }
        for l in g.lines {
            if linalg::is_zero_vec(&l[..n]) {
                continue;
            }
            out.eqs.push((l[..n].to_vec(), -l[n].clone()));
        }
        Ok(out)
    }

    pub fn convex_hull(ambient_dim: usize, points: &[Vec<F>]) -> Result<Self> {
        Self::from_vrep(
            ambient_dim,
            &VRep {
                vertices: points.to_vec(),
                rays: Vec::new(),
                lines: Vec::new(),
            },
        )
    }

    /// `{M x + c : x ∈ self}` where `m` has `out_dim` rows of length `ambient_dim`.
    pub fn linear_image(&self, m: &[Vec<F>], c: &[F], out_dim: usize) -> Result<Self> {
        if c.len() != out_dim {
            return Err(Error::DimensionMismatch {
                expected: out_dim,
                got: c.len(),
            });
        }
        if m.len() != out_dim {
            return Err(Error::DimensionMismatch {
                expected: out_dim,
                got: m.len(),
            });
        }
        let v = match self.v_representation() {
            Ok(v) => v,
            Err(Error::EmptyPolyhedron) => return Ok(Self::empty(out_dim)),
            Err(e) => return Err(e),
        };
        let image = VRep {
            vertices: v
                .vertices
                .iter()
                .map(|p| linalg::add(&linalg::mat_vec(m, p), c))
                .collect(),
            rays: v.rays.iter().map(|p| linalg::mat_vec(m, p)).collect(),
            lines: v.lines.iter().map(|p| linalg::mat_vec(m, p)).collect(),
        };
        Self::from_vrep(out_dim, &image)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if other.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let (Ok(p), Ok(q)) = (self.v_representation(), other.v_representation()) else {
            return Ok(Self::empty(self.ambient_dim));
        };
        let mut vertices = Vec::new();
        for a in &p.vertices {
            for b in &q.vertices {
                vertices.push(linalg::add(a, b));
            }
        }
        let sum = VRep {
            vertices,
            rays: p.rays.into_iter().chain(q.rays).collect(),
            lines: p.lines.into_iter().chain(q.lines).collect(),
        };
        Self::from_vrep(self.ambient_dim, &sum)
    }

    /// `v + C`.
    pub fn minkowski_translate(v: &[F], c: &PolyCone<F>) -> Result<Self> {
        c.as_polyhedron().translate(v)
    }
}

/// Polyhedral cone: every right-hand side is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyCone<F>(HPolyhedron<F>);

impl<F: Field> PolyCone<F> {
    /// `{x : a·x ≤ 0 for a in ineq_normals, e·x = 0 for e in eq_normals}`.
    pub fn from_normals(
        ambient_dim: usize,
        ineq_normals: &[Vec<F>],
        eq_normals: &[Vec<F>],
    ) -> Result<Self> {
        let z = || F::zero();
        Ok(PolyCone(HPolyhedron::new(
            ambient_dim,
            ineq_normals.iter().map(|a| (a.clone(), z())).collect(),
            eq_normals.iter().map(|a| (a.clone(), z())).collect(),
        )?))
    }

    /// `cone(rays) + span(lines)`.
    pub fn from_generators(ambient_dim: usize, rays: &[Vec<F>], lines: &[Vec<F>]) -> Result<Self> {
        for p in rays.iter().chain(lines) {
            if p.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: p.len(),
                });
            }
        }
        let polar = cone_generators(ambient_dim, rays, lines);
        Self::from_normals(ambient_dim, &polar.rays, &polar.lines)
    }

    pub fn try_from_polyhedron(p: HPolyhedron<F>) -> Option<Self> {
        let homogeneous = p.ineqs.iter().chain(&p.eqs).all(|(_, b)| b.is_zero());
        homogeneous.then_some(PolyCone(p))
    }

    pub fn whole(ambient_dim: usize) -> Self {
        PolyCone(HPolyhedron::whole(ambient_dim))
    }

    pub fn zero(ambient_dim: usize) -> Self {
        PolyCone(HPolyhedron::point(&linalg::zeros(ambient_dim)))
    }

    pub fn as_polyhedron(&self) -> &HPolyhedron<F> {
        &self.0
    }

    pub fn into_polyhedron(self) -> HPolyhedron<F> {
        self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.ambient_dim
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        self.0.contains_point(v)
    }

    pub fn generators(&self) -> ConeGenerators<F> {
        let ineqs: Vec<Vec<F>> = self.0.ineqs.iter().map(|(a, _)| a.clone()).collect();
        let eqs: Vec<Vec<F>> = self.0.eqs.iter().map(|(a, _)| a.clone()).collect();
        cone_generators(self.0.ambient_dim, &ineqs, &eqs)
    }

    /// Polar cone `{y : ⟨y, x⟩ ≤ 0 for all x in self}`.
    pub fn polar(&self) -> Self {
        let g = self.generators();
        PolyCone(HPolyhedron {
            ambient_dim: self.0.ambient_dim,
            ineqs: g.rays.into_iter().map(|a| (a, F::zero())).collect(),
            eqs: g.lines.into_iter().map(|a| (a, F::zero())).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.0.dim().finite().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ivec, rat, Rational};

    type Q = HPolyhedron<Rational>;

    fn unit_square() -> Q {
        Q::boxed(&ivec(&[0, 0]), &ivec(&[1, 1])).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let bad = Q::new(
            1,
            vec![(ivec(&[1]), int(1)), (ivec(&[-1]), int(-2))],
            vec![],
        )
        .unwrap();
        assert!(!bad.feasible());
        let orthant = Q::new(
            2,
            vec![(ivec(&[-1, 0]), int(0)), (ivec(&[0, -1]), int(0))],
            vec![],
        )
        .unwrap();
        assert!(orthant.feasible());
        assert!(Q::whole(2).feasible());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let e = Q::new(2, vec![(ivec(&[1]), int(0))], vec![]).unwrap_err();
        assert!(matches!(
            e,
            Error::DimensionMismatch {
                expected: 2,
                got: 1
            }
        ));
        assert!(unit_square().intersect(&Q::whole(3)).is_err());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(unit_square().dim(), Dim::Finite(2));
        let seg = Q::boxed(&ivec(&[0, 0]), &ivec(&[0, 1])).unwrap();
        assert_eq!(seg.dim(), Dim::Finite(1));
        assert_eq!(Q::empty(2).dim(), Dim::NegInfinity);
        assert_eq!(Dim::NegInfinity.to_string(), "-inf");
        assert!(Dim::NegInfinity < Dim::Finite(0));
    }

    #[test]
    fn relint_point_is_strict() {
        let seg = Q::boxed(&ivec(&[0, 0]), &ivec(&[0, 1])).unwrap();
        let an = seg.analyze().unwrap();
        assert_eq!(an.implicit.len(), 2);
        let y = &an.relint[1];
        assert!(*y > int(0) && *y < int(1));
    }

    #[test]
    fn v_representation_examples() {
        let seg = Q::boxed(&ivec(&[-1]), &ivec(&[1])).unwrap();
        let v = seg.v_representation().unwrap();
        assert_eq!(v.vertices.len(), 2);
        assert!(v.vertices.contains(&ivec(&[-1])) && v.vertices.contains(&ivec(&[1])));
        assert!(v.rays.is_empty());

        let half = Q::new(1, vec![(ivec(&[-1]), int(0))], vec![]).unwrap();
        let v = half.v_representation().unwrap();
        assert_eq!(v.vertices, vec![ivec(&[0])]);
        assert_eq!(v.rays, vec![ivec(&[1])]);

        let pts = vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 0])];
        let gamma = Q::convex_hull(3, &pts).unwrap();
        let v = gamma.v_representation().unwrap();
        assert_eq!(v.vertices.len(), 3);
        for p in &pts {
            assert!(v.vertices.contains(p));
        }
        assert!(v.rays.is_empty() && v.lines.is_empty());
        assert!(matches!(
            Q::empty(1).v_representation(),
            Err(Error::EmptyPolyhedron)
        ));
    }

    #[test]
    fn hv_round_trip() {
        let p = Q::new(
            2,
            vec![
                (ivec(&[1, 1]), int(2)),
                (ivec(&[-1, 0]), int(0)),
                (ivec(&[0, -1]), int(1)),
            ],
            vec![],
        )
        .unwrap();
        let back = Q::from_vrep(2, &p.v_representation().unwrap()).unwrap();
        assert!(p.same_set(&back));
        assert_eq!(p.canonical(), back.canonical());
    }

    #[test]
    fn translate_and_intersect_examples() {
        let cone = PolyCone::from_normals(1, &[ivec(&[-1])], &[]).unwrap();
        let shifted = Q::minkowski_translate(&ivec(&[1]), &cone).unwrap();
        let expected = Q::new(1, vec![(ivec(&[-1]), int(-1))], vec![]).unwrap();
        assert!(shifted.same_set(&expected));

        let lo = Q::new(1, vec![(ivec(&[-1]), int(1))], vec![]).unwrap();
        let hi = Q::new(1, vec![(ivec(&[1]), int(1))], vec![]).unwrap();
        let both = lo.intersect(&hi).unwrap();
        assert!(both.same_set(&Q::boxed(&ivec(&[-1]), &ivec(&[1])).unwrap()));

        let a = Q::new(1, vec![(ivec(&[-1]), int(-1))], vec![]).unwrap();
        let b = Q::new(1, vec![(ivec(&[1]), int(-1))], vec![]).unwrap();
        assert!(!a.intersect(&b).unwrap().feasible());
    }

    #[test]
    fn canonical_form_identifies_sets() {
        let a = unit_square();
        let b = unit_square()
            .with_ineq(ivec(&[1, 1]), int(5))
            .unwrap()
            .with_ineq(ivec(&[2, 0]), int(2))
            .unwrap();
        assert_eq!(a.canonical(), b.canonical());
        let flat = Q::new(
            2,
            vec![
                (ivec(&[1, 0]), int(0)),
                (ivec(&[-1, 0]), int(0)),
                (ivec(&[0, 1]), int(1)),
            ],
            vec![],
        )
        .unwrap();
        let flat2 = Q::new(
            2,
            vec![(ivec(&[1, 1]), int(1))],
            vec![(ivec(&[2, 0]), int(0))],
        )
        .unwrap();
        assert_eq!(flat.canonical(), flat2.canonical());
        assert_eq!(
            Q::empty(2).canonical(),
            Q::new(
                2,
                vec![(ivec(&[-1, 0]), int(0)), (ivec(&[1, 0]), int(-1))],
                vec![]
            )
            .unwrap()
            .canonical()
        );
    }

    #[test]
    fn preimage_and_image() {
        // {x ∈ R : (x, x) ∈ [0,1]²} = [0,1]
        let m = vec![ivec(&[1]), ivec(&[1])];
        let pre = unit_square().preimage(&m, &ivec(&[0, 0]), 1).unwrap();
        assert!(pre.same_set(&Q::boxed(&ivec(&[0]), &ivec(&[1])).unwrap()));
        // image of the square under (x, y) ↦ x + y is [0, 2]
        let img = unit_square()
            .linear_image(&[ivec(&[1, 1])], &ivec(&[0]), 1)
            .unwrap();
        assert!(img.same_set(&Q::boxed(&ivec(&[0]), &ivec(&[2])).unwrap()));
    }

    #[test]
    fn minkowski_sum_of_segments() {
        let a = Q::boxed(&ivec(&[0, 0]), &ivec(&[1, 0])).unwrap();
        let b = Q::boxed(&ivec(&[0, 0]), &ivec(&[0, 1])).unwrap();
        assert!(a.minkowski_sum(&b).unwrap().same_set(&unit_square()));
    }

    #[test]
    fn cone_polarity() {
        let orth = PolyCone::from_normals(2, &[ivec(&[-1, 0]), ivec(&[0, -1])], &[]).unwrap();
        let polar = orth.polar();
        assert!(polar.contains_vector(&ivec(&[-1, -3])));
        assert!(!polar.contains_vector(&ivec(&[1, 0])));
        let gen = PolyCone::from_generators(2, &[ivec(&[1, 0])], &[]).unwrap();
        assert!(gen.contains_vector(&[rat(7, 2), int(0)]));
        assert!(!gen.contains_vector(&ivec(&[0, 1])));
        assert_eq!(gen.dim(), 1);
    }
}
