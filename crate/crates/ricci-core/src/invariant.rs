//! The space `sym(p)^K` of invariant symmetric operators, computed as the
//! null space of the stacked commutator and conjugation constraints, and
//! positive definite points of it with cached data.

use crate::linalg::{self, sqrt_spd, sym_dim, symmetrize, vec_to_sym, LinalgError};
use crate::space::{BracketTensor, Geometry, SpaceSpec};
use crate::tol::Tolerances;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("operator is not symmetric positive definite: {0}")]
    NotSpd(#[from] LinalgError),
    #[error("operator does not commute with the isotropy action (residual {residual:.3e}, tolerance {tol:.3e})")]
    NotInvariant { residual: f64, tol: f64 },
    #[error("metric is too ill-conditioned (cond {cond:.3e} > {max:.3e})")]
    IllConditioned { cond: f64, max: f64 },
    #[error("coordinate vector has length {got}, expected {expected}")]
    CoordLength { expected: usize, got: usize },
}

/// Orthonormal basis `A_1 .. A_m` of `sym(p)^K` under `<A,B> = tr(AB)`.
#[derive(Debug, Clone)]
pub struct InvariantSymBasis {
    mats: Vec<DMatrix<f64>>,
    n_p: usize,
}

impl InvariantSymBasis {
    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn n_p(&self) -> usize {
        self.n_p
    }

    pub fn mat(&self, r: usize) -> &DMatrix<f64> {
        &self.mats[r]
    }

    pub fn mats(&self) -> &[DMatrix<f64>] {
        &self.mats
    }

    /// Coordinates of a symmetric operator in the basis.
    pub fn coords(&self, a: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_fn(self.m(), |r, _| (a * &self.mats[r]).trace())
    }

    pub fn from_coords(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n_p, self.n_p);
        for r in 0..self.m() {
            out += &self.mats[r] * x[r];
        }
        out
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        self.from_coords(&self.coords(a))
    }

    /// Distance from the span, `|A - proj(A)|`.
    pub fn projection_defect(&self, a: &DMatrix<f64>) -> f64 {
        (a - self.project(a)).norm()
    }
}

/// Null space of `A -> ([A, ad Z|_p], Q A Q^t - A)` inside the symmetric
/// matrices.  The identity always qualifies, so `m >= 1`.
pub fn commutant_sym_basis(
    spec: &SpaceSpec,
    bracket: &BracketTensor,
    tol: &Tolerances,
) -> InvariantSymBasis {
    let n_p = spec.n_p();
    let nsym = sym_dim(n_p);
    let mut rows: Vec<DMatrix<f64>> = Vec::new();
    for c in &bracket.ad_k {
        rows.push(constraint_block(n_p, |a| a * c - c * a));
    }
    for q in &spec.extra_isotropy {
        rows.push(constraint_block(n_p, |a| q * a * q.transpose() - a));
    }
    if rows.is_empty() {
        // no constraints: the canonical orthonormal basis of sym(p)
        let mats = (0..nsym)
            .map(|k| {
                let mut v = DVector::zeros(nsym);
                v[k] = 1.0;
                vec_to_sym(&v, n_p)
            })
            .collect();
        return InvariantSymBasis { mats, n_p };
    }
    let total: usize = rows.iter().map(|r| r.nrows()).sum();
    let mut stacked = DMatrix::zeros(total, nsym);
    let mut at = 0;
    for r in rows {
        stacked.view_mut((at, 0), (r.nrows(), nsym)).copy_from(&r);
        at += r.nrows();
    }
    let null = linalg::null_space(&stacked, tol.rank_coeff);
    let mats = null.iter().map(|v| vec_to_sym(v, n_p)).collect();
    InvariantSymBasis { mats, n_p }
}

fn constraint_block(n_p: usize, map: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> DMatrix<f64> {
    let nsym = sym_dim(n_p);
    let mut block = DMatrix::zeros(n_p * n_p, nsym);
    for k in 0..nsym {
        let mut v = DVector::zeros(nsym);
        v[k] = 1.0;
        let image = map(&vec_to_sym(&v, n_p));
        for r in 0..n_p {
            for c in 0..n_p {
                block[(r * n_p + c, k)] = image[(r, c)];
            }
        }
    }
    block
}

/// A positive definite invariant operator `h` together with its square
/// `g = h^2` (the metric tensor relative to the background), inverses,
/// basis coordinates and relative determinant `det(g) = (det h)^2`.
#[derive(Debug, Clone)]
pub struct MetricPoint {
    pub h: DMatrix<f64>,
    pub h_inv: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// Coordinates of `h` in the orthonormal invariant basis.
    pub coords: DVector<f64>,
    pub det_rel: f64,
    pub cond: f64,
}

impl MetricPoint {
    /// Builds a metric point from the operator `h` (the square root of the
    /// metric tensor).  Checks positivity, invariance and conditioning.
    pub fn from_operator(geom: &Geometry, h: DMatrix<f64>) -> Result<Self, MetricError> {
        let h = symmetrize(&h);
        let (vals, vecs) = linalg::eig_sym(&h);
        if vals[0] <= 0.0 {
            return Err(LinalgError::NotPositiveDefinite(vals[0]).into());
        }
        let cond = vals[vals.len() - 1] / vals[0];
        if cond > geom.tol.cond_max {
            return Err(MetricError::IllConditioned {
                cond,
                max: geom.tol.cond_max,
            });
        }
        let inv_diag = DMatrix::from_diagonal(&vals.map(|v| 1.0 / v));
        let h_inv = &vecs * inv_diag * vecs.transpose();
        let tol = geom.tol.commutant(h.norm());
        let mut residual: f64 = 0.0;
        for c in &geom.bracket.ad_k {
            residual = residual.max((&h * c - c * &h).norm());
        }
        for q in &geom.spec.extra_isotropy {
            residual = residual.max((q * &h * q.transpose() - &h).norm());
        }
        if residual > tol {
            return Err(MetricError::NotInvariant { residual, tol });
        }
        let g = &h * &h;
        let g_inv = &h_inv * &h_inv;
        let coords = geom.basis.coords(&h);
        let det_h: f64 = vals.iter().product();
        Ok(MetricPoint {
            h,
            h_inv,
            g,
            g_inv,
            coords,
            det_rel: det_h * det_h,
            cond,
        })
    }

    /// Builds a metric point from the metric tensor `g` relative to the
    /// background; `h` is its positive square root.
    pub fn from_tensor(geom: &Geometry, g: &DMatrix<f64>) -> Result<Self, MetricError> {
        let h = sqrt_spd(g)?;
        MetricPoint::from_operator(geom, h)
    }

    /// Builds `h` from coordinates in the orthonormal invariant basis.
    pub fn from_coords(geom: &Geometry, x: &DVector<f64>) -> Result<Self, MetricError> {
        if x.len() != geom.m() {
            return Err(MetricError::CoordLength {
                expected: geom.m(),
                got: x.len(),
            });
        }
        MetricPoint::from_operator(geom, geom.basis.from_coords(x))
    }

    /// The metric scaled by `a > 0` as a tensor, i.e. `h` scaled by sqrt(a).
    pub fn scaled(&self, geom: &Geometry, a: f64) -> Result<Self, MetricError> {
        MetricPoint::from_operator(geom, &self.h * a.sqrt())
    }

    /// Riemannian inner product of two invariant tensors at this metric,
    /// `tr(g^{-1} T g^{-1} S)` for background tensor operators `T`, `S`.
    pub fn inner(&self, t: &DMatrix<f64>, s: &DMatrix<f64>) -> f64 {
        (&self.g_inv * t * &self.g_inv * s).trace()
    }

    /// `tr_g T = tr(g^{-1} T)`.
    pub fn trace_g(&self, t: &DMatrix<f64>) -> f64 {
        (&self.g_inv * t).trace()
    }
}

/// The determinant of the metric `g_h` relative to the background,
/// `(det h)^2`.
pub fn relative_determinant(geom: &Geometry, h: &DMatrix<f64>) -> Result<f64, MetricError> {
    let mp = MetricPoint::from_operator(geom, h.clone())?;
    Ok(mp.det_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn berger_commutant_is_two_dimensional() {
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        assert_eq!(geom.m(), 2);
        // the span is { diag(x, y, y) }
        for r in 0..2 {
            let a = geom.basis.mat(r);
            assert!(a[(0, 1)].abs() < 1e-12 && a[(0, 2)].abs() < 1e-12);
            assert!((a[(1, 1)] - a[(2, 2)]).abs() < 1e-12);
        }
        let probe = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0, 0.0]));
        assert!(geom.basis.projection_defect(&probe) < 1e-12);
    }

    #[test]
    fn berger_projection_averages_the_rotating_block() {
        let entry = catalog::load("berger").unwrap();
        let probe = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]));
        let proj = entry.geometry.basis.project(&probe);
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.5, 2.5]));
        assert!((proj - expect).norm() < 1e-12);
    }

    #[test]
    fn trivial_isotropy_gives_full_sym() {
        let entry = catalog::load("unimod3-su2").unwrap();
        assert_eq!(entry.geometry.m(), 6);
    }

    #[test]
    fn s5s1_commutant_is_four_dimensional() {
        let entry = catalog::load("s5s1").unwrap();
        let geom = &entry.geometry;
        assert_eq!(geom.m(), 4);
        // identity on the complex 2-plane block, the two trivial diagonal
        // directions, and the off-diagonal coupling
        let n = geom.n_p();
        let mut gens = Vec::new();
        let mut c2 = DMatrix::zeros(n, n);
        for i in 0..4 {
            c2[(i, i)] = 1.0;
        }
        gens.push(c2);
        let mut z = DMatrix::zeros(n, n);
        z[(4, 4)] = 1.0;
        gens.push(z);
        let mut w = DMatrix::zeros(n, n);
        w[(5, 5)] = 1.0;
        gens.push(w);
        let mut x = DMatrix::zeros(n, n);
        x[(4, 5)] = 1.0;
        x[(5, 4)] = 1.0;
        gens.push(x);
        for gen in gens {
            assert!(geom.basis.projection_defect(&gen) < 1e-10);
        }
    }

    #[test]
    fn extra_generators_cut_down_the_commutant() {
        // abelian R^3 with the swap of the first two axes as extra isotropy
        let spec = SpaceSpec::new("abelian3-swap", 3, 0).unwrap();
        let mut spec = spec;
        let q = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        spec.extra_isotropy.push(q);
        let geom = Geometry::new(spec).unwrap();
        assert_eq!(geom.m(), 4);
    }

    #[test]
    fn metric_point_round_trip_and_invariance() {
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.7, 0.7]));
        let mp = MetricPoint::from_operator(geom, h.clone()).unwrap();
        let back = geom.basis.from_coords(&mp.coords);
        assert!((back - &h).norm() < 1e-13);
        // a non-invariant operator is rejected
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.7, 0.9]));
        assert!(MetricPoint::from_operator(geom, bad).is_err());
        // and so is an ill-conditioned one
        let sick = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-14, 1e-14]));
        assert!(MetricPoint::from_operator(geom, sick).is_err());
    }

    #[test]
    fn inner_product_basics() {
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        let id = DMatrix::<f64>::identity(3, 3);
        let mp = MetricPoint::from_operator(geom, id.clone()).unwrap();
        assert!((mp.inner(&id, &id) - 3.0).abs() < 1e-14);
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 5.0, 5.0]));
        assert!((mp.inner(&a, &id) - a.trace()).abs() < 1e-14);
    }

    #[test]
    fn relative_determinant_values() {
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        let id = DMatrix::<f64>::identity(3, 3);
        assert!((relative_determinant(geom, &id).unwrap() - 1.0).abs() < 1e-14);
        let b: f64 = 0.6;
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, b.sqrt(), b.sqrt()]));
        assert!((relative_determinant(geom, &h).unwrap() - b * b).abs() < 1e-13);
        let two = &id * 2.0;
        assert!((relative_determinant(geom, &two).unwrap() - 64.0).abs() < 1e-12);
    }
}
