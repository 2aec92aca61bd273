//! First variation of the Ricci tensor, the Lichnerowicz Laplacian on
//! invariant tensors, Casimir operators, derivation directions and the
//! finite-difference oracle used to cross-check the analytic formulas.
//!
//! Conventions.  Public tensor-side derivatives speak in background tensor
//! coordinates and match central finite differences of `G -> ric_bar(sqrt G)`.
//! The operator-side variation at a base metric `h` is evaluated by moving
//! the bracket: all terms of the identity-base formula are formed from
//! `nu = h . mu_p`, in the frame where the metric itself is the identity.
//! In that frame the operator is self adjoint for unimodular spaces and its
//! matrix is what the classifier ranks.

use crate::curvature::{moment_map_of, moved_bracket, ricci};
use crate::invariant::{MetricError, MetricPoint};
use crate::linalg::symmetrize;
use crate::space::{theta_action, Geometry, Lambda2};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VariationError {
    #[error("operation requires a unimodular group (|H| = {0:.3e})")]
    NotUnimodular(f64),
    #[error("operation requires trivial isotropy (n_k = {0})")]
    IsotropyNotTrivial(usize),
    #[error("matrix is not a derivation preserving k (residual {0:.3e})")]
    NotDerivation(f64),
    #[error("finite difference step {step:.3e} hits cancellation (Richardson gap {gap:.3e})")]
    Cancellation { step: f64, gap: f64 },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// `delta(A) = -theta(A) lambda`.
pub fn delta(lambda: &Lambda2, a: &DMatrix<f64>) -> Lambda2 {
    theta_action(a, lambda).expect("shapes agree").scale(-1.0)
}

/// Matrix `B` dual to `A -> <nu, theta(A) lambda>` under `<A,B> = tr(AB^t)`.
fn theta_transpose(lambda: &Lambda2, nu: &Lambda2) -> DMatrix<f64> {
    let n = lambda.n;
    let mut t1 = DMatrix::zeros(n, n);
    let mut t2 = DMatrix::zeros(n, n);
    let mut t3 = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            let mut s3 = 0.0;
            for x in 0..n {
                for y in 0..n {
                    s1 += nu.get(x, y, a) * lambda.get(x, y, b);
                    s2 += nu.get(b, x, y) * lambda.get(a, x, y);
                    s3 += nu.get(x, b, y) * lambda.get(x, a, y);
                }
            }
            t1[(a, b)] = s1;
            t2[(a, b)] = s2;
            t3[(a, b)] = s3;
        }
    }
    t1 - t2 - t3
}

/// Transpose of `delta`: `<delta^t(nu), A> = <nu, delta(A)>`.
pub fn delta_transpose(lambda: &Lambda2, nu: &Lambda2) -> DMatrix<f64> {
    -theta_transpose(lambda, nu)
}

/// `delta^t(delta(A))` for the bracket `lambda`.
pub fn dtd(lambda: &Lambda2, a: &DMatrix<f64>) -> DMatrix<f64> {
    delta_transpose(lambda, &delta(lambda, a))
}

/// First variation of the moment map at the identity of the given bracket:
/// `dM(A) = 1/2 S(delta^t delta (A))`.
pub fn d_moment_map(lambda: &Lambda2, a: &DMatrix<f64>) -> DMatrix<f64> {
    symmetrize(&dtd(lambda, a)) * 0.5
}

/// Operator-side variation data at a base metric: every h-independent piece
/// of the identity-base formula evaluated for the moved bracket.
pub struct VariationContext {
    pub moved: Lambda2,
    pub moment: DMatrix<f64>,
    /// Mean curvature of the moved bracket (`h^{-1} H` in p-coordinates).
    pub mean: DVector<f64>,
    ad_mean: DMatrix<f64>,
    unimodular: bool,
}

impl VariationContext {
    pub fn new(geom: &Geometry, mp: &MetricPoint) -> Self {
        let moved = moved_bracket(geom, mp);
        let moment = moment_map_of(&moved);
        let mean = DVector::from_fn(moved.n, |a, _| moved.ad_basis(a).trace());
        let ad_mean = moved.ad_vec(&mean);
        VariationContext {
            moved,
            moment,
            mean,
            ad_mean,
            unimodular: geom.unimodular,
        }
    }

    /// The variation of `ric_bar` at the identity of the moved problem:
    /// `D(A) = 1/2 S(d^t d A) + A M + M A - A ad(H) - ad(H)^t A + 2 S(ad(A H))`.
    pub fn apply(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = symmetrize(&dtd(&self.moved, a)) * 0.5;
        out += a * &self.moment + &self.moment * a;
        if !self.unimodular {
            out -= a * &self.ad_mean + self.ad_mean.transpose() * a;
            out += symmetrize(&self.moved.ad_vec(&(a * &self.mean))) * 2.0;
        }
        out
    }

    /// Lichnerowicz Laplacian on invariant tensors (the bracket and moment
    /// terms only; callers must have checked unimodularity).
    fn apply_lichnerowicz(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        symmetrize(&dtd(&self.moved, a)) * 0.5 + a * &self.moment + &self.moment * a
    }
}

/// How a variation matrix was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariationMethod {
    Analytic,
    FiniteDifference,
}

/// The m x m matrix of the Ricci variation in the orthonormal coordinates of
/// the invariant basis, evaluated in the moved frame at the base metric.
#[derive(Debug, Clone)]
pub struct VariationOperator {
    pub matrix: DMatrix<f64>,
    pub at_coords: DVector<f64>,
    pub method: VariationMethod,
}

/// Assembles the variation matrix at a metric point.
pub fn variation_operator(geom: &Geometry, mp: &MetricPoint) -> VariationOperator {
    let ctx = VariationContext::new(geom, mp);
    let m = geom.m();
    let mut matrix = DMatrix::zeros(m, m);
    for j in 0..m {
        let col = geom.basis.coords(&ctx.apply(geom.basis.mat(j)));
        matrix.set_column(j, &col);
    }
    VariationOperator {
        matrix,
        at_coords: mp.coords.clone(),
        method: VariationMethod::Analytic,
    }
}

/// Derivative of the Ricci tensor in a tensor direction: the differential of
/// `G -> ric_bar(sqrt G)` at `G = h^2` applied to the symmetric `a`.
pub fn d_ricci_tensor(geom: &Geometry, mp: &MetricPoint, a: &DMatrix<f64>) -> DMatrix<f64> {
    let ctx = VariationContext::new(geom, mp);
    let inner = &mp.h_inv * a * &mp.h_inv;
    &mp.h * ctx.apply(&inner) * &mp.h * 0.5
}

/// Derivative of `h -> ric_bar(h)` in the operator direction `e`.
pub fn ricci_bar_h_derivative(geom: &Geometry, mp: &MetricPoint, e: &DMatrix<f64>) -> DMatrix<f64> {
    let ctx = VariationContext::new(geom, mp);
    let inner = e * &mp.h_inv + &mp.h_inv * e;
    &mp.h * ctx.apply(&inner) * &mp.h * 0.5
}

/// Lichnerowicz Laplacian of `g_h` on an invariant tensor, in the moved-frame
/// operator coordinates.  Fails on non-unimodular groups.
pub fn lichnerowicz(
    geom: &Geometry,
    mp: &MetricPoint,
    a: &DMatrix<f64>,
) -> Result<DMatrix<f64>, VariationError> {
    if !geom.unimodular {
        return Err(VariationError::NotUnimodular(geom.killing.h.norm()));
    }
    Ok(VariationContext::new(geom, mp).apply_lichnerowicz(a))
}

/// Matrix of the Lichnerowicz Laplacian on the invariant basis.
pub fn lichnerowicz_matrix(
    geom: &Geometry,
    mp: &MetricPoint,
) -> Result<DMatrix<f64>, VariationError> {
    if !geom.unimodular {
        return Err(VariationError::NotUnimodular(geom.killing.h.norm()));
    }
    Ok(variation_operator(geom, mp).matrix)
}

/// `cas_p(A) = - sum [ad_p X_i, [ad_p X_i, A]]`.
pub fn casimir_p(geom: &Geometry, a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = geom.n_p();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let ad = geom.bracket.mu_p.ad_basis(i);
        let inner = &ad * a - a * &ad;
        out -= &ad * &inner - &inner * &ad;
    }
    out
}

/// Matrix of `cas_p` on the invariant basis.
pub fn casimir_p_matrix(geom: &Geometry) -> DMatrix<f64> {
    let m = geom.m();
    let mut out = DMatrix::zeros(m, m);
    for j in 0..m {
        let col = geom.basis.coords(&casimir_p(geom, geom.basis.mat(j)));
        out.set_column(j, &col);
    }
    out
}

/// `cas_g(A) = sum [(ad X_i)^t, [ad X_i, A]]` over an orthonormal basis of g.
/// Only defined when the isotropy is trivial so that the background inner
/// product covers all of g.
pub fn casimir_g(geom: &Geometry, a: &DMatrix<f64>) -> Result<DMatrix<f64>, VariationError> {
    if geom.spec.n_k != 0 {
        return Err(VariationError::IsotropyNotTrivial(geom.spec.n_k));
    }
    let n = geom.n_p();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        let ad = geom.bracket.mu_p.ad_basis(i);
        let inner = &ad * a - a * &ad;
        let adt = ad.transpose();
        out += &adt * &inner - &inner * &adt;
    }
    Ok(out)
}

/// Result of pushing a derivation direction through the Ricci variation.
#[derive(Debug, Clone)]
pub struct DerivationVariation {
    /// `D_ric(S(D|_p))` from the analytic variation.
    pub variation: DMatrix<f64>,
    /// `D|_p^t Ric + Ric D|_p`.
    pub orbit_form: DMatrix<f64>,
    /// `D|_p^t M + M D|_p`, meaningful for unimodular spaces.
    pub moment_form: DMatrix<f64>,
    pub derivation_residual: f64,
}

/// Checks that `d` is a derivation of g preserving k and evaluates the Ricci
/// variation along the orbit direction `S(d|_p)` at the background metric.
pub fn d_ricci_along_derivation(
    geom: &Geometry,
    d: &DMatrix<f64>,
) -> Result<DerivationVariation, VariationError> {
    let n_g = geom.spec.n_g;
    let n_k = geom.spec.n_k;
    let mut residual: f64 = 0.0;
    // derivation identity on basis pairs
    for i in 0..n_g {
        for j in (i + 1)..n_g {
            for m in 0..n_g {
                let mut lhs = 0.0;
                let mut rhs = 0.0;
                for l in 0..n_g {
                    lhs += geom.spec.c(i, j, l) * d[(m, l)];
                    rhs += d[(l, i)] * geom.spec.c(l, j, m) + d[(l, j)] * geom.spec.c(i, l, m);
                }
                residual = residual.max((lhs - rhs).abs());
            }
        }
    }
    // k must be preserved
    for j in 0..n_k {
        for i in n_k..n_g {
            residual = residual.max(d[(i, j)].abs());
        }
    }
    let scale = 1.0 + d.norm() * (1.0 + geom.spec.max_c());
    if residual > 1e-9 * scale {
        return Err(VariationError::NotDerivation(residual));
    }
    let n_p = geom.n_p();
    let dp = DMatrix::from_fn(n_p, n_p, |r, c| d[(n_k + r, n_k + c)]);
    let id = DMatrix::identity(n_p, n_p);
    let mp = MetricPoint::from_operator(geom, id)?;
    let ctx = VariationContext::new(geom, &mp);
    let sym_dp = symmetrize(&dp);
    let variation = ctx.apply(&sym_dp);
    let rec = ricci(geom, &mp);
    let orbit_form = dp.transpose() * &rec.ricci_moved + &rec.ricci_moved * &dp;
    let moment_form = dp.transpose() * &rec.moment + &rec.moment * &dp;
    Ok(DerivationVariation {
        variation,
        orbit_form,
        moment_form,
        derivation_residual: residual,
    })
}

/// Checks of the Killing-metric variation identities on a semisimple algebra
/// with a declared Cartan split (the first `h_dim` basis vectors compact).
#[derive(Debug, Clone)]
pub struct SimpleKillingReport {
    pub mu_norm2: f64,
    /// `|M + I/4|`.
    pub moment_residual: f64,
    /// `|Ric - I/4|` on the compact part, `|Ric + 3I/4|` on the rest.
    pub ricci_h_residual: f64,
    pub ricci_q_residual: f64,
    /// max over X in q of `|D(ad X) + 1/2 ad X|`.
    pub ad_q_residual: f64,
    /// max over symmetric A orthogonal to ad(q) of `|D(A) - 1/2 cas_g(A)|`.
    pub casimir_residual: f64,
}

pub fn simple_killing_report(
    geom: &Geometry,
    h_dim: usize,
) -> Result<SimpleKillingReport, VariationError> {
    if geom.spec.n_k != 0 {
        return Err(VariationError::IsotropyNotTrivial(geom.spec.n_k));
    }
    let n = geom.n_p();
    let id = DMatrix::identity(n, n);
    let mp = MetricPoint::from_operator(geom, id.clone())?;
    let rec = ricci(geom, &mp);
    let ctx = VariationContext::new(geom, &mp);
    let mu_norm2 = geom.bracket.mu_p.norm2();
    let moment_residual = (&rec.moment + &id * 0.25).norm();
    let mut ricci_h_residual: f64 = 0.0;
    let mut ricci_q_residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expect = if i != j {
                0.0
            } else if i < h_dim {
                0.25
            } else {
                -0.75
            };
            let d = (rec.ricci_moved[(i, j)] - expect).abs();
            if i < h_dim && j < h_dim {
                ricci_h_residual = ricci_h_residual.max(d);
            } else {
                ricci_q_residual = ricci_q_residual.max(d);
            }
        }
    }
    // directions tangent to the orbit of the orthogonal/boost group
    let mut ad_q_residual: f64 = 0.0;
    let mut ad_q_mats = Vec::new();
    for i in h_dim..n {
        let ad = geom.bracket.mu_p.ad_basis(i);
        ad_q_residual = ad_q_residual.max((ctx.apply(&ad) + &ad * 0.5).norm());
        ad_q_mats.push(ad);
    }
    // symmetric directions orthogonal to ad(q): compare with half the Casimir
    let mut casimir_residual: f64 = 0.0;
    for a in orthocomplement_in_sym(n, &ad_q_mats) {
        let lhs = ctx.apply(&a);
        let rhs = casimir_g(geom, &a)? * 0.5;
        casimir_residual = casimir_residual.max((lhs - rhs).norm());
    }
    Ok(SimpleKillingReport {
        mu_norm2,
        moment_residual,
        ricci_h_residual,
        ricci_q_residual,
        ad_q_residual,
        casimir_residual,
    })
}

/// Orthonormal basis of the orthocomplement of `span(mats)` in sym(n).
fn orthocomplement_in_sym(n: usize, mats: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    use crate::linalg::{null_space, sym_dim, sym_to_vec, vec_to_sym};
    if mats.is_empty() {
        let nsym = sym_dim(n);
        return (0..nsym)
            .map(|k| {
                let mut v = DVector::zeros(nsym);
                v[k] = 1.0;
                vec_to_sym(&v, n)
            })
            .collect();
    }
    let rows = DMatrix::from_fn(mats.len(), sym_dim(n), |r, c| {
        sym_to_vec(&symmetrize(&mats[r]))[c]
    });
    null_space(&rows, 1e-10)
        .iter()
        .map(|v| vec_to_sym(v, n))
        .collect()
}

/// Central finite difference of the tensor-side Ricci derivative with a
/// Richardson step-halving check; returns the extrapolated value.
pub fn finite_difference_dric(
    geom: &Geometry,
    mp: &MetricPoint,
    a: &DMatrix<f64>,
    step: f64,
) -> Result<DMatrix<f64>, VariationError> {
    let eval = |t: f64| -> Result<DMatrix<f64>, VariationError> {
        let g = &mp.g + a * t;
        let point = MetricPoint::from_tensor(geom, &g)?;
        Ok(ricci(geom, &point).ric_bar)
    };
    let diff =
        |s: f64| -> Result<DMatrix<f64>, VariationError> { Ok((eval(s)? - eval(-s)?) / (2.0 * s)) };
    let full = diff(step)?;
    let half = diff(step * 0.5)?;
    // second-order scheme: the halved step should shrink the error 4x
    let gap = (&full - &half).norm() / 3.0;
    let scale = 1.0 + half.norm();
    if gap > 1e-3 * scale {
        return Err(VariationError::Cancellation { step, gap });
    }
    Ok((half * 4.0 - full) / 3.0)
}

/// Central finite difference of the scalar curvature in a tensor direction.
pub fn finite_difference_scal(
    geom: &Geometry,
    mp: &MetricPoint,
    a: &DMatrix<f64>,
    step: f64,
) -> Result<f64, VariationError> {
    let eval = |t: f64| -> Result<f64, VariationError> {
        let g = &mp.g + a * t;
        let point = MetricPoint::from_tensor(geom, &g)?;
        Ok(ricci(geom, &point).scal)
    };
    let diff = |s: f64| -> Result<f64, VariationError> { Ok((eval(s)? - eval(-s)?) / (2.0 * s)) };
    let full = diff(step)?;
    let half = diff(step * 0.5)?;
    Ok((4.0 * half - full) / 3.0)
}
