//! Curvature of invariant metrics via the moving bracket: instead of
//! differentiating metric coefficients, the metric `g_h = <h., h.>` is traded
//! for the isometric space with bracket `h.mu` and the background metric, and
//! curvature is evaluated there.

use crate::invariant::{MetricError, MetricPoint};
use crate::linalg::symmetrize;
use crate::space::{Geometry, Lambda2};
use nalgebra::DMatrix;

/// Moment map of an arbitrary bracket tensor at the background metric:
/// `M = -1/2 sum (ad X_i)^t ad X_i + 1/4 sum ad X_i (ad X_i)^t`.
pub fn moment_map_of(lambda: &Lambda2) -> DMatrix<f64> {
    let n = lambda.n;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let ad = lambda.ad_basis(i);
        m += ad.transpose() * &ad * (-0.5) + &ad * ad.transpose() * 0.25;
    }
    m
}

/// Moment map of the moved bracket `h . mu_p`.
pub fn moment_map(geom: &Geometry, mp: &MetricPoint) -> DMatrix<f64> {
    moment_map_of(&moved_bracket(geom, mp))
}

/// The bracket `h . mu_p` on p.
pub fn moved_bracket(geom: &Geometry, mp: &MetricPoint) -> Lambda2 {
    geom.bracket.mu_p.moved_by(&mp.h, &mp.h_inv)
}

/// Curvature data of the metric `g_h`.
#[derive(Debug, Clone)]
pub struct CurvatureRecord {
    /// Moved bracket `h . mu_p`.
    pub moved: Lambda2,
    /// Moment map of the moved bracket.
    pub moment: DMatrix<f64>,
    /// Ricci operator of the isometric space `(G_{h.mu}/K, <,>)`.
    pub ricci_moved: DMatrix<f64>,
    /// Ricci tensor of `g_h` as an operator in the background frame,
    /// `h Ricci_{h.mu} h`.
    pub ric_bar: DMatrix<f64>,
    /// Scalar curvature.
    pub scal: f64,
    /// The Killing form of the moved algebra, `h^{-1} kil h^{-1}` (half of
    /// it enters `ricci_moved`).
    pub kil_term: DMatrix<f64>,
    /// The mean-curvature correction `S(h ad_p(h^{-2} H) h^{-1})`.
    pub h_term: DMatrix<f64>,
    /// `|h . mu_p|^2`.
    pub moved_norm2: f64,
}

/// Full curvature record at a metric point.
pub fn ricci(geom: &Geometry, mp: &MetricPoint) -> CurvatureRecord {
    let moved = moved_bracket(geom, mp);
    let moment = moment_map_of(&moved);
    let kil_term = &mp.h_inv * &geom.killing.kil_p * &mp.h_inv;
    let (h_term, ric_bar_h_part) = if geom.unimodular {
        (
            DMatrix::zeros(geom.n_p(), geom.n_p()),
            DMatrix::zeros(geom.n_p(), geom.n_p()),
        )
    } else {
        let hm2 = &mp.h_inv * &mp.h_inv * &geom.killing.h;
        let ad_h = geom.bracket.mu_p.ad_vec(&hm2);
        let h_term = symmetrize(&(&mp.h * &ad_h * &mp.h_inv));
        let bar = (&mp.g * &ad_h + ad_h.transpose() * &mp.g) * 0.5;
        (h_term, bar)
    };
    let ricci_moved = &moment - &kil_term * 0.5 - &h_term;
    let ric_bar = &mp.h * &moment * &mp.h - &geom.killing.kil_p * 0.5 - ric_bar_h_part;
    let moved_norm2 = moved.norm2();
    let h_inv_mean = &mp.h_inv * &geom.killing.h;
    let scal = -0.25 * moved_norm2
        - 0.5 * (&geom.killing.kil_p * &mp.g_inv).trace()
        - h_inv_mean.norm_squared();
    CurvatureRecord {
        moved,
        moment,
        ricci_moved,
        ric_bar,
        scal,
        kil_term,
        h_term,
        moved_norm2,
    }
}

/// Scalar curvature of `g_h`.
pub fn scalar_curvature(geom: &Geometry, mp: &MetricPoint) -> f64 {
    ricci(geom, mp).scal
}

/// Determinant-weighted Ricci tensor `det(g_h) * ric(g_h)` breaking the
/// scaling invariance of `ric`.
pub fn ricci_tilde(geom: &Geometry, mp: &MetricPoint) -> DMatrix<f64> {
    ricci(geom, mp).ric_bar * mp.det_rel
}

/// Convenience: curvature at an operator given directly.
pub fn ricci_of_operator(geom: &Geometry, h: DMatrix<f64>) -> Result<CurvatureRecord, MetricError> {
    let mp = MetricPoint::from_operator(geom, h)?;
    Ok(ricci(geom, &mp))
}
