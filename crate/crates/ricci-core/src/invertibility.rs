//! Classification of invariant metrics: kernel of the Ricci variation,
//! maximal-rank membership, invertibility of the determinant-weighted Ricci
//! map, natural reductivity and holonomy irreducibility tests.

use crate::curvature::ricci;
use crate::invariant::MetricPoint;
use crate::linalg::{self, rank_from_singular_values};
use crate::space::Geometry;
use crate::variation::{casimir_p_matrix, d_ricci_tensor, variation_operator};
use nalgebra::DMatrix;
use serde::Serialize;

/// Local invertibility verdict for a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    /// Minimal kernel and nonzero scalar curvature: locally as invertible as
    /// the scaling invariance allows.
    Certified,
    /// Kernel dimension at least two: cannot be locally invertible.
    Excluded,
    /// Minimal kernel but vanishing scalar curvature (or hypotheses not met).
    Undecided,
}

/// Everything the classifier decides about one metric point.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub kernel_dim: usize,
    pub in_m_ric: bool,
    pub scal: f64,
    pub in_m_scal: bool,
    /// Whether the determinant-weighted Ricci map is a local diffeomorphism,
    /// decided from its own Jacobian.
    pub in_m_ric_tilde: bool,
    pub certificate: Certificate,
    pub naturally_reductive: bool,
    pub p_irreducible: bool,
    /// Singular values of the variation matrix, descending.
    pub singular_values: Vec<f64>,
    pub unimodular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Classifies a metric by the rank of the Ricci variation and the sign of the
/// scalar curvature.
pub fn classify(geom: &Geometry, mp: &MetricPoint) -> ClassificationReport {
    let m = geom.m();
    let op = variation_operator(geom, mp);
    let singular_values = linalg::singular_values(&op.matrix);
    let rank = rank_from_singular_values(&singular_values, m, geom.tol.rank_coeff);
    let kernel_dim = m - rank;
    let rec = ricci(geom, mp);
    let in_m_scal = rec.scal.abs() > geom.tol.scal_zero(rec.moved_norm2);
    let in_m_ric = kernel_dim == 1;
    let in_m_ric_tilde = ricci_tilde_is_local_diffeo(geom, mp, &rec.ric_bar);
    let certificate = if !geom.unimodular {
        Certificate::Undecided
    } else if kernel_dim >= 2 {
        Certificate::Excluded
    } else if in_m_ric && in_m_scal {
        Certificate::Certified
    } else {
        Certificate::Undecided
    };
    let warning = if geom.unimodular {
        None
    } else {
        Some("group is not unimodular: rank data only, no invertibility certificate".to_string())
    };
    ClassificationReport {
        kernel_dim,
        in_m_ric,
        scal: rec.scal,
        in_m_scal,
        in_m_ric_tilde,
        certificate,
        naturally_reductive: naturally_reductive_check(geom, mp),
        p_irreducible: p_irreducible(geom),
        singular_values,
        unimodular: geom.unimodular,
        warning,
    }
}

/// Rank test for the determinant-weighted Ricci map: its differential in
/// tensor coordinates is `det * (tr(g^{-1} T) ric + d ric(T))`.
fn ricci_tilde_is_local_diffeo(geom: &Geometry, mp: &MetricPoint, ric_bar: &DMatrix<f64>) -> bool {
    let m = geom.m();
    let mut jac = DMatrix::zeros(m, m);
    let ric_coords = geom.basis.coords(ric_bar);
    for j in 0..m {
        let b = geom.basis.mat(j);
        let d = d_ricci_tensor(geom, mp, b);
        let col = (geom.basis.coords(&d) + &ric_coords * mp.trace_g(b)) * mp.det_rel;
        jac.set_column(j, &col);
    }
    let sv = linalg::singular_values(&jac);
    rank_from_singular_values(&sv, m, geom.tol.rank_coeff) == m
}

/// Whether `g_h` is naturally reductive with respect to the given complement:
/// every `ad_p X` must be skew for `<h., h.>`, i.e. `h^2 ad X + (ad X)^t h^2`
/// vanishes.
pub fn naturally_reductive_check(geom: &Geometry, mp: &MetricPoint) -> bool {
    let scale = 1.0 + mp.g.norm();
    for i in 0..geom.n_p() {
        let ad = geom.bracket.mu_p.ad_basis(i);
        let r = (&mp.g * &ad + ad.transpose() * &mp.g).norm();
        if r > geom.tol.nr_coeff * scale * (1.0 + ad.norm()) {
            return false;
        }
    }
    true
}

/// Holonomy irreducibility through the Casimir criterion: the kernel of
/// `cas_p` on the invariant symmetric operators is spanned by the identity.
/// Meaningful as an irreducibility certificate when the background metric is
/// naturally reductive; otherwise advisory.
pub fn p_irreducible(geom: &Geometry) -> bool {
    let c = casimir_p_matrix(geom);
    let sv = linalg::singular_values(&c);
    let m = geom.m();
    m - rank_from_singular_values(&sv, m, geom.tol.rank_coeff) == 1
}

/// Eigenvalue sign counts `(negative, zero, positive)` of a symmetric
/// operator, with the relative rank cutoff deciding zeros.
pub fn signature_of(t: &DMatrix<f64>, rank_coeff: f64) -> (usize, usize, usize) {
    let (vals, _) = linalg::eig_sym(&crate::linalg::symmetrize(t));
    let amax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = rank_coeff * amax * vals.len() as f64;
    let mut neg = 0;
    let mut zero = 0;
    let mut pos = 0;
    for v in vals.iter() {
        if v.abs() <= cut {
            zero += 1;
        } else if *v < 0.0 {
            neg += 1;
        } else {
            pos += 1;
        }
    }
    (neg, zero, pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use nalgebra::DVector;

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_vec(v.to_vec()))
    }

    #[test]
    fn berger_classification() {
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        for b in [0.1, 0.7, 2.0] {
            let mp = MetricPoint::from_tensor(geom, &diag(&[1.0, b, b])).unwrap();
            let rep = classify(geom, &mp);
            assert_eq!(rep.kernel_dim, 1, "b = {b}");
            assert_eq!(rep.certificate, Certificate::Certified, "b = {b}");
            assert_eq!(rep.in_m_ric_tilde, rep.in_m_ric && rep.in_m_scal);
        }
        // scal vanishes at b = 1/4: kernel is still minimal but no certificate
        let mp = MetricPoint::from_tensor(geom, &diag(&[1.0, 0.25, 0.25])).unwrap();
        let rep = classify(geom, &mp);
        assert_eq!(rep.kernel_dim, 1);
        assert!(!rep.in_m_scal);
        assert_eq!(rep.certificate, Certificate::Undecided);
        assert!(!rep.in_m_ric_tilde);
    }

    #[test]
    fn s5s1_is_never_invertible() {
        let entry = catalog::load("s5s1").unwrap();
        let geom = &entry.geometry;
        for params in entry.sample_params(6) {
            let mp = entry.metric_from_params(&params).unwrap();
            let rep = classify(geom, &mp);
            assert!(
                rep.kernel_dim >= 2,
                "params {params:?}: kernel {}",
                rep.kernel_dim
            );
            assert_eq!(rep.certificate, Certificate::Excluded);
        }
    }

    #[test]
    fn non_unimodular_gets_rank_data_only() {
        let entry = catalog::load("solv2").unwrap();
        let geom = &entry.geometry;
        let mp = MetricPoint::from_operator(geom, DMatrix::identity(2, 2)).unwrap();
        let rep = classify(geom, &mp);
        assert_eq!(rep.certificate, Certificate::Undecided);
        assert!(rep.warning.is_some());
    }

    #[test]
    fn ric_tilde_biconditional_on_unimodular_entries() {
        for name in ["berger", "heisenberg3", "unimod3-su2", "s5s5", "s3s1"] {
            let entry = catalog::load(name).unwrap();
            let geom = &entry.geometry;
            for mp in entry.sample_metrics(20) {
                let rep = classify(geom, &mp);
                assert_eq!(
                    rep.in_m_ric_tilde,
                    rep.in_m_ric && rep.in_m_scal,
                    "{name} at {:?}",
                    mp.coords
                );
            }
        }
    }

    #[test]
    fn natural_reductivity() {
        let entry = catalog::load("simple-killing:su2").unwrap();
        let geom = &entry.geometry;
        let id = MetricPoint::from_operator(geom, DMatrix::identity(3, 3)).unwrap();
        assert!(naturally_reductive_check(geom, &id));

        // Berger metrics with b != 1 fail the same-complement skewness test:
        // h no longer commutes with every ad_p X
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        let id = MetricPoint::from_operator(geom, DMatrix::identity(3, 3)).unwrap();
        assert!(naturally_reductive_check(geom, &id));
        let mp = MetricPoint::from_tensor(geom, &diag(&[1.0, 0.5, 0.5])).unwrap();
        assert!(!naturally_reductive_check(geom, &mp));

        // Heisenberg: ad X1 is nilpotent nonzero, never skew-symmetrizable by
        // an invariant h
        let entry = catalog::load("heisenberg3").unwrap();
        let geom = &entry.geometry;
        for mp in entry.sample_metrics(4) {
            assert!(!naturally_reductive_check(geom, &mp));
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert!(p_irreducible(
            &catalog::load("simple-killing:su2").unwrap().geometry
        ));
        // a product splits: the two block identities are in the kernel
        assert!(!p_irreducible(&catalog::load("s5s5").unwrap().geometry));
        assert!(p_irreducible(
            &catalog::load("so3so5-nonperv").unwrap().geometry
        ));
    }

    #[test]
    fn kernel_of_variation_equals_kernel_of_casimir_when_naturally_reductive() {
        for name in ["berger", "s5s5", "so4-dz", "nilpotent-2step:so2-r2"] {
            let entry = catalog::load(name).unwrap();
            let geom = &entry.geometry;
            let id = MetricPoint::from_operator(geom, DMatrix::identity(geom.n_p(), geom.n_p()))
                .unwrap();
            assert!(naturally_reductive_check(geom, &id), "{name}");
            let v = variation_operator(geom, &id).matrix;
            let c = casimir_p_matrix(geom);
            let sv_v = linalg::singular_values(&v);
            let sv_c = linalg::singular_values(&c);
            let m = geom.m();
            let kv = m - rank_from_singular_values(&sv_v, m, geom.tol.rank_coeff);
            let kc = m - rank_from_singular_values(&sv_c, m, geom.tol.rank_coeff);
            assert_eq!(kv, kc, "{name}");
        }
    }

    #[test]
    fn ricci_tilde_derivative_matches_finite_differences() {
        // the rank test uses det * (tr(g^{-1} B) ric + d ric(B)); check that
        // this really is the derivative of the determinant-weighted map
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        let mp = MetricPoint::from_tensor(geom, &diag(&[1.0, 0.6, 0.6])).unwrap();
        let rec = crate::curvature::ricci(geom, &mp);
        for j in 0..geom.m() {
            let b = geom.basis.mat(j);
            let analytic =
                (d_ricci_tensor(geom, &mp, b) + &rec.ric_bar * mp.trace_g(b)) * mp.det_rel;
            let t = 1e-6;
            let plus = MetricPoint::from_tensor(geom, &(&mp.g + b * t)).unwrap();
            let minus = MetricPoint::from_tensor(geom, &(&mp.g - b * t)).unwrap();
            let fd = (crate::curvature::ricci_tilde(geom, &plus)
                - crate::curvature::ricci_tilde(geom, &minus))
                / (2.0 * t);
            assert!((analytic - fd).norm() < 1e-6, "direction {j}");
        }
    }

    #[test]
    fn signatures() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!(signature_of(&id, 1e-8), (0, 0, 4));
        let entry = catalog::load("berger").unwrap();
        let geom = &entry.geometry;
        let mp = MetricPoint::from_tensor(geom, &diag(&[1.0, 0.3, 0.3])).unwrap();
        let rec = crate::curvature::ricci(geom, &mp);
        assert_eq!(signature_of(&rec.ric_bar, geom.tol.rank_coeff), (2, 0, 1));
    }
}
