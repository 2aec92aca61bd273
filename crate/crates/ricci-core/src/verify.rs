//! Per-space verification suites: structural residuals, moment-map duality,
//! analytic-versus-finite-difference checks and the variational identities.
//! The command line exposes these as `verify`; the acceptance tests reuse
//! them directly.

use crate::catalog::CatalogEntry;
use crate::curvature::{moment_map_of, moved_bracket, ricci};
use crate::invariant::MetricPoint;
use crate::invertibility::naturally_reductive_check;
use crate::linalg::eig_sym;
use crate::rng::{random_matrix, SplitMix64};
use crate::solver::verify_scal_gradient;
use crate::space::theta_action;
use crate::variation::{
    casimir_p_matrix, d_moment_map, d_ricci_tensor, finite_difference_dric, variation_operator,
};
use nalgebra::DMatrix;
use serde::Serialize;

/// One verification check: a residual against its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tol,
            pass: residual <= tol,
        }
    }
}

/// Runs the full oracle suite over one catalog entry.
pub fn run_suite(entry: &CatalogEntry, seed: u64) -> Vec<Check> {
    let geom = &entry.geometry;
    let mut rng = SplitMix64::new(seed ^ 0x5eed);
    let mut checks = Vec::new();

    let report = crate::space::validate_jacobi(&geom.spec, &geom.tol);
    checks.push(Check::new("jacobi", report.max_residual, report.jacobi_tol));
    checks.push(Check::new("reductivity", report.reductivity_residual, 0.0));
    checks.push(Check::new(
        "killing-ad-invariance",
        geom.spec.killing_invariance_residual(),
        1e-10,
    ));

    // theta is a representation on random data
    let n = geom.n_p();
    let mut rep_residual: f64 = 0.0;
    for _ in 0..5 {
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        let mut lam = crate::space::Lambda2::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                for l in 0..n {
                    lam.set_pair(i, j, l, rng.next_signed());
                }
            }
        }
        let comm = &a * &b - &b * &a;
        let lhs = theta_action(&comm, &lam).unwrap();
        let rhs = theta_action(&a, &theta_action(&b, &lam).unwrap())
            .unwrap()
            .add(
                &theta_action(&b, &theta_action(&a, &lam).unwrap())
                    .unwrap()
                    .scale(-1.0),
            );
        let scale = 1.0 + lhs.norm2().sqrt();
        rep_residual = rep_residual.max(lhs.add(&rhs.scale(-1.0)).norm2().sqrt() / scale);
    }
    checks.push(Check::new("theta-representation", rep_residual, 1e-9));

    let metrics = entry.sample_metrics(5);

    // moment map duality and trace identity
    let mut duality: f64 = 0.0;
    let mut trace_id: f64 = 0.0;
    for mp in &metrics {
        let moved = moved_bracket(geom, mp);
        let m = moment_map_of(&moved);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, n);
            let lhs = (&m * a.transpose()).trace();
            let rhs = 0.25 * theta_action(&a, &moved).unwrap().inner(&moved);
            duality = duality.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
        }
        let norm2 = moved.norm2();
        trace_id = trace_id.max((m.trace() + 0.25 * norm2).abs() / (1.0 + norm2));
    }
    checks.push(Check::new("moment-map-duality", duality, 1e-10));
    checks.push(Check::new("moment-map-trace", trace_id, 1e-10));

    // scale invariance of the Ricci tensor operator
    let mut scale_inv: f64 = 0.0;
    for mp in metrics.iter().take(2) {
        let base = ricci(geom, mp).ric_bar;
        for a in [0.5, 2.0, 10.0] {
            let scaled = mp.scaled(geom, a).expect("scaling keeps positivity");
            let other = ricci(geom, &scaled).ric_bar;
            scale_inv = scale_inv.max((&other - &base).norm() / (1.0 + base.norm()));
        }
    }
    checks.push(Check::new("ricci-scale-invariance", scale_inv, 1e-10));

    // Ricci stays in the invariant span
    let mut equivariance: f64 = 0.0;
    for mp in &metrics {
        let rec = ricci(geom, mp);
        equivariance = equivariance
            .max(geom.basis.projection_defect(&rec.ric_bar) / (1.0 + rec.ric_bar.norm()));
    }
    checks.push(Check::new("ricci-equivariance", equivariance, 1e-9));

    // analytic variation vs central differences
    let mut fd_gap: f64 = 0.0;
    for mp in &metrics {
        let dir = geom
            .basis
            .project(&crate::rng::random_symmetric(&mut rng, n));
        let analytic = d_ricci_tensor(geom, mp, &dir);
        let step = geom.tol.fd_step(mp.h.norm());
        if let Ok(fd) = finite_difference_dric(geom, mp, &dir, step) {
            fd_gap = fd_gap.max((&analytic - &fd).norm() / (1.0 + analytic.norm()));
        } else {
            fd_gap = f64::INFINITY;
        }
    }
    checks.push(Check::new("variation-vs-finite-difference", fd_gap, 1e-6));

    // moment-map first variation vs finite differences
    let mut dm_gap: f64 = 0.0;
    for _ in 0..3 {
        let a = geom
            .basis
            .project(&crate::rng::random_symmetric(&mut rng, n))
            * 0.3;
        let analytic = d_moment_map(&geom.bracket.mu_p, &a);
        let t = 1e-6;
        let id = DMatrix::identity(n, n);
        let plus = MetricPoint::from_operator(geom, &id + &a * t).expect("near identity");
        let minus = MetricPoint::from_operator(geom, &id - &a * t).expect("near identity");
        let fd = (crate::curvature::moment_map(geom, &plus)
            - crate::curvature::moment_map(geom, &minus))
            / (2.0 * t);
        dm_gap = dm_gap.max((analytic - fd).norm() / (1.0 + 1.0));
    }
    checks.push(Check::new(
        "moment-variation-vs-finite-difference",
        dm_gap,
        1e-6,
    ));

    if geom.unimodular {
        // self-adjointness and image orthogonal to the scaling line
        let mut sym_res: f64 = 0.0;
        let mut imort: f64 = 0.0;
        for mp in &metrics {
            let op = variation_operator(geom, mp);
            let scale = 1.0 + op.matrix.norm();
            sym_res = sym_res.max((&op.matrix - op.matrix.transpose()).norm() / scale);
            let id_coords = geom.basis.coords(&DMatrix::identity(n, n));
            imort = imort.max((op.matrix.transpose() * id_coords).norm() / scale);
        }
        checks.push(Check::new("variation-self-adjoint", sym_res, 1e-9));
        checks.push(Check::new("variation-image-orthogonal", imort, 1e-9));

        // gradient of the scalar curvature functional
        let mut grad_gap: f64 = 0.0;
        for mp in metrics.iter().take(3) {
            match verify_scal_gradient(geom, mp) {
                Ok(r) => grad_gap = grad_gap.max(r),
                Err(_) => grad_gap = f64::INFINITY,
            }
        }
        checks.push(Check::new("scal-gradient-identity", grad_gap, 1e-6));
    }

    // naturally reductive background: variation equals half the Casimir
    let id_point = MetricPoint::from_operator(geom, DMatrix::identity(n, n));
    if let Ok(idp) = id_point {
        if naturally_reductive_check(geom, &idp) {
            let v = variation_operator(geom, &idp).matrix;
            let c = casimir_p_matrix(geom);
            let gap = (&v - &c * 0.5).norm() / (1.0 + v.norm());
            checks.push(Check::new("naturally-reductive-half-casimir", gap, 1e-9));
            let (vals, _) = eig_sym(&c);
            checks.push(Check::new(
                "casimir-positive-semidefinite",
                (-vals[0]).max(0.0),
                1e-10,
            ));
        }
    }

    checks
}

/// Runs the suite over every catalog entry; returns per-entry results and the
/// overall verdict.
pub fn run_all(seed: u64) -> (Vec<(String, Vec<Check>)>, bool) {
    let mut all = Vec::new();
    let mut ok = true;
    for name in crate::catalog::names() {
        let entry = crate::catalog::load(name).expect("catalog entries load");
        let checks = run_suite(&entry, seed);
        ok &= checks.iter().all(|c| c.pass);
        all.push((name.to_string(), checks));
    }
    (all, ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn suites_pass_on_representative_entries() {
        for name in [
            "berger",
            "heisenberg3",
            "solv2",
            "s5s1",
            "nilpotent-2step:so2-r2",
        ] {
            let entry = catalog::load(name).unwrap();
            let checks = run_suite(&entry, 1);
            for c in &checks {
                assert!(
                    c.pass,
                    "{name}/{}: residual {:.3e} > {:.3e}",
                    c.name, c.residual, c.tol
                );
            }
        }
    }
}
