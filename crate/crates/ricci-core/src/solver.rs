//! Solvers for the prescribed Ricci problem `ric(g) = c T`: a damped Newton
//! iteration in invariant coordinates with a determinant normalization, the
//! variational gradient identity as a cross-check, and the closed form for
//! bi-invariant block families.

use crate::curvature::ricci;
use crate::invariant::{MetricError, MetricPoint};
use crate::invertibility::{classify, Certificate};
use crate::linalg::{self, rank_from_singular_values};
use crate::space::Geometry;
use crate::variation::{finite_difference_scal, ricci_bar_h_derivative};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("Newton did not converge in {iterations} iterations (residual {residual:.3e})")]
    MaxIterations { iterations: usize, residual: f64 },
    #[error("Jacobian is singular at the current iterate (kernel dimension {kernel_dim})")]
    SingularJacobian { kernel_dim: usize },
    #[error("the constant c was driven to zero: the target's signature obstructs a solution")]
    ConstantUnderflow,
    #[error("line search could not keep the iterate positive definite")]
    LineSearchFailed,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Error)]
pub enum DzError {
    #[error("block {index} is infeasible: T_i = {t_i} must exceed k_i/4 = {quarter_k}")]
    BlockInfeasible {
        index: usize,
        t_i: f64,
        quarter_k: f64,
    },
    #[error("the fixed-block coefficient {got} does not match the compatibility value {expected} (tolerance {tol:.3e})")]
    Incompatible { got: f64, expected: f64, tol: f64 },
    #[error("block structure does not describe this space: {0}")]
    BadBlocks(String),
}

/// Options for the Newton solve.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Extra factor on the convergence tolerance (1.0 = default policy).
    pub tol_factor: f64,
    pub record_path: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iterations: 200,
            tol_factor: 1.0,
            record_path: false,
        }
    }
}

/// A solution of `ric_bar(h) = c T` with `det(g_h)` pinned.
#[derive(Debug, Clone, Serialize)]
pub struct PrpSolution {
    /// Coordinates of the solution `h` in the orthonormal invariant basis.
    pub coords: Vec<f64>,
    pub c: f64,
    pub residual: f64,
    pub iterations: usize,
    pub det_rel: f64,
    /// Whether the starting metric carried an invertibility certificate.
    pub certified_start: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<(usize, f64)>>,
    #[serde(skip)]
    pub metric: Option<MetricPointBox>,
}

/// Opaque wrapper so the solution can carry the metric without serializing it.
#[derive(Debug, Clone)]
pub struct MetricPointBox(pub MetricPoint);

/// Damped Newton on `F(x, gamma) = (ric_bar(h(x)) - e^gamma T, log det - log target)`.
/// The constant is parameterized as `c = e^gamma` to stay positive, and steps
/// are halved until the iterate is positive definite and the residual drops.
pub fn solve_prp(
    geom: &Geometry,
    target: &DMatrix<f64>,
    start: &MetricPoint,
    normalization: f64,
    opts: &SolveOptions,
) -> Result<PrpSolution, SolveError> {
    let m = geom.m();
    let t_coords = geom.basis.coords(target);
    let t_norm = target.norm();
    let tol = geom.tol.solve(t_norm) * opts.tol_factor;
    let start_report = classify(geom, start);
    let certified_start = start_report.certificate == Certificate::Certified;
    let warning = if certified_start {
        None
    } else {
        Some(
            "start metric carries no invertibility certificate: no local uniqueness guarantee"
                .to_string(),
        )
    };

    let mut mp = start.clone();
    // initialize c from the least-squares fit of ric(start) against T
    let rec0 = ricci(geom, &mp);
    let fit = geom.basis.coords(&rec0.ric_bar).dot(&t_coords) / t_coords.norm_squared().max(1e-300);
    let mut gamma: f64 = if fit > 0.0 { fit.ln() } else { 0.0 };
    let mut path = Vec::new();

    let residual_vec = |mp: &MetricPoint, gamma: f64| -> DVector<f64> {
        let rec = ricci(geom, mp);
        let mut f = DVector::zeros(m + 1);
        let r = geom.basis.coords(&rec.ric_bar) - &t_coords * gamma.exp();
        for i in 0..m {
            f[i] = r[i];
        }
        f[m] = mp.det_rel.ln() - normalization.ln();
        f
    };

    let mut f = residual_vec(&mp, gamma);
    for iter in 0..opts.max_iterations {
        let fnorm = f.norm();
        if opts.record_path {
            path.push((iter, fnorm));
        }
        if fnorm < tol {
            return Ok(PrpSolution {
                coords: mp.coords.iter().cloned().collect(),
                c: gamma.exp(),
                residual: fnorm,
                iterations: iter,
                det_rel: mp.det_rel,
                certified_start,
                warning,
                path: if opts.record_path { Some(path) } else { None },
                metric: Some(MetricPointBox(mp)),
            });
        }
        if gamma < -40.0 {
            return Err(SolveError::ConstantUnderflow);
        }

        // Jacobian: d ric_bar / d coords, the c-column and the log-det row
        let mut jac = DMatrix::zeros(m + 1, m + 1);
        for j in 0..m {
            let e = geom.basis.mat(j);
            let col = geom.basis.coords(&ricci_bar_h_derivative(geom, &mp, e));
            for i in 0..m {
                jac[(i, j)] = col[i];
            }
            jac[(m, j)] = 2.0 * (&mp.h_inv * e).trace();
        }
        let c = gamma.exp();
        for i in 0..m {
            jac[(i, m)] = -c * t_coords[i];
        }

        let lu = jac.clone().lu();
        let step = match lu.solve(&(-&f)) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => {
                let sv = linalg::singular_values(&jac);
                let rank = rank_from_singular_values(&sv, m + 1, geom.tol.rank_coeff);
                return Err(SolveError::SingularJacobian {
                    kernel_dim: (m + 1 - rank).max(1),
                });
            }
        };

        // Armijo backtracking with a positivity safeguard
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let x_new = &mp.coords + step.rows(0, m) * alpha;
            let gamma_new = gamma + alpha * step[m];
            if let Ok(cand) = MetricPoint::from_coords(geom, &x_new) {
                let f_new = residual_vec(&cand, gamma_new);
                if f_new.norm_squared() <= (1.0 - 1e-4 * alpha) * fnorm * fnorm {
                    accepted = Some((cand, gamma_new, f_new));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((cand, gamma_new, f_new)) => {
                mp = cand;
                gamma = gamma_new;
                f = f_new;
            }
            None => return Err(SolveError::LineSearchFailed),
        }
    }
    Err(SolveError::MaxIterations {
        iterations: opts.max_iterations,
        residual: f.norm(),
    })
}

/// Block structure of a bi-invariant family: the Lie algebra is carried by p
/// (trivial isotropy inside p is not required, but the blocks must be
/// p-index sets), with one distinguished irreducible block and r subalgebra
/// blocks.
#[derive(Debug, Clone)]
pub struct DzBlocks {
    /// p-indices of the irreducible complement block.
    pub a_block: Vec<usize>,
    /// p-indices of each subalgebra block.
    pub k_blocks: Vec<Vec<usize>>,
}

/// Closed-form solution data for a block family.
#[derive(Debug, Clone)]
pub struct DzSolution {
    /// Metric coefficients `(a, b_1 .. b_r)` with the `a`-block pinned to 1.
    pub a: f64,
    pub b: Vec<f64>,
    /// Casimir constants `k_i` of the subalgebra blocks.
    pub k_consts: Vec<f64>,
    /// The full metric tensor assembled from the blocks.
    pub tensor: DMatrix<f64>,
}

/// Solves `ric(g) = T` in closed form for a metric `g = a <,>_a + sum b_i <,>_i`
/// on a bi-invariant block family: `b_i/a = sqrt((4 T_i - k_i)/(1 - k_i))`
/// provided every `T_i > k_i/4` and the coefficient on the irreducible block
/// matches the compatibility value it forces.
pub fn dz_closed_form(
    geom: &Geometry,
    blocks: &DzBlocks,
    t_a: f64,
    t_blocks: &[f64],
) -> Result<DzSolution, DzError> {
    if t_blocks.len() != blocks.k_blocks.len() {
        return Err(DzError::BadBlocks(format!(
            "{} block coefficients for {} blocks",
            t_blocks.len(),
            blocks.k_blocks.len()
        )));
    }
    let n_p = geom.n_p();
    let covered: usize = blocks.a_block.len() + blocks.k_blocks.iter().map(Vec::len).sum::<usize>();
    if covered != n_p {
        return Err(DzError::BadBlocks(format!(
            "blocks cover {covered} of {n_p} directions"
        )));
    }
    let k_consts = casimir_constants(geom, blocks)?;
    let dim_a = blocks.a_block.len() as f64;
    let mut b = Vec::new();
    let mut compat = 0.25;
    for (i, (k_i, t_i)) in k_consts.iter().zip(t_blocks.iter()).enumerate() {
        let quarter_k = 0.25 * k_i;
        if *t_i <= quarter_k + 1e-14 {
            return Err(DzError::BlockInfeasible {
                index: i,
                t_i: *t_i,
                quarter_k,
            });
        }
        let ratio = ((4.0 * t_i - k_i) / (1.0 - k_i)).sqrt();
        b.push(ratio);
        let dim_i = blocks.k_blocks[i].len() as f64;
        compat -= dim_i / (2.0 * dim_a) * (((4.0 * t_i - k_i) * (1.0 - k_i)).sqrt() + k_i - 1.0);
    }
    let tol = 1e-9 * (1.0 + t_a.abs() + compat.abs());
    if (t_a - compat).abs() > tol {
        return Err(DzError::Incompatible {
            got: t_a,
            expected: compat,
            tol,
        });
    }
    let mut tensor = DMatrix::zeros(n_p, n_p);
    for &i in &blocks.a_block {
        tensor[(i, i)] = 1.0;
    }
    for (bi, block) in b.iter().zip(blocks.k_blocks.iter()) {
        for &i in block {
            tensor[(i, i)] = *bi;
        }
    }
    Ok(DzSolution {
        a: 1.0,
        b,
        k_consts,
        tensor,
    })
}

/// Casimir constants `k_i` defined by `kil_{k_i} = k_i kil_p|_{k_i}` on each
/// subalgebra block, computed from the bracket restricted to the block.
fn casimir_constants(geom: &Geometry, blocks: &DzBlocks) -> Result<Vec<f64>, DzError> {
    let mu = &geom.bracket.mu_p;
    let mut out = Vec::new();
    for (bi, block) in blocks.k_blocks.iter().enumerate() {
        // Killing form of the block subalgebra in its own basis
        let d = block.len();
        let mut kil_block = DMatrix::zeros(d, d);
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                let mut acc = 0.0;
                for &x in block {
                    for &y in block {
                        acc += mu.get(i, x, y) * mu.get(j, y, x);
                    }
                }
                kil_block[(r, c)] = acc;
            }
        }
        // Killing form of the whole p-algebra restricted to the block: the
        // bracket on p is the Lie bracket of the group being metrized
        let mut kil_full = DMatrix::zeros(d, d);
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate() {
                kil_full[(r, c)] = (mu.ad_basis(i) * mu.ad_basis(j)).trace();
            }
        }
        let denom = kil_full.norm_squared();
        if denom < 1e-20 {
            return Err(DzError::BadBlocks(format!(
                "block {bi} has a degenerate Killing form"
            )));
        }
        // least squares ratio; must fit to roundoff for a genuine block family
        let k = (kil_block.component_mul(&kil_full)).sum() / denom;
        let fit = (&kil_block - &kil_full * k).norm();
        if fit > 1e-8 * (1.0 + kil_block.norm()) {
            return Err(DzError::BadBlocks(format!(
                "block {bi}: sub-Killing form is not proportional to the restriction (defect {fit:.3e})"
            )));
        }
        out.push(k);
    }
    Ok(out)
}

/// Residual of the gradient identity for the scalar curvature functional:
/// directional derivatives of `scal` must match `-<ric, .>_g` in every
/// invariant direction.  Returns the largest relative defect.
pub fn verify_scal_gradient(
    geom: &Geometry,
    mp: &MetricPoint,
) -> Result<f64, crate::variation::VariationError> {
    let rec = ricci(geom, mp);
    let step = geom.tol.fd_step(mp.h.norm());
    let mut worst: f64 = 0.0;
    for j in 0..geom.m() {
        let dir = geom.basis.mat(j);
        let fd = finite_difference_scal(geom, mp, dir, step)?;
        let analytic = -mp.inner(&rec.ric_bar, dir);
        worst = worst.max((fd - analytic).abs() / (1.0 + analytic.abs()));
    }
    Ok(worst)
}

/// Norm of the projection of `ric(g)` onto the tangent space of the
/// constraint `tr_g T = const`, i.e. `|ric - (<ric,T>_g / <T,T>_g) T|_g`.
/// Vanishes exactly when `ric(g)` is proportional to `T`.
pub fn critical_point_residual(geom: &Geometry, mp: &MetricPoint, t: &DMatrix<f64>) -> f64 {
    let rec = ricci(geom, mp);
    let tt = mp.inner(t, t);
    if tt == 0.0 {
        return (mp.inner(&rec.ric_bar, &rec.ric_bar)).sqrt();
    }
    let lambda = mp.inner(&rec.ric_bar, t) / tt;
    let diff = &rec.ric_bar - t * lambda;
    mp.inner(&diff, &diff).max(0.0).sqrt()
}
