//! Central tolerance policy.  All thresholds are relative to the scale of the
//! data they test; the raw coefficients below are the only magic numbers.

/// Tolerances used across validation, rank decisions and solves.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Jacobi residual allowance per unit structure-constant scale.
    pub jacobi_coeff: f64,
    /// Vector-norm zero test (mean curvature, residual vectors).
    pub vec_coeff: f64,
    /// A singular value sigma counts as nonzero iff sigma > rank_coeff * sigma_max * dim.
    pub rank_coeff: f64,
    /// Commutant membership residual per unit operator norm.
    pub commutant_coeff: f64,
    /// Natural reductivity residual per unit scale.
    pub nr_coeff: f64,
    /// Scalar curvature counts as nonzero iff |scal| > scal_coeff * (1 + |mu_p|^2).
    pub scal_coeff: f64,
    /// Default finite-difference step per unit metric norm.
    pub fd_step_coeff: f64,
    /// Newton convergence: ||F|| < solve_coeff * (1 + ||T||).
    pub solve_coeff: f64,
    /// Metrics with condition number above this are rejected.
    pub cond_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            jacobi_coeff: 1e-10,
            vec_coeff: 1e-10,
            rank_coeff: 1e-8,
            commutant_coeff: 1e-9,
            nr_coeff: 1e-9,
            scal_coeff: 1e-8,
            fd_step_coeff: 1e-5,
            solve_coeff: 1e-10,
            cond_max: 1e12,
        }
    }
}

impl Tolerances {
    /// Jacobi tolerance for structure constants with max entry `c_max`.
    pub fn jacobi(&self, c_max: f64) -> f64 {
        let s = 1.0 + c_max;
        self.jacobi_coeff * s * s * s
    }

    /// Zero test for vectors built from constants with sup norm `c_max`.
    pub fn vec(&self, c_max: f64) -> f64 {
        self.vec_coeff * (1.0 + c_max)
    }

    /// Commutant residual allowance for an operator of norm `h_norm`.
    pub fn commutant(&self, h_norm: f64) -> f64 {
        self.commutant_coeff * (1.0 + h_norm)
    }

    /// Scalar-curvature zero threshold at bracket scale `mu_norm2`.
    pub fn scal_zero(&self, mu_norm2: f64) -> f64 {
        self.scal_coeff * (1.0 + mu_norm2)
    }

    /// Finite difference step for a metric of norm `h_norm`.
    pub fn fd_step(&self, h_norm: f64) -> f64 {
        self.fd_step_coeff * (1.0 + h_norm)
    }

    /// Newton convergence threshold for a target of norm `t_norm`.
    pub fn solve(&self, t_norm: f64) -> f64 {
        self.solve_coeff * (1.0 + t_norm)
    }
}
