//! Lie algebras with a reductive decomposition `g = k (+) p` and a background
//! inner product for which the declared basis of `p` is orthonormal.
//!
//! The basis is ordered so that `e_1 .. e_{n_k}` span `k` and the remaining
//! vectors span `p`.  Structure constants are stored densely; everything here
//! is desk scale.

use crate::invariant::{commutant_sym_basis, InvariantSymBasis};
use crate::tol::Tolerances;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("structure constants are not antisymmetric (residual {0:.3e})")]
    Antisymmetry(f64),
    #[error("Jacobi identity fails (residual {residual:.3e}, tolerance {tol:.3e})")]
    Jacobi { residual: f64, tol: f64 },
    #[error("decomposition is not reductive: [k,p] leaks into k (residual {0:.3e})")]
    NotReductive(f64),
    #[error("extra isotropy generator {index} is not orthogonal (residual {residual:.3e})")]
    GeneratorNotOrthogonal { index: usize, residual: f64 },
    #[error("bad dimensions: n_k = {n_k} must be < n_g = {n_g}")]
    Dimensions { n_g: usize, n_k: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("space-spec JSON: {0}")]
    Json(String),
}

/// Alternating 2-forms on `p` with values in `p`, stored as a dense
/// `[i][j][l]` tensor: `lambda(X_i, X_j) = sum_l t[i][j][l] X_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda2 {
    pub n: usize,
    data: Vec<f64>,
}

impl Lambda2 {
    pub fn zeros(n: usize) -> Self {
        Lambda2 {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, l: usize, v: f64) {
        self.data[(i * self.n + j) * self.n + l] = v;
    }

    /// Sets both (i,j,l) and the antisymmetric partner (j,i,l).
    pub fn set_pair(&mut self, i: usize, j: usize, l: usize, v: f64) {
        self.set(i, j, l, v);
        self.set(j, i, l, -v);
    }

    /// Matrix of `ad(X_i): Y -> lambda(X_i, Y)`.
    pub fn ad_basis(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |l, j| self.get(i, j, l))
    }

    /// Matrix of `ad(x)` for an arbitrary vector `x` in coordinates.
    pub fn ad_vec(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let c = x[i];
            if c != 0.0 {
                for j in 0..self.n {
                    for l in 0..self.n {
                        m[(l, j)] += c * self.get(i, j, l);
                    }
                }
            }
        }
        m
    }

    /// `lambda(x, y)` for coordinate vectors.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for i in 0..self.n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..self.n {
                let c = x[i] * y[j];
                if c != 0.0 {
                    for l in 0..self.n {
                        out[l] += c * self.get(i, j, l);
                    }
                }
            }
        }
        out
    }

    /// Squared norm `sum_{i,j} |lambda(X_i, X_j)|^2` (both orders counted).
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn inner(&self, other: &Lambda2) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scale(&self, s: f64) -> Lambda2 {
        Lambda2 {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Lambda2) -> Lambda2 {
        Lambda2 {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Pushforward `(h . lambda)(x, y) = h lambda(h^{-1} x, h^{-1} y)` by an
    /// invertible `h` with inverse `h_inv`.
    pub fn moved_by(&self, h: &DMatrix<f64>, h_inv: &DMatrix<f64>) -> Lambda2 {
        let n = self.n;
        // contract the value slot, then the two argument slots
        let mut t1 = Lambda2::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for c in 0..n {
                        acc += h[(l, c)] * self.get(i, j, c);
                    }
                    t1.set(i, j, l, acc);
                }
            }
        }
        let mut t2 = Lambda2::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        acc += h_inv[(a, i)] * t1.get(a, j, l);
                    }
                    t2.set(i, j, l, acc);
                }
            }
        }
        let mut t3 = Lambda2::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for b in 0..n {
                        acc += h_inv[(b, j)] * t2.get(i, b, l);
                    }
                    t3.set(i, j, l, acc);
                }
            }
        }
        t3
    }
}

/// Representation `theta(A) lambda = A lambda(.,.) - lambda(A.,.) - lambda(.,A.)`.
pub fn theta_action(a: &DMatrix<f64>, lambda: &Lambda2) -> Result<Lambda2, SpaceError> {
    let n = lambda.n;
    if a.nrows() != n || a.ncols() != n {
        return Err(SpaceError::Shape(format!(
            "theta: operator is {}x{}, tensor lives on dimension {}",
            a.nrows(),
            a.ncols(),
            n
        )));
    }
    let mut out = Lambda2::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for m in 0..n {
                    acc += a[(l, m)] * lambda.get(i, j, m);
                    acc -= a[(m, i)] * lambda.get(m, j, l);
                    acc -= a[(m, j)] * lambda.get(i, m, l);
                }
                out.set(i, j, l, acc);
            }
        }
    }
    Ok(out)
}

/// A homogeneous space instance: structure constants of `g`, the reductive
/// split and optional extra orthogonal isotropy generators for disconnected
/// isotropy groups.
#[derive(Debug, Clone)]
pub struct SpaceSpec {
    pub name: String,
    pub n_g: usize,
    pub n_k: usize,
    /// Dense structure constants of g, `c[(i*n_g + j)*n_g + l]`.
    c: Vec<f64>,
    pub extra_isotropy: Vec<DMatrix<f64>>,
    pub assume_effective: bool,
}

/// Report of the structural validation of a [`SpaceSpec`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub antisymmetry_residual: f64,
    pub max_residual: f64,
    pub jacobi_tol: f64,
    pub reductivity_residual: f64,
    pub pass: bool,
}

/// Killing form data of a space.
#[derive(Debug, Clone)]
pub struct KillingData {
    /// Killing form of g in the full basis.
    pub b_g: DMatrix<f64>,
    /// Operator of the restriction to p in the orthonormal p-basis.
    pub kil_p: DMatrix<f64>,
    /// Mean curvature vector `<H, X> = tr ad_p X` in p-coordinates.
    pub h: DVector<f64>,
}

impl SpaceSpec {
    pub fn new(name: impl Into<String>, n_g: usize, n_k: usize) -> Result<Self, SpaceError> {
        if n_k >= n_g || n_g == 0 {
            return Err(SpaceError::Dimensions { n_g, n_k });
        }
        Ok(SpaceSpec {
            name: name.into(),
            n_g,
            n_k,
            c: vec![0.0; n_g * n_g * n_g],
            extra_isotropy: Vec::new(),
            assume_effective: true,
        })
    }

    pub fn n_p(&self) -> usize {
        self.n_g - self.n_k
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, l: usize) -> f64 {
        self.c[(i * self.n_g + j) * self.n_g + l]
    }

    /// Sets `[e_i, e_j] += v e_l` together with the antisymmetric partner.
    pub fn set_bracket(&mut self, i: usize, j: usize, l: usize, v: f64) {
        let n = self.n_g;
        self.c[(i * n + j) * n + l] = v;
        self.c[(j * n + i) * n + l] = -v;
    }

    pub fn max_c(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `ad(e_i)` on all of g.
    pub fn ad_g(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n_g, self.n_g, |l, j| self.c(i, j, l))
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n_g;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    r = r.max((self.c(i, j, l) + self.c(j, i, l)).abs());
                }
            }
        }
        r
    }

    /// Max Jacobi defect over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.n_g;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for m in 0..n {
                        let mut acc = 0.0;
                        for l in 0..n {
                            acc += self.c(i, j, l) * self.c(l, k, m);
                            acc += self.c(j, k, l) * self.c(l, i, m);
                            acc += self.c(k, i, l) * self.c(l, j, m);
                        }
                        worst = worst.max(acc.abs());
                    }
                }
            }
        }
        worst
    }

    /// Norm of the forbidden blocks `[k, p] -> k`.
    pub fn reductivity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.n_k {
            for j in self.n_k..self.n_g {
                for l in 0..self.n_k {
                    r = r.max(self.c(i, j, l).abs());
                }
            }
        }
        r
    }

    /// Projection of `mu` restricted to p x p onto p, plus the isotropy
    /// matrices `ad(Z)|_p` for the k-basis.
    pub fn bracket_tensor(&self) -> BracketTensor {
        let n_k = self.n_k;
        let n_p = self.n_p();
        let mut mu_p = Lambda2::zeros(n_p);
        for i in 0..n_p {
            for j in 0..n_p {
                for l in 0..n_p {
                    mu_p.set(i, j, l, self.c(n_k + i, n_k + j, n_k + l));
                }
            }
        }
        let ad_k = (0..n_k)
            .map(|z| DMatrix::from_fn(n_p, n_p, |l, j| self.c(z, n_k + j, n_k + l)))
            .collect();
        BracketTensor { mu_p, ad_k }
    }

    pub fn killing_form(&self) -> KillingData {
        let n = self.n_g;
        let ads: Vec<DMatrix<f64>> = (0..n).map(|i| self.ad_g(i)).collect();
        let mut b_g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = (&ads[i] * &ads[j]).trace();
                b_g[(i, j)] = v;
                b_g[(j, i)] = v;
            }
        }
        let n_p = self.n_p();
        let kil_p = DMatrix::from_fn(n_p, n_p, |a, b| b_g[(self.n_k + a, self.n_k + b)]);
        let bt = self.bracket_tensor();
        let h = DVector::from_fn(n_p, |a, _| bt.mu_p.ad_basis(a).trace());
        KillingData { b_g, kil_p, h }
    }

    /// Largest violation of `B([x,y],z) + B(y,[x,z]) = 0` over basis triples,
    /// relative to |B|.
    pub fn killing_invariance_residual(&self) -> f64 {
        let kd = self.killing_form();
        let n = self.n_g;
        let scale = 1.0 + kd.b_g.norm();
        let mut worst: f64 = 0.0;
        for x in 0..n {
            let adx = self.ad_g(x);
            let m = adx.transpose() * &kd.b_g + &kd.b_g * &adx;
            worst = worst.max(m.amax());
        }
        worst / scale
    }
}

/// Jacobi validation (antisymmetry is assumed to already hold).
pub fn validate_jacobi(spec: &SpaceSpec, tol: &Tolerances) -> ValidationReport {
    let anti = spec.antisymmetry_residual();
    let jac = spec.jacobi_residual();
    let red = spec.reductivity_residual();
    let jtol = tol.jacobi(spec.max_c());
    ValidationReport {
        antisymmetry_residual: anti,
        max_residual: jac,
        jacobi_tol: jtol,
        reductivity_residual: red,
        pass: jac <= jtol,
    }
}

/// True iff the mean curvature vector vanishes.
pub fn check_unimodular(spec: &SpaceSpec, tol: &Tolerances) -> bool {
    spec.killing_form().h.norm() <= tol.vec(spec.max_c())
}

/// Whether the k-projections of `[p, p]` span all of k.
pub fn pervasive_check(spec: &SpaceSpec, tol: &Tolerances) -> bool {
    let n_k = spec.n_k;
    if n_k == 0 {
        return true;
    }
    let n_p = spec.n_p();
    let pairs = n_p * (n_p - 1) / 2;
    let mut m = DMatrix::zeros(pairs, n_k);
    let mut row = 0;
    for i in 0..n_p {
        for j in (i + 1)..n_p {
            for l in 0..n_k {
                m[(row, l)] = spec.c(n_k + i, n_k + j, l);
            }
            row += 1;
        }
    }
    let sv = crate::linalg::singular_values(&m);
    crate::linalg::rank_from_singular_values(&sv, pairs.max(n_k), tol.rank_coeff) == n_k
}

/// The p-part of the bracket and the isotropy action on p.
#[derive(Debug, Clone)]
pub struct BracketTensor {
    pub mu_p: Lambda2,
    pub ad_k: Vec<DMatrix<f64>>,
}

/// A validated space with everything h-independent precomputed: bracket
/// tensor, Killing data, invariant symmetric basis and unimodularity.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub spec: SpaceSpec,
    pub bracket: BracketTensor,
    pub killing: KillingData,
    pub basis: InvariantSymBasis,
    pub unimodular: bool,
    pub tol: Tolerances,
}

impl Geometry {
    pub fn new(spec: SpaceSpec) -> Result<Self, SpaceError> {
        Geometry::with_tolerances(spec, Tolerances::default())
    }

    pub fn with_tolerances(spec: SpaceSpec, tol: Tolerances) -> Result<Self, SpaceError> {
        let anti = spec.antisymmetry_residual();
        if anti > 0.0 {
            return Err(SpaceError::Antisymmetry(anti));
        }
        let report = validate_jacobi(&spec, &tol);
        if !report.pass {
            return Err(SpaceError::Jacobi {
                residual: report.max_residual,
                tol: report.jacobi_tol,
            });
        }
        if report.reductivity_residual > 0.0 {
            return Err(SpaceError::NotReductive(report.reductivity_residual));
        }
        for (idx, q) in spec.extra_isotropy.iter().enumerate() {
            let n_p = spec.n_p();
            if q.nrows() != n_p || q.ncols() != n_p {
                return Err(SpaceError::Shape(format!(
                    "extra isotropy generator {idx} is {}x{}, expected {n_p}x{n_p}",
                    q.nrows(),
                    q.ncols()
                )));
            }
            let residual = (q * q.transpose() - DMatrix::<f64>::identity(n_p, n_p)).norm();
            if residual > 1e-9 * n_p as f64 {
                return Err(SpaceError::GeneratorNotOrthogonal {
                    index: idx,
                    residual,
                });
            }
        }
        let bracket = spec.bracket_tensor();
        let killing = spec.killing_form();
        let unimodular = killing.h.norm() <= tol.vec(spec.max_c());
        let basis = commutant_sym_basis(&spec, &bracket, &tol);
        Ok(Geometry {
            spec,
            bracket,
            killing,
            basis,
            unimodular,
            tol,
        })
    }

    pub fn n_p(&self) -> usize {
        self.spec.n_p()
    }

    pub fn m(&self) -> usize {
        self.basis.m()
    }
}

// ---------------------------------------------------------------------------
// JSON space-spec format
// ---------------------------------------------------------------------------

/// Bracket coefficient in a space-spec file: a plain number, a decimal string,
/// or a `{num, den, sqrt}` token meaning `num / den * sqrt(sqrt)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffValue {
    Number(f64),
    Decimal(String),
    Token {
        num: f64,
        #[serde(default = "one")]
        den: f64,
        #[serde(default = "one")]
        sqrt: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl CoeffValue {
    pub fn eval(&self) -> Result<f64, SpaceError> {
        match self {
            CoeffValue::Number(v) => Ok(*v),
            CoeffValue::Decimal(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| SpaceError::Json(format!("bad decimal string {s:?}: {e}"))),
            CoeffValue::Token { num, den, sqrt } => {
                if *den == 0.0 {
                    return Err(SpaceError::Json("token with den = 0".into()));
                }
                if *sqrt < 0.0 {
                    return Err(SpaceError::Json("token with negative sqrt".into()));
                }
                Ok(num / den * sqrt.sqrt())
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SpaceSpecJson {
    name: String,
    dim_g: usize,
    dim_k: usize,
    /// `[i, j, [[l, value], ...]]` with 1-based indices and only i < j listed.
    brackets: Vec<(usize, usize, Vec<(usize, CoeffValue)>)>,
    #[serde(default)]
    extra_isotropy_generators: Vec<Vec<f64>>,
    #[serde(default = "default_true")]
    assume_effective: bool,
}

fn default_true() -> bool {
    true
}

impl SpaceSpec {
    pub fn from_json(text: &str) -> Result<SpaceSpec, SpaceError> {
        let raw: SpaceSpecJson =
            serde_json::from_str(text).map_err(|e| SpaceError::Json(e.to_string()))?;
        let mut spec = SpaceSpec::new(raw.name, raw.dim_g, raw.dim_k)?;
        spec.assume_effective = raw.assume_effective;
        for (i, j, terms) in &raw.brackets {
            if *i == 0 || *j == 0 || *i > raw.dim_g || *j > raw.dim_g {
                return Err(SpaceError::Json(format!(
                    "bracket index out of range: ({i},{j})"
                )));
            }
            if i >= j {
                return Err(SpaceError::Json(format!(
                    "brackets must list i < j only, got ({i},{j})"
                )));
            }
            for (l, value) in terms {
                if *l == 0 || *l > raw.dim_g {
                    return Err(SpaceError::Json(format!("target index out of range: {l}")));
                }
                spec.set_bracket(i - 1, j - 1, l - 1, value.eval()?);
            }
        }
        let n_p = spec.n_p();
        for (idx, flat) in raw.extra_isotropy_generators.iter().enumerate() {
            if flat.len() != n_p * n_p {
                return Err(SpaceError::Json(format!(
                    "extra isotropy generator {idx} has {} entries, expected {}",
                    flat.len(),
                    n_p * n_p
                )));
            }
            spec.extra_isotropy
                .push(DMatrix::from_row_slice(n_p, n_p, flat));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let mut brackets = Vec::new();
        for i in 0..self.n_g {
            for j in (i + 1)..self.n_g {
                let terms: Vec<(usize, CoeffValue)> = (0..self.n_g)
                    .filter(|&l| self.c(i, j, l) != 0.0)
                    .map(|l| (l + 1, CoeffValue::Number(self.c(i, j, l))))
                    .collect();
                if !terms.is_empty() {
                    brackets.push((i + 1, j + 1, terms));
                }
            }
        }
        let raw = SpaceSpecJson {
            name: self.name.clone(),
            dim_g: self.n_g,
            dim_k: self.n_k,
            brackets,
            extra_isotropy_generators: self
                .extra_isotropy
                .iter()
                .map(|q| {
                    let mut flat = Vec::with_capacity(q.len());
                    for r in 0..q.nrows() {
                        for c in 0..q.ncols() {
                            flat.push(q[(r, c)]);
                        }
                    }
                    flat
                })
                .collect(),
            assume_effective: self.assume_effective,
        };
        serde_json::to_string_pretty(&raw).expect("space spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn su2_spec() -> SpaceSpec {
        // orthonormal with respect to minus the Killing form
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut spec = SpaceSpec::new("su2", 3, 0).unwrap();
        spec.set_bracket(0, 1, 2, s);
        spec.set_bracket(0, 2, 1, -s);
        spec.set_bracket(1, 2, 0, s);
        spec
    }

    #[test]
    fn su2_validates() {
        let spec = su2_spec();
        let report = validate_jacobi(&spec, &Tolerances::default());
        assert!(report.pass);
        assert_eq!(report.max_residual, 0.0);
        assert_eq!(report.reductivity_residual, 0.0);
    }

    #[test]
    fn heisenberg_validates() {
        let mut spec = SpaceSpec::new("heis3", 3, 0).unwrap();
        spec.set_bracket(0, 1, 2, 1.0);
        assert!(validate_jacobi(&spec, &Tolerances::default()).pass);
    }

    #[test]
    fn perturbed_su2_fails_jacobi() {
        let mut spec = su2_spec();
        // an off-axis component in one bracket breaks Jacobi
        spec.set_bracket(0, 1, 0, 0.1);
        assert!(!validate_jacobi(&spec, &Tolerances::default()).pass);
    }

    #[test]
    fn su2_killing_is_minus_identity() {
        let kd = su2_spec().killing_form();
        assert!((&kd.b_g + DMatrix::<f64>::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn heisenberg_killing_vanishes() {
        let mut spec = SpaceSpec::new("heis3", 3, 0).unwrap();
        spec.set_bracket(0, 1, 2, 1.0);
        let kd = spec.killing_form();
        assert_eq!(kd.b_g.norm(), 0.0);
        assert_eq!(kd.h.norm(), 0.0); // nilpotent, hence unimodular
    }

    #[test]
    fn abelian_killing_and_mean_curvature_vanish() {
        let spec = SpaceSpec::new("abelian", 4, 0).unwrap();
        let kd = spec.killing_form();
        assert_eq!(kd.b_g.norm(), 0.0);
        assert_eq!(kd.h.norm(), 0.0);
    }

    #[test]
    fn unimodularity() {
        let tol = Tolerances::default();
        assert!(check_unimodular(&su2_spec(), &tol));
        let mut heis = SpaceSpec::new("heis3", 3, 0).unwrap();
        heis.set_bracket(0, 1, 2, 1.0);
        assert!(check_unimodular(&heis, &tol));
        // [X1, X2] = X2 has tr ad X1 = 1
        let mut solv = SpaceSpec::new("solv2", 2, 0).unwrap();
        solv.set_bracket(0, 1, 1, 1.0);
        assert!(!check_unimodular(&solv, &tol));
    }

    #[test]
    fn theta_identity_acts_as_minus_one() {
        let spec = su2_spec();
        let mu = spec.bracket_tensor().mu_p;
        let id = DMatrix::identity(3, 3);
        let out = theta_action(&id, &mu).unwrap();
        assert!((out.add(&mu).norm2()).sqrt() < 1e-14);
    }

    #[test]
    fn theta_on_zero_tensor() {
        let zero = Lambda2::zeros(4);
        let a = DMatrix::from_fn(4, 4, |i, j| (i + 2 * j) as f64);
        assert_eq!(theta_action(&a, &zero).unwrap().norm2(), 0.0);
    }

    #[test]
    fn theta_shape_mismatch() {
        let zero = Lambda2::zeros(3);
        let a = DMatrix::<f64>::identity(4, 4);
        assert!(theta_action(&a, &zero).is_err());
    }

    #[test]
    fn theta_matches_brute_force_expansion() {
        // independent componentwise expansion of the defining formula
        let spec = su2_spec();
        let mu = spec.bracket_tensor().mu_p;
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let out = theta_action(&a, &mu).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    let mut expect = 0.0;
                    for m in 0..3 {
                        expect += a[(l, m)] * mu.get(i, j, m)
                            - a[(m, i)] * mu.get(m, j, l)
                            - a[(m, j)] * mu.get(i, m, l);
                    }
                    assert!((out.get(i, j, l) - expect).abs() < 1e-15);
                }
            }
        }
        // scaling a single axis scales the opposite bracket with weight +1
        // and the two adjacent ones with weight -1... spot check one entry:
        // (theta(A)mu)(X2,X3) = A mu(X2,X3) = X1-component 1/sqrt(2)
        assert!((out.get(1, 2, 0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn mean_curvature_trace_identity() {
        // tr ad_p(H) = |H|^2 holds for any antisymmetric constant tensor
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..20 {
            let mut spec = SpaceSpec::new("random", 4, 0).unwrap();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    for l in 0..4 {
                        spec.set_bracket(i, j, l, rng.next_signed());
                    }
                }
            }
            let kd = spec.killing_form();
            let mu = spec.bracket_tensor().mu_p;
            let tr = mu.ad_vec(&kd.h).trace();
            assert!((tr - kd.h.norm_squared()).abs() < 1e-10 * (1.0 + kd.h.norm_squared()));
        }
    }

    #[test]
    fn pervasiveness() {
        let tol = Tolerances::default();
        // trivial isotropy is vacuously pervasive
        assert!(pervasive_check(&su2_spec(), &tol));
        // the diagonal-circle presentation of the round 3-sphere with p = su(2)
        // has [p,p] contained in su(2) x {0}, so nothing projects onto k
        let berger = catalog::load("berger").unwrap();
        assert!(!pervasive_check(&berger.geometry.spec, &tol));
        // the complement spanned by the antidiagonal direction is pervasive
        let perv = catalog::load("berger-perv").unwrap();
        assert!(pervasive_check(&perv.geometry.spec, &tol));
        // 9-dimensional complement inside so(3)+so(5) with a 4-dim mixed k
        let nonperv = catalog::load("so3so5-nonperv").unwrap();
        assert!(!pervasive_check(&nonperv.geometry.spec, &tol));
        let perv2 = catalog::load("so3so5-perv").unwrap();
        assert!(pervasive_check(&perv2.geometry.spec, &tol));
    }

    #[test]
    fn json_round_trip() {
        let spec = su2_spec();
        let text = spec.to_json();
        let back = SpaceSpec::from_json(&text).unwrap();
        assert_eq!(back.n_g, 3);
        assert_eq!(back.n_k, 0);
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    assert_eq!(back.c(i, j, l), spec.c(i, j, l));
                }
            }
        }
    }

    #[test]
    fn json_value_tokens() {
        let text = r#"{
            "name": "tokens",
            "dim_g": 3,
            "dim_k": 0,
            "brackets": [
                [1, 2, [[3, "0.5"]]],
                [1, 3, [[2, {"num": -1, "den": 2, "sqrt": 2}]]],
                [2, 3, [[1, 0.25]]]
            ]
        }"#;
        let spec = SpaceSpec::from_json(text).unwrap();
        assert_eq!(spec.c(0, 1, 2), 0.5);
        assert!((spec.c(0, 2, 1) + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(spec.c(1, 2, 0), 0.25);
        assert_eq!(spec.c(1, 0, 2), -0.5);
    }

    #[test]
    fn json_rejects_bad_indices() {
        let text = r#"{"name":"bad","dim_g":2,"dim_k":0,"brackets":[[2,1,[[1,1.0]]]]}"#;
        assert!(SpaceSpec::from_json(text).is_err());
        let text = r#"{"name":"bad","dim_g":2,"dim_k":0,"brackets":[[1,2,[[5,1.0]]]]}"#;
        assert!(SpaceSpec::from_json(text).is_err());
    }

    #[test]
    fn geometry_rejects_broken_jacobi() {
        let mut spec = su2_spec();
        spec.set_bracket(0, 1, 0, 0.3);
        assert!(matches!(
            Geometry::new(spec),
            Err(SpaceError::Jacobi { .. })
        ));
    }
}
