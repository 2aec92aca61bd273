//! Built-in spaces with closed-form curvature references.
//!
//! Structure constants of the matrix algebras are generated from explicit
//! bases (skew-Hermitian for su(n), antisymmetric for so(n)) normalized so
//! the declared basis is orthonormal for the background inner product, then
//! reassembled into the k-first ordering each entry uses.

use crate::invariant::{MetricError, MetricPoint};
use crate::solver::DzBlocks;
use crate::space::{Geometry, SpaceError, SpaceSpec};
use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog name {0:?}")]
    Unknown(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("entry takes {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },
}

/// Whether entry parameters describe the metric tensor or its square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Tensor,
    Operator,
}

/// One parameter direction: the symmetric matrix it multiplies and the entry
/// that reads its coefficient back off an invariant operator.
#[derive(Debug, Clone)]
pub struct ParamDir {
    pub mat: DMatrix<f64>,
    pub probe: (usize, usize),
}

/// Closed-form curvature reference at one parameter point.
#[derive(Debug, Clone)]
pub struct Reference {
    /// Ricci tensor coefficients in the entry's parameter directions.
    pub ric: Vec<f64>,
    pub scal: f64,
}

type RefFn = Box<dyn Fn(&[f64]) -> Reference + Send + Sync>;

/// A built-in space: validated geometry, its natural parameterization, an
/// optional closed-form curvature reference and solver metadata.
pub struct CatalogEntry {
    pub name: &'static str,
    pub provenance: &'static str,
    pub geometry: Geometry,
    pub param_kind: ParamKind,
    pub param_dirs: Vec<ParamDir>,
    pub reference: Option<RefFn>,
    /// Deterministic valid parameter samples for tests and sweeps.
    pub samples: Vec<Vec<f64>>,
    pub dz_blocks: Option<DzBlocks>,
    /// For semisimple Killing-metric entries: the number of leading basis
    /// vectors spanning the compact part of the Cartan split.
    pub cartan_h_dim: Option<usize>,
}

impl CatalogEntry {
    /// Builds the metric point described by entry parameters.
    pub fn metric_from_params(&self, params: &[f64]) -> Result<MetricPoint, CatalogError> {
        if params.len() != self.param_dirs.len() {
            return Err(CatalogError::ParamCount {
                expected: self.param_dirs.len(),
                got: params.len(),
            });
        }
        let n = self.geometry.n_p();
        let mut mat = DMatrix::zeros(n, n);
        for (p, dir) in params.iter().zip(self.param_dirs.iter()) {
            mat += &dir.mat * *p;
        }
        let mp = match self.param_kind {
            ParamKind::Tensor => MetricPoint::from_tensor(&self.geometry, &mat)?,
            ParamKind::Operator => MetricPoint::from_operator(&self.geometry, mat)?,
        };
        Ok(mp)
    }

    /// Reads parameter-direction coefficients off an invariant operator.
    pub fn probe_coords(&self, a: &DMatrix<f64>) -> Vec<f64> {
        self.param_dirs.iter().map(|d| a[d.probe]).collect()
    }

    pub fn reference_at(&self, params: &[f64]) -> Option<Reference> {
        self.reference.as_ref().map(|f| f(params))
    }

    pub fn sample_params(&self, k: usize) -> Vec<Vec<f64>> {
        self.samples.iter().cycle().take(k).cloned().collect()
    }

    /// Metric points for the first `k` samples (cycling).
    pub fn sample_metrics(&self, k: usize) -> Vec<MetricPoint> {
        self.sample_params(k)
            .iter()
            .map(|p| {
                self.metric_from_params(p)
                    .expect("catalog samples are valid")
            })
            .collect()
    }
}

pub fn names() -> Vec<&'static str> {
    vec![
        "abelian3",
        "berger",
        "berger-perv",
        "unimod3-su2",
        "unimod3-sl2",
        "heisenberg3",
        "filiform4",
        "solv2",
        "sym2",
        "so4-dz",
        "so5-left",
        "so5-s1",
        "so5-t2",
        "s5s1",
        "s5s5",
        "s7s5",
        "s3s1",
        "simple-killing:su2",
        "simple-killing:sl2R",
        "nilpotent-2step:so2-r2",
        "nilpotent-2step:su2-c2",
        "so3so5-nonperv",
        "so3so5-perv",
    ]
}

pub fn load(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "abelian3" => abelian3(),
        "berger" => berger(),
        "berger-perv" => berger_perv(),
        "unimod3-su2" => unimod3(-1.0, "unimod3-su2"),
        "unimod3-sl2" => unimod3(1.0, "unimod3-sl2"),
        "heisenberg3" => heisenberg3(),
        "filiform4" => filiform4(),
        "solv2" => solv2(),
        "sym2" => sym2(),
        "so4-dz" => so4_dz(),
        "so5-left" => so5_left(),
        "so5-s1" => so5_s1(),
        "so5-t2" => so5_t2(),
        "s5s1" => s5s1(),
        "s5s5" => s5s5(),
        "s7s5" => s7s5(),
        "s3s1" => s3s1(),
        "simple-killing:su2" => simple_killing_su2(),
        "simple-killing:sl2R" => simple_killing_sl2(),
        "nilpotent-2step:so2-r2" => nr2step_so2(),
        "nilpotent-2step:su2-c2" => nr2step_su2(),
        "so3so5-nonperv" => so3so5(false),
        "so3so5-perv" => so3so5(true),
        other => Err(CatalogError::Unknown(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// raw algebras: dense constants with assembly helpers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct RawAlgebra {
    n: usize,
    c: Vec<f64>,
}

impl RawAlgebra {
    fn zeros(n: usize) -> Self {
        RawAlgebra {
            n,
            c: vec![0.0; n * n * n],
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize, l: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + l]
    }

    fn set_pair(&mut self, i: usize, j: usize, l: usize, v: f64) {
        let n = self.n;
        self.c[(i * n + j) * n + l] = v;
        self.c[(j * n + i) * n + l] = -v;
    }

    fn direct_sum(&self, other: &RawAlgebra) -> RawAlgebra {
        let n = self.n + other.n;
        let mut out = RawAlgebra::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for l in 0..self.n {
                    let v = self.get(i, j, l);
                    if v != 0.0 {
                        out.c[(i * n + j) * n + l] = v;
                    }
                }
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                for l in 0..other.n {
                    let v = other.get(i, j, l);
                    if v != 0.0 {
                        out.c[((self.n + i) * n + (self.n + j)) * n + (self.n + l)] = v;
                    }
                }
            }
        }
        out
    }

    /// Abelian summand of the given dimension.
    fn plus_abelian(&self, extra: usize) -> RawAlgebra {
        self.direct_sum(&RawAlgebra::zeros_of(extra))
    }

    fn zeros_of(n: usize) -> RawAlgebra {
        RawAlgebra {
            n,
            c: vec![0.0; n * n * n],
        }
    }

    /// Constants in the basis `b_i = sum_a P[a][i] e_a`.
    fn change_basis(&self, p: &DMatrix<f64>) -> RawAlgebra {
        let n = self.n;
        let p_inv = p.clone().try_inverse().expect("basis change is invertible");
        // t1[a][b][l] = sum_c P_inv[l][c] c[a][b][c]
        let mut t1 = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for c in 0..n {
                        acc += p_inv[(l, c)] * self.get(a, b, c);
                    }
                    t1[(a * n + b) * n + l] = acc;
                }
            }
        }
        // t2[i][b][l] = sum_a P[a][i] t1[a][b][l]
        let mut t2 = vec![0.0; n * n * n];
        for i in 0..n {
            for b in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        acc += p[(a, i)] * t1[(a * n + b) * n + l];
                    }
                    t2[(i * n + b) * n + l] = acc;
                }
            }
        }
        let mut out = RawAlgebra::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut acc = 0.0;
                    for b in 0..n {
                        acc += p[(b, j)] * t2[(i * n + b) * n + l];
                    }
                    out.c[(i * n + j) * n + l] = acc;
                }
            }
        }
        out
    }

    /// Reorders the basis: new basis vector `i` is old vector `perm[i]`.
    fn permute(&self, perm: &[usize]) -> RawAlgebra {
        let n = self.n;
        let mut p = DMatrix::zeros(n, n);
        for (i, &old) in perm.iter().enumerate() {
            p[(old, i)] = 1.0;
        }
        self.change_basis(&p)
    }

    fn into_spec(self, name: &str, n_k: usize) -> Result<SpaceSpec, SpaceError> {
        let mut spec = SpaceSpec::new(name, self.n, n_k)?;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                for l in 0..self.n {
                    let v = self.get(i, j, l);
                    if v.abs() > 1e-14 {
                        spec.set_bracket(i, j, l, v);
                    }
                }
            }
        }
        Ok(spec)
    }
}

type CMat = DMatrix<Complex<f64>>;

/// Structure constants of the span of an orthogonal matrix basis, expanding
/// brackets with the real Hilbert-Schmidt pairing.
fn constants_from_complex_basis(basis: &[CMat]) -> RawAlgebra {
    let n = basis.len();
    let norms: Vec<f64> = basis.iter().map(|b| hs_inner(b, b)).collect();
    let mut out = RawAlgebra::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let br = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            let mut remainder = br.clone();
            for l in 0..n {
                let coeff = hs_inner(&br, &basis[l]) / norms[l];
                if coeff.abs() > 1e-13 {
                    out.set_pair(i, j, l, coeff);
                }
                remainder -= &basis[l] * Complex::new(hs_inner(&br, &basis[l]) / norms[l], 0.0);
            }
            assert!(
                remainder.norm() < 1e-10,
                "bracket escapes the span at ({i},{j})"
            );
        }
    }
    out
}

fn hs_inner(a: &CMat, b: &CMat) -> f64 {
    let mut acc = 0.0;
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            let x = a[(r, c)];
            let y = b[(r, c)];
            acc += x.re * y.re + x.im * y.im;
        }
    }
    acc
}

fn cmat_zero(n: usize) -> CMat {
    DMatrix::from_element(n, n, Complex::new(0.0, 0.0))
}

/// su(n) basis ordered `[su(n-1) block | C^{n-1} | central Z]`, orthonormal
/// for minus the Killing form (`kil = 2n tr`).
fn su_split_basis(n: usize) -> Vec<CMat> {
    let scale = 1.0 / (2.0 * (n as f64).sqrt());
    let mut basis = Vec::new();
    let pair = |j: usize, k: usize| {
        let mut a = cmat_zero(n);
        a[(j, k)] = Complex::new(scale, 0.0);
        a[(k, j)] = Complex::new(-scale, 0.0);
        let mut s = cmat_zero(n);
        s[(j, k)] = Complex::new(0.0, scale);
        s[(k, j)] = Complex::new(0.0, scale);
        (a, s)
    };
    // su(n-1) block: off-diagonal pairs then diagonal directions
    for j in 0..(n - 1) {
        for k in (j + 1)..(n - 1) {
            let (a, s) = pair(j, k);
            basis.push(a);
            basis.push(s);
        }
    }
    for l in 1..(n - 1) {
        let norm = (2.0 * n as f64 * (l * (l + 1)) as f64).sqrt();
        let mut d = cmat_zero(n);
        for j in 0..l {
            d[(j, j)] = Complex::new(0.0, 1.0 / norm);
        }
        d[(l, l)] = Complex::new(0.0, -(l as f64) / norm);
        basis.push(d);
    }
    // the complement sphere directions
    for j in 0..(n - 1) {
        let (a, s) = pair(j, n - 1);
        basis.push(a);
        basis.push(s);
    }
    // the invariant trace direction
    let norm = n as f64 * (2.0 * (n as f64 - 1.0)).sqrt();
    let mut z = cmat_zero(n);
    for j in 0..(n - 1) {
        z[(j, j)] = Complex::new(0.0, 1.0 / norm);
    }
    z[(n - 1, n - 1)] = Complex::new(0.0, -(n as f64 - 1.0) / norm);
    basis.push(z);
    basis
}

/// so(n) basis `X_ij = (E_ij - E_ji)/sqrt(2(n-2))` in lexicographic order,
/// orthonormal for minus the Killing form.
fn so_basis(n: usize) -> Vec<DMatrix<f64>> {
    let scale = 1.0 / (2.0 * (n as f64 - 2.0)).sqrt();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut x = DMatrix::zeros(n, n);
            x[(i, j)] = scale;
            x[(j, i)] = -scale;
            basis.push(x);
        }
    }
    basis
}

fn constants_from_real_basis(basis: &[DMatrix<f64>]) -> RawAlgebra {
    let complex: Vec<CMat> = basis
        .iter()
        .map(|b| b.map(|v| Complex::new(v, 0.0)))
        .collect();
    constants_from_complex_basis(&complex)
}

/// su(2) with brackets `[X1,X2] = X3/sqrt2`, `[X1,X3] = -X2/sqrt2`,
/// `[X2,X3] = X1/sqrt2` (orthonormal for minus the Killing form).
fn su2_rot() -> RawAlgebra {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = RawAlgebra::zeros(3);
    a.set_pair(0, 1, 2, s);
    a.set_pair(0, 2, 1, -s);
    a.set_pair(1, 2, 0, s);
    a
}

/// The three-parameter unimodular family `[X1,X2] = -X3/sqrt2`,
/// `[X1,X3] = -eps X2/sqrt2`, `[X2,X3] = -X1/sqrt2`.
fn dim3_family(eps: f64) -> RawAlgebra {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = RawAlgebra::zeros(3);
    a.set_pair(0, 1, 2, -s);
    a.set_pair(0, 2, 1, -eps * s);
    a.set_pair(1, 2, 0, -s);
    a
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
}

/// Deterministic extra sample points inside a per-coordinate box.
fn push_box_samples(samples: &mut Vec<Vec<f64>>, seed: u64, count: usize, ranges: &[(f64, f64)]) {
    let mut rng = crate::rng::SplitMix64::new(seed);
    for _ in 0..count {
        samples.push(
            ranges
                .iter()
                .map(|(lo, hi)| lo + (hi - lo) * rng.next_f64())
                .collect(),
        );
    }
}

/// Extra samples for the coupled families `(a, b, c, d, t)` keeping the
/// trivial block positive definite (`c d > t^2`).
fn push_coupled_samples(samples: &mut Vec<Vec<f64>>, seed: u64, count: usize) {
    let mut rng = crate::rng::SplitMix64::new(seed);
    for _ in 0..count {
        let a = 0.6 + 1.2 * rng.next_f64();
        let b = 0.6 + 1.2 * rng.next_f64();
        let c = 0.6 + 1.2 * rng.next_f64();
        let d = 0.6 + 1.2 * rng.next_f64();
        let t = 0.7 * rng.next_signed() * (c * d).sqrt();
        samples.push(vec![a, b, c, d, t]);
    }
}

fn basis_matrix(n: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(n, n);
    for (i, col) in cols.iter().enumerate() {
        p.set_column(i, col);
    }
    p
}

fn diag_dir(n: usize, idx: &[usize]) -> ParamDir {
    let mut mat = DMatrix::zeros(n, n);
    for &i in idx {
        mat[(i, i)] = 1.0;
    }
    ParamDir {
        mat,
        probe: (idx[0], idx[0]),
    }
}

fn offdiag_dir(n: usize, i: usize, j: usize) -> ParamDir {
    let mut mat = DMatrix::zeros(n, n);
    mat[(i, j)] = 1.0;
    mat[(j, i)] = 1.0;
    ParamDir { mat, probe: (i, j) }
}

// ---------------------------------------------------------------------------
// entries
// ---------------------------------------------------------------------------

fn abelian3() -> Result<CatalogEntry, CatalogError> {
    let spec = SpaceSpec::new("abelian3", 3, 0)?;
    let geometry = Geometry::new(spec)?;
    Ok(CatalogEntry {
        name: "abelian3",
        provenance: "flat torus factor; every invariant metric is flat",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(3, &[0]), diag_dir(3, &[1]), diag_dir(3, &[2])],
        reference: Some(Box::new(|_p: &[f64]| Reference {
            ric: vec![0.0, 0.0, 0.0],
            scal: 0.0,
        })),
        samples: {
            let mut v = vec![
                vec![1.0, 1.0, 1.0],
                vec![2.0, 0.5, 1.5],
                vec![0.3, 0.9, 2.2],
            ];
            push_box_samples(&mut v, 3, 18, &[(0.4, 2.0), (0.4, 2.0), (0.4, 2.0)]);
            v
        },
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

/// Round and squashed metrics on the 3-sphere presented with the diagonal
/// circle in SU(2) x S1 as isotropy, so the invariant metrics are exactly
/// the surfaces of revolution `(a, b, b)` over the rotation axis.
fn berger() -> Result<CatalogEntry, CatalogError> {
    let raw = su2_rot().plus_abelian(1);
    let cols = vec![
        &unit(4, 0) + unit(4, 3), // k generator (X1, 1)
        unit(4, 0),
        unit(4, 1),
        unit(4, 2),
    ];
    let spec = raw
        .change_basis(&basis_matrix(4, &cols))
        .into_spec("berger", 1)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| {
        let (a, b) = (p[0], p[1]);
        Reference {
            ric: vec![a * a / (4.0 * b * b), (2.0 * b - a) / (4.0 * b)],
            scal: (4.0 * b - a) / (4.0 * b * b),
        }
    });
    let mut samples = Vec::new();
    for k in 1..=20 {
        samples.push(vec![1.0, 0.11 * k as f64]);
    }
    samples.push(vec![1.5, 0.8]);
    samples.push(vec![0.4, 1.3]);
    Ok(CatalogEntry {
        name: "berger",
        provenance: "one-parameter squashed 3-spheres over the Hopf circle",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(3, &[0]), diag_dir(3, &[1, 2])],
        reference: Some(reference),
        samples,
        dz_blocks: Some(DzBlocks {
            a_block: vec![1, 2],
            k_blocks: vec![vec![0]],
        }),
        cartan_h_dim: None,
    })
}

/// Same space as `berger` but with the pervasive reductive complement that
/// replaces the Hopf direction by the antidiagonal of the two circle factors.
fn berger_perv() -> Result<CatalogEntry, CatalogError> {
    let raw = su2_rot().plus_abelian(1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let cols = vec![
        &unit(4, 0) + unit(4, 3),
        (&unit(4, 0) - unit(4, 3)) * s,
        unit(4, 1),
        unit(4, 2),
    ];
    let spec = raw
        .change_basis(&basis_matrix(4, &cols))
        .into_spec("berger-perv", 1)?;
    let geometry = Geometry::new(spec)?;
    Ok(CatalogEntry {
        name: "berger-perv",
        provenance: "round 3-sphere with a pervasive reductive complement",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(3, &[0]), diag_dir(3, &[1, 2])],
        reference: None,
        samples: vec![vec![1.0, 1.0], vec![1.0, 0.5], vec![2.0, 1.2]],
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn unimod3(eps: f64, name: &'static str) -> Result<CatalogEntry, CatalogError> {
    let spec = dim3_family(eps).into_spec(name, 0)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(move |p: &[f64]| {
        let (a, b, d) = (p[0], p[1], p[2]);
        let r1 = (a * a - (d + eps * b) * (d + eps * b)) / (4.0 * b * d);
        let r2 = (b * b - (a - d) * (a - d)) / (4.0 * a * d);
        let r3 = (d * d - (a + eps * b) * (a + eps * b)) / (4.0 * a * b);
        Reference {
            ric: vec![r1, r2, r3],
            scal: r1 / a + r2 / b + r3 / d,
        }
    });
    let mut samples = Vec::new();
    for (a, b, d) in [
        (1.0, 1.0, 1.0),
        (1.0, 0.5, 2.0),
        (0.7, 1.3, 0.9),
        (2.0, 2.0, 0.5),
        (1.4, 0.6, 1.1),
        (0.9, 1.8, 1.7),
    ] {
        samples.push(vec![a, b, d]);
    }
    push_box_samples(&mut samples, 5, 15, &[(0.5, 2.0), (0.5, 2.0), (0.5, 2.0)]);
    Ok(CatalogEntry {
        name: if eps < 0.0 {
            "unimod3-su2"
        } else {
            "unimod3-sl2"
        },
        provenance: "diagonal left-invariant metrics on the two unimodular 3-dim simple groups",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(3, &[0]), diag_dir(3, &[1]), diag_dir(3, &[2])],
        reference: Some(reference),
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn heisenberg3() -> Result<CatalogEntry, CatalogError> {
    let mut raw = RawAlgebra::zeros(3);
    raw.set_pair(0, 1, 2, 1.0);
    let spec = raw.into_spec("heisenberg3", 0)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| {
        let (a, b, d) = (p[0], p[1], p[2]);
        Reference {
            ric: vec![-d / (2.0 * b), -d / (2.0 * a), d * d / (2.0 * a * b)],
            scal: -d / (2.0 * a * b),
        }
    });
    let mut samples = vec![
        vec![1.0, 1.0, 1.0],
        vec![2.0, 0.5, 1.0],
        vec![0.4, 1.7, 2.5],
        vec![1.1, 0.9, 0.2],
        vec![3.0, 2.0, 1.5],
    ];
    push_box_samples(&mut samples, 7, 16, &[(0.3, 2.5), (0.3, 2.5), (0.3, 2.5)]);
    Ok(CatalogEntry {
        name: "heisenberg3",
        provenance: "left-invariant metrics on the 3-dim Heisenberg group",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(3, &[0]), diag_dir(3, &[1]), diag_dir(3, &[2])],
        reference: Some(reference),
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn filiform4() -> Result<CatalogEntry, CatalogError> {
    let mut raw = RawAlgebra::zeros(4);
    raw.set_pair(0, 1, 2, 1.0);
    raw.set_pair(0, 2, 3, 1.0);
    let spec = raw.into_spec("filiform4", 0)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| {
        let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
        Reference {
            ric: vec![
                -(c * c + b * d) / (2.0 * b * c),
                -c / (2.0 * a),
                (c * c - b * d) / (2.0 * a * b),
                d * d / (2.0 * a * c),
            ],
            scal: -d / (2.0 * a * c) - c / (2.0 * a * b),
        }
    });
    let mut samples = vec![
        vec![1.0, 1.0, 1.0, 1.0],
        vec![1.5, 0.7, 1.2, 0.9],
        vec![0.6, 2.0, 0.8, 1.4],
        vec![2.2, 1.1, 1.6, 0.5],
    ];
    push_box_samples(
        &mut samples,
        11,
        17,
        &[(0.4, 2.2), (0.4, 2.2), (0.4, 2.2), (0.4, 2.2)],
    );
    Ok(CatalogEntry {
        name: "filiform4",
        provenance: "the 4-dim filiform nilpotent group; the variation kernel contains a derivation direction",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: (0..4).map(|i| diag_dir(4, &[i])).collect(),
        reference: Some(reference),
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn solv2() -> Result<CatalogEntry, CatalogError> {
    let mut raw = RawAlgebra::zeros(2);
    raw.set_pair(0, 1, 1, 1.0);
    let spec = raw.into_spec("solv2", 0)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| {
        let (a, b) = (p[0], p[1]);
        Reference {
            ric: vec![-1.0, -b / a],
            scal: -2.0 / a,
        }
    });
    Ok(CatalogEntry {
        name: "solv2",
        provenance: "the affine line group; every left-invariant metric is hyperbolic",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(2, &[0]), diag_dir(2, &[1])],
        reference: Some(reference),
        samples: {
            let mut v = vec![vec![1.0, 1.0], vec![2.0, 0.5], vec![0.7, 1.8]];
            push_box_samples(&mut v, 13, 18, &[(0.3, 2.5), (0.3, 2.5)]);
            v
        },
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

/// The 2-sphere as a symmetric space: `mu_p = 0`, Ricci is constant.
fn sym2() -> Result<CatalogEntry, CatalogError> {
    let spec = su2_rot().into_spec("sym2", 1)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| {
        let a = p[0];
        Reference {
            ric: vec![0.5],
            scal: 1.0 / a,
        }
    });
    Ok(CatalogEntry {
        name: "sym2",
        provenance: "the round 2-sphere as a symmetric quotient of su(2)",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(2, &[0, 1])],
        reference: Some(reference),
        samples: {
            let mut v = vec![vec![1.0], vec![0.5], vec![3.0]];
            push_box_samples(&mut v, 17, 18, &[(0.2, 3.0)]);
            v
        },
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

/// SO(4) with the diagonal SO(3) as extra symmetry: the bi-invariant block
/// family with one simple subalgebra block (`k_1 = 1/2`).
fn so4_dz() -> Result<CatalogEntry, CatalogError> {
    let so4 = constants_from_real_basis(&so_basis(4));
    // the external so(3) factor brackets like the subalgebra spanned by
    // X23, X24, X34 (lex indices 3, 4, 5)
    let sub = [3usize, 4, 5];
    let mut so3 = RawAlgebra::zeros(3);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let v = so4.get(sub[a], sub[b], sub[c]);
                if v != 0.0 {
                    so3.c[(a * 3 + b) * 3 + c] = v;
                }
            }
        }
    }
    let raw = so4.direct_sum(&so3);
    let cols = vec![
        &unit(9, 3) + unit(9, 6),
        &unit(9, 4) + unit(9, 7),
        &unit(9, 5) + unit(9, 8),
        unit(9, 0),
        unit(9, 1),
        unit(9, 2),
        unit(9, 3),
        unit(9, 4),
        unit(9, 5),
    ];
    let spec = raw
        .change_basis(&basis_matrix(9, &cols))
        .into_spec("so4-dz", 3)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| {
        let (u, v) = (p[0], p[1]);
        let ric_a = (2.0 - v / u) / 4.0;
        let ric_k = 0.25 * (0.5 + 0.5 * v * v / (u * u));
        Reference {
            ric: vec![ric_a, ric_k],
            scal: 3.0 * ric_a / u + 3.0 * ric_k / v,
        }
    });
    let mut samples = Vec::new();
    for k in 1..=8 {
        samples.push(vec![1.0, 0.3 * k as f64]);
    }
    samples.push(vec![1.8, 1.1]);
    push_box_samples(&mut samples, 19, 12, &[(0.5, 2.0), (0.5, 2.0)]);
    Ok(CatalogEntry {
        name: "so4-dz",
        provenance: "SO(4) metrics shrinking a diagonally embedded SO(3)",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(6, &[0, 1, 2]), diag_dir(6, &[3, 4, 5])],
        reference: Some(reference),
        samples,
        dz_blocks: Some(DzBlocks {
            a_block: vec![0, 1, 2],
            k_blocks: vec![vec![3, 4, 5]],
        }),
        cartan_h_dim: None,
    })
}

fn so5_left() -> Result<CatalogEntry, CatalogError> {
    let spec = constants_from_real_basis(&so_basis(5)).into_spec("so5-left", 0)?;
    let geometry = Geometry::new(spec)?;
    let samples = vec![
        vec![1.0; 10],
        vec![1.0, 1.2, 0.8, 1.5, 0.9, 1.1, 1.3, 0.7, 1.4, 1.0],
        vec![2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 1.0, 1.0],
    ];
    Ok(CatalogEntry {
        name: "so5-left",
        provenance: "all left-invariant diagonal metrics on SO(5) in the antisymmetric-unit basis",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: (0..10).map(|i| diag_dir(10, &[i])).collect(),
        reference: None,
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn so5_s1() -> Result<CatalogEntry, CatalogError> {
    let raw = constants_from_real_basis(&so_basis(5)).plus_abelian(1);
    let mut cols = vec![&unit(11, 0) + unit(11, 10)];
    for i in 0..10 {
        cols.push(unit(11, i));
    }
    let spec = raw
        .change_basis(&basis_matrix(11, &cols))
        .into_spec("so5-s1", 1)?;
    let geometry = Geometry::new(spec)?;
    let samples = vec![
        vec![1.0; 10],
        vec![1.5, 1.0, 2.0, 0.8, 1.0, 2.0, 0.8, 0.5, 1.2, 0.9],
        vec![2.0, 1.3, 1.3, 1.3, 1.3, 1.3, 1.3, 1.0, 0.6, 0.6],
    ];
    Ok(CatalogEntry {
        name: "so5-s1",
        provenance:
            "SO(5) metrics invariant under the rotation circle in the first coordinate plane",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: (0..10).map(|i| diag_dir(10, &[i])).collect(),
        reference: None,
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn so5_t2() -> Result<CatalogEntry, CatalogError> {
    let raw = constants_from_real_basis(&so_basis(5)).plus_abelian(2);
    let mut cols = vec![&unit(12, 0) + unit(12, 10), &unit(12, 7) + unit(12, 11)];
    for i in 0..10 {
        cols.push(unit(12, i));
    }
    let spec = raw
        .change_basis(&basis_matrix(12, &cols))
        .into_spec("so5-t2", 2)?;
    let geometry = Geometry::new(spec)?;
    let r = so5_quartic_root();
    let fixture = so5_t2_zero_ricci_metric(r);
    let samples = vec![
        vec![1.0; 10],
        vec![1.5, 4.0, 4.0, 1.0, 4.0, 4.0, 1.0, 2.0, 1.2, 1.2],
        fixture,
    ];
    Ok(CatalogEntry {
        name: "so5-t2",
        provenance: "SO(5) metrics invariant under the maximal torus",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: (0..10).map(|i| diag_dir(10, &[i])).collect(),
        reference: None,
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

/// Positive root of `z^4 + 2 z^2 - 36 z - 135`, bracketed in [3, 5] and
/// polished by Newton to full precision.
pub fn so5_quartic_root() -> f64 {
    let f = |z: f64| ((z * z + 2.0) * z * z) - 36.0 * z - 135.0;
    let df = |z: f64| 4.0 * z * z * z + 4.0 * z - 36.0;
    let (mut lo, mut hi) = (3.0f64, 5.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut z = 0.5 * (lo + hi);
    for _ in 0..6 {
        z -= f(z) / df(z);
    }
    z
}

/// The torus-invariant metric whose Ricci tensor is supported on the two
/// torus planes, in lexicographic diagonal coordinates.
pub fn so5_t2_zero_ricci_metric(r: f64) -> Vec<f64> {
    let a1 = 8.0 - r * r * r / 18.0 - 11.0 * r / 18.0;
    let a8 = 0.5 * r * (r * r - 5.0);
    vec![a1, 4.0, 4.0, 1.0, 4.0, 4.0, 1.0, a8, r, r]
}

fn s5s1() -> Result<CatalogEntry, CatalogError> {
    let raw = constants_from_complex_basis(&su_split_basis(3)).plus_abelian(1);
    let spec = raw.into_spec("s5s1", 3)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| {
        let (a, b, c, t) = (p[0], p[1], p[2], p[3]);
        let a4 = a.powi(4);
        let alpha = (4.0 * a * a - b * b - t * t) / (8.0 * a * a);
        let beta = (b * b + t * t).powi(2) / (4.0 * a4);
        let gamma = (b + c) * (b + c) * t * t / (4.0 * a4);
        let tau = (b * b + t * t) * (b + c) * t / (4.0 * a4);
        let det = b * c - t * t;
        let scal = 4.0 * alpha / (a * a)
            + (beta * (c * c + t * t) - 2.0 * tau * t * (b + c) + gamma * (b * b + t * t))
                / (det * det);
        Reference {
            ric: vec![alpha, beta, gamma, tau],
            scal,
        }
    });
    let mut samples = Vec::new();
    for k in 1..=6 {
        let t = 0.12 * k as f64;
        samples.push(vec![1.0, 1.0, 1.0, t]);
    }
    samples.push(vec![0.8, 1.3, 0.9, 0.3]);
    samples.push(vec![1.4, 0.7, 1.6, -0.4]);
    samples.push(vec![1.0, 2.0, 1.0, 0.0]);
    {
        let mut rng = crate::rng::SplitMix64::new(23);
        for _ in 0..12 {
            let a = 0.6 + 1.2 * rng.next_f64();
            let b = 0.6 + 1.2 * rng.next_f64();
            let c = 0.6 + 1.2 * rng.next_f64();
            let t = 0.7 * rng.next_signed() * (b * c).sqrt();
            samples.push(vec![a, b, c, t]);
        }
    }
    Ok(CatalogEntry {
        name: "s5s1",
        provenance:
            "the product of a 5-sphere and a circle; the Ricci image degenerates identically",
        geometry,
        param_kind: ParamKind::Operator,
        param_dirs: vec![
            diag_dir(6, &[0, 1, 2, 3]),
            diag_dir(6, &[4]),
            diag_dir(6, &[5]),
            offdiag_dir(6, 4, 5),
        ],
        reference: Some(reference),
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn s5s5() -> Result<CatalogEntry, CatalogError> {
    let su3 = constants_from_complex_basis(&su_split_basis(3));
    let raw = su3.direct_sum(&su3);
    let perm = [0usize, 1, 2, 8, 9, 10, 3, 4, 5, 6, 11, 12, 13, 14, 7, 15];
    let spec = raw.permute(&perm).into_spec("s5s5", 6)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn = Box::new(|p: &[f64]| s5s5_reference(p));
    let mut samples = Vec::new();
    for k in 1..=9 {
        samples.push(vec![1.0, 1.0, 1.0, 1.0, 0.1 * k as f64]);
    }
    samples.push(vec![1.2, 0.8, 1.1, 0.9, 0.25]);
    samples.push(vec![0.9, 1.4, 0.7, 1.3, -0.35]);
    push_coupled_samples(&mut samples, 29, 10);
    Ok(CatalogEntry {
        name: "s5s5",
        provenance: "the product of two 5-spheres with coupled circle directions",
        geometry,
        param_kind: ParamKind::Operator,
        param_dirs: vec![
            diag_dir(10, &[0, 1, 2, 3]),
            diag_dir(10, &[4, 5, 6, 7]),
            diag_dir(10, &[8]),
            diag_dir(10, &[9]),
            offdiag_dir(10, 8, 9),
        ],
        reference: Some(reference),
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

/// Closed-form Ricci data for the coupled product of two 5-spheres, derived
/// from the block structure of the moment map (rotation speed 1/2 and two
/// complex planes on each factor).
fn s5s5_reference(p: &[f64]) -> Reference {
    product_sphere_reference(p, 2.0, 0.25, 4.0, 2.0, 0.25, 4.0)
}

/// Shared closed form for products of odd spheres: each factor has `n_i`
/// complex pairs of rotation speed squared `rho2_i` and `dim_i` real sphere
/// directions besides its circle.
fn product_sphere_reference(
    p: &[f64],
    n1: f64,
    rho2_1: f64,
    dim1: f64,
    n2: f64,
    rho2_2: f64,
    dim2: f64,
) -> Reference {
    let (a, b, c, d, t) = (p[0], p[1], p[2], p[3], p[4]);
    let (a2, b2) = (a * a, b * b);
    let (a4, b4) = (a2 * a2, b2 * b2);
    let k1 = n1 * rho2_1;
    let k2 = n2 * rho2_2;
    let alpha = 0.5 - rho2_1 * (c * c + t * t) / (2.0 * a2);
    let beta = 0.5 - rho2_2 * (d * d + t * t) / (2.0 * b2);
    let gamma = 0.5 - k1
        + k1 * (c * c + t * t).powi(2) / (2.0 * a4)
        + k2 * t * t * (c + d) * (c + d) / (2.0 * b4);
    let delta = 0.5 - k2
        + k2 * (d * d + t * t).powi(2) / (2.0 * b4)
        + k1 * t * t * (c + d) * (c + d) / (2.0 * a4);
    let tau = k1 * t * (c + d) * (c * c + t * t) / (2.0 * a4)
        + k2 * t * (c + d) * (d * d + t * t) / (2.0 * b4);
    let det = c * d - t * t;
    let scal = dim1 * alpha / a2
        + dim2 * beta / b2
        + (gamma * (d * d + t * t) - 2.0 * tau * t * (c + d) + delta * (c * c + t * t))
            / (det * det);
    Reference {
        ric: vec![alpha, beta, gamma, delta, tau],
        scal,
    }
}

fn s7s5() -> Result<CatalogEntry, CatalogError> {
    let su4 = constants_from_complex_basis(&su_split_basis(4));
    let su3 = constants_from_complex_basis(&su_split_basis(3));
    let raw = su4.direct_sum(&su3);
    let perm = [
        0usize, 1, 2, 3, 4, 5, 6, 7, // su(3) block of su(4)
        15, 16, 17, // su(2) block of su(3)
        8, 9, 10, 11, 12, 13, // C^3
        18, 19, 20, 21, // C^2
        14, 22, // the two circle directions
    ];
    let spec = raw.permute(&perm).into_spec("s7s5", 11)?;
    let geometry = Geometry::new(spec)?;
    let reference: RefFn =
        Box::new(|p: &[f64]| product_sphere_reference(p, 3.0, 1.0 / 6.0, 6.0, 2.0, 0.25, 4.0));
    let mut samples = Vec::new();
    for k in 1..=9 {
        samples.push(vec![1.0, 1.0, 1.0, 1.0, 0.1 * k as f64]);
    }
    samples.push(vec![1.1, 0.9, 1.2, 0.8, 0.3]);
    push_coupled_samples(&mut samples, 31, 10);
    Ok(CatalogEntry {
        name: "s7s5",
        provenance: "the product of a 7-sphere and a 5-sphere with coupled circle directions",
        geometry,
        param_kind: ParamKind::Operator,
        param_dirs: vec![
            diag_dir(12, &[0, 1, 2, 3, 4, 5]),
            diag_dir(12, &[6, 7, 8, 9]),
            diag_dir(12, &[10]),
            diag_dir(12, &[11]),
            offdiag_dir(12, 10, 11),
        ],
        reference: Some(reference),
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

/// Tabulated Jacobian of the coupled 7-sphere/5-sphere family at the point
/// `(1,1,1,1,t)`: rows are the Ricci coefficients in the order
/// (C^3, C^2, circle 1, circle 2, coupling), columns are derivatives in the
/// parameter order given by [`S7S5_DISPLAY_COLUMNS`].
pub fn s7s5_reference_jacobian(t: f64) -> DMatrix<f64> {
    let t2 = t * t;
    DMatrix::from_row_slice(
        5,
        5,
        &[
            0.0,
            -1.0 / 6.0,
            (1.0 + t2) / 6.0,
            0.0,
            -t / 6.0,
            (1.0 + t2) / 4.0,
            0.0,
            0.0,
            -0.25,
            -t / 4.0,
            -4.0 * t2,
            1.0 + 2.0 * t2,
            -(1.0 + t2) * (1.0 + t2),
            t2,
            t * (3.0 + t2),
            -(1.0 + t2) * (1.0 + t2),
            t2,
            -4.0 * t2,
            1.0 + 2.0 * t2,
            t * (3.0 + t2),
            -2.0 * t * (1.0 + t2),
            t * (3.0 + t2) / 2.0,
            -2.0 * t * (1.0 + t2),
            t * (3.0 + t2) / 2.0,
            3.0 * t2 + 1.0,
        ],
    )
}

/// Column `k` of the tabulated Jacobian differentiates in the parameter with
/// this index in the entry's `(a, b, c, d, t)` order.
pub const S7S5_DISPLAY_COLUMNS: [usize; 5] = [1, 2, 0, 3, 4];

fn s3s1() -> Result<CatalogEntry, CatalogError> {
    let raw = dim3_family(-1.0).plus_abelian(1);
    let spec = raw.into_spec("s3s1", 0)?;
    let geometry = Geometry::new(spec)?;
    let mut dirs = Vec::new();
    for i in 0..4 {
        dirs.push(diag_dir(4, &[i]));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)] {
        dirs.push(offdiag_dir(4, i, j));
    }
    let mut samples = Vec::new();
    for k in 1..=5 {
        let t = 0.3 * k as f64;
        samples.push(vec![1.0, 2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, t]);
    }
    samples.push(vec![1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
    samples.push(vec![1.2, 0.9, 1.1, 1.4, 0.1, -0.05, 0.2, 0.1, -0.1, 0.3]);
    Ok(CatalogEntry {
        name: "s3s1",
        provenance: "all left-invariant metrics on the product of the 3-sphere group and a circle",
        geometry,
        param_kind: ParamKind::Operator,
        param_dirs: dirs,
        reference: None,
        samples,
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

/// Scalar curvature of the `(1, 2, 2, 2, t)` family of the 3-sphere-times-
/// circle group, with `t` coupling the third sphere axis to the circle.
pub fn s3s1_family_scal(t: f64) -> f64 {
    let t2 = t * t;
    (-t2 * t2 * t2 + 14.0 * t2 * t2 - 73.0 * t2 + 60.0) / (16.0 * (4.0 - t2) * (4.0 - t2))
}

fn simple_killing_su2() -> Result<CatalogEntry, CatalogError> {
    let spec = su2_rot().into_spec("simple-killing:su2", 0)?;
    let geometry = Geometry::new(spec)?;
    Ok(CatalogEntry {
        name: "simple-killing:su2",
        provenance: "the bi-invariant metric on the compact 3-dim simple group",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: (0..3).map(|i| diag_dir(3, &[i])).collect(),
        reference: None,
        samples: vec![vec![1.0, 1.0, 1.0], vec![1.3, 0.8, 1.1]],
        dz_blocks: None,
        cartan_h_dim: Some(3),
    })
}

fn simple_killing_sl2() -> Result<CatalogEntry, CatalogError> {
    // rotation generator first, then the two boost directions; orthonormal
    // for the Cartan-twisted Killing metric, with |mu|^2 = 3
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut raw = RawAlgebra::zeros(3);
    raw.set_pair(0, 1, 2, s);
    raw.set_pair(0, 2, 1, -s);
    raw.set_pair(1, 2, 0, -s);
    let spec = raw.into_spec("simple-killing:sl2R", 0)?;
    let geometry = Geometry::new(spec)?;
    Ok(CatalogEntry {
        name: "simple-killing:sl2R",
        provenance: "the Cartan-twisted Killing metric on the split 3-dim simple group",
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: (0..3).map(|i| diag_dir(3, &[i])).collect(),
        reference: None,
        samples: vec![vec![1.0, 1.0, 1.0], vec![0.9, 1.2, 1.1]],
        dz_blocks: None,
        cartan_h_dim: Some(1),
    })
}

/// Two-step nilpotent construction: a compact algebra `k` acting faithfully
/// and without trivial summands on `V` defines a 2-step algebra on `k (+) V`
/// whose scaled center pairs with the action; the group `K |x N` then carries
/// the graph complement making the metric naturally reductive.
fn nr2step(
    name: &'static str,
    provenance: &'static str,
    k_alg: &RawAlgebra,
    tau: &[DMatrix<f64>],
) -> Result<CatalogEntry, CatalogError> {
    let dk = k_alg.n;
    let dv = tau[0].nrows();
    let n_g = 2 * dk + dv;
    // natural order: k acting (0..dk), central copy (dk..2dk), V
    let mut raw = RawAlgebra::zeros(n_g);
    for a in 0..dk {
        for b in 0..dk {
            for c in 0..dk {
                let v = k_alg.get(a, b, c);
                if v != 0.0 {
                    // [K_a, K_b] = c K_c and [K_a, Z_b] = c Z_c
                    raw.c[(a * n_g + b) * n_g + c] = v;
                    raw.c[(a * n_g + (dk + b)) * n_g + (dk + c)] = v;
                    raw.c[((dk + b) * n_g + a) * n_g + (dk + c)] = -v;
                }
            }
        }
    }
    for a in 0..dk {
        for i in 0..dv {
            for j in 0..dv {
                let v = tau[a][(j, i)];
                if v != 0.0 {
                    // [K_a, v_i] = tau_a v_i
                    raw.c[(a * n_g + (2 * dk + i)) * n_g + (2 * dk + j)] = v;
                    raw.c[((2 * dk + i) * n_g + a) * n_g + (2 * dk + j)] = -v;
                }
            }
        }
    }
    for i in 0..dv {
        for j in 0..dv {
            if i == j {
                continue;
            }
            for a in 0..dk {
                // <[v_i, v_j], Z_a> = <tau_a v_i, v_j>
                let coeff = tau[a][(j, i)];
                if coeff != 0.0 {
                    raw.c[((2 * dk + i) * n_g + (2 * dk + j)) * n_g + (dk + a)] = coeff;
                }
            }
        }
    }
    // reductive complement: graph directions (K_a + Z_a), then V
    let mut cols = Vec::new();
    for a in 0..dk {
        cols.push(unit(n_g, a));
    }
    for a in 0..dk {
        cols.push(&unit(n_g, a) + unit(n_g, dk + a));
    }
    for i in 0..dv {
        cols.push(unit(n_g, 2 * dk + i));
    }
    let spec = raw
        .change_basis(&basis_matrix(n_g, &cols))
        .into_spec(name, dk)?;
    let geometry = Geometry::new(spec)?;
    let n_p = dk + dv;
    let graph: Vec<usize> = (0..dk).collect();
    let vblock: Vec<usize> = (dk..n_p).collect();
    Ok(CatalogEntry {
        name,
        provenance,
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(n_p, &graph), diag_dir(n_p, &vblock)],
        reference: None,
        samples: {
            let mut v = vec![
                vec![1.0, 1.0],
                vec![1.0, 2.0],
                vec![0.5, 1.5],
                vec![2.0, 0.8],
            ];
            push_box_samples(&mut v, 37, 16, &[(0.4, 2.2), (0.4, 2.2)]);
            v
        },
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

fn nr2step_so2() -> Result<CatalogEntry, CatalogError> {
    let k_alg = RawAlgebra::zeros(1);
    let tau = vec![DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])];
    let entry = nr2step(
        "nilpotent-2step:so2-r2",
        "the Heisenberg group metrized through its rotation extension",
        &k_alg,
        &tau,
    )?;
    // the underlying manifold is the Heisenberg group: reuse its closed form
    let reference: RefFn = Box::new(|p: &[f64]| {
        let (u, v) = (p[0], p[1]);
        Reference {
            ric: vec![u * u / (2.0 * v * v), -u / (2.0 * v)],
            scal: -u / (2.0 * v * v),
        }
    });
    Ok(CatalogEntry {
        reference: Some(reference),
        ..entry
    })
}

fn nr2step_su2() -> Result<CatalogEntry, CatalogError> {
    let k_alg = su2_rot();
    // quaternion left multiplications scaled to represent the rotation basis
    let s = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let li = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0,
        ],
    ) * s;
    let lj = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0,
        ],
    ) * s;
    let lk = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, 0.0, -1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0,
        ],
    ) * s;
    nr2step(
        "nilpotent-2step:su2-c2",
        "the quaternionic Heisenberg-type group metrized through its su(2) extension",
        &k_alg,
        &[li, lj, lk],
    )
}

fn so3so5(pervasive_complement: bool) -> Result<CatalogEntry, CatalogError> {
    let so5 = constants_from_real_basis(&so_basis(5));
    // external so(3) bracketing like the span of X34, X35, X45 (lex 7, 8, 9)
    let sub = [7usize, 8, 9];
    let mut so3 = RawAlgebra::zeros(3);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let v = so5.get(sub[a], sub[b], sub[c]);
                if v != 0.0 {
                    so3.c[(a * 3 + b) * 3 + c] = v;
                }
            }
        }
    }
    let raw = so3.direct_sum(&so5);
    // natural order: Y1 Y2 Y3 (0..2), X12.. X45 (3..12, lex offset 3)
    let x = |lex: usize| 3 + lex;
    let mut cols = vec![
        &unit(13, 0) + unit(13, x(7)),
        &unit(13, 1) + unit(13, x(8)),
        &unit(13, 2) + unit(13, x(9)),
        unit(13, x(0)),
    ];
    if pervasive_complement {
        for i in 0..3 {
            cols.push(unit(13, i));
        }
        for lex in 1..=6 {
            cols.push(unit(13, x(lex)));
        }
    } else {
        for lex in 1..=9 {
            cols.push(unit(13, x(lex)));
        }
    }
    let (name, provenance): (&'static str, &'static str) = if pervasive_complement {
        (
            "so3so5-perv",
            "mixed so(3)+so(5) isotropy with the pervasive complement through the external factor",
        )
    } else {
        (
            "so3so5-nonperv",
            "mixed so(3)+so(5) isotropy whose complement only reaches one torus direction",
        )
    };
    let spec = raw
        .change_basis(&basis_matrix(13, &cols))
        .into_spec(name, 4)?;
    let geometry = Geometry::new(spec)?;
    let (block_a, block_b): (Vec<usize>, Vec<usize>) = if pervasive_complement {
        ((0..3).collect(), (3..9).collect())
    } else {
        ((0..6).collect(), (6..9).collect())
    };
    Ok(CatalogEntry {
        name,
        provenance,
        geometry,
        param_kind: ParamKind::Tensor,
        param_dirs: vec![diag_dir(9, &block_a), diag_dir(9, &block_b)],
        reference: None,
        samples: vec![
            vec![1.0, 1.0],
            vec![1.0, 1.7],
            vec![0.6, 1.2],
            vec![2.0, 0.9],
        ],
        dz_blocks: None,
        cartan_h_dim: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::ricci;
    use crate::tol::Tolerances;

    #[test]
    fn every_entry_loads_and_validates() {
        let tol = Tolerances::default();
        for name in names() {
            let entry = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            let report = crate::space::validate_jacobi(&entry.geometry.spec, &tol);
            assert!(
                report.pass,
                "{name}: jacobi residual {:.3e}",
                report.max_residual
            );
            assert_eq!(report.reductivity_residual, 0.0, "{name}");
            // killing form is ad-invariant
            let inv = entry.geometry.spec.killing_invariance_residual();
            assert!(inv < 1e-10, "{name}: killing invariance {inv:.3e}");
        }
    }

    #[test]
    fn expected_commutant_dimensions() {
        for (name, m) in [
            ("berger", 2),
            ("sym2", 1),
            ("unimod3-su2", 6),
            ("s5s1", 4),
            ("s5s5", 5),
            ("s7s5", 5),
            ("s3s1", 10),
            ("so5-left", 55),
            ("so5-s1", 19),
            ("so5-t2", 7),
            ("berger-perv", 2),
            ("simple-killing:sl2R", 6),
            ("heisenberg3", 6),
            ("solv2", 3),
            ("filiform4", 10),
            ("so3so5-nonperv", 2),
            ("so3so5-perv", 2),
            ("nilpotent-2step:so2-r2", 2),
            ("nilpotent-2step:su2-c2", 2),
            ("so4-dz", 3),
        ] {
            let entry = load(name).unwrap();
            assert_eq!(entry.geometry.m(), m, "{name}");
        }
    }

    #[test]
    fn references_match_computed_curvature_on_grids() {
        for name in names() {
            let entry = load(name).unwrap();
            let Some(reference) = &entry.reference else {
                continue;
            };
            assert!(
                entry.samples.len() >= 20,
                "{name}: grid has {}",
                entry.samples.len()
            );
            for params in &entry.samples {
                let mp = entry.metric_from_params(params).unwrap();
                let rec = ricci(&entry.geometry, &mp);
                let expect = reference(params);
                let got = entry.probe_coords(&rec.ric_bar);
                for (g, e) in got.iter().zip(expect.ric.iter()) {
                    assert!(
                        (g - e).abs() < 1e-9 * (1.0 + e.abs()),
                        "{name} at {params:?}: ric {got:?} vs {:?}",
                        expect.ric
                    );
                }
                assert!(
                    (rec.scal - expect.scal).abs() < 1e-9 * (1.0 + expect.scal.abs()),
                    "{name} at {params:?}: scal {} vs {}",
                    rec.scal,
                    expect.scal
                );
            }
        }
    }

    #[test]
    fn exported_spec_rebuilds_the_same_geometry() {
        // the torus fixture survives a JSON round trip bit-for-bit
        let entry = load("so5-t2").unwrap();
        let text = entry.geometry.spec.to_json();
        let spec = crate::space::SpaceSpec::from_json(&text).unwrap();
        let geom = Geometry::new(spec).unwrap();
        assert_eq!(geom.m(), entry.geometry.m());
        let root = so5_quartic_root();
        let params = so5_t2_zero_ricci_metric(root);
        let direct = entry.metric_from_params(&params).unwrap();
        let mp = MetricPoint::from_operator(&geom, direct.h.clone()).unwrap();
        let a = ricci(&entry.geometry, &direct).ric_bar;
        let b = ricci(&geom, &mp).ric_bar;
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn quartic_root_is_accurate() {
        let r = so5_quartic_root();
        let f = ((r * r + 2.0) * r * r) - 36.0 * r - 135.0;
        assert!(f.abs() < 1e-12);
        assert!((r - 3.96).abs() < 0.01);
    }

    #[test]
    fn nr2step_matches_heisenberg_geometry() {
        // the rotation extension of the Heisenberg group re-metrizes the same
        // manifold: its curvature must match the direct Heisenberg formula
        let entry = load("nilpotent-2step:so2-r2").unwrap();
        let heis = load("heisenberg3").unwrap();
        for (u, v) in [(1.0, 1.0), (2.0, 0.7), (0.5, 1.3)] {
            let mp = entry.metric_from_params(&[u, v]).unwrap();
            let rec = ricci(&entry.geometry, &mp);
            let href = heis.reference_at(&[v, v, u]).unwrap();
            let got = entry.probe_coords(&rec.ric_bar);
            assert!((got[0] - href.ric[2]).abs() < 1e-12);
            assert!((got[1] - href.ric[0]).abs() < 1e-12);
            assert!((rec.scal - href.scal).abs() < 1e-12);
        }
    }

    #[test]
    fn su_split_bases_are_orthonormal_for_minus_killing() {
        for (n, name) in [(3usize, "su3"), (4, "su4")] {
            let basis = su_split_basis(n);
            assert_eq!(basis.len(), n * n - 1, "{name}");
            let raw = constants_from_complex_basis(&basis);
            let spec = raw.into_spec(name, 0).unwrap();
            let kd = spec.killing_form();
            let id = DMatrix::<f64>::identity(n * n - 1, n * n - 1);
            assert!(
                (&kd.b_g + &id).norm() < 1e-10,
                "{name}: {:.3e}",
                (&kd.b_g + &id).norm()
            );
        }
        let so5 = constants_from_real_basis(&so_basis(5))
            .into_spec("so5", 0)
            .unwrap();
        let kd = so5.killing_form();
        assert!((&kd.b_g + DMatrix::<f64>::identity(10, 10)).norm() < 1e-10);
    }
}
