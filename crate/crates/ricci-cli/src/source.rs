//! Resolving the space source: a catalog entry or a space-spec JSON file.
//! Catalog spaces speak their natural parameterization; JSON spaces use the
//! orthonormal invariant-basis coordinates of the metric square root.

use crate::{CliError, SpaceArgs};
use nalgebra::{DMatrix, DVector};
use ricci_core::catalog::{self, CatalogEntry, ParamKind};
use ricci_core::invariant::MetricPoint;
use ricci_core::space::{Geometry, SpaceSpec};
use ricci_core::tol::Tolerances;

pub enum Source {
    Catalog(CatalogEntry),
    Json { geometry: Geometry },
}

impl Source {
    pub fn geometry(&self) -> &Geometry {
        match self {
            Source::Catalog(entry) => &entry.geometry,
            Source::Json { geometry } => geometry,
        }
    }

    pub fn coord_len(&self) -> usize {
        match self {
            Source::Catalog(entry) => entry.param_dirs.len(),
            Source::Json { geometry } => geometry.m(),
        }
    }

    pub fn metric(&self, coords: &[f64]) -> Result<MetricPoint, CliError> {
        if coords.len() != self.coord_len() {
            return Err(CliError::Usage(format!(
                "--coords takes {} values for this space, got {}",
                self.coord_len(),
                coords.len()
            )));
        }
        match self {
            Source::Catalog(entry) => entry
                .metric_from_params(coords)
                .map_err(|e| CliError::Validation(e.to_string())),
            Source::Json { geometry } => {
                let x = DVector::from_vec(coords.to_vec());
                MetricPoint::from_coords(geometry, &x)
                    .map_err(|e| CliError::Validation(e.to_string()))
            }
        }
    }

    /// A symmetric tensor from coefficients in the same coordinates.
    pub fn tensor(&self, coords: &[f64]) -> Result<DMatrix<f64>, CliError> {
        if coords.len() != self.coord_len() {
            return Err(CliError::Usage(format!(
                "expected {} coefficients, got {}",
                self.coord_len(),
                coords.len()
            )));
        }
        Ok(match self {
            Source::Catalog(entry) => {
                let n = entry.geometry.n_p();
                let mut out = DMatrix::zeros(n, n);
                for (c, dir) in coords.iter().zip(entry.param_dirs.iter()) {
                    out += &dir.mat * *c;
                }
                out
            }
            Source::Json { geometry } => geometry
                .basis
                .from_coords(&DVector::from_vec(coords.to_vec())),
        })
    }

    /// Coefficients of a symmetric operator in the source's coordinates.
    pub fn coords_of(&self, a: &DMatrix<f64>) -> Vec<f64> {
        match self {
            Source::Catalog(entry) => entry.probe_coords(a),
            Source::Json { geometry } => geometry.basis.coords(a).iter().cloned().collect(),
        }
    }

    pub fn param_kind(&self) -> ParamKind {
        match self {
            Source::Catalog(entry) => entry.param_kind,
            Source::Json { .. } => ParamKind::Operator,
        }
    }
}

pub fn resolve(args: &SpaceArgs) -> Result<Source, CliError> {
    let tol = tolerances_from_env()?;
    match (&args.space, &args.spec_json) {
        (Some(name), None) => {
            let mut entry = catalog::load(name).map_err(|e| match e {
                catalog::CatalogError::Unknown(n) => {
                    CliError::Usage(format!("unknown catalog space {n:?}"))
                }
                other => CliError::Validation(other.to_string()),
            })?;
            if let Some(t) = tol {
                entry.geometry.tol = t;
            }
            Ok(Source::Catalog(entry))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            let spec =
                SpaceSpec::from_json(&text).map_err(|e| CliError::Validation(e.to_string()))?;
            let geometry = match tol {
                Some(t) => Geometry::with_tolerances(spec, t),
                None => Geometry::new(spec),
            }
            .map_err(|e| CliError::Validation(e.to_string()))?;
            Ok(Source::Json { geometry })
        }
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give exactly one of --space and --spec-json".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "a space source is required: --space or --spec-json".into(),
        )),
    }
}

/// `RICCI_WB_TOL` overrides the relative rank cutoff.
pub fn tolerances_from_env() -> Result<Option<Tolerances>, CliError> {
    match std::env::var("RICCI_WB_TOL") {
        Ok(text) => {
            let value: f64 = text
                .parse()
                .map_err(|_| CliError::Usage(format!("RICCI_WB_TOL is not a number: {text:?}")))?;
            if !(value > 0.0) {
                return Err(CliError::Usage("RICCI_WB_TOL must be positive".into()));
            }
            let mut tol = Tolerances::default();
            tol.rank_coeff = value;
            Ok(Some(tol))
        }
        Err(_) => Ok(None),
    }
}
