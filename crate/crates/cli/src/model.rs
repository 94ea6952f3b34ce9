//! Model files: JSON input for `fockforge run`.

use std::collections::BTreeMap;

use fockforge_core::linalg::{c, CMat, RMat};
use fockforge_core::Statistics;
use serde::Deserialize;

use crate::CliError;

/// A complex matrix as rows of [re, im] pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    VerifyCcr,
    VerifyCar,
    Bogolubov,
    Gaussian,
    Thermal,
    Kms,
    Lattice,
    PauliFierz,
    Suite,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::VerifyCcr => "verify-ccr",
            Task::VerifyCar => "verify-car",
            Task::Bogolubov => "bogolubov",
            Task::Gaussian => "gaussian",
            Task::Thermal => "thermal",
            Task::Kms => "kms",
            Task::Lattice => "lattice",
            Task::PauliFierz => "pauli-fierz",
            Task::Suite => "suite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsName {
    Bose,
    Fermi,
}

impl From<StatisticsName> for Statistics {
    fn from(s: StatisticsName) -> Self {
        match s {
            StatisticsName::Bose => Statistics::Bose,
            StatisticsName::Fermi => Statistics::Fermi,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub task: Task,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub statistics: Option<StatisticsName>,
    /// Number of one-particle modes, when no matrix fixes it.
    #[serde(default)]
    pub d: Option<usize>,
    /// Bosonic particle-number cutoff.
    #[serde(default)]
    pub cutoff: Option<usize>,
    #[serde(default)]
    pub beta: Option<f64>,
    /// One-particle Hamiltonian.
    #[serde(default)]
    pub h: Option<JsonMatrix>,
    /// One-particle density parameter.
    #[serde(default)]
    pub gamma: Option<JsonMatrix>,
    /// Gaussian kernel c.
    #[serde(default)]
    pub kernel: Option<JsonMatrix>,
    /// Bogolubov blocks.
    #[serde(default)]
    pub p: Option<JsonMatrix>,
    #[serde(default)]
    pub q: Option<JsonMatrix>,
    /// Small-system Hamiltonian.
    #[serde(default)]
    pub k: Option<JsonMatrix>,
    /// Coupling, (dim K · d) × dim K.
    #[serde(default)]
    pub v: Option<JsonMatrix>,
    /// Real basis of a subspace of C^d as 2d × k real rows (Re z, Im z).
    #[serde(default)]
    pub basis: Option<Vec<Vec<f64>>>,
    /// Dimension of a random real subspace when no basis is given.
    #[serde(default)]
    pub subspace_dim: Option<usize>,
    /// Number of random probes.
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

pub const SUPPORTED_SCHEMA: u32 = 1;

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let m: ModelFile = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if m.schema_version != SUPPORTED_SCHEMA {
            return Err(CliError::Schema(format!(
                "unsupported schema_version {} (expected {SUPPORTED_SCHEMA})",
                m.schema_version
            )));
        }
        for (k, t) in &m.tolerances {
            if !(t.is_finite() && *t >= 0.0) {
                return Err(CliError::Schema(format!("tolerance {k} must be a finite non-negative number")));
            }
        }
        Ok(m)
    }

    pub fn statistics(&self) -> Result<Statistics, CliError> {
        self.statistics
            .map(Into::into)
            .ok_or_else(|| CliError::Schema(format!("task {} needs \"statistics\"", self.task.name())))
    }

    pub fn matrix(&self, field: &str) -> Result<Option<CMat>, CliError> {
        let m = match field {
            "h" => &self.h,
            "gamma" => &self.gamma,
            "kernel" => &self.kernel,
            "p" => &self.p,
            "q" => &self.q,
            "k" => &self.k,
            "v" => &self.v,
            _ => unreachable!("unknown matrix field {field}"),
        };
        m.as_ref().map(|rows| decode_matrix(field, rows)).transpose()
    }

    pub fn require_matrix(&self, field: &str) -> Result<CMat, CliError> {
        self.matrix(field)?
            .ok_or_else(|| CliError::Schema(format!("task {} needs \"{field}\"", self.task.name())))
    }

    pub fn require_square(&self, field: &str) -> Result<CMat, CliError> {
        let m = self.require_matrix(field)?;
        if m.nrows() != m.ncols() {
            return Err(CliError::Schema(format!(
                "\"{field}\" must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(m)
    }

    pub fn require_d(&self) -> Result<usize, CliError> {
        match self.d {
            Some(d) if d > 0 => Ok(d),
            Some(_) => Err(CliError::Schema("\"d\" must be positive".into())),
            None => Err(CliError::Schema(format!("task {} needs \"d\"", self.task.name()))),
        }
    }

    pub fn real_basis(&self, d: usize) -> Result<Option<RMat>, CliError> {
        let Some(rows) = &self.basis else {
            return Ok(None);
        };
        if rows.len() != 2 * d {
            return Err(CliError::Schema(format!("\"basis\" needs {} rows, got {}", 2 * d, rows.len())));
        }
        let k = rows[0].len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(CliError::Schema("\"basis\" rows have different lengths".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::Schema("\"basis\" has non-finite entries".into()));
        }
        Ok(Some(RMat::from_fn(2 * d, k, |i, j| rows[i][j])))
    }

    /// Tolerance `name`, overridden by the model's `tolerances` map when present.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

pub fn decode_matrix(field: &str, rows: &JsonMatrix) -> Result<CMat, CliError> {
    let r = rows.len();
    let cols = rows.first().map(|x| x.len()).unwrap_or(0);
    if r == 0 || cols == 0 {
        return Err(CliError::Schema(format!("\"{field}\" is empty")));
    }
    if let Some(bad) = rows.iter().position(|x| x.len() != cols) {
        return Err(CliError::Schema(format!(
            "\"{field}\" row {bad} has {} entries, expected {cols}",
            rows[bad].len()
        )));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(CliError::Schema(format!("\"{field}\" has non-finite entries")));
    }
    Ok(CMat::from_fn(r, cols, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

pub fn encode_matrix(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}
