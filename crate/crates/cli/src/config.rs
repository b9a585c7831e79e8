//! The TOML run configuration.
//!
//! ```toml
//! [field]
//! p = 2
//! c = 1
//!
//! [system]
//! N = 1
//! r = 1
//! normalization = "unitary"
//! masks = "haar_q2.masks"
//!
//! [scales]
//! j0 = 0
//! j1 = 4
//! j_max = 4
//!
//! [suite]
//! seed = 0
//! count = 100
//! resolution = 4
//! ```
//!
//! Mask paths are resolved against the directory holding the config file.

use std::path::{Path, PathBuf};

use lfframe::report::{PeriodicSettings, SuiteSettings, Tolerances, VerifySettings};
use lfframe::{FieldConfig, Normalization, SystemConfig};
use serde::{Deserialize, Serialize};

use crate::maskfile;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub p: u32,
    #[serde(default = "one")]
    pub c: u32,
    /// Coefficients from the constant term up; required when `c > 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

/// A GF(q) element written as its integer code or as a digit tuple string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Code(u32),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(rename = "N")]
    pub n: u64,
    pub r: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation_unit: Option<ScalarSpec>,
    #[serde(default)]
    pub normalization: Normalization,
    pub masks: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalesSection {
    pub j0: i32,
    pub j1: i32,
    pub j_max: u32,
}

impl Default for ScalesSection {
    fn default() -> Self {
        ScalesSection { j0: 0, j1: 4, j_max: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteSection {
    pub seed: u64,
    pub count: usize,
    pub resolution: i32,
    /// Ball exponent carrying the random tables of the non-periodic suite.
    pub support: i32,
}

impl Default for SuiteSection {
    fn default() -> Self {
        SuiteSection { seed: 0, count: 100, resolution: 4, support: -1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub cascade_iterations: u32,
    pub epsilon: f64,
    pub operator_check: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { cascade_iterations: 8, epsilon: 0.01, operator_check: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSection>,
    #[serde(default)]
    pub scales: ScalesSection,
    #[serde(default)]
    pub suite: SuiteSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> CliResult<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    /// Builds the field. Unlike the library, no modulus is assumed for `c > 1`.
    pub fn field(&self) -> CliResult<FieldConfig> {
        FieldConfig::new(self.field.p, self.field.c, self.field.modulus.clone()).map_err(CliError::config)
    }

    pub fn system_section(&self) -> CliResult<&SystemSection> {
        self.system.as_ref().ok_or_else(|| CliError::Config("missing [system] section".into()))
    }

    /// The system without masks.
    pub fn bare_system(&self) -> CliResult<SystemConfig> {
        let field = self.field()?;
        let s = self.system_section()?;
        let nu = match &s.dilation_unit {
            None => None,
            Some(ScalarSpec::Code(v)) => Some(field.scalar(*v).map_err(CliError::config)?),
            Some(ScalarSpec::Text(t)) => Some(field.parse_scalar(t).map_err(CliError::config)?),
        };
        SystemConfig::new(field, s.n, s.r, nu, s.normalization).map_err(CliError::config)
    }

    /// The system with the masks read from the referenced mask file.
    pub fn system(&self, base: &Path) -> CliResult<SystemConfig> {
        let sys = self.bare_system()?;
        let path = base.join(&self.system_section()?.masks);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read mask file {}: {e}", path.display())))?;
        let file = maskfile::parse(&text, sys.field()).map_err(|e| CliError::data(&path, e))?;
        file.check_against(&sys).map_err(|m| CliError::Config(format!("{}: {m}", path.display())))?;
        let masks = file.masks(sys.mask_norm_const());
        Ok(sys.with_masks(masks))
    }

    pub fn override_seed(&mut self, seed: Option<u64>) {
        if let Some(s) = seed {
            self.suite.seed = s;
        }
    }

    pub fn override_mode(&mut self, mode: Option<Normalization>) {
        if let (Some(m), Some(s)) = (mode, self.system.as_mut()) {
            s.normalization = m;
        }
    }

    pub fn verify_settings(&self) -> VerifySettings {
        VerifySettings {
            cascade_iterations: self.run.cascade_iterations,
            j0: self.scales.j0,
            j1: self.scales.j1,
            suite: SuiteSettings {
                seed: self.suite.seed,
                count: self.suite.count,
                resolution: self.suite.resolution,
                support: self.suite.support,
            },
            tolerances: self.tolerances,
            operator_check: self.run.operator_check,
        }
    }

    pub fn periodic_settings(&self) -> CliResult<PeriodicSettings> {
        let resolution = u32::try_from(self.suite.resolution)
            .map_err(|_| CliError::Config("periodic suite resolution must be non-negative".into()))?;
        Ok(PeriodicSettings {
            cascade_iterations: self.run.cascade_iterations,
            j_max: self.scales.j_max,
            epsilon: self.run.epsilon,
            seed: self.suite.seed,
            count: self.suite.count,
            resolution,
            tolerances: self.tolerances,
        })
    }
}
