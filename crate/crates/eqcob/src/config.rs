use std::path::PathBuf;

use eqcob_core::{CoeffMode, LawSpec, RootType};
use serde_json::{json, Value};

use crate::error::CliError;

pub const DEFAULT_PRECISION: usize = 5;
pub const DEFAULT_LAW: LawSpec = LawSpec::Universal { generators: 4 };
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub law: LawSpec,
    pub precision: usize,
    pub root_type: RootType,
    pub mode: CoeffMode,
    pub seed: u64,
    pub samples: usize,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            law: DEFAULT_LAW,
            precision: DEFAULT_PRECISION,
            root_type: RootType::Gl(3),
            mode: CoeffMode::Integer,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            cache_dir: None,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision < 1 {
            return Err(CliError::Config("precision must be at least 1".to_string()));
        }
        if let LawSpec::Universal { generators } = self.law {
            if generators + 1 < self.precision {
                return Err(CliError::Config(format!(
                    "universal:{generators} needs at least {} generators at D = {}",
                    self.precision - 1,
                    self.precision
                )));
            }
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("thread count must be positive".to_string()));
        }
        Ok(())
    }

    /// The settings that determine the output; paths and thread counts are
    /// left out so that they cannot change an artifact.
    pub fn describe(&self) -> Value {
        json!({
            "law": self.law.to_string(),
            "precision": self.precision,
            "type": self.root_type.to_string(),
            "coefficients": self.mode.to_string(),
            "seed": self.seed,
            "samples": self.samples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_bound() {
        let mut c = RunConfig { precision: 6, law: LawSpec::Universal { generators: 2 }, ..RunConfig::default() };
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
        c.law = LawSpec::Universal { generators: 5 };
        assert!(c.validate().is_ok());
        c.law = LawSpec::Additive;
        assert!(c.validate().is_ok());
        c.precision = 0;
        assert!(c.validate().is_err());
    }
}
