//! Run configuration: a TOML file with one table per stage.
//!
//! ```toml
//! seed = 7                 # overrides simulation.rng_seed
//! pixel_spacing = 0.15     # mm per pixel, overrides simulation.pixel_spacing
//!
//! [simulation]             # any SimulationConfig field
//! width = 256
//! n_edges_range = [1, 4]
//! photon_scale = 2000.0    # omit for no noise
//!
//! [postprocess]
//! threshold = 0.2
//! min_blob_area = 1
//!
//! [loss]
//! delta = 1.0
//! epsilon = 1.0
//!
//! [eval]
//! ea_accept = 0.9
//! ```
//!
//! Every table and key is optional; missing values take the library defaults.
//! Unknown keys are rejected so typos do not pass silently.

use std::path::Path;

use serde::{Deserialize, Serialize};

use lineshape::metrics::{LossWeights, DEFAULT_EA_ACCEPT};
use lineshape::reconstruct::PostprocessConfig;
use lineshape::simulate::SimulationConfig;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSettings {
    pub ea_accept: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            ea_accept: DEFAULT_EA_ACCEPT,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub pixel_spacing: Option<f64>,
    pub simulation: SimulationConfig,
    pub postprocess: PostprocessConfig,
    pub loss: LossWeights,
    pub eval: EvalSettings,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
    }

    /// Reads `path`, or returns the defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                Self::from_toml(&text).map_err(|e| match e {
                    CliError::Config(m) => CliError::Config(format!("{}: {m}", p.display())),
                    other => other,
                })
            }
        }
    }

    /// Simulation settings with the top-level seed and spacing folded in.
    pub fn resolved_simulation(&self) -> SimulationConfig {
        let mut sim = self.simulation.clone();
        if let Some(s) = self.seed {
            sim.rng_seed = s;
        }
        if let Some(p) = self.pixel_spacing {
            sim.pixel_spacing = p;
        }
        sim
    }

    pub fn spacing(&self) -> f64 {
        self.pixel_spacing.unwrap_or(self.simulation.pixel_spacing)
    }

    /// Checks every numeric bound; the error names the offending field.
    pub fn validate(&self) -> Result<(), CliError> {
        let field = |section: &str, e: lineshape::Error| match e {
            lineshape::Error::InvalidParameter { name, reason } => {
                CliError::Config(format!("invalid `{section}.{name}`: {reason}"))
            }
            other => CliError::Config(format!("invalid [{section}]: {other}")),
        };
        if let Some(p) = self.pixel_spacing {
            if !(p.is_finite() && p > 0.0) {
                return Err(CliError::Config(format!("invalid `pixel_spacing`: {p} must be > 0")));
            }
        }
        self.resolved_simulation().validate().map_err(|e| field("simulation", e))?;
        self.postprocess.validate().map_err(|e| field("postprocess", e))?;
        self.loss.validate().map_err(|e| field("loss", e))?;
        if !(0.0..=1.0).contains(&self.eval.ea_accept) {
            return Err(CliError::Config(format!(
                "invalid `eval.ea_accept`: {} not in [0, 1]",
                self.eval.ea_accept
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        let c = RunConfig::from_toml("").unwrap();
        assert_eq!(c, RunConfig::default());
        c.validate().unwrap();
    }

    #[test]
    fn tables_override_defaults() {
        let c = RunConfig::from_toml(
            "seed = 9\n[simulation]\nwidth = 64\nheight = 48\nphoton_scale = 500.0\n[postprocess]\nthreshold = 0.35\n",
        )
        .unwrap();
        let sim = c.resolved_simulation();
        assert_eq!((sim.width, sim.height, sim.rng_seed), (64, 48, 9));
        assert_eq!(sim.photon_scale, Some(500.0));
        assert_eq!(c.postprocess.threshold, 0.35);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml("[simulation]\nwidht = 3\n").unwrap_err();
        assert!(err.to_string().contains("widht"), "{err}");
    }

    #[test]
    fn validation_names_the_field() {
        let c = RunConfig::from_toml("[postprocess]\nthreshold = 1.5\n").unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("postprocess.threshold"));
        let c = RunConfig::from_toml("[eval]\nea_accept = -1.0\n").unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("eval.ea_accept"));
        let c = RunConfig::from_toml("[simulation]\ntransmission = 0.0\n").unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("simulation.transmission"));
    }
}
