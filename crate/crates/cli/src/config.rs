//! Optional TOML configuration.
//!
//! ```toml
//! [quadrature]
//! truncation = 60.0      # forward-Laplace cutoff T
//! order = 16             # Gauss-Legendre order per panel
//! nodes = 48             # Talbot nodes (doubled for the error estimate)
//! singularity_radius = 0.0
//! tolerance = 1e-9
//!
//! [quadrature.contour]
//! floor = 4.0            # rho = max(floor, slope * omega * t + offset)
//! slope = 0.9
//! offset = 2.0
//!
//! [hermite]
//! nodes = 120
//! half_width = 6.0
//! y_nodes = 16
//! y_half_width = 4.0
//! side = "left"
//! ```
//!
//! Every key is optional; missing keys keep their defaults.

use std::path::Path;

use cfkernel::hermite::HermiteSpec;
use cfkernel::numlaplace::QuadratureSpec;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub quadrature: QuadratureSpec,
    pub hermite: HermiteSpec,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: FileConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.quadrature.validate().map_err(|e| e.to_string())?;
        cfg.hermite.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: FileConfig = toml::from_str("[quadrature]\ntolerance = 1e-7\n[hermite]\nside = \"right\"\n").unwrap();
        assert_eq!(cfg.quadrature.tolerance, 1e-7);
        assert_eq!(cfg.quadrature.nodes, QuadratureSpec::default().nodes);
        assert_eq!(cfg.hermite.side, cfkernel::hermite::Side::Right);
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(toml::from_str::<FileConfig>("[quadrature]\nfoo = 1\n").is_err());
    }
}
