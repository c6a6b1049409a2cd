//! Config files and the grid-size environment default.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Environment variable holding the default grid size.
pub const GRID_N_ENV: &str = "EUR_DEFAULT_GRID_N";

/// Settings read from a TOML file; keys match the command-line flags and scenario
/// parameters live under `[param]`.
///
/// ```toml
/// grid-n = 1024
/// seed = 3
/// [param]
/// sigma = 0.2
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub grid_n: Option<usize>,
    pub hbar: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub tol_scale: Option<f64>,
    #[serde(default)]
    pub param: BTreeMap<String, f64>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Grid size by precedence: flag, then config, then the environment value.
pub fn resolve_grid_n(flag: Option<usize>, config: Option<usize>, env: Option<&str>) -> Result<Option<usize>> {
    if let Some(n) = flag.or(config) {
        return Ok(Some(n));
    }
    env.map(|v| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("{GRID_N_ENV} must be a positive integer, got `{v}`")))
    })
    .transpose()
}

/// Parses `key=value` with a numeric value.
pub fn parse_param(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{s}`")))?;
    let value = v
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("value of `{}` is not a number: `{v}`", k.trim())))?;
    Ok((k.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_flag_config_env() {
        assert_eq!(resolve_grid_n(Some(64), Some(128), Some("256")).unwrap(), Some(64));
        assert_eq!(resolve_grid_n(None, Some(128), Some("256")).unwrap(), Some(128));
        assert_eq!(resolve_grid_n(None, None, Some(" 256 ")).unwrap(), Some(256));
        assert_eq!(resolve_grid_n(None, None, None).unwrap(), None);
        assert!(resolve_grid_n(None, None, Some("many")).is_err());
    }

    #[test]
    fn config_reads_flags_and_params() {
        let c = Config::parse("grid-n = 1024\nhbar = 0.5\ntol-scale = 2.0\n[param]\nsigma = 0.2\n").unwrap();
        assert_eq!(c.grid_n, Some(1024));
        assert_eq!(c.hbar, Some(0.5));
        assert_eq!(c.tol_scale, Some(2.0));
        assert_eq!(c.param["sigma"], 0.2);
        assert!(Config::parse("grid_size = 3\n").is_err());
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("sigma=0.25").unwrap(), ("sigma".into(), 0.25));
        assert!(parse_param("sigma").is_err());
        assert!(parse_param("sigma=wide").is_err());
    }
}
