use std::path::{Path, PathBuf};

use coordspace::angles::{DEFAULT_EPSILON, DEFAULT_MIN_PTS};

/// Settings shared by all subcommands after merging flags, file and defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub epsilon: f64,
    pub min_pts: usize,
    pub dims: usize,
    pub seed: u64,
    pub restarts: usize,
    pub out: Option<PathBuf>,
    pub rcut: Option<f64>,
    pub format: Option<String>,
}

/// Values that may come from the command line or a config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub epsilon: Option<f64>,
    pub min_pts: Option<usize>,
    pub dims: Option<usize>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub out: Option<PathBuf>,
    pub rcut: Option<f64>,
    pub format: Option<String>,
}

impl Overrides {
    /// `self` wins over `other` wherever both are set.
    pub fn or(self, other: Overrides) -> Overrides {
        Overrides {
            epsilon: self.epsilon.or(other.epsilon),
            min_pts: self.min_pts.or(other.min_pts),
            dims: self.dims.or(other.dims),
            seed: self.seed.or(other.seed),
            restarts: self.restarts.or(other.restarts),
            out: self.out.or(other.out),
            rcut: self.rcut.or(other.rcut),
            format: self.format.or(other.format),
        }
    }

    pub fn resolve(self) -> Result<RunConfig, String> {
        let cfg = RunConfig {
            epsilon: self.epsilon.unwrap_or(DEFAULT_EPSILON),
            min_pts: self.min_pts.unwrap_or(DEFAULT_MIN_PTS),
            dims: self.dims.unwrap_or(8),
            seed: self.seed.unwrap_or(0),
            restarts: self.restarts.unwrap_or(20),
            out: self.out,
            rcut: self.rcut,
            format: self.format,
        };
        if !(cfg.epsilon > 0.0 && cfg.epsilon.is_finite()) {
            return Err(format!("epsilon must be positive, got {}", cfg.epsilon));
        }
        if cfg.min_pts == 0 {
            return Err("min-pts must be at least 1".into());
        }
        if cfg.dims == 0 {
            return Err("dims must be at least 1".into());
        }
        if cfg.restarts == 0 {
            return Err("restarts must be at least 1".into());
        }
        if let Some(r) = cfg.rcut {
            if !(r > 0.0 && r.is_finite()) {
                return Err(format!("rcut must be positive, got {r}"));
            }
        }
        Ok(cfg)
    }
}

fn float(v: &toml::Value, key: &str) -> Result<f64, String> {
    v.as_float()
        .or_else(|| v.as_integer().map(|i| i as f64))
        .ok_or_else(|| format!("{key} must be a number"))
}

fn count(v: &toml::Value, key: &str) -> Result<u64, String> {
    v.as_integer()
        .and_then(|i| u64::try_from(i).ok())
        .ok_or_else(|| format!("{key} must be a non-negative integer"))
}

/// Parses `key = value` lines.
pub fn parse_config(text: &str) -> Result<Overrides, String> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.message().to_string())?;
    let mut o = Overrides::default();
    for (key, v) in &table {
        match key.replace('-', "_").as_str() {
            "epsilon" => o.epsilon = Some(float(v, key)?),
            "min_pts" => o.min_pts = Some(count(v, key)? as usize),
            "dims" => o.dims = Some(count(v, key)? as usize),
            "seed" => o.seed = Some(count(v, key)?),
            "restarts" => o.restarts = Some(count(v, key)? as usize),
            "rcut" => o.rcut = Some(float(v, key)?),
            "out" => o.out = Some(PathBuf::from(v.as_str().ok_or("out must be a string")?)),
            "format" => o.format = Some(v.as_str().ok_or("format must be a string")?.to_string()),
            _ => return Err(format!("unknown config key {key:?}")),
        }
    }
    Ok(o)
}

pub fn read_config(path: &Path) -> Result<Overrides, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = parse_config("epsilon = 2.5\nseed = 9\nmin-pts = 2\n").unwrap();
        let flags = Overrides {
            seed: Some(3),
            ..Default::default()
        };
        let cfg = flags.or(file).resolve().unwrap();
        assert_eq!((cfg.epsilon, cfg.seed, cfg.min_pts, cfg.dims), (2.5, 3, 2, 8));
    }

    #[test]
    fn bad_files() {
        assert!(parse_config("colour = 1").is_err());
        assert!(parse_config("dims = -1").is_err());
        assert!(parse_config("seed = ").is_err());
        assert!(parse_config("epsilon = 0").unwrap().resolve().is_err());
    }
}
