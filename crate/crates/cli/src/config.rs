use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use graphcx::format::{parse_algebra, AlgebraRegistry};
use serde::Deserialize;

/// Settings read from the file named by `--config` or `GRAPHCX_CONFIG`.
/// Command-line flags take precedence over everything here.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Algebra name to source file; relative paths resolve against the
    /// directory of the config file.
    #[serde(default)]
    pub algebras: BTreeMap<String, PathBuf>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub truncation: Truncation,
}

/// Default bounds, used when a subcommand flag is absent.
#[derive(Debug, Default, Deserialize, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub max_edges: Option<usize>,
    pub max_internal: Option<usize>,
    pub max_loops: Option<usize>,
    pub max_hairs: Option<usize>,
    pub max_decorations: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in cfg.algebras.values_mut() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Builtin algebras plus every registered source file.
    pub fn registry(&self) -> Result<AlgebraRegistry, String> {
        let mut reg = AlgebraRegistry::new();
        for (name, path) in &self.algebras {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let alg = parse_algebra(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            if alg.name() != name {
                return Err(format!("{} declares algebra `{}`, registered as `{name}`", path.display(), alg.name()));
            }
            reg.register(alg);
        }
        Ok(reg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("threads = 2\nfrob = 1\n").is_err());
        let c: RunConfig = toml::from_str("threads = 2\n[truncation]\nmax_edges = 5\n").unwrap();
        assert_eq!(c.threads, Some(2));
        assert_eq!(c.truncation.max_edges, Some(5));
    }
}
