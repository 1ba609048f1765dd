//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Relative paths are resolved
//! against the directory holding the config file.

use std::fs;
use std::path::{Path, PathBuf};

use netblow_core::{Nonlinearity, SolveConfig};

use crate::error::CliError;

/// How the initial state is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    /// Constant data from the finder for `J(u₀) > 0`.
    Auto,
    /// The same value on every interior vertex.
    Constant(f64),
    /// Per-vertex values by label; unlisted vertices are zero.
    Values(Vec<(String, f64)>),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub network: PathBuf,
    pub f: Nonlinearity,
    pub alpha: f64,
    /// `None` selects the largest admissible value `(α − 2)λ₀/2`.
    pub beta: Option<f64>,
    pub gamma: f64,
    pub u0: InitialSpec,
    pub v_hi: f64,
    pub solve: SolveConfig,
    pub output: PathBuf,
    pub u_max: f64,
    pub grid_n: usize,
}

const KEYS: &[&str] = &[
    "network",
    "f",
    "alpha",
    "beta",
    "gamma",
    "u0",
    "v_hi",
    "t_end",
    "rel_tol",
    "abs_tol",
    "blowup_sup_threshold",
    "dt_min",
    "record_every",
    "output",
    "u_max",
    "grid_n",
];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base).map_err(|(line, msg)| CliError::Config {
            path: path.to_path_buf(),
            line,
            msg,
        })
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, (usize, String)> {
        let mut entries: Vec<(&str, &str, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or((line_no, format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err((line_no, format!("unknown key '{key}'")));
            }
            if let Some((_, _, first)) = entries.iter().find(|(k, _, _)| *k == key) {
                return Err((line_no, format!("key '{key}' already set on line {first}")));
            }
            entries.push((key, value, line_no));
        }
        let get = |key: &str| entries.iter().find(|(k, _, _)| *k == key).map(|(_, v, l)| (*v, *l));
        let real = |key: &str, default: f64| -> Result<f64, (usize, String)> {
            match get(key) {
                None => Ok(default),
                Some((v, line)) => parse_real(v).map_err(|m| (line, format!("{key}: {m}"))),
            }
        };

        let (network, _) = get("network").ok_or((0, "missing key 'network'".to_string()))?;
        let (f_text, f_line) = get("f").ok_or((0, "missing key 'f'".to_string()))?;
        let f: Nonlinearity = f_text.parse().map_err(|e| (f_line, format!("f: {e}")))?;

        let beta = match get("beta") {
            None => None,
            Some((v, line)) => Some(parse_real(v).map_err(|m| (line, format!("beta: {m}")))?),
        };
        let u0 = match get("u0") {
            None => InitialSpec::Auto,
            Some((v, line)) => parse_initial(v).map_err(|m| (line, format!("u0: {m}")))?,
        };
        let grid_n = match get("grid_n") {
            None => 2000,
            Some((v, line)) => v
                .parse()
                .map_err(|_| (line, format!("grid_n: '{v}' is not a count")))?,
        };
        let defaults = SolveConfig::default();
        let solve = SolveConfig {
            t_end: real("t_end", defaults.t_end)?,
            rel_tol: real("rel_tol", defaults.rel_tol)?,
            abs_tol: real("abs_tol", defaults.abs_tol)?,
            blowup_sup_threshold: real("blowup_sup_threshold", defaults.blowup_sup_threshold)?,
            dt_min: real("dt_min", defaults.dt_min)?,
            record_every: real("record_every", defaults.record_every)?,
        };
        Ok(RunConfig {
            network: base.join(network),
            f,
            alpha: real("alpha", 3.0)?,
            beta,
            gamma: real("gamma", 0.1)?,
            u0,
            v_hi: real("v_hi", 1e6)?,
            solve,
            output: base.join(get("output").map_or("trajectory.csv", |(v, _)| v)),
            u_max: real("u_max", 1e6)?,
            grid_n,
        })
    }

    /// The trajectory path, moved into `NETBLOW_OUT` when that is set.
    pub fn output_path(&self) -> PathBuf {
        match std::env::var_os("NETBLOW_OUT") {
            Some(dir) if !dir.is_empty() => {
                let name = self.output.file_name().map_or_else(
                    || PathBuf::from("trajectory.csv"),
                    PathBuf::from,
                );
                PathBuf::from(dir).join(name)
            }
            _ => self.output.clone(),
        }
    }
}

fn parse_real(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("'{v}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("'{v}' is not finite"));
    }
    Ok(x)
}

fn parse_initial(v: &str) -> Result<InitialSpec, String> {
    if v == "auto" {
        return Ok(InitialSpec::Auto);
    }
    if let Some(c) = v.strip_prefix("const:") {
        return parse_real(c.trim()).map(InitialSpec::Constant);
    }
    if let Some(list) = v.strip_prefix("values:") {
        let mut values = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (label, x) = item
                .split_once('=')
                .ok_or(format!("expected label=value, got '{item}'"))?;
            let label = label.trim().to_string();
            if values.iter().any(|(l, _)| *l == label) {
                return Err(format!("vertex '{label}' listed twice"));
            }
            values.push((label, parse_real(x.trim())?));
        }
        if values.is_empty() {
            return Err("values: list is empty".into());
        }
        return Ok(InitialSpec::Values(values));
    }
    Err(format!("expected auto, const:<v> or values:<label>=<v>,..., got '{v}'"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# P3 instance
network = p3.txt
f = power:2
alpha = 3
gamma = 0.1   # trailing comment
u0 = values:c=4
t_end = 20
record_every = 0.05
";
        let cfg = RunConfig::parse(text, Path::new("/data")).unwrap();
        assert_eq!(cfg.network, PathBuf::from("/data/p3.txt"));
        assert_eq!(cfg.alpha, 3.0);
        assert_eq!(cfg.beta, None);
        assert_eq!(cfg.u0, InitialSpec::Values(vec![("c".into(), 4.0)]));
        assert_eq!(cfg.solve.t_end, 20.0);
        assert_eq!(cfg.solve.rel_tol, 1e-8);
        assert_eq!(cfg.output, PathBuf::from("/data/trajectory.csv"));
    }

    #[test]
    fn reports_bad_lines() {
        let base = Path::new(".");
        let err = RunConfig::parse("network = a\nf = power:2\nspeed = 3\n", base).unwrap_err();
        assert_eq!(err.0, 3);
        let err = RunConfig::parse("network = a\nf = poly:1,-1\n", base).unwrap_err();
        assert_eq!(err.0, 2);
        let err = RunConfig::parse("network = a\nf = power:2\nf = power:3\n", base).unwrap_err();
        assert_eq!(err.0, 3);
        let err = RunConfig::parse("network = a\nf = power:2\nu0 = const:x\n", base).unwrap_err();
        assert_eq!(err.0, 3);
        assert!(RunConfig::parse("f = power:2\n", base).is_err());
    }

    #[test]
    fn initial_modes() {
        assert_eq!(parse_initial("auto").unwrap(), InitialSpec::Auto);
        assert_eq!(parse_initial("const:2.5").unwrap(), InitialSpec::Constant(2.5));
        assert!(parse_initial("values:a=1,a=2").is_err());
        assert!(parse_initial("values:").is_err());
        assert!(parse_initial("random").is_err());
    }
}
