//! Scenario configuration: flat `key = value` text with dotted keys.
//!
//! ```text
//! # Camassa-Holm from cos x + 0.3 sin 2x
//! grid.n = 128
//! operator.kind = helmholtz        # helmholtz | sobolev | identity | custom
//! operator.params =                # sobolev: s; custom: a(0), a(1), ...
//! operator.file =                  # custom symbol as `k,a` CSV (instead of params)
//! initial.modes = 1 1 0; 2 0 0.3   # `k cos_amp sin_amp` entries separated by `;`
//! initial.mean = 0
//! time.dt = 1e-3
//! time.t_final = 1
//! time.record_every = 10
//! mode = both                      # eulerian | lagrangian | both
//! output.dir = out
//! output.snapshots = false         # also write final-state field CSVs
//! seed = 0
//! ```
//!
//! Every key is optional; missing keys take the values shown above.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::flows::step_count;
use crate::inertia::InertiaOperator;
use crate::spectral::{Mode, PeriodicField};

pub const KEYS: &[&str] = &[
    "grid.n",
    "operator.kind",
    "operator.params",
    "operator.file",
    "initial.modes",
    "initial.mean",
    "time.dt",
    "time.t_final",
    "time.record_every",
    "mode",
    "output.dir",
    "output.snapshots",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Eulerian,
    Lagrangian,
    Both,
}

impl RunMode {
    pub fn eulerian(self) -> bool {
        matches!(self, RunMode::Eulerian | RunMode::Both)
    }

    pub fn lagrangian(self) -> bool {
        matches!(self, RunMode::Lagrangian | RunMode::Both)
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunMode::Eulerian => "eulerian",
            RunMode::Lagrangian => "lagrangian",
            RunMode::Both => "both",
        })
    }
}

impl FromStr for RunMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "eulerian" => Ok(RunMode::Eulerian),
            "lagrangian" => Ok(RunMode::Lagrangian),
            "both" => Ok(RunMode::Both),
            other => Err(format!("expected eulerian | lagrangian | both, got `{other}`")),
        }
    }
}

/// Inertia operator as written in a config or on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub kind: String,
    pub params: Vec<f64>,
    pub file: Option<PathBuf>,
}

impl OperatorSpec {
    pub fn helmholtz() -> Self {
        OperatorSpec {
            kind: "helmholtz".into(),
            params: Vec::new(),
            file: None,
        }
    }

    /// Parses `helmholtz`, `identity`, `sobolev:S` or `custom:PATH`.
    pub fn parse_cli(text: &str) -> Result<Self> {
        let (kind, arg) = match text.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (text, None),
        };
        let mut spec = OperatorSpec {
            kind: kind.to_string(),
            params: Vec::new(),
            file: None,
        };
        match (kind, arg) {
            ("custom", Some(path)) => spec.file = Some(PathBuf::from(path)),
            (_, Some(list)) => spec.params = parse_floats("operator", list)?,
            _ => {}
        }
        Ok(spec)
    }

    pub fn build(&self, n: usize) -> Result<InertiaOperator> {
        match (&self.file, self.kind.as_str()) {
            (Some(path), "custom") => InertiaOperator::load_csv(n, path),
            _ => InertiaOperator::make(n, &self.kind, &self.params),
        }
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(path) = &self.file {
            write!(f, ":{}", path.display())
        } else if !self.params.is_empty() {
            write!(f, ":{}", join_floats(&self.params))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n: usize,
    pub operator: OperatorSpec,
    pub modes: Vec<Mode>,
    pub mean: f64,
    pub dt: f64,
    pub t_final: f64,
    pub record_every: usize,
    pub mode: RunMode,
    pub output_dir: PathBuf,
    pub snapshots: bool,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n: 128,
            operator: OperatorSpec::helmholtz(),
            modes: vec![Mode::cos(1, 1.0), Mode::sin(2, 0.3)],
            mean: 0.0,
            dt: 1e-3,
            t_final: 1.0,
            record_every: 10,
            mode: RunMode::Both,
            output_dir: PathBuf::from("out"),
            snapshots: false,
            seed: 0,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse `{value}`")))
}

fn parse_floats(key: &str, list: &str) -> Result<Vec<f64>> {
    list.split([',', ' '])
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

fn join_floats(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn parse_modes(key: &str, text: &str) -> Result<Vec<Mode>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|entry| {
            let parts: Vec<&str> = entry.split([',', ' ']).filter(|s| !s.is_empty()).collect();
            match parts.as_slice() {
                [k, c, s] => Ok(Mode::new(parse_value(key, k)?, parse_value(key, c)?, parse_value(key, s)?)),
                _ => Err(Error::config(key, format!("expected `k cos_amp sin_amp`, got `{}`", entry.trim()))),
            }
        })
        .collect()
}

/// Splits `key = value` lines; `#` starts a comment.
pub fn parse_entries(text: &str) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        entries.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(entries)
}

/// Parses a `key=value` override as given to `--set`.
pub fn parse_override(text: &str) -> Result<(String, String)> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| Error::config(text, "override must look like key=value"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_entries(&parse_entries(text)?)
    }

    pub fn load(path: impl AsRef<Path>, overrides: &[(String, String)]) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", path.display())))?;
        let mut entries = parse_entries(&text)?;
        entries.extend(overrides.iter().cloned());
        Self::from_entries(&entries)
    }

    pub fn from_entries(entries: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        for (key, value) in entries {
            let v = value.as_str();
            match key.as_str() {
                "grid.n" => cfg.n = parse_value(key, v)?,
                "operator.kind" => cfg.operator.kind = v.to_string(),
                "operator.params" => cfg.operator.params = parse_floats(key, v)?,
                "operator.file" => cfg.operator.file = (!v.is_empty()).then(|| PathBuf::from(v)),
                "initial.modes" => cfg.modes = parse_modes(key, v)?,
                "initial.mean" => cfg.mean = parse_value(key, v)?,
                "time.dt" => cfg.dt = parse_value(key, v)?,
                "time.t_final" => cfg.t_final = parse_value(key, v)?,
                "time.record_every" => cfg.record_every = parse_value(key, v)?,
                "mode" => cfg.mode = v.parse().map_err(|m: String| Error::config(key, m))?,
                "output.dir" => cfg.output_dir = PathBuf::from(v),
                "output.snapshots" => cfg.snapshots = parse_value(key, v)?,
                "seed" => cfg.seed = parse_value(key, v)?,
                other => return Err(Error::config(other, "unknown key")),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 || !self.n.is_power_of_two() {
            return Err(Error::config("grid.n", format!("must be a power of two >= 8, got {}", self.n)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("time.dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::config("time.t_final", format!("must be positive, got {}", self.t_final)));
        }
        step_count(self.t_final, self.dt).map_err(|e| Error::config("time.dt", e.to_string()))?;
        if self.record_every == 0 {
            return Err(Error::config("time.record_every", "must be at least 1"));
        }
        if !self.mean.is_finite() {
            return Err(Error::config("initial.mean", "must be finite"));
        }
        self.operator
            .build(self.n)
            .map_err(|e| Error::config("operator.kind", e.to_string()))?;
        self.initial_field()
            .map_err(|e| Error::config("initial.modes", e.to_string()))?;
        Ok(())
    }

    pub fn inertia(&self) -> Result<InertiaOperator> {
        self.operator.build(self.n)
    }

    /// `mean + Σ modes`.
    pub fn initial_field(&self) -> Result<PeriodicField> {
        let mut modes = self.modes.clone();
        modes.push(Mode::cos(0, self.mean));
        PeriodicField::from_modes(self.n, &modes)
    }

    /// Canonical key/value echo of the resolved configuration.
    pub fn to_entries(&self) -> BTreeMap<String, String> {
        let modes = self
            .modes
            .iter()
            .map(|m| format!("{} {} {}", m.k, m.cos_amp, m.sin_amp))
            .collect::<Vec<_>>()
            .join("; ");
        let mut e = BTreeMap::new();
        e.insert("grid.n".into(), self.n.to_string());
        e.insert("operator.kind".into(), self.operator.kind.clone());
        e.insert("operator.params".into(), join_floats(&self.operator.params));
        e.insert(
            "operator.file".into(),
            self.operator.file.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        );
        e.insert("initial.modes".into(), modes);
        e.insert("initial.mean".into(), self.mean.to_string());
        e.insert("time.dt".into(), self.dt.to_string());
        e.insert("time.t_final".into(), self.t_final.to_string());
        e.insert("time.record_every".into(), self.record_every.to_string());
        e.insert("mode".into(), self.mode.to_string());
        e.insert("output.dir".into(), self.output_dir.display().to_string());
        e.insert("output.snapshots".into(), self.snapshots.to_string());
        e.insert("seed".into(), self.seed.to_string());
        e
    }

    /// Renders the configuration back into the file format.
    pub fn to_text(&self) -> String {
        self.to_entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_full_file() {
        let cfg = ScenarioConfig::parse("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());

        let text = "\
            # comment\n\
            grid.n = 64\n\
            operator.kind = sobolev\n\
            operator.params = 2\n\
            initial.modes = 1 1 0; 3 0 -0.5  # trailing comment\n\
            initial.mean = 0.25\n\
            time.dt = 0.01\n\
            time.t_final = 0.5\n\
            time.record_every = 5\n\
            mode = eulerian\n\
            output.dir = /tmp/x\n\
            seed = 9\n";
        let cfg = ScenarioConfig::parse(text).unwrap();
        assert_eq!(cfg.n, 64);
        assert_eq!(cfg.operator.params, vec![2.0]);
        assert_eq!(cfg.modes, vec![Mode::new(1, 1.0, 0.0), Mode::new(3, 0.0, -0.5)]);
        assert_eq!(cfg.mode, RunMode::Eulerian);
        assert_eq!(cfg.seed, 9);
        assert!((cfg.initial_field().unwrap().mean() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn echo_round_trips() {
        let cfg = ScenarioConfig::parse("grid.n = 32\noperator.kind = sobolev\noperator.params = 1.5\n").unwrap();
        assert_eq!(ScenarioConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn errors_name_the_key() {
        let err = ScenarioConfig::parse("time.dt = -1").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "time.dt"), "{err}");
        let err = ScenarioConfig::parse("grid.n = 100").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "grid.n"));
        let err = ScenarioConfig::parse("time.dt = 0.3").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "time.dt"));
        let err = ScenarioConfig::parse("bogus.key = 1").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "bogus.key"));
        let err = ScenarioConfig::parse("operator.kind = custom\noperator.params = 1, 0").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "operator.kind"));
        let err = ScenarioConfig::parse("initial.modes = 1 2").unwrap_err();
        assert!(matches!(&err, Error::Config { key, .. } if key == "initial.modes"));
        assert!(matches!(ScenarioConfig::parse("no equals sign"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn overrides_win() {
        let mut entries = parse_entries("time.dt = 0.01\n").unwrap();
        let (k, v) = parse_override("time.dt=0.02").unwrap();
        entries.insert(k, v);
        assert_eq!(ScenarioConfig::from_entries(&entries).unwrap().dt, 0.02);
        assert!(parse_override("nothing").is_err());
    }

    #[test]
    fn operator_specs_from_cli() {
        assert_eq!(OperatorSpec::parse_cli("helmholtz").unwrap(), OperatorSpec::helmholtz());
        let s = OperatorSpec::parse_cli("sobolev:2").unwrap();
        assert_eq!(s.params, vec![2.0]);
        assert_eq!(s.build(16).unwrap().symbol()[1], 4.0);
        let c = OperatorSpec::parse_cli("custom:sym.csv").unwrap();
        assert_eq!(c.file, Some(PathBuf::from("sym.csv")));
        assert_eq!(c.to_string(), "custom:sym.csv");
    }
}
