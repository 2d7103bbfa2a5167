//! Layered key-value configuration: built-in defaults, a named profile, an
//! INI-style file, then command-line overrides.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

const DEFAULTS: &[(&str, &str)] = &[
    ("omega", "5e9"),
    ("p1", "0.01"),
    ("x_min", "0"),
    ("x_max", "1"),
    ("x_points", "201"),
    ("n_values", "4,8,16,32,64,128,256,512,1024"),
    ("theta_min", "0.01"),
    ("theta_max", "100"),
    ("theta_points", "161"),
    ("s_values", "2,5,10,50,100,500"),
    ("work.n_values", "16,64,256,1024"),
    ("work.x_points", "51"),
    ("work.markers", "contemporary=0.2"),
    ("protocol", "mirror"),
    ("noise.locus", "single"),
    ("noise.granularity", "mcx"),
    ("noise.p_grid", "0,0.001,0.002,0.005,0.01,0.02,0.05,0.1,0.2"),
    ("noise.n_values", "3,4,5,6,7,8"),
    ("cluster.n", "3"),
    ("cluster.r", "2"),
    ("cluster.optimal_n", "3,5,9"),
    ("cluster.steps", "1,2,3,4"),
    ("cluster.x_points", "51"),
    ("gates.n_min", "3"),
    ("gates.n_max", "14"),
    ("cnot.slope", "6"),
    ("cnot.offset", "-8"),
    ("cnot.quadratic", "2,2,-6"),
];

/// Named presets.
pub const PROFILES: &[(&str, &[(&str, &str)])] = &[
    ("superconducting", &[("omega", "5e9"), ("p1", "0.01")]),
    (
        "contemporary",
        &[("omega", "5e9"), ("reduced_temperature", "0.2")],
    ),
    (
        "noise-15mk",
        &[("omega", "5e9"), ("temperature_mk", "15"), ("noise.locus", "all")],
    ),
    (
        "noise-100mk",
        &[
            ("omega", "5e9"),
            ("temperature_mk", "100"),
            ("noise.locus", "all"),
        ],
    ),
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn with_defaults() -> Self {
        let mut c = Config::default();
        for (k, v) in DEFAULTS {
            c.set(k, v);
        }
        c
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.values
            .insert(key.trim().to_string(), value.trim().to_string());
    }

    pub fn apply_profile(&mut self, name: &str) -> Result<(), CliError> {
        let (_, entries) = PROFILES.iter().find(|(n, _)| *n == name).ok_or_else(|| {
            let names: Vec<&str> = PROFILES.iter().map(|(n, _)| *n).collect();
            CliError::Usage(format!(
                "unknown profile {name:?}; available: {}",
                names.join(", ")
            ))
        })?;
        for (k, v) in *entries {
            self.set(k, v);
        }
        Ok(())
    }

    /// Parses `key = value` lines; `[section]` headers prefix later keys
    /// with `section.`; `#` and `;` start comments.
    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = if section.is_empty() {
                k.trim().to_string()
            } else {
                format!("{section}.{}", k.trim())
            };
            self.set(&key, v);
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.merge_text(&text)
    }

    pub fn merge_override(&mut self, assignment: &str) -> Result<(), CliError> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("override {assignment:?} is not key=value")))?;
        self.set(k, v);
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self
            .raw(key)
            .ok_or_else(|| CliError::Usage(format!("missing setting {key:?}")))?;
        raw.parse()
            .map_err(|_| CliError::Usage(format!("setting {key} = {raw:?} is not valid")))
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(_) => self.get(key).map(Some),
        }
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, CliError> {
        let raw = self
            .raw(key)
            .ok_or_else(|| CliError::Usage(format!("missing setting {key:?}")))?;
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::Usage(format!("setting {key}: {s:?} is not valid")))
            })
            .collect()
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }
}
