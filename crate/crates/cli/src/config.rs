//! Flag / config-file resolution.
//!
//! A run is configured by command-line flags plus an optional `key=value`
//! file; flags win.  Every resolved parameter is echoed into the report so
//! the run is reproducible from the report alone.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

/// CLI-level failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, malformed specs: exit code 2.
    Usage(String),
    /// Data-dependent numeric degeneracy reported by the kernels: exit 3.
    Numeric(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<glyap_core::Error> for CliError {
    fn from(e: glyap_core::Error) -> Self {
        use glyap_core::Error as E;
        match e {
            E::InvalidPartition(_) | E::InvalidPoint(_) | E::OddPartition(_) | E::Shape { .. } => {
                CliError::Usage(e.to_string())
            }
            E::DegenerateMatrix { .. }
            | E::NonGenericSpectrum { .. }
            | E::NoConvergence { .. }
            | E::NotInvariant { .. }
            | E::NonFinite { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

/// Parse a `key=value` file: one pair per line, `#` comments, blank lines
/// ignored.  Values keep interior whitespace; keys and values are trimmed.
pub fn parse_config_file(text: &str, path: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!("{path}:{}: expected key=value, got {line:?}", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(CliError::usage(format!("{path}:{}: empty key", lineno + 1)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::usage(format!("{path}:{}: duplicate key {key:?}", lineno + 1)));
        }
    }
    Ok(map)
}

/// Merges flag values over file values and records the outcome.
pub struct Resolver {
    file: BTreeMap<String, String>,
    /// Resolved parameters, including applied defaults.
    pub echo: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(file: BTreeMap<String, String>) -> Self {
        Resolver { file, echo: BTreeMap::new() }
    }

    /// Reject config-file keys outside the accepted set for this command.
    pub fn check_keys(&self, accepted: &[&str]) -> Result<(), CliError> {
        for key in self.file.keys() {
            if !accepted.contains(&key.as_str()) {
                return Err(CliError::usage(format!(
                    "unknown config key {key:?} (accepted: {})",
                    accepted.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn file_value(&self, key: &str) -> Option<&str> {
        self.file.get(key).map(String::as_str)
    }

    /// Optional parameter: flag, else file, else absent.
    pub fn opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file_value(key) {
                Some(raw) => Some(raw.parse::<T>().map_err(|e| {
                    CliError::usage(format!("config key {key}={raw:?}: {e}"))
                })?),
                None => None,
            },
        };
        if let Some(ref v) = value {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    /// Required parameter: flag, else file, else an error naming the flag.
    pub fn required<T>(&mut self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.opt(key, flag)?
            .ok_or_else(|| CliError::usage(format!("missing required parameter --{key}")))
    }

    /// Defaulted parameter: flag, else file, else the default.
    pub fn with_default<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = self.opt(key, flag)?.unwrap_or(default);
        self.echo.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Switch: true when the flag is present, else the file value, else false.
    pub fn switch(&mut self, key: &str, flag: bool) -> Result<bool, CliError> {
        let value = if flag {
            true
        } else {
            match self.file_value(key) {
                Some("true") | Some("1") | Some("yes") => true,
                Some("false") | Some("0") | Some("no") | None => false,
                Some(other) => {
                    return Err(CliError::usage(format!(
                        "config key {key}={other:?}: expected a boolean"
                    )))
                }
            }
        };
        self.echo.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// True when either the flag or the file supplies this key.
    pub fn is_given(&self, key: &str, flag_given: bool) -> bool {
        flag_given || self.file.contains_key(key)
    }
}
