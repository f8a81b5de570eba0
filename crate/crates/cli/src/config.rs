use critstrip_core::gaussian::ProbeParameters;
use std::fmt;
use std::path::{Path, PathBuf};

/// Environment variable naming an alternate config file.
pub const CONFIG_ENV: &str = "CRITSTRIP_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(ConfigError::new(format!("unknown format {s:?} (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl ConfigError {
    fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Constants, caps and tolerances for one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ProbeParameters,
    /// Constant in the convexity comparator `|L| <= K C^{(1 - sigma)/2 + eps}`.
    pub k: f64,
    /// Largest modulus scanned; each suite has its own default.
    pub q_max: Option<u64>,
    /// Most negative discriminant scanned; each suite has its own default.
    pub disc_min: Option<i64>,
    pub x_max: u64,
    pub t_max: f64,
    pub fe_tol: f64,
    pub identity_tol: f64,
    pub mellin_tol: f64,
    pub kappa_tol: f64,
    pub series_tol: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ProbeParameters::default(),
            k: critstrip_core::gaussian::CONVEXITY_CONSTANT,
            q_max: None,
            disc_min: None,
            x_max: 10_000,
            t_max: 64.0,
            fe_tol: 1e-8,
            identity_tol: 1e-4,
            mellin_tol: 1e-7,
            kappa_tol: 1e-9,
            series_tol: 1e-8,
            seed: 1,
            out: None,
            format: Format::Csv,
        }
    }
}

fn positive_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| ConfigError::new(format!("{key}: {v:?} is not a number")))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(ConfigError::new(format!("{key}: {x} must be positive")));
    }
    Ok(x)
}

fn positive_u64(key: &str, v: &str) -> Result<u64, ConfigError> {
    let x: u64 = v
        .parse()
        .map_err(|_| ConfigError::new(format!("{key}: {v:?} is not a positive integer")))?;
    if x == 0 {
        return Err(ConfigError::new(format!("{key}: must be positive")));
    }
    Ok(x)
}

pub fn parse_disc_min(v: &str) -> Result<i64, ConfigError> {
    let x: i64 = v
        .parse()
        .map_err(|_| ConfigError::new(format!("disc_min: {v:?} is not an integer")))?;
    if x > -3 {
        return Err(ConfigError::new(format!("disc_min: {x} must be <= -3")));
    }
    Ok(x)
}

pub fn parse_q_max(v: &str) -> Result<u64, ConfigError> {
    positive_u64("q_max", v)
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "b1" => self.params.b1 = positive_f64(key, value)?,
            "A" => self.params.window_a = positive_f64(key, value)?,
            "c" => self.params.c = positive_f64(key, value)?,
            "eps" => self.params.eps = positive_f64(key, value)?,
            "K" => self.k = positive_f64(key, value)?,
            "q_max" => self.q_max = Some(parse_q_max(value)?),
            "disc_min" => self.disc_min = Some(parse_disc_min(value)?),
            "x_max" => self.x_max = positive_u64(key, value)?,
            "t_max" => self.t_max = positive_f64(key, value)?,
            "fe_tol" => self.fe_tol = positive_f64(key, value)?,
            "identity_tol" => self.identity_tol = positive_f64(key, value)?,
            "mellin_tol" => self.mellin_tol = positive_f64(key, value)?,
            "kappa_tol" => self.kappa_tol = positive_f64(key, value)?,
            "series_tol" => self.series_tol = positive_f64(key, value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| ConfigError::new(format!("seed: {value:?} is not an integer")))?
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => return Err(ConfigError::new(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parse flat `key = value` text; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| ConfigError::new(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The explicit path if given, else the environment variable, else defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn q_max_or(&self, default: u64) -> u64 {
        self.q_max.unwrap_or(default)
    }

    pub fn disc_min_or(&self, default: i64) -> i64 {
        self.disc_min.unwrap_or(default)
    }
}
