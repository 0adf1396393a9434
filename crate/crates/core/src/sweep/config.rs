//! Flat `key = value` run configuration.
//!
//! One assignment per line; blank lines and lines starting with `#` are
//! ignored. Overrides given as `key=value` strings (the CLI's `--set`) are
//! applied after the file, so they win.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

/// Where a configuration value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("command line"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: Origin, text: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: Origin, key: String },
    #[error("{origin}: key `{key}` given twice")]
    Duplicate { origin: Origin, key: String },
    #[error("{origin}: {key} = {value}: {reason}")]
    Invalid { origin: Origin, key: String, value: String, reason: String },
    #[error("missing required key `{key}`{context}")]
    Missing { key: &'static str, context: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    NdtSweep,
    SimVerify,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::NdtSweep => "ndt-sweep",
            Mode::SimVerify => "sim-verify",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ndt-sweep" => Ok(Mode::NdtSweep),
            "sim-verify" => Ok(Mode::SimVerify),
            _ => Err("expected ndt-sweep or sim-verify".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepVar {
    Mu,
    Alpha,
    R,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::Mu => "mu",
            SweepVar::Alpha => "alpha",
            SweepVar::R => "r",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mu" => Ok(SweepVar::Mu),
            "alpha" => Ok(SweepVar::Alpha),
            "r" => Ok(SweepVar::R),
            _ => Err("expected mu, alpha or r".into()),
        }
    }
}

/// NDT curves a sweep can emit. Ordering is by name, which is the row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    Orthogonal,
    NonOrthogonal,
    Combined,
    EdgeZf,
    EdgeIa,
    CloudHard,
    CloudSoft,
}

impl Curve {
    pub const ALL: [Curve; 7] = [
        Curve::Orthogonal,
        Curve::NonOrthogonal,
        Curve::Combined,
        Curve::EdgeZf,
        Curve::EdgeIa,
        Curve::CloudHard,
        Curve::CloudSoft,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Curve::Orthogonal => "orthogonal",
            Curve::NonOrthogonal => "nonorthogonal",
            Curve::Combined => "combined",
            Curve::EdgeZf => "edge-zf",
            Curve::EdgeIa => "edge-ia",
            Curve::CloudHard => "cloud-hard",
            Curve::CloudSoft => "cloud-soft",
        }
    }
}

impl PartialOrd for Curve {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Curve {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl FromStr for Curve {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Curve::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown curve `{s}`"))
    }
}

/// A validated run description.
///
/// For `ndt-sweep`, the swept one of `mu`, `r`, `alpha` may be `None`; the
/// others are set. For `sim-verify` all three are set.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub nodes: usize,
    pub mu: Option<f64>,
    pub r: Option<f64>,
    pub alpha: Option<f64>,
    pub sweep: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Sorted by name, no duplicates.
    pub curves: Vec<Curve>,
    pub seed: u64,
    pub rounds: usize,
    pub p_log2_start: f64,
    pub p_log2_stop: f64,
    pub p_points: usize,
    pub tolerance: f64,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_COUNT: usize = 101;
pub const DEFAULT_ROUNDS: usize = 10_000;

const KEYS: &[&str] = &[
    "mode", "K", "mu", "r", "alpha", "sweep", "start", "stop", "count", "curves", "seed",
    "rounds", "p_log2_start", "p_log2_stop", "p_points", "tolerance", "out",
];

type RawEntries = BTreeMap<String, (String, Origin)>;

fn split_assignment(text: &str, origin: Origin) -> Result<(String, String), ConfigError> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| ConfigError::Syntax { origin, text: text.to_string() })?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::Syntax { origin, text: text.to_string() });
    }
    if !KEYS.contains(&key) {
        return Err(ConfigError::UnknownKey { origin, key: key.to_string() });
    }
    Ok((key.to_string(), value.trim().to_string()))
}

fn read_entries(text: &str) -> Result<RawEntries, ConfigError> {
    let mut entries = RawEntries::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let origin = Origin::Line(i + 1);
        let (key, value) = split_assignment(trimmed, origin)?;
        if entries.contains_key(&key) {
            return Err(ConfigError::Duplicate { origin, key });
        }
        entries.insert(key, (value, origin));
    }
    Ok(entries)
}

/// Parses a configuration document.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    parse_config_with_overrides(text, &[])
}

/// Parses a configuration document, then applies `key=value` overrides.
pub fn parse_config_with_overrides(
    text: &str,
    overrides: &[String],
) -> Result<SweepConfig, ConfigError> {
    let mut entries = read_entries(text)?;
    for o in overrides {
        let (key, value) = split_assignment(o, Origin::Flag)?;
        entries.insert(key, (value, Origin::Flag));
    }
    Builder { entries }.build()
}

struct Builder {
    entries: RawEntries,
}

impl Builder {
    fn raw(&self, key: &str) -> Option<&(String, Origin)> {
        self.entries.get(key)
    }

    fn invalid(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        let (value, origin) = self.raw(key).cloned().expect("only called for present keys");
        ConfigError::Invalid { origin, key: key.to_string(), value, reason: reason.into() }
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((value, _)) => value.parse::<T>().map(Some).map_err(|e| self.invalid(key, e.to_string())),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v = self.parse::<f64>(key)?;
        if v.is_some_and(f64::is_nan) {
            return Err(self.invalid(key, "not a number"));
        }
        Ok(v)
    }

    fn unit(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let v = self.float(key)?;
        if v.is_some_and(|x| !(0.0..=1.0).contains(&x)) {
            return Err(self.invalid(key, "outside [0, 1]"));
        }
        Ok(v)
    }

    fn build(self) -> Result<SweepConfig, ConfigError> {
        let mode: Mode = self
            .parse("mode")?
            .ok_or(ConfigError::Missing { key: "mode", context: String::new() })?;
        let context = format!(" for {}", mode.as_str());
        let missing = |key: &'static str| ConfigError::Missing { key, context: context.clone() };

        let mu = self.unit("mu")?;
        let alpha = self.unit("alpha")?;
        let r = self.float("r")?;
        if r.is_some_and(|r| r < 0.0) {
            return Err(self.invalid("r", "fronthaul rate must be >= 0"));
        }
        let nodes: Option<usize> = self.parse("K")?;
        if nodes == Some(0) {
            return Err(self.invalid("K", "need at least one edge node"));
        }

        let sweep: Option<SweepVar> = self.parse("sweep")?;
        let start = self.float("start")?;
        let stop = self.float("stop")?;
        let count = self.parse::<usize>("count")?.unwrap_or(DEFAULT_COUNT);
        if count < 2 && self.raw("count").is_some() {
            return Err(self.invalid("count", "grid needs at least 2 points"));
        }
        let curves = match self.raw("curves") {
            None => vec![Curve::Combined, Curve::NonOrthogonal, Curve::Orthogonal],
            Some((value, _)) => {
                let mut list = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<Curve>().map_err(|e| self.invalid("curves", e)))
                    .collect::<Result<Vec<_>, _>>()?;
                if list.is_empty() {
                    return Err(self.invalid("curves", "at least one curve is required"));
                }
                list.sort();
                list.dedup();
                list
            }
        };
        let seed = self.parse::<u64>("seed")?.unwrap_or(0);
        let rounds = self.parse::<usize>("rounds")?.unwrap_or(DEFAULT_ROUNDS);
        if rounds == 0 {
            return Err(self.invalid("rounds", "need at least one round"));
        }
        let p_log2_start = self.float("p_log2_start")?.unwrap_or(10.0);
        let p_log2_stop = self.float("p_log2_stop")?.unwrap_or(40.0);
        let p_points = self.parse::<usize>("p_points")?.unwrap_or(7);
        if !(p_log2_start > 0.0 && p_log2_start.is_finite()) {
            return Err(self.invalid("p_log2_start", "SNR grid must start above P = 1"));
        }
        if !(p_log2_stop > p_log2_start && p_log2_stop.is_finite()) {
            return Err(self.invalid("p_log2_stop", "must exceed p_log2_start"));
        }
        if p_points < 4 {
            return Err(self.invalid("p_points", "need at least 4 SNR points"));
        }
        let tolerance = self.float("tolerance")?.unwrap_or(0.05);
        if tolerance < 0.0 {
            return Err(self.invalid("tolerance", "must be >= 0"));
        }
        let out = self.raw("out").map(|(v, _)| PathBuf::from(v));

        let cfg = match mode {
            Mode::NdtSweep => {
                let nodes = nodes.ok_or_else(|| missing("K"))?;
                let sweep = sweep.ok_or_else(|| missing("sweep"))?;
                for (var, key, value) in
                    [(SweepVar::Mu, "mu", mu), (SweepVar::R, "r", r), (SweepVar::Alpha, "alpha", alpha)]
                {
                    if sweep != var && value.is_none() {
                        return Err(missing(key));
                    }
                }
                let (default_start, default_stop) = match sweep {
                    SweepVar::R => (Some(0.0), None),
                    _ => (Some(0.0), Some(1.0)),
                };
                let start = start.or(default_start).ok_or_else(|| missing("start"))?;
                let stop = stop.or(default_stop).ok_or_else(|| missing("stop"))?;
                let in_domain = |x: f64| match sweep {
                    SweepVar::R => x >= 0.0 && x.is_finite(),
                    _ => (0.0..=1.0).contains(&x),
                };
                if !in_domain(start) {
                    return Err(self.invalid("start", format!("outside the domain of {}", sweep.as_str())));
                }
                if !in_domain(stop) {
                    return Err(self.invalid("stop", format!("outside the domain of {}", sweep.as_str())));
                }
                if stop <= start {
                    let key = if self.raw("stop").is_some() { "stop" } else { "start" };
                    return Err(self.invalid(key, "sweep range must have start < stop"));
                }
                SweepConfig {
                    mode,
                    nodes,
                    mu,
                    r,
                    alpha,
                    sweep,
                    start,
                    stop,
                    count,
                    curves,
                    seed,
                    rounds,
                    p_log2_start,
                    p_log2_stop,
                    p_points,
                    tolerance,
                    out,
                }
            }
            Mode::SimVerify => {
                let nodes = nodes.unwrap_or(2);
                if nodes < 2 {
                    return Err(self.invalid("K", "simulation needs at least two users"));
                }
                let alpha = alpha.unwrap_or(2.0 / 3.0);
                if alpha == 0.0 {
                    return Err(self.invalid("alpha", "cloud precoding needs alpha > 0"));
                }
                let mu = mu.unwrap_or(0.5);
                if !(mu > 0.0 && mu < 1.0) {
                    return Err(self.invalid("mu", "superposition needs 0 < mu < 1"));
                }
                SweepConfig {
                    mode,
                    nodes,
                    mu: Some(mu),
                    r: Some(r.unwrap_or(1.0)),
                    alpha: Some(alpha),
                    sweep: sweep.unwrap_or(SweepVar::Mu),
                    start: start.unwrap_or(0.0),
                    stop: stop.unwrap_or(1.0),
                    count,
                    curves,
                    seed,
                    rounds,
                    p_log2_start,
                    p_log2_stop,
                    p_points,
                    tolerance,
                    out,
                }
            }
        };
        Ok(cfg)
    }
}

impl SweepConfig {
    /// Serializes every field in the file grammar; parsing the result gives
    /// back an equal config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("mode", self.mode.as_str().to_string());
        put("K", self.nodes.to_string());
        for (k, v) in [("mu", self.mu), ("r", self.r), ("alpha", self.alpha)] {
            if let Some(v) = v {
                put(k, v.to_string());
            }
        }
        put("sweep", self.sweep.as_str().to_string());
        put("start", self.start.to_string());
        put("stop", self.stop.to_string());
        put("count", self.count.to_string());
        put("curves", self.curves.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(","));
        put("seed", self.seed.to_string());
        put("rounds", self.rounds.to_string());
        put("p_log2_start", self.p_log2_start.to_string());
        put("p_log2_stop", self.p_log2_stop.to_string());
        put("p_points", self.p_points.to_string());
        put("tolerance", self.tolerance.to_string());
        if let Some(out) = &self.out {
            put("out", out.display().to_string());
        }
        s
    }
}
