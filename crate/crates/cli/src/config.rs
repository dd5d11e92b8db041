use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use multifold_core::{Grid, Precision, Slot};

use crate::args::CommonArgs;

const KEYS: [&str; 10] = ["omega", "delta-ratio", "mass", "gate-scale", "times", "ts", "tf", "grid", "out", "precision"];

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// keys may use `-` or `_`.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key = value", lineno + 1))?;
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key {key:?}", lineno + 1);
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            bail!("config line {}: duplicate key {key:?}", lineno + 1);
        }
    }
    Ok(map)
}

/// Flags merged over the config file, before defaults are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub omega: Option<f64>,
    pub delta_ratio: Option<f64>,
    pub mass: Option<f64>,
    pub gate_scale: Option<f64>,
    pub times: Option<Vec<Slot>>,
    pub ts: Option<Slot>,
    pub tf: Option<Slot>,
    pub grid: Option<Grid>,
    pub out: Option<PathBuf>,
    pub precision: Option<u32>,
}

fn parse<T>(key: &str, value: &str) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    value.trim().parse().map_err(|e| anyhow!("--{key} {value:?}: {e}"))
}

fn parse_times(values: &[String]) -> Result<Vec<Slot>> {
    values
        .iter()
        .map(|v| v.trim())
        .filter(|v| !v.is_empty())
        .map(|v| parse("times", v))
        .collect()
}

impl Settings {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_config(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => BTreeMap::new(),
        };
        let from_file = |key: &str| file.get(key).map(String::as_str);
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| from_file(key).map(str::to_string));
        let num = |flag: Option<f64>, key: &str| -> Result<Option<f64>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => from_file(key).map(|v| parse(key, v)).transpose(),
            }
        };

        let times = match &args.times {
            Some(list) => Some(parse_times(list)?),
            None => from_file("times")
                .map(|v| parse_times(&v.split(',').map(str::to_string).collect::<Vec<_>>()))
                .transpose()?,
        };
        let precision = match args.precision {
            Some(p) => Some(p),
            None => from_file("precision").map(|v| parse("precision", v)).transpose()?,
        };
        if precision == Some(0) {
            bail!("--precision must be at least 1 digit");
        }

        Ok(Settings {
            omega: num(args.omega, "omega")?,
            delta_ratio: num(args.delta_ratio, "delta-ratio")?,
            mass: num(args.mass, "mass")?,
            gate_scale: num(args.gate_scale, "gate-scale")?,
            times,
            ts: pick(args.ts.clone(), "ts").map(|v| parse("ts", &v)).transpose()?,
            tf: pick(args.tf.clone(), "tf").map(|v| parse("tf", &v)).transpose()?,
            grid: pick(args.grid.clone(), "grid").map(|v| parse("grid", &v)).transpose()?,
            out: args.out.clone().or_else(|| from_file("out").map(PathBuf::from)),
            precision,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega.unwrap_or(1.0)
    }

    pub fn delta_ratio(&self) -> f64 {
        self.delta_ratio.unwrap_or(1e-3)
    }

    pub fn mass(&self) -> f64 {
        self.mass.unwrap_or(1.0)
    }

    pub fn gate_scale(&self) -> f64 {
        self.gate_scale.unwrap_or(1.0)
    }

    pub fn grid(&self) -> Grid {
        self.grid.unwrap_or_default()
    }

    pub fn precision(&self) -> Precision {
        self.precision.map(Precision::from_digits).unwrap_or_default()
    }
}
