//! Option resolution: built-in defaults, then a flat `key = value` config
//! file, then command-line flags, later layers overriding earlier ones.

use std::collections::BTreeMap;
use std::path::PathBuf;

use ctqw::{C64, Family, FamilySpec64, Generator, InitialState};

use crate::CliError;

/// Keys understood by every subcommand.
const KNOWN_KEYS: [&str; 19] = [
    "family",
    "branches",
    "length",
    "coord",
    "levels",
    "central-hopping",
    "off-hopping",
    "generator",
    "state",
    "vertices",
    "tmax",
    "dt",
    "omega",
    "dissipator",
    "sweep",
    "values",
    "stride",
    "cumulative",
    "config",
];

const OUTPUT_KEYS: [&str; 3] = ["out-csv", "out-dot", "out-svg"];

#[derive(Debug, Clone)]
pub struct Options {
    map: BTreeMap<String, String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parse `--key value` / `--key=value` pairs.
pub fn parse_flags(args: &[String]) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    let mut idx = 0;
    while idx < args.len() {
        let arg = &args[idx];
        let Some(stripped) = arg.strip_prefix("--") else {
            return Err(usage(format!("unexpected argument '{arg}' (flags start with --)")));
        };
        if let Some((key, value)) = stripped.split_once('=') {
            pairs.push((key.to_string(), value.to_string()));
            idx += 1;
        } else {
            let value = args
                .get(idx + 1)
                .ok_or_else(|| usage(format!("flag --{stripped} is missing a value")))?;
            pairs.push((stripped.to_string(), value.clone()));
            idx += 2;
        }
    }
    Ok(pairs)
}

fn check_key(key: &str) -> Result<(), CliError> {
    if KNOWN_KEYS.contains(&key) || OUTPUT_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(usage(format!("unknown option '{key}'")))
    }
}

fn defaults(command: &str) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    let pi = std::f64::consts::PI;
    let put = |map: &mut BTreeMap<String, String>, k: &str, v: String| {
        map.insert(k.to_string(), v);
    };
    put(&mut map, "family", "spider".into());
    put(&mut map, "branches", "3".into());
    put(&mut map, "length", "2".into());
    put(&mut map, "central-hopping", "10".into());
    put(&mut map, "generator", "adjacency".into());
    put(&mut map, "state", "basis:1".into());
    put(&mut map, "tmax", ctqw::export::format_g17(10.0 * pi));
    put(&mut map, "dt", ctqw::export::format_g17(pi / 1000.0));
    put(&mut map, "stride", "1".into());
    put(&mut map, "cumulative", "false".into());
    if command == "lindblad" {
        put(&mut map, "omega", "0,0.01,0.02,0.03,0.04,0.05".into());
        put(&mut map, "dissipator", "paper".into());
    }
    map
}

/// Resolve the option set for one command invocation.
pub fn resolve(command: &str, args: &[String]) -> Result<Options, CliError> {
    let cli_pairs = parse_flags(args)?;
    for (key, _) in &cli_pairs {
        check_key(key)?;
    }
    let mut map = defaults(command);
    if let Some((_, path)) = cli_pairs.iter().find(|(k, _)| k == "config") {
        for (key, value) in load_config_file(path)? {
            check_key(&key)?;
            map.insert(key, value);
        }
    }
    for (key, value) in cli_pairs {
        if key != "config" {
            map.insert(key, value);
        }
    }
    Ok(Options { map })
}

fn load_config_file(path: &str) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file '{path}': {e}")))?;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{path}:{}: expected 'key = value'", lineno + 1)))?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

impl Options {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn usize_value(&self, key: &str) -> Result<usize, CliError> {
        let raw = self
            .get(key)
            .ok_or_else(|| usage(format!("missing required option --{key}")))?;
        raw.parse()
            .map_err(|_| usage(format!("--{key} expects a positive integer, got '{raw}'")))
    }

    pub fn f64_value(&self, key: &str) -> Result<f64, CliError> {
        let raw = self
            .get(key)
            .ok_or_else(|| usage(format!("missing required option --{key}")))?;
        raw.parse()
            .map_err(|_| usage(format!("--{key} expects a number, got '{raw}'")))
    }

    pub fn bool_value(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(other) => Err(usage(format!("--{key} expects true or false, got '{other}'"))),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let raw = self
            .get(key)
            .ok_or_else(|| usage(format!("missing required option --{key}")))?;
        raw.split(',')
            .map(|piece| {
                piece
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("--{key}: bad number '{piece}'")))
            })
            .collect()
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>, CliError> {
        let raw = self
            .get(key)
            .ok_or_else(|| usage(format!("missing required option --{key}")))?;
        raw.split(',')
            .map(|piece| {
                piece
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("--{key}: bad vertex '{piece}'")))
            })
            .collect()
    }

    pub fn out_path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }

    /// The graph spec assembled from `family`/`branches`/`length` (Cayley
    /// accepts the `coord`/`levels` aliases) and the two hoppings.
    pub fn family_spec(&self) -> Result<FamilySpec64, CliError> {
        let family: Family = self
            .get("family")
            .unwrap_or("spider")
            .parse()
            .map_err(|e| usage(format!("{e}")))?;
        let branches = if self.get("coord").is_some() {
            self.usize_value("coord")?
        } else {
            self.usize_value("branches")?
        };
        // `levels` is the Cayley-flavored alias of `length`
        let length = if self.get("levels").is_some() {
            self.usize_value("levels")?
        } else {
            self.usize_value("length")?
        };
        let central = self.f64_value("central-hopping")?;
        let mut spec = match family {
            Family::Star => FamilySpec64::star(branches, central),
            Family::Spider => FamilySpec64::spider(branches, length, central),
            Family::Cayley => FamilySpec64::cayley(branches, length, central),
            Family::Cycle => FamilySpec64::cycle(branches, central),
        };
        if self.get("off-hopping").is_some() {
            spec.off_hopping = self.f64_value("off-hopping")?;
        }
        spec.validate().map_err(|e| usage(format!("{e}")))?;
        Ok(spec)
    }

    pub fn generator(&self) -> Result<Generator, CliError> {
        self.get("generator")
            .unwrap_or("adjacency")
            .parse()
            .map_err(|e| usage(format!("{e}")))
    }

    pub fn initial_state(&self) -> Result<InitialState<f64>, CliError> {
        let raw = self.get("state").unwrap_or("basis:1");
        if let Some(v) = raw.strip_prefix("basis:") {
            let vertex: usize = v
                .parse()
                .map_err(|_| usage(format!("--state basis:<v> expects a vertex, got '{v}'")))?;
            return Ok(InitialState::Basis(vertex));
        }
        if let Some(path) = raw.strip_prefix("file:") {
            return load_state_file(path);
        }
        match raw {
            "balanced" => Ok(InitialState::BalancedLeaves),
            "phased" => Ok(InitialState::PhasedLeaves),
            "cayley-branch" => Ok(InitialState::CayleyBranch),
            other => Err(usage(format!(
                "unknown state '{other}' (expected basis:<v>, balanced, phased, cayley-branch, or file:<path>)"
            ))),
        }
    }

    /// Time grid from `tmax` and `dt`.
    pub fn time_grid(&self) -> Result<ctqw::TimeGrid<f64>, CliError> {
        let tmax = self.f64_value("tmax")?;
        let dt = self.f64_value("dt")?;
        if !tmax.is_finite() || tmax <= 0.0 {
            return Err(usage(format!("tmax must be positive, got {tmax}")));
        }
        if !dt.is_finite() || dt <= 0.0 || dt > tmax {
            return Err(usage(format!("dt must satisfy 0 < dt <= tmax, got {dt}")));
        }
        let points = (tmax / dt).round() as usize + 1;
        ctqw::TimeGrid::uniform(tmax, points).map_err(|e| usage(format!("{e}")))
    }

    /// Comment lines recording the fully resolved configuration.
    pub fn comment_lines(&self, command: &str) -> Vec<String> {
        let mut lines = vec![format!("ctqw {command}")];
        for (key, value) in &self.map {
            lines.push(format!("{key} = {value}"));
        }
        lines
    }
}

/// Amplitude list: one `re im` pair per line, `#` comments allowed. The
/// state must already be normalized; it is rejected otherwise.
fn load_state_file(path: &str) -> Result<InitialState<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read state file '{path}': {e}")))?;
    let mut amplitudes = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let re: f64 = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| usage(format!("{path}:{}: expected 're im'", lineno + 1)))?;
        let im: f64 = parts
            .next()
            .map(|p| {
                p.parse()
                    .map_err(|_| usage(format!("{path}:{}: bad imaginary part", lineno + 1)))
            })
            .transpose()?
            .unwrap_or(0.0);
        amplitudes.push(C64::new(re, im));
    }
    if amplitudes.is_empty() {
        return Err(usage(format!("state file '{path}' holds no amplitudes")));
    }
    Ok(InitialState::Amplitudes(amplitudes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn flags_override_defaults() {
        let opts = resolve("unitary", &args(&["--central-hopping", "3", "--family=star"])).unwrap();
        assert_eq!(opts.get("central-hopping"), Some("3"));
        assert_eq!(opts.get("family"), Some("star"));
        assert_eq!(opts.get("generator"), Some("adjacency"));
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        assert!(resolve("unitary", &args(&["--bogus", "1"])).is_err());
        assert!(resolve("unitary", &args(&["positional"])).is_err());
        assert!(resolve("unitary", &args(&["--tmax"])).is_err());
    }

    #[test]
    fn config_file_sits_between_defaults_and_flags() {
        let dir = std::env::temp_dir().join("ctqw-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\ncentral-hopping = 5\nbranches = 4\n").unwrap();
        let opts = resolve(
            "unitary",
            &args(&["--config", path.to_str().unwrap(), "--branches", "6"]),
        )
        .unwrap();
        assert_eq!(opts.get("central-hopping"), Some("5")); // from file
        assert_eq!(opts.get("branches"), Some("6")); // flag wins
    }

    #[test]
    fn family_spec_resolution() {
        let opts = resolve("graph", &args(&["--family", "cayley", "--coord", "3", "--levels", "3"]))
            .unwrap();
        let spec = opts.family_spec().unwrap();
        assert_eq!(spec.family, Family::Cayley);
        assert_eq!(spec.branches, 3);
        assert_eq!(spec.branch_length, 3);
        assert!((spec.off_hopping - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);

        let opts = resolve("graph", &args(&["--family", "bogus"])).unwrap();
        assert!(opts.family_spec().is_err());
    }

    #[test]
    fn state_parsing() {
        let opts = resolve("unitary", &args(&["--state", "basis:7"])).unwrap();
        assert_eq!(opts.initial_state().unwrap(), InitialState::Basis(7));
        let opts = resolve("unitary", &args(&["--state", "phased"])).unwrap();
        assert_eq!(opts.initial_state().unwrap(), InitialState::PhasedLeaves);
        let opts = resolve("unitary", &args(&["--state", "wat"])).unwrap();
        assert!(opts.initial_state().is_err());
    }

    #[test]
    fn grid_validation() {
        let opts = resolve("unitary", &args(&["--tmax", "0"])).unwrap();
        assert!(opts.time_grid().is_err());
        let opts = resolve("unitary", &args(&["--tmax", "1", "--dt", "2"])).unwrap();
        assert!(opts.time_grid().is_err());
        let opts = resolve("unitary", &args(&[])).unwrap();
        assert_eq!(opts.time_grid().unwrap().len(), 10001);
    }
}
