//! Run configuration: flat `key = value` files with `#` comments and
//! comma-separated lists.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScenarioName {
    ExactProfile,
    FavorableAccel,
    ViscositySweep,
    StabilityPerturb,
    KolmogorovChecks,
    OscillationLab,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 6] = [
        ScenarioName::ExactProfile,
        ScenarioName::FavorableAccel,
        ScenarioName::ViscositySweep,
        ScenarioName::StabilityPerturb,
        ScenarioName::KolmogorovChecks,
        ScenarioName::OscillationLab,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::ExactProfile => "exact_profile",
            ScenarioName::FavorableAccel => "favorable_accel",
            ScenarioName::ViscositySweep => "viscosity_sweep",
            ScenarioName::StabilityPerturb => "stability_perturb",
            ScenarioName::KolmogorovChecks => "kolmogorov_checks",
            ScenarioName::OscillationLab => "oscillation_lab",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.as_str() == s)
    }

    /// Built-in outer flow used when the config names none.
    pub fn default_flow(self) -> &'static str {
        match self {
            ScenarioName::ExactProfile => "uniform",
            _ => "accelerating",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which data set a perturbation scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbKind {
    Initial,
    Inflow,
    Suction,
}

impl PerturbKind {
    pub const ALL: [PerturbKind; 3] = [PerturbKind::Initial, PerturbKind::Inflow, PerturbKind::Suction];

    pub fn as_str(self) -> &'static str {
        match self {
            PerturbKind::Initial => "initial",
            PerturbKind::Inflow => "inflow",
            PerturbKind::Suction => "suction",
        }
    }
}

/// Fully populated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioName,
    /// Built-in flow name; `custom-table` reads `flow_table`.
    pub flow: String,
    pub flow_table: Option<PathBuf>,
    pub u0_table: Option<PathBuf>,
    pub u1_table: Option<PathBuf>,
    pub v0_table: Option<PathBuf>,
    pub grid: GridSpec,
    pub eps: f64,
    pub eps_list: Vec<f64>,
    /// Weight exponent of the (1 − y)^α norms and the weak identity.
    pub alpha: f64,
    pub density_alpha: f64,
    pub beta: f64,
    pub h1: f64,
    pub theta: f64,
    pub theta_bar: f64,
    pub r_list: Vec<f64>,
    /// Rough coefficient field: constant, checkerboard or seeded-random.
    pub coefficient: String,
    pub lambda: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub perturb_kind: PerturbKind,
    pub perturb_size: f64,
}

impl RunConfig {
    pub fn new(scenario: ScenarioName) -> Self {
        RunConfig {
            scenario,
            flow: scenario.default_flow().to_string(),
            flow_table: None,
            u0_table: None,
            u1_table: None,
            v0_table: None,
            grid: GridSpec::default(),
            eps: 1e-3,
            eps_list: vec![1e-1, 1e-2, 1e-3, 1e-4],
            alpha: 2.0,
            density_alpha: 0.05,
            beta: 0.9,
            h1: 0.01,
            theta: 0.01,
            theta_bar: 0.5,
            r_list: vec![0.4, 0.2, 0.1],
            coefficient: "checkerboard".to_string(),
            lambda: 4.0,
            seed: 2024,
            output: None,
            perturb_kind: PerturbKind::Initial,
            perturb_size: 1e-3,
        }
    }

    /// Whether any data table overrides the scenario's built-in data.
    pub fn has_data_tables(&self) -> bool {
        self.u0_table.is_some() || self.u1_table.is_some() || self.v0_table.is_some()
    }
}

pub const KEYS: [&str; 26] = [
    "scenario",
    "flow",
    "flow_table",
    "u0_table",
    "u1_table",
    "v0_table",
    "Nx",
    "Ny",
    "Nt",
    "L",
    "T",
    "eps",
    "eps_list",
    "alpha",
    "density_alpha",
    "beta",
    "h1",
    "theta",
    "theta_bar",
    "r_list",
    "coefficient",
    "Lambda",
    "seed",
    "output",
    "perturb_kind",
    "perturb_size",
];

/// One `key = value` assignment with its source line.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub line: usize,
    pub value: String,
}

/// Splits a flat config into assignments, rejecting malformed lines and
/// repeated keys. Keys are not checked against any schema.
pub fn parse_assignments(text: &str, path: &str) -> Result<BTreeMap<String, Assignment>> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::ConfigSyntax {
            path: path.to_string(),
            line,
            message,
        };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(syntax(format!("bad key `{key}`")));
        }
        if value.is_empty() {
            return Err(syntax(format!("`{key}` has no value")));
        }
        let prev = out.insert(
            key.to_string(),
            Assignment {
                line,
                value: value.to_string(),
            },
        );
        if let Some(p) = prev {
            return Err(syntax(format!("`{key}` already set on line {}", p.line)));
        }
    }
    Ok(out)
}

struct Reader<'a> {
    path: &'a str,
    base: &'a Path,
    map: BTreeMap<String, Assignment>,
}

impl Reader<'_> {
    fn err(&self, key: &str, message: String) -> Error {
        Error::ConfigSyntax {
            path: self.path.to_string(),
            line: self.map.get(key).map_or(0, |a| a.line),
            message,
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|a| a.value.as_str())
    }

    fn number<T: std::str::FromStr>(&self, key: &str, slot: &mut T) -> Result<()> {
        if let Some(v) = self.raw(key) {
            *slot = v
                .parse()
                .map_err(|_| self.err(key, format!("`{key}` expects a number, found `{v}`")))?;
        }
        Ok(())
    }

    fn list(&self, key: &str, slot: &mut Vec<f64>) -> Result<()> {
        if let Some(v) = self.raw(key) {
            *slot = v
                .split(',')
                .map(|s| {
                    let s = s.trim();
                    s.parse()
                        .map_err(|_| self.err(key, format!("`{key}` expects numbers, found `{s}`")))
                })
                .collect::<Result<_>>()?;
        }
        Ok(())
    }

    fn file(&self, key: &str) -> Result<Option<PathBuf>> {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        let p = self.base.join(v);
        if !p.is_file() {
            return Err(self.err(key, format!("`{key}` file {} does not exist", p.display())));
        }
        Ok(Some(p))
    }
}

/// Parses config text. Relative table paths resolve against `base`.
pub fn parse_config_str(text: &str, path: &str, base: &Path) -> Result<RunConfig> {
    let map = parse_assignments(text, path)?;
    if let Some((key, a)) = map.iter().find(|(k, _)| !KEYS.contains(&k.as_str())) {
        return Err(Error::ConfigSyntax {
            path: path.to_string(),
            line: a.line,
            message: format!("unknown key `{key}`"),
        });
    }
    let r = Reader { path, base, map };
    let name = r
        .raw("scenario")
        .ok_or_else(|| Error::Config(format!("{path}: missing required key `scenario`")))?;
    let scenario = ScenarioName::parse(name).ok_or_else(|| {
        let known: Vec<_> = ScenarioName::ALL.iter().map(|s| s.as_str()).collect();
        r.err("scenario", format!("unknown scenario `{name}` (expected one of {})", known.join(", ")))
    })?;
    let mut c = RunConfig::new(scenario);
    if let Some(f) = r.raw("flow") {
        c.flow = f.to_string();
    }
    c.flow_table = r.file("flow_table")?;
    c.u0_table = r.file("u0_table")?;
    c.u1_table = r.file("u1_table")?;
    c.v0_table = r.file("v0_table")?;
    if c.flow == "custom-table" && c.flow_table.is_none() {
        return Err(r.err("flow", "flow = custom-table needs `flow_table`".into()));
    }
    if c.flow != "custom-table" && c.flow_table.is_some() {
        return Err(r.err("flow_table", "`flow_table` needs flow = custom-table".into()));
    }
    r.number("Nx", &mut c.grid.nx)?;
    r.number("Ny", &mut c.grid.ny)?;
    r.number("Nt", &mut c.grid.nt)?;
    r.number("L", &mut c.grid.length)?;
    r.number("T", &mut c.grid.horizon)?;
    r.number("eps", &mut c.eps)?;
    r.list("eps_list", &mut c.eps_list)?;
    r.number("alpha", &mut c.alpha)?;
    r.number("density_alpha", &mut c.density_alpha)?;
    r.number("beta", &mut c.beta)?;
    r.number("h1", &mut c.h1)?;
    r.number("theta", &mut c.theta)?;
    r.number("theta_bar", &mut c.theta_bar)?;
    r.list("r_list", &mut c.r_list)?;
    if let Some(v) = r.raw("coefficient") {
        c.coefficient = v.to_string();
    }
    r.number("Lambda", &mut c.lambda)?;
    r.number("seed", &mut c.seed)?;
    c.output = r.raw("output").map(PathBuf::from);
    if let Some(v) = r.raw("perturb_kind") {
        c.perturb_kind = PerturbKind::ALL
            .into_iter()
            .find(|k| k.as_str() == v)
            .ok_or_else(|| r.err("perturb_kind", format!("unknown perturb_kind `{v}` (initial, inflow, suction)")))?;
    }
    r.number("perturb_size", &mut c.perturb_size)?;

    c.grid.check()?;
    if !(c.eps > 0.0) {
        return Err(r.err("eps", format!("eps = {} must be positive", c.eps)));
    }
    if c.eps_list.is_empty() || c.eps_list.iter().any(|&e| !(e > 0.0)) || c.eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(r.err("eps_list", format!("eps_list {:?} must be positive and strictly decreasing", c.eps_list)));
    }
    if !(c.perturb_size > -1.0) {
        return Err(r.err("perturb_size", format!("perturb_size = {} must exceed -1", c.perturb_size)));
    }
    Ok(c)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_str(&text, &path.display().to_string(), base)
}
