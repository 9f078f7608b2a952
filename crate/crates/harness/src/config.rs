//! Study configuration: a TOML document whose every field can be
//! overridden on the command line by the same dotted name.
//!
//! ```toml
//! problem = "adr2d"
//! methods = ["strang", "clt2", "clt3", "cstrang3"]
//! dt0 = 0.0125
//! rungs = 6
//! sub = "rk4"
//!
//! [reference]
//! atol = 1e-14
//!
//! [adr]
//! dx = 0.05
//! dy = 0.05
//! ```

use std::path::{Path, PathBuf};

use nsplit::problems::{AdrConfig, ComplexOdeConfig};
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{io_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemId {
    Adr2d,
    ComplexOde,
    ComplexOdeReal,
}

impl ProblemId {
    pub fn n_operators(self) -> usize {
        match self {
            ProblemId::Adr2d => 4,
            _ => 3,
        }
    }

    pub fn default_sub(self) -> SubId {
        match self {
            ProblemId::Adr2d => SubId::Rk4,
            _ => SubId::Kutta3,
        }
    }

    /// Coarsest step of the default ladder. The complex ODE passes close to
    /// a pole near t = 52.6 where the cubic term is stiff, so its ladder
    /// starts well below the stability limit there.
    pub fn default_dt0(self) -> f64 {
        match self {
            ProblemId::Adr2d => 0.1 / 8.0,
            _ => 1.0 / 128.0,
        }
    }

    pub fn default_rungs(self) -> usize {
        match self {
            ProblemId::Adr2d => 6,
            _ => 4,
        }
    }
}

impl std::fmt::Display for ProblemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProblemId::Adr2d => "adr2d",
            ProblemId::ComplexOde => "complex-ode",
            ProblemId::ComplexOdeReal => "complex-ode-real",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubId {
    Rk4,
    Kutta3,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceTolerances {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for ReferenceTolerances {
    fn default() -> Self {
        Self {
            atol: 1e-14,
            rtol: 1e-14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdeParams {
    pub u0: f64,
    pub t_final: f64,
    /// Number of equally spaced sample times ending at `t_final`.
    pub samples: usize,
}

impl Default for OdeParams {
    fn default() -> Self {
        Self {
            u0: 0.1,
            t_final: 100.0,
            samples: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub problem: ProblemId,
    pub methods: Vec<String>,
    /// Defaults depend on the problem when absent.
    pub dt0: Option<f64>,
    pub ratio: f64,
    pub rungs: Option<usize>,
    pub sub: Option<SubId>,
    pub substeps: usize,
    pub seed: u64,
    /// Worker threads for study rows.
    pub jobs: usize,
    pub out: PathBuf,
    /// Errors at or below this are round-off and stay out of slope fits.
    pub fit_floor: f64,
    pub reference: ReferenceTolerances,
    pub adr: AdrConfig,
    pub ode: OdeParams,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            problem: ProblemId::Adr2d,
            methods: ["strang", "clt2", "clt3", "cstrang3"].map(String::from).to_vec(),
            dt0: None,
            ratio: 2.0,
            rungs: None,
            sub: None,
            substeps: 1,
            seed: nsplit::bch::DEFAULT_SEED,
            jobs: 1,
            out: PathBuf::from("out"),
            fit_floor: 1e-12,
            reference: ReferenceTolerances::default(),
            adr: AdrConfig::default(),
            ode: OdeParams::default(),
        }
    }
}

impl StudyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path` (if any) and applies `overrides` of the form
    /// `("reference.atol", "1e-13")` on top.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut doc = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(io_err(p))?;
                text.parse::<toml::Table>().map_err(HarnessError::Toml)?
            }
            None => toml::Table::new(),
        };
        for (key, value) in overrides {
            let mut v = parse_value(value);
            if key == "methods" {
                if let toml::Value::String(id) = v {
                    v = toml::Value::Array(vec![toml::Value::String(id)]);
                }
            }
            set_dotted(&mut doc, key, v)?;
        }
        let cfg: StudyConfig = toml::Value::Table(doc).try_into()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dt0(&self) -> f64 {
        self.dt0.unwrap_or(self.problem.default_dt0())
    }

    pub fn rungs(&self) -> usize {
        self.rungs.unwrap_or(self.problem.default_rungs())
    }

    pub fn sub(&self) -> SubId {
        self.sub.unwrap_or(self.problem.default_sub())
    }

    /// Strictly decreasing geometric ladder.
    pub fn ladder(&self) -> Vec<f64> {
        (0..self.rungs())
            .map(|k| self.dt0() / self.ratio.powi(k as i32))
            .collect()
    }

    pub fn t_final(&self) -> f64 {
        match self.problem {
            ProblemId::Adr2d => self.adr.t_final,
            _ => self.ode.t_final,
        }
    }

    pub fn complex_ode(&self) -> ComplexOdeConfig {
        let form = match self.problem {
            ProblemId::ComplexOdeReal => nsplit::problems::OdeForm::Realified,
            _ => nsplit::problems::OdeForm::Complex,
        };
        let n = self.ode.samples;
        ComplexOdeConfig {
            u0: self.ode.u0,
            t_final: self.ode.t_final,
            form,
            samples: (1..=n).map(|k| self.ode.t_final * k as f64 / n as f64).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.methods.is_empty() {
            return bad("no methods".into());
        }
        for id in &self.methods {
            catalog::build(id, self.problem.n_operators())?;
        }
        if !(self.dt0() > 0.0 && self.dt0().is_finite()) {
            return bad(format!("dt0 must be positive, got {}", self.dt0()));
        }
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return bad(format!("ladder ratio must exceed 1, got {}", self.ratio));
        }
        if self.rungs() < 2 {
            return bad("a ladder needs at least 2 rungs".into());
        }
        if self.substeps == 0 {
            return bad("substeps must be at least 1".into());
        }
        if self.sub() == SubId::Exact {
            return bad("exact sub-flows need linear operators; the study problems are nonlinear".into());
        }
        if self.ode.samples == 0 {
            return bad("ode.samples must be positive".into());
        }
        match self.problem {
            ProblemId::Adr2d => {
                self.adr.grid()?;
            }
            _ => self.complex_ode().validate()?,
        }
        Ok(())
    }
}

fn parse_value(raw: &str) -> toml::Value {
    // try as a TOML value first (numbers, booleans, arrays), then fall back
    // to a bare string; comma lists become arrays of strings
    if let Ok(t) = format!("v = {raw}").parse::<toml::Table>() {
        if let Some(v) = t.get("v") {
            return v.clone();
        }
    }
    if raw.contains(',') {
        return toml::Value::Array(
            raw.split(',')
                .map(|s| toml::Value::String(s.trim().to_string()))
                .collect(),
        );
    }
    toml::Value::String(raw.to_string())
}

fn set_dotted(doc: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts
        .pop()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| HarnessError::Config(format!("bad key `{key}`")))?;
    let mut table = doc;
    for p in parts {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| HarnessError::Config(format!("`{p}` in `{key}` is not a table")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}
