//! Job configuration, read from TOML or assembled from command line flags.
//!
//! ```toml
//! command = "classify"
//!
//! [semigroup]
//! kind = "baumslag-solitar"
//! c = 2
//! d = 3
//!
//! [parameters]
//! beta = "1"
//!
//! [output]
//! path = "report.json"
//! format = "json"
//! ```

use std::path::PathBuf;

use num_rational::BigRational;
use rlcm_engine::Temperature;
use rlcm_families::FamilySpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Describe,
    CheckAdmissible,
    Action,
    Zeta,
    KmsEval,
    Kappa,
    Ground,
    Classify,
    VerifyRep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Describe => "describe",
            Command::CheckAdmissible => "check-admissible",
            Command::Action => "action",
            Command::Zeta => "zeta",
            Command::KmsEval => "kms-eval",
            Command::Kappa => "kappa",
            Command::Ground => "ground",
            Command::Classify => "classify",
            Command::VerifyRep => "verify-rep",
        }
    }

    /// Parameters the command reads; anything else is rejected.
    fn accepts(self) -> &'static [&'static str] {
        match self {
            Command::Describe => &["depth"],
            Command::CheckAdmissible => &["depth", "core-weight"],
            Command::Action => &["property", "level", "core-weight"],
            Command::Zeta => &["irr", "beta", "cutoff"],
            Command::KmsEval => &["left", "right", "beta", "trace", "cutoff", "level"],
            Command::Kappa => &["a", "b", "level"],
            Command::Ground => &["left", "right", "trace", "core-weight"],
            Command::Classify => &["beta", "depth", "core-weight"],
            Command::VerifyRep => &[
                "level-cap",
                "core-cap",
                "beta",
                "index-set",
                "tolerance",
                "samples",
            ],
        }
    }

    fn csv(self) -> bool {
        matches!(self, Command::Action | Command::Zeta | Command::Kappa)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_weight: Option<u32>,
    /// A rational such as `2` or `5/2`, or `inf` for classify.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
    /// `canonical` or `rho`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irr: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    /// `faithful`, `almost-free`, `propagation` or `all`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_cap: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_set: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl Parameters {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! check {
            ($($field:ident => $name:literal),* $(,)?) => {
                $(if self.$field.is_some() { out.push($name); })*
            };
        }
        check!(
            depth => "depth",
            level => "level",
            core_weight => "core-weight",
            beta => "beta",
            cutoff => "cutoff",
            trace => "trace",
            irr => "irr",
            left => "left",
            right => "right",
            a => "a",
            b => "b",
            property => "property",
            level_cap => "level-cap",
            core_cap => "core-cap",
            index_set => "index-set",
            tolerance => "tolerance",
            samples => "samples",
        );
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Adds a `timestamp` field, which makes reports differ between runs.
    #[serde(default)]
    pub timestamp: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<FamilySpec>,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub output: OutputSpec,
}

fn invalid(field: &str, constraint: impl Into<String>) -> CliError {
    CliError::Validation {
        field: field.into(),
        constraint: constraint.into(),
    }
}

impl JobConfig {
    pub fn from_toml(text: &str) -> Result<JobConfig, CliError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = match e.span() {
                Some(span) => position(text, span.start),
                None => (0, 0),
            };
            CliError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Checks that the command is known, the semigroup is present where it
    /// is needed, and that every parameter is used by the command and well formed.
    pub fn validate(&self) -> Result<Command, CliError> {
        let command = self.command.ok_or_else(|| invalid("command", "required"))?;
        let p = &self.parameters;
        if self.semigroup.is_none() && !(command == Command::Zeta && p.irr.is_some()) {
            return Err(invalid("semigroup", "required"));
        }
        for name in p.present() {
            if !command.accepts().contains(&name) {
                return Err(invalid(
                    name,
                    format!("not a parameter of {}", command.name()),
                ));
            }
        }
        let require = |v: bool, name: &str| {
            if v {
                Ok(())
            } else {
                Err(invalid(name, format!("required by {}", command.name())))
            }
        };
        match command {
            Command::Zeta => require(p.beta.is_some(), "beta")?,
            Command::KmsEval => {
                require(p.left.is_some(), "left")?;
                require(p.right.is_some(), "right")?;
                require(p.beta.is_some(), "beta")?;
            }
            Command::Kappa => {
                require(p.a.is_some(), "a")?;
                require(p.b.is_some(), "b")?;
            }
            Command::Ground => {
                require(p.left.is_some(), "left")?;
                require(p.right.is_some(), "right")?;
            }
            Command::Classify => require(p.beta.is_some(), "beta")?,
            Command::VerifyRep => {
                require(p.level_cap.is_some(), "level-cap")?;
                require(p.core_cap.is_some(), "core-cap")?;
                require(p.beta.is_some(), "beta")?;
            }
            _ => {}
        }
        if let Some(beta) = &p.beta {
            let t = parse_temperature(beta)?;
            if t == Temperature::Infinite && command != Command::Classify {
                return Err(invalid("beta", "must be finite"));
            }
        }
        for (name, v) in [
            ("depth", p.depth),
            ("level", p.level),
            ("cutoff", p.cutoff),
            ("level-cap", p.level_cap),
        ] {
            if v == Some(0) {
                return Err(invalid(name, "must be at least 1"));
            }
        }
        if p.core_cap == Some(0) {
            return Err(invalid("core-cap", "must be at least 1"));
        }
        if let Some(t) = &p.trace {
            if t != "canonical" && t != "rho" {
                return Err(invalid("trace", "one of canonical, rho"));
            }
        }
        if let Some(prop) = &p.property {
            if !["faithful", "almost-free", "propagation", "all"].contains(&prop.as_str()) {
                return Err(invalid(
                    "property",
                    "one of faithful, almost-free, propagation, all",
                ));
            }
        }
        if let Some(tol) = p.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(invalid("tolerance", "a positive number"));
            }
        }
        if self.output.format == Format::Csv && !command.csv() {
            return Err(invalid(
                "format",
                format!(
                    "csv is only available for action, kappa and zeta, not {}",
                    command.name()
                ),
            ));
        }
        if command == Command::Zeta && self.output.format == Format::Csv && p.cutoff.is_none() {
            return Err(invalid(
                "cutoff",
                "required for a csv table of partial sums",
            ));
        }
        Ok(command)
    }
}

/// `inf`, an integer or a fraction `p/q`.
pub fn parse_temperature(text: &str) -> Result<Temperature, CliError> {
    let t = text.trim();
    if matches!(t, "inf" | "infinity" | "∞") {
        return Ok(Temperature::Infinite);
    }
    t.parse::<BigRational>()
        .map(Temperature::Finite)
        .map_err(|_| invalid("beta", "a rational such as 2 or 5/2, or inf"))
}

pub fn parse_beta(text: &str) -> Result<BigRational, CliError> {
    match parse_temperature(text)? {
        Temperature::Finite(b) => Ok(b),
        Temperature::Infinite => Err(invalid("beta", "must be finite")),
    }
}

/// 1-based line and column of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
