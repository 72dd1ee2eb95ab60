use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rlcm_families::FamilySpec;

use crate::config::{Command, Format, JobConfig, OutputSpec, Parameters};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "rlcm-kms",
    version,
    about = "KMS structure of right LCM semigroups with a generalised scale"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Irreducible scales, generators, closed forms and level sizes.
    Describe(Job),
    /// Checks (A1)-(A4) on all elements up to the depth.
    CheckAdmissible(Job),
    /// Faithfulness, almost freeness and finite propagation of the core action.
    Action(Job),
    /// ζ_I(β), optionally with a table of partial sums.
    Zeta(Job),
    /// ψ_β(v_left v_right^*).
    KmsEval(Job),
    /// κ_{a,b,n} per level and the enclosure of its limit.
    Kappa(Job),
    /// The ground state on v_left v_right^*.
    Ground(Job),
    /// Summary of the KMS_β states at one inverse temperature.
    Classify(Job),
    /// Truncated representation: relations and reconstruction.
    VerifyRep(Job),
    /// Runs a job described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct Job {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Bs,
    Free,
    Artin,
    Nsp,
    Selfsimilar,
    Dilation,
    Ffs,
}

#[derive(Debug, Default, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    #[arg(long)]
    pub c: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    /// Free generators (free, artin).
    #[arg(long)]
    pub m: Option<u32>,
    /// Core rank (artin).
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Rows separated by `;`, entries by `,`, e.g. `1,1;-1,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub f_degree: Option<u32>,
}

#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub depth: Option<u64>,
    #[arg(long)]
    pub level: Option<u64>,
    #[arg(long)]
    pub core_weight: Option<u32>,
    /// Rational such as `2` or `5/2`; classify also takes `inf`.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub cutoff: Option<u64>,
    /// `canonical` or `rho`.
    #[arg(long)]
    pub trace: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub irr: Option<Vec<u64>>,
    #[arg(long)]
    pub left: Option<String>,
    #[arg(long)]
    pub right: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    /// `faithful`, `almost-free`, `propagation` or `all`.
    #[arg(long)]
    pub property: Option<String>,
    #[arg(long)]
    pub level_cap: Option<u64>,
    #[arg(long)]
    pub core_cap: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub index_set: Option<Vec<u64>>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Default, Args)]
pub struct OutputArgs {
    /// Report file, written atomically; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Adds a timestamp field to the report.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl OutputArgs {
    /// Flags override the file's output table.
    pub fn apply(&self, spec: &mut OutputSpec) {
        if let Some(p) = &self.output {
            spec.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            spec.format = match f {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            };
        }
        spec.timestamp |= self.timestamp;
    }
}

fn need<T: Copy>(v: Option<T>, field: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Validation {
        field: field.into(),
        constraint: format!("required for --family {family}"),
    })
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Validation {
            field: "matrix".into(),
            constraint: "integer rows separated by `;`, entries by `,`".into(),
        })
}

impl FamilyArgs {
    pub fn spec(&self) -> Result<Option<FamilySpec>, CliError> {
        let Some(kind) = self.family else {
            return Ok(None);
        };
        Ok(Some(match kind {
            FamilyKind::Bs => FamilySpec::BaumslagSolitar {
                c: need(self.c, "c", "bs")?,
                d: need(self.d, "d", "bs")?,
            },
            FamilyKind::Free => FamilySpec::FreeMonoid {
                m: need(self.m, "m", "free")?,
            },
            FamilyKind::Artin => FamilySpec::EasyArtin {
                m: need(self.m, "m", "artin")?,
                n: need(self.n, "n", "artin")?,
            },
            FamilyKind::Nsp => FamilySpec::NSemidirectP {
                primes: self.primes.clone().ok_or_else(|| CliError::Validation {
                    field: "primes".into(),
                    constraint: "required for --family nsp".into(),
                })?,
            },
            FamilyKind::Selfsimilar => FamilySpec::adding_machine(),
            FamilyKind::Dilation => {
                let text = self.matrix.as_deref().ok_or_else(|| CliError::Validation {
                    field: "matrix".into(),
                    constraint: "required for --family dilation".into(),
                })?;
                let a = parse_matrix(text)?;
                FamilySpec::DilationMatrix { d: a.len(), a }
            }
            FamilyKind::Ffs => FamilySpec::FiniteFieldShift {
                q: need(self.q, "q", "ffs")?,
                f_degree: need(self.f_degree, "f-degree", "ffs")?,
                f: None,
            },
        }))
    }
}

impl Job {
    pub fn config(&self, command: Command) -> Result<JobConfig, CliError> {
        let p = &self.params;
        let mut output = OutputSpec::default();
        self.output.apply(&mut output);
        Ok(JobConfig {
            command: Some(command),
            semigroup: self.family.spec()?,
            parameters: Parameters {
                depth: p.depth,
                level: p.level,
                core_weight: p.core_weight,
                beta: p.beta.clone(),
                cutoff: p.cutoff,
                trace: p.trace.clone(),
                irr: p.irr.clone(),
                left: p.left.clone(),
                right: p.right.clone(),
                a: p.a.clone(),
                b: p.b.clone(),
                property: p.property.clone(),
                level_cap: p.level_cap,
                core_cap: p.core_cap,
                index_set: p.index_set.clone(),
                tolerance: p.tolerance,
                samples: p.samples,
            },
            output,
        })
    }
}
