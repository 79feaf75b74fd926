use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lowdisc::decimal::parse_rational;
use lowdisc::GrowthSequence;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::CliError;
use crate::expr::Expr;

pub const MIN_PRECISION: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSpec {
    Factorial,
    SelfPower,
    Custom { source: String, expr: Expr },
}

impl FromStr for SequenceSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "factorial" => Ok(SequenceSpec::Factorial),
            "k_pow_k" => Ok(SequenceSpec::SelfPower),
            src => Expr::parse(src)
                .map(|expr| SequenceSpec::Custom {
                    source: src.to_string(),
                    expr,
                })
                .map_err(|e| format!("bad sequence expression `{src}`: {e}")),
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Factorial => write!(f, "factorial"),
            SequenceSpec::SelfPower => write!(f, "k_pow_k"),
            SequenceSpec::Custom { source, .. } => write!(f, "{source}"),
        }
    }
}

impl SequenceSpec {
    /// Builds the sequence, evaluating a custom expression eagerly over
    /// `1..=terms` so evaluation errors surface as usage errors.
    pub fn build(&self, terms: u64) -> Result<GrowthSequence, CliError> {
        Ok(match self {
            SequenceSpec::Factorial => GrowthSequence::factorial(),
            SequenceSpec::SelfPower => GrowthSequence::self_power(),
            SequenceSpec::Custom { source, expr } => {
                for k in 1..=terms {
                    expr.eval(k)
                        .map_err(|e| CliError::Usage(format!("n_{k}: {e}")))?;
                }
                let f = expr.clone().into_term_fn();
                GrowthSequence::custom(source.clone(), move |k| f(k), None)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn parse_positive_rational(s: &str) -> Result<BigRational, String> {
    match parse_rational(s) {
        Some(q) if q.is_positive() => Ok(q),
        Some(_) => Err(format!("`{s}` is not positive")),
        None => Err(format!(
            "`{s}` is not an exact rational (use p/q or a finite decimal)"
        )),
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sequence: SequenceSpec,
    pub stages: u64,
    pub c: Option<BigRational>,
    pub n_max: u64,
    pub out: PathBuf,
    pub precision: usize,
    pub seed: u64,
    pub format: Format,
    pub normalized: bool,
}

impl RunConfig {
    pub fn new(sequence: SequenceSpec, stages: u64) -> Self {
        RunConfig {
            sequence,
            stages,
            c: None,
            n_max: stages,
            out: PathBuf::from("out"),
            precision: 50,
            seed: 0,
            format: Format::Csv,
            normalized: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.stages == 0 {
            return Err(CliError::Usage("--stages must be at least 1".into()));
        }
        if self.n_max == 0 {
            return Err(CliError::Usage("--nmax must be at least 1".into()));
        }
        if self.stages < self.n_max {
            return Err(CliError::Usage(format!(
                "--stages ({}) must be at least --nmax ({})",
                self.stages, self.n_max
            )));
        }
        if self.precision < MIN_PRECISION {
            return Err(CliError::Usage(format!(
                "--precision must be at least {MIN_PRECISION}, got {}",
                self.precision
            )));
        }
        Ok(())
    }
}
