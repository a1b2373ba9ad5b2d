use thiserror::Error;
use varlp::conditions::Verdict;

/// Failure modes of a run, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 64,
            CliError::Numerical(_) => 70,
            CliError::Io(_) => 74,
        }
    }
}

impl From<varlp::Error> for CliError {
    fn from(e: varlp::Error) -> Self {
        match e {
            varlp::Error::Numerical { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn verdict_exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Bounded => 0,
        Verdict::Growing => 1,
        Verdict::Inconclusive => 2,
    }
}

/// Worst verdict of a batch: any growth wins, then any inconclusive.
pub fn combined_verdict(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::Bounded;
    for v in verdicts {
        match v {
            Verdict::Growing => return Verdict::Growing,
            Verdict::Inconclusive => out = Verdict::Inconclusive,
            Verdict::Bounded => {}
        }
    }
    out
}
