use std::fmt;

use signed_beliefs::Error;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Precondition(String),
    NonConvergence(String),
    /// A check ran and reported failure.
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition violated: {m}"),
            CliError::NonConvergence(m) => write!(f, "numerical non-convergence: {m}"),
            CliError::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Disconnected | Error::PositiveDisconnected | Error::Precondition(_) | Error::BracketFailure(_) => {
                CliError::Precondition(msg)
            }
            Error::NotConverged { .. } | Error::ZeroSeed => CliError::NonConvergence(msg),
            _ => CliError::Input(msg),
        }
    }
}
