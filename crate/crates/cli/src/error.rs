use thiserror::Error;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INFEASIBLE: i32 = 2;
    pub const UNDETERMINED: i32 = 3;
    pub const USAGE: i32 = 64;
    pub const DATA: i32 = 65;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("bad input data: {0}")]
    Data(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qgame::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use qgame::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Data(_) | CliError::Io { .. } => exit::DATA,
            CliError::Core(e) => match e {
                E::OverCap { .. } | E::InvalidArgument(_) | E::QubitCount(_) => exit::USAGE,
                E::NotDistinguishable(_) | E::NotConverged(_) => exit::UNDETERMINED,
                _ => exit::DATA,
            },
        }
    }

    /// Short machine-readable tag for the error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(_) => "data",
            CliError::Io { .. } => "io",
            CliError::Core(qgame::Error::ProductState(_)) => "product-state",
            CliError::Core(qgame::Error::NotDistinguishable(_)) => "not-distinguishable",
            CliError::Core(_) => "model",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
