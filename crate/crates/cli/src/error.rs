use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] trarep_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use trarep_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::NonConvergence(_) | E::Overflow(_) | E::PoleProximity { .. } | E::NonFinite(_) | E::Bracket(_) => {
                    EXIT_NONCONVERGENCE
                }
                E::PathDisagreement(_) | E::NegativeWeight { .. } | E::Degenerate(..) => EXIT_INVARIANT,
                _ => EXIT_CONFIG,
            },
            _ => EXIT_CONFIG,
        }
    }
}
