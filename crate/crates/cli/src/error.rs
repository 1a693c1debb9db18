use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Core(#[from] bergman::Error),

    #[error("zero outcome disagrees with the prediction: {0}")]
    Mismatch(String),

    #[error("{0} check(s) failed")]
    VerifyFailed(usize),

    #[error("i/o error: {0}")]
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use bergman::Error as E;
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(E::Schema { .. } | E::Value { .. } | E::DimensionMismatch { .. }) => 2,
            CliError::Core(E::OutsideDomain(_)) => 3,
            CliError::Core(_) => 1,
            CliError::Mismatch(_) => 4,
            CliError::VerifyFailed(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_table() {
        assert_eq!(CliError::Parse("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(bergman::Error::OutsideDomain("x".into())).exit_code(), 3);
        assert_eq!(CliError::Core(bergman::Error::DimensionMismatch { expected: 2, actual: 3 }).exit_code(), 2);
        assert_eq!(CliError::Mismatch("x".into()).exit_code(), 4);
        assert_eq!(CliError::VerifyFailed(1).exit_code(), 5);
        assert_eq!(CliError::Core(bergman::Error::PoleHit(0.0)).exit_code(), 1);
    }
}
