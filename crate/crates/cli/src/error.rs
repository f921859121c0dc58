use genusforge::derivation::DerivationError;
use genusforge::family::FamilyError;
use genusforge::surgery::SurgeryError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl CliError {
    /// 1 for a failed verification, 2 for bad input, 3 for an exhausted budget.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Format(_) | CliError::Io(..) => 2,
            CliError::Verification(_) => 1,
            CliError::Family(e) => match e {
                FamilyError::SearchFailed(r) if r.budget_exhausted => 3,
                FamilyError::Surgery(SurgeryError::BudgetExhausted(_)) => 3,
                FamilyError::Surgery(SurgeryError::Parse { .. }) => 2,
                FamilyError::NoBuiltin(_) | FamilyError::BelowFamily(_) => 2,
                FamilyError::Derivation(
                    DerivationError::RowLength { .. } | DerivationError::NotDivisibleByFour(_),
                ) => 2,
                _ => 1,
            },
        }
    }
}
