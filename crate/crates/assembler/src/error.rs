use thiserror::Error;

use qcisc_core::CoreError;

#[derive(Debug, Error)]
pub enum AssemblerError {
    #[error("plan constraint violated: {0}")]
    PlanConstraintViolated(String),

    #[error("no even split: {0}")]
    NoEvenSplit(String),

    #[error("variant II requires even base block size, got m={0}")]
    OddMForVariantII(u32),

    #[error("not self-inverse: ||U^2 - 1||_max = {0:.3e}")]
    NotSelfInverse(f64),

    #[error("determinant {0:+.6} signals the trivial +-1 branch, not the sigma_x class")]
    WrongDeterminant(f64),

    #[error(transparent)]
    Core(#[from] CoreError),
}
