use std::path::PathBuf;

/// Everything that can go wrong across the crate.
///
/// Programmer errors (indexing past a table, malformed internal state) panic;
/// this enum is for conditions a caller can plausibly hit with valid-looking
/// input: degenerate moduli, characters of the wrong kind, budgets, bad files.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("modulus {q} is below the minimum {min}")]
    ModulusTooSmall { q: u64, min: u64 },

    #[error("modulus {q} exceeds the discrete-log table ceiling {max} (the table is linear in q)")]
    ModulusTooLarge { q: u64, max: u64 },

    #[error("modulus {q} is not prime")]
    CompositeModulus { q: u64 },

    #[error("operation requires a nonprincipal character")]
    PrincipalCharacter,

    #[error("operation requires a primitive character (conductor {conductor} < modulus {modulus})")]
    ImprimitiveCharacter { conductor: u64, modulus: u64 },

    #[error("operation requires an odd character")]
    EvenCharacter,

    #[error("character does not belong to the group mod {expected} (got mod {got})")]
    GroupMismatch { expected: u64, got: u64 },

    #[error("empty interval: alpha {alpha} must not exceed beta {beta}")]
    EmptyInterval { alpha: f64, beta: f64 },

    #[error("truncation length {z} out of range [1, {max}]")]
    BadTruncation { z: u64, max: u64 },

    #[error("argument {name} = {value} out of the supported range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("sweep budget exceeded after {done} of {total} rows")]
    BudgetExceeded { done: u64, total: u64 },

    #[error("enumeration budget exceeded: q^k = {size} > {budget}")]
    EnumerationBudget { size: u128, budget: u128 },

    #[error("tolerance {tol:e} unreachable within the configured budget (best bound {best:e})")]
    ToleranceUnreachable { tol: f64, best: f64 },

    #[error("quadrature schemes disagree: {a} vs {b} (difference {diff:e}, tolerance {tol:e})")]
    SchemesDisagree { a: f64, b: f64, diff: f64, tol: f64 },

    #[error("table is incomplete; rerun the sweep to completion first")]
    IncompleteTable,

    #[error("tables do not cover q = {q} (pass the documented subset flag if intentional)")]
    CoverageGap { q: u64 },

    #[error("corrupt table {path}: {reason}")]
    CorruptTable { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
