use thiserror::Error;

/// Errors produced by the arithmetic layers.
///
/// Everything here is a *caller* error or a detected internal inconsistency;
/// ordinary "the congruence does not hold" outcomes are reported as check
/// failures, never as errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("modulus {p}^{k} does not fit in 64 bits")]
    ModulusOverflow { p: u64, k: u32 },

    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,

    #[error("denominator is divisible by {p}: not reducible modulo a power of {p}")]
    DenominatorNotCoprime { p: u64 },

    #[error("bound {n} must be smaller than the prime {p}")]
    BoundNotBelowPrime { n: u64, p: u64 },

    #[error("division by a p-adic zero")]
    PadicDivisionByZero,

    #[error("value has negative valuation {v}: not reducible to a residue")]
    NegativeValuation { v: i64 },

    #[error("insufficient p-adic precision: need {need} absolute digits, have {have}")]
    PrecisionUnderflow { need: u32, have: u32 },

    #[error("binomial argument n={n} outside the supported range n <= 2p = {max}")]
    BinomialRange { n: u64, max: u64 },

    #[error("Bernoulli index {n} exceeds the cache cap {cap}")]
    BernoulliCap { n: u64, cap: u64 },

    #[error("power-sum Bernoulli route requires even m with 2 <= m <= p-3; got m={m}, p={p}")]
    BernoulliIndex { m: u64, p: u64 },

    #[error("power sum not divisible by p for m={m}, p={p}: implementation bug")]
    BernoulliDivisibility { m: u64, p: u64 },

    #[error("base {x} is divisible by the prime {p}")]
    BaseNotCoprime { x: i64, p: u64 },

    #[error("signature entries must be nonzero")]
    ZeroSignatureEntry,

    #[error("reversal factor is defined for depth 2 and 3 only; got depth {0}")]
    ReversalDepth(usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("bound must be even; got {0}")]
    OddBound(u64),

    #[error("unknown check id: {0}")]
    UnknownCheck(String),

    #[error("independent oracles disagree: {0}")]
    OracleMismatch(String),
}

pub type ArithResult<T> = Result<T, ArithError>;
