//! Double-precision FFTs computed with 32-bit number-theoretic transforms.
//!
//! The pipeline is a Bluestein (chirp-z) FFT whose cyclic convolution is
//! carried out exactly: the triple-single operands are split into bounded
//! integer components (Ozaki splitting), each component convolution is
//! evaluated by NTTs under two 31-bit primes, and the integer results are
//! reconstructed with Garner's form of the CRT. Baseline FFTs, a
//! double-double reference DFT, and an experiment harness round out the
//! crate.

pub mod baselines;
pub mod bluestein;
pub mod complex;
pub mod crt;
pub mod fp_mod;
pub mod harness;
pub mod ntt;
pub mod oracle;
pub mod ozaki_conv;
pub mod rng;
pub mod split;
pub mod ts;

pub use complex::Complex;

/// Errors surfaced by plan construction, guarded entry points, and the
/// experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("length {n} is not a power of two")]
    NotPowerOfTwo { n: usize },

    #[error("length {n} exceeds the 2^{max_log2} transform capacity of modulus {p}")]
    UnsupportedLength { n: usize, p: u32, max_log2: u32 },

    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("{n} does not divide p - 1 = {p_minus_1}")]
    NoRootOfUnity { n: u64, p_minus_1: u64 },

    #[error("split width alpha = {alpha} is unusable for n = {n}, L = {l_bound}")]
    AlphaUnusable { alpha: i32, n: usize, l_bound: u32 },

    #[error("value {value} overflows the single-precision exponent range")]
    TsOverflow { value: f64 },

    #[error("reference DFT guard: n = {n} exceeds the desk-scale cap {max}")]
    OracleGuard { n: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    /// Harness exit-code classification: `true` for runtime guard
    /// violations (exit 3) as opposed to malformed arguments (exit 2).
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedLength { .. }
                | Error::OracleGuard { .. }
                | Error::AlphaUnusable { .. }
                | Error::TsOverflow { .. }
        )
    }
}
