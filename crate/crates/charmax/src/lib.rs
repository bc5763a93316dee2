//! # charmax
//!
//! A computational laboratory for the maxima of Dirichlet character sums.
//!
//! For a character χ mod q and real t ∈ [1, q], write S_χ(t) = Σ_{n≤t} χ(n)
//! and M(χ) = max_t |S_χ(t)|. This crate computes these objects exactly for
//! every character of a modulus — enumeration, evaluation and accumulation
//! all run over exact roots of unity rendered to doubles only at the end —
//! and pairs the resulting empirical distributions with the analytic
//! quantities they converge to: Fourier expansions of partial sums, moments
//! of half-point sums, divisor-sum Euler products, and the special constants
//! that govern the tails.
//!
//! The main entry points:
//!
//! * [`arith`] — factored moduli, unit groups with discrete-log tables,
//!   characters, conductors, Gauss sums;
//! * [`charsums`] — prefix-sum extremes M(χ), half-point and interval sums,
//!   the Fourier expansion, the dyadic decomposition device;
//! * [`sweep`] — exhaustive, deterministic, parallel sweeps of all
//!   characters of a modulus;
//! * [`analytic`] — Bessel I₀, the laboratory's quadrature pair, divisor
//!   functions and their Euler products, prime sums, L(1,χ), main-term
//!   shapes;
//! * [`moments`] — empirical moments, tail statistics, coefficient oracles,
//!   the finite orthogonality identity;
//! * [`table`], [`hist`] — the on-disk sweep table format and histogram
//!   emission (CSV/SVG);
//! * [`verify`] — named verification suites driven by the CLI.

pub mod analytic;
pub mod arith;
pub mod charsums;
mod error;
pub mod hist;
pub mod moments;
pub mod sweep;
pub mod table;
pub mod verify;

pub use error::{Error, Result};

// The book chapters double as doc-tests: every fenced Rust block in
// book/src/*.md is compiled and run by `cargo test --doc`, which keeps the
// guide honest as the crate evolves.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }
    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Characters, "../../../book/src/characters.md");
    chapter!(Extremes, "../../../book/src/extremes.md");
    chapter!(Fourier, "../../../book/src/fourier.md");
    chapter!(Dyadic, "../../../book/src/dyadic.md");
    chapter!(SpecialFunctions, "../../../book/src/special-functions.md");
    chapter!(DivisorSeries, "../../../book/src/divisor-series.md");
    chapter!(MomentsAndTails, "../../../book/src/moments-and-tails.md");
    chapter!(CommandLine, "../../../book/src/cli.md");
    chapter!(Verification, "../../../book/src/verification.md");
}
