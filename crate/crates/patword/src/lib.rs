//! Exact enumeration toolkit for words containing the pattern 123 exactly
//! once.
//!
//! The crate is organized around one counting problem — how many words with a
//! prescribed letter-multiplicity profile contain exactly one occurrence of
//! the pattern 123 — and the machinery that cross-checks it from several
//! independent directions:
//!
//! - [`words`]: words, multiplicity lists, pattern-occurrence counting and
//!   lexicographic multiset enumeration.
//! - [`bijection`]: the good-pair bijection certifying the count.
//! - [`counting`]: memoized avoider counts, the exactly-one double sum,
//!   brute-force oracles and closed-form permutation counts.
//! - [`series`] and [`genfun`]: exact truncated power series, the weight
//!   enumerator equation system, and the generating functions f_r.
//! - [`algebraic`]: bivariate annihilating polynomials, fitted from series
//!   data and verified on held-out coefficients.
//! - [`recurrence`]: P-recursive operators — application, guessing,
//!   sequence extension.
//! - [`asymptotics`]: growth-rate, exponent and constant estimation via
//!   exact-rational Richardson extrapolation.
//! - [`linalg`] and [`bigfloat`]: the exact nullspace solver and the
//!   high-precision floats backing the two modules above.
//! - [`fixtures`]: bundled reference equations and operators.
//! - [`acceptance`]: the end-to-end verification ladder, also exposed as the
//!   CLI `selftest`.

pub mod acceptance;
pub mod algebraic;
pub mod asymptotics;
pub mod bigfloat;
pub mod bijection;
pub mod counting;
pub mod fixtures;
pub mod genfun;
pub mod linalg;
pub mod recurrence;
pub mod series;
pub mod words;

pub use algebraic::{degree_profile, guess_algebraic, BivariateFile, BivariatePolynomial};
pub use asymptotics::{conjecture_check, estimate_asymptotics, AsymptoticEstimate};
pub use bijection::{decompose, find_unique_123, recompose, GoodPair, OccurrenceTriple};
pub use counting::{bona_132_count, count_exactly_k_bruteforce, noonan_count, AvoiderCounter};
pub use genfun::{compute_f, compute_h, decimate, solve_g_system, GTable};
pub use recurrence::{guess_recurrence, IntegerSequence, OperatorFile, Poly, RecurrenceOperator};
pub use series::{SeriesFile, TruncatedSeries};
pub use words::{
    count_pattern_occurrences, enumerate_words, enumerate_words_with_first, MultiplicityList,
    Pattern, Word,
};
