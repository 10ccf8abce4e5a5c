//! Biword rewriting for the right quantum algebra.
//!
//! Biwords (two-row arrays of letters) multiply by concatenation. Two
//! rewrite systems, one at `q = 1` and one with symbolic `q`, reduce every
//! biword to a combination of irreducible biwords (those without a double
//! descent). On top of the rewrite engine the crate provides:
//!
//! - [`phi`]: the weight map `alpha -> q^{inv-(alpha)} alpha` relating the two
//!   systems,
//! - [`macmahon`]: the Fermion/Boson sums and degree-wise verification of
//!   `[Ferm * Bos] = 1`,
//! - [`oracle`]: exact rank computations that check the irreducible biwords
//!   form a basis of each graded quotient,
//! - [`io`] and [`cli`]: the text syntax and the `rightq` command line.
//!
//! With the default `parallel` feature, batch work (fuzz trials, per-term
//! reductions, matrix blocks) runs on rayon; see [`par`].

pub mod biword;
pub mod cli;
pub mod coeff;
pub mod expr;
pub mod io;
pub mod macmahon;
pub mod oracle;
pub mod par;
pub mod phi;
pub mod rewrite;

pub use biword::{Alphabet, Biword, BiwordError, Letter, Word};
pub use coeff::LaurentCoeff;
pub use expr::Expression;
pub use io::{parse_biword, parse_expression, print_expression, ParseError};
pub use par::Parallelism;
pub use rewrite::{ReductionReport, ReductionSystem, Reducer, RewriteError, Strategy};
