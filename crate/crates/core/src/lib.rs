//! Exact symbolic counting of nonattacking chess and fairy-chess
//! configurations on an m-row strip of variable width n.
//!
//! The count of nonattacking placements with prescribed row occupancies is a
//! piecewise polynomial in n. This crate computes it exactly: a piece's moves
//! become a weighted integral gain graph with one vertex per piece slot, the
//! graph's integral chromatic function is evaluated by deletion and
//! contraction into a closed form built from positive-part factors
//! `(n - s)^+`, and from that closed form flow the eventual polynomial, its
//! validity threshold, the rational generating function over `(1-t)^(q+1)`,
//! and the asymptotic bounds. A brute-force oracle provides ground truth.
//!
//! ```
//! use nonattack::pieces::{builtin, count_formula, BoardSpec};
//!
//! let queen = builtin("queen").unwrap();
//! let formula = count_formula(&queen, &BoardSpec::uniform(3)).unwrap();
//! assert_eq!(formula.count(4).unwrap(), 4);
//! assert_eq!(
//!     formula.eventual_labelled().to_string(),
//!     "n^3 - 9n^2 + 30n - 36",
//! );
//! assert_eq!(formula.threshold(), 3);
//! ```

pub mod chromatic;
pub mod gaingraph;
pub mod genfunc;
pub mod oracle;
pub mod pieces;
pub mod pluspoly;

pub use chromatic::{integral_chromatic, ChromaticEngine, LinkPolicy};
pub use gaingraph::{Edge, GainGraph, GainGraphError};
pub use genfunc::{eulerian, expression_gf, term_gf, EulerianPolynomial, RationalCountSeries};
pub use pieces::{
    builtin, count_formula, BoardSpec, CountFormula, MoveSet, Piece, PieceError, BUILTIN_NAMES,
};
pub use pluspoly::{functions_equal, DensePolynomial, PlusTerm, PluspartExpression};
