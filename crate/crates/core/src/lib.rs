//! Decision tools for nilsoliton existence on 2-step nilpotent Lie algebras
//! attached to graphs.
//!
//! Every graph carries a 2-step nilpotent Lie algebra whose bracket sends two
//! adjacent vertex basis vectors to the basis vector of the edge joining them.
//! Whether that algebra admits a nilsoliton metric reduces to an exact linear
//! question: the unique solution of `(3I + Adj L(G)) c = nu 1` must have all
//! entries positive. The decision path here is exact rational arithmetic end
//! to end, so a verdict is never a rounding artifact; a separate
//! floating-point oracle ([`soliton`]) corroborates positive verdicts by
//! actually constructing the metric.
//!
//! Module map:
//! - [`graph`]: labelled simple graphs, line graphs, adjacency, type `(p, q)`.
//! - [`linalg`]: dense matrices generic over the scalar, exact rational
//!   elimination.
//! - [`positivity`]: the decision criterion itself.
//! - [`coherence`]: twin-vertex decomposition, similar edges, reduced system.
//! - [`families`]: parametric coherence-graph families with closed forms.
//! - [`theorem`]: the `(p, q)`-ladder certification run.
//! - [`soliton`]: Ricci operators of diagonal metrics and the numeric search.

pub mod coherence;
pub mod families;
pub mod graph;
pub mod linalg;
pub mod positivity;
pub mod soliton;
pub mod theorem;

/// Exact scalar used on the decision path.
pub type Rational = num::BigRational;
/// Arbitrary-precision integer backing [`Rational`].
pub type BigInt = num::BigInt;
/// Dense matrix over [`Rational`].
pub type RationalMatrix = linalg::Matrix<Rational>;
/// Dense matrix over `f64`, used by the numerical oracle.
pub type FloatMatrix = linalg::Matrix<f64>;

pub use graph::{AdjacencyMatrix, Graph, LieType};
pub use positivity::{check_positive, is_einstein_nilradical, PositivityReport, Verdict};

/// Shorthand for an exact rational from small integers.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Exact rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
