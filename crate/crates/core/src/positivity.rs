//! The central decision: a graph is positive exactly when the unique solution
//! of `(3I + Adj L(G)) c = nu 1` has all entries strictly positive, and the
//! attached 2-step nilpotent Lie algebra is an Einstein nilradical exactly in
//! that case.
//!
//! The verdict is invariant under scaling `nu` (the solution scales linearly),
//! so everything is decided at `nu = 1`. A weight that is exactly zero counts
//! as non-positive: the positivity condition is strict.

use std::fmt;

use num::{One, Signed};

use crate::graph::Graph;
use crate::linalg::{self, Matrix};
use crate::{Rational, RationalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    NonPositive,
    /// No edges, hence no conditions: the algebra is abelian. Reported as an
    /// Einstein nilradical, but flagged distinctly so callers can exclude it.
    VacuouslyPositive,
}

impl Verdict {
    pub fn is_einstein(self) -> bool {
        matches!(self, Verdict::Positive | Verdict::VacuouslyPositive)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Positive => "POSITIVE",
            Verdict::NonPositive => "NON-POSITIVE",
            Verdict::VacuouslyPositive => "VACUOUS",
        };
        write!(f, "{s}")
    }
}

/// Exact edge weights together with the verdict they imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityReport {
    /// One weight per edge, in edge order; satisfies
    /// `3 c_k + sum over adjacent edges c_m = nu` exactly.
    pub weights: Vec<Rational>,
    pub nu: Rational,
    pub verdict: Verdict,
    /// 1-based indices of the witness edges with weight `<= 0`.
    pub negative_or_zero: Vec<usize>,
}

impl PositivityReport {
    pub fn min_weight(&self) -> Option<&Rational> {
        self.weights.iter().min()
    }

    /// Structured text report. With `float`, decimal approximations are
    /// appended for human reading; the exact values stay authoritative.
    pub fn render_text(&self, q: usize, float: bool) -> String {
        let mut out = String::new();
        out.push_str("nilgraph check v1\n");
        out.push_str(&format!("graph: q={} p={}\n", q, self.weights.len()));
        out.push_str(&format!("nu: {}\n", self.nu));
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out.push_str("weights:\n");
        for (k, w) in self.weights.iter().enumerate() {
            if float {
                let approx = approx_f64(w);
                out.push_str(&format!("  {}: {} ~ {:.6}\n", k + 1, w, approx));
            } else {
                out.push_str(&format!("  {}: {}\n", k + 1, w));
            }
        }
        let witnesses: Vec<String> = self.negative_or_zero.iter().map(|k| k.to_string()).collect();
        out.push_str(&format!("negative-or-zero: {}\n", witnesses.join(" ")));
        out
    }
}

fn approx_f64(x: &Rational) -> f64 {
    let numer = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let denom = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    numer / denom
}

/// `3I + Adj L(g)`: symmetric, diagonal 3, off-diagonal 1 exactly where two
/// edges of `g` share a vertex. Positive definite for every graph.
pub fn positivity_matrix(g: &Graph) -> RationalMatrix {
    let line = g.line_graph();
    let adj = line.adjacency();
    Matrix::from_fn(g.p(), g.p(), |i, j| {
        if i == j {
            Rational::from_integer(3.into())
        } else {
            Rational::from_integer(adj.get(i, j).into())
        }
    })
}

/// Exact solution of the weight system for a given `nu > 0`.
pub fn solve_weights(g: &Graph, nu: &Rational) -> Vec<Rational> {
    assert!(nu.is_positive(), "nu must be positive");
    if g.p() == 0 {
        return Vec::new();
    }
    let a = positivity_matrix(g);
    let b = vec![nu.clone(); g.p()];
    linalg::solve(&a, &b).expect("positivity system is positive definite, hence nonsingular")
}

fn classify(weights: Vec<Rational>, nu: Rational) -> PositivityReport {
    let negative_or_zero: Vec<usize> = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_positive())
        .map(|(k, _)| k + 1)
        .collect();
    let verdict = if weights.is_empty() {
        Verdict::VacuouslyPositive
    } else if negative_or_zero.is_empty() {
        Verdict::Positive
    } else {
        Verdict::NonPositive
    };
    PositivityReport {
        weights,
        nu,
        verdict,
        negative_or_zero,
    }
}

/// Decides positivity of `g` at `nu = 1` by solving the full `p x p` system.
pub fn check_positive(g: &Graph) -> PositivityReport {
    check_positive_with_nu(g, Rational::one())
}

/// Same decision at an arbitrary `nu > 0`; the weights scale linearly with
/// `nu` and the verdict cannot change.
pub fn check_positive_with_nu(g: &Graph, nu: Rational) -> PositivityReport {
    classify(solve_weights(g, &nu), nu)
}

/// Same classification from weights already solved elsewhere.
pub(crate) fn report_from_weights(weights: Vec<Rational>) -> PositivityReport {
    classify(weights, Rational::one())
}

pub fn is_einstein_nilradical(g: &Graph) -> bool {
    check_positive(g).verdict.is_einstein()
}
