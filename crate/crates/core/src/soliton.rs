//! Independent numerical oracle: build the graph's 2-step nilpotent Lie
//! algebra, compute Ricci operators of diagonal metrics, and try to drive the
//! metric to `Ric = cI + D` with `D` a derivation.
//!
//! For a nilpotent metric Lie algebra with orthonormal basis `b_i`,
//!
//! ```text
//! Ric(x, y) = -1/2 sum_i <[x, b_i], [y, b_i]>
//!             + 1/4 sum_{i,j} <[b_i, b_j], x> <[b_i, b_j], y>.
//! ```
//!
//! For graph algebras and diagonal metrics this collapses to a diagonal
//! matrix: writing `w_k = g_{q+k} / (g_i g_j)` for edge `k = {i, j}`, the
//! vertex entry is `-1/2 sum_{k at v} w_k` and the edge entry is `w_k / 2`.
//! The implementation uses the collapsed form; the tests recompute the full
//! double sum independently and compare.
//!
//! This module never touches the exact decision path: a failed search proves
//! nothing, and its outcome is never consulted by the positivity verdict.

use std::fmt;

use crate::graph::{Edge, Graph};
use crate::linalg::Matrix;
use crate::FloatMatrix;

/// Structure constants of the graph algebra over the ordered basis
/// `e_1..e_q` (vertices) then `e_{q+1}..e_{q+p}` (edges):
/// `[e_i, e_j] = e_{q+k}` exactly when edge `k = {i, j}` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra2Step {
    q: usize,
    brackets: Vec<Edge>,
}

impl LieAlgebra2Step {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.brackets.len()
    }

    /// Total dimension `p + q`.
    pub fn dim(&self) -> usize {
        self.q + self.brackets.len()
    }

    /// Dimension of the derived algebra (the edge span).
    pub fn derived_dim(&self) -> usize {
        self.brackets.len()
    }

    pub fn brackets(&self) -> &[Edge] {
        &self.brackets
    }

    /// Bracket of two coordinate vectors in the metric-orthonormalized basis
    /// of `m`: `[b_i, b_j] = gamma_k b_{q+k}` with
    /// `gamma_k = sqrt(g_{q+k} / (g_i g_j))`.
    pub fn bracket(&self, m: &DiagonalMetric, x: &[f64], y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(y.len(), self.dim());
        let mut out = vec![0.0; self.dim()];
        for (k, &(i, j)) in self.brackets.iter().enumerate() {
            let gamma = self.gamma(m, k);
            let coeff = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1];
            out[self.q + k] = gamma * coeff;
        }
        out
    }

    fn gamma(&self, m: &DiagonalMetric, k: usize) -> f64 {
        let (i, j) = self.brackets[k];
        (m.scale(self.q + k) / (m.scale(i - 1) * m.scale(j - 1))).sqrt()
    }
}

/// The graph algebra of `g`.
pub fn build_algebra(g: &Graph) -> LieAlgebra2Step {
    let alg = LieAlgebra2Step {
        q: g.q(),
        brackets: g.edges().to_vec(),
    };
    debug_assert_eq!(alg.derived_dim(), g.p());
    alg
}

/// Positive scale per basis vector; the metric is `<e_a, e_a> = scale_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMetric {
    scales: Vec<f64>,
}

impl DiagonalMetric {
    pub fn new(scales: Vec<f64>) -> DiagonalMetric {
        assert!(
            scales.iter().all(|&s| s > 0.0 && s.is_finite()),
            "metric scales must be positive and finite"
        );
        DiagonalMetric { scales }
    }

    pub fn identity(dim: usize) -> DiagonalMetric {
        DiagonalMetric {
            scales: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.scales.len()
    }

    /// 0-based basis index.
    pub fn scale(&self, idx: usize) -> f64 {
        self.scales[idx]
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }
}

/// Ricci matrix of `(alg, m)` in the orthonormalized basis. Diagonal for
/// graph algebras with diagonal metrics; returned as a full matrix so callers
/// can treat it generically.
pub fn ricci_diagonal(alg: &LieAlgebra2Step, m: &DiagonalMetric) -> FloatMatrix {
    assert_eq!(m.dim(), alg.dim(), "metric dimension mismatch");
    let n = alg.dim();
    let q = alg.q();
    let mut diag = vec![0.0; n];
    for (k, &(i, j)) in alg.brackets().iter().enumerate() {
        let w = m.scale(q + k) / (m.scale(i - 1) * m.scale(j - 1));
        diag[i - 1] -= 0.5 * w;
        diag[j - 1] -= 0.5 * w;
        diag[q + k] += 0.5 * w;
    }
    Matrix::from_fn(n, n, |a, b| if a == b { diag[a] } else { 0.0 })
}

/// Outcome of checking `Ric = cI + D` for one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonCertificate {
    pub ricci: FloatMatrix,
    /// Least-squares scalar: the `c` making `Ric - cI` closest to a
    /// derivation over all bracket constraints.
    pub c: f64,
    /// The derivation candidate `D = Ric - cI`.
    pub derivation: FloatMatrix,
    /// `max |D[x,y] - [Dx,y] - [x,Dy]|` over basis pairs.
    pub derivation_residual: f64,
    /// Root-mean-square of the same defect entries.
    pub soliton_residual: f64,
    pub accepted: bool,
}

impl SolitonCertificate {
    pub fn render_text(&self, iterations: Option<usize>) -> String {
        format!("nilgraph soliton v1\n{}", self.render_body(iterations))
    }

    /// Report body without the version header.
    pub fn render_body(&self, iterations: Option<usize>) -> String {
        let n = self.ricci.rows();
        let mut out = String::new();
        out.push_str(&format!("c: {:.12}\n", self.c));
        let d: Vec<String> = (0..n)
            .map(|i| format!("{:.12}", self.derivation[(i, i)]))
            .collect();
        out.push_str(&format!("derivation-diagonal: {}\n", d.join(" ")));
        out.push_str(&format!("derivation-residual: {:.3e}\n", self.derivation_residual));
        out.push_str(&format!("soliton-residual: {:.3e}\n", self.soliton_residual));
        if let Some(iters) = iterations {
            out.push_str(&format!("iterations: {iters}\n"));
        }
        out.push_str(&format!("accepted: {}\n", self.accepted));
        out
    }
}

fn column(d: &FloatMatrix, j: usize) -> Vec<f64> {
    (0..d.rows()).map(|i| d[(i, j)]).collect()
}

fn basis_vector(n: usize, idx: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[idx] = 1.0;
    e
}

/// Defect of the derivation law for `d` on the basis pair `(a, b)`:
/// `d [b_a, b_b] - [d b_a, b_b] - [b_a, d b_b]`.
fn derivation_defect(
    alg: &LieAlgebra2Step,
    m: &DiagonalMetric,
    d: &FloatMatrix,
    a: usize,
    b: usize,
) -> Vec<f64> {
    let n = alg.dim();
    let ea = basis_vector(n, a);
    let eb = basis_vector(n, b);
    let br = alg.bracket(m, &ea, &eb);
    let lhs = d.mul_vec(&br);
    let r1 = alg.bracket(m, &column(d, a), &eb);
    let r2 = alg.bracket(m, &ea, &column(d, b));
    (0..n).map(|idx| lhs[idx] - r1[idx] - r2[idx]).collect()
}

/// Maximum derivation defect of an arbitrary candidate matrix.
pub fn derivation_residual(alg: &LieAlgebra2Step, m: &DiagonalMetric, d: &FloatMatrix) -> f64 {
    let n = alg.dim();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in a + 1..n {
            for entry in derivation_defect(alg, m, d, a, b) {
                worst = worst.max(entry.abs());
            }
        }
    }
    worst
}

/// Builds the certificate for one metric: fixes `c` by least squares, sets
/// `D = Ric - cI`, and measures how far `D` is from being a derivation.
pub fn verify_soliton(alg: &LieAlgebra2Step, m: &DiagonalMetric, tol: f64) -> SolitonCertificate {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = alg.dim();
    let ricci = ricci_diagonal(alg, m);

    // defect(Ric - cI) = defect(Ric) + c * [.,.] on every basis pair, so the
    // least-squares c is -<defect(Ric), B> / <B, B> with B the bracket tensor.
    let mut num = 0.0;
    let mut den = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let ea = basis_vector(n, a);
            let eb = basis_vector(n, b);
            let bracket = alg.bracket(m, &ea, &eb);
            let defect = derivation_defect(alg, m, &ricci, a, b);
            for idx in 0..n {
                num += defect[idx] * bracket[idx];
                den += bracket[idx] * bracket[idx];
            }
        }
    }
    let c = if den > 0.0 { -num / den } else { 0.0 };

    let derivation = Matrix::from_fn(n, n, |i, j| {
        ricci[(i, j)] - if i == j { c } else { 0.0 }
    });

    let mut worst = 0.0f64;
    let mut sum_sq = 0.0;
    let mut count = 0usize;
    for a in 0..n {
        for b in a + 1..n {
            for entry in derivation_defect(alg, m, &derivation, a, b) {
                worst = worst.max(entry.abs());
                sum_sq += entry * entry;
                count += 1;
            }
        }
    }
    let soliton_residual = if count == 0 { 0.0 } else { (sum_sq / count as f64).sqrt() };
    SolitonCertificate {
        ricci,
        c,
        derivation,
        derivation_residual: worst,
        soliton_residual,
        accepted: worst <= tol && soliton_residual <= tol,
    }
}

/// Result of the metric search.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found {
        metric: DiagonalMetric,
        certificate: SolitonCertificate,
        iterations: usize,
    },
    /// The iteration cap was reached first. Not a proof of non-existence.
    NotFound {
        iterations: usize,
        best_residual: f64,
    },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found { iterations, .. } => {
                write!(f, "found after {iterations} iterations")
            }
            SearchOutcome::NotFound { iterations, best_residual } => {
                write!(f, "not found after {iterations} iterations (best residual {best_residual:.3e})")
            }
        }
    }
}

/// Searches for a diagonal metric with `Ric = cI + D` by multiplicative
/// rescaling of the edge scales, starting from the identity metric.
pub fn search_soliton(alg: &LieAlgebra2Step, max_iter: usize, tol: f64) -> SearchOutcome {
    search_soliton_from(alg, DiagonalMetric::identity(alg.dim()), max_iter, tol)
}

/// Same search from a caller-provided seed metric.
///
/// Writing `w_k` for the edge quantities above, the defect of step `k` is
/// `t_k = (3/2) w_k + (1/2) sum over adjacent edges w_m`, and the soliton
/// condition is exactly `t_k` constant over the edges. Each round multiplies
/// `w_k` by `(mean(t) / t_k)^alpha` with adaptive damping.
pub fn search_soliton_from(
    alg: &LieAlgebra2Step,
    seed: DiagonalMetric,
    max_iter: usize,
    tol: f64,
) -> SearchOutcome {
    assert!(max_iter >= 1, "need at least one iteration");
    assert!(tol > 0.0, "tolerance must be positive");
    let p = alg.p();
    let q = alg.q();
    if p == 0 {
        let certificate = verify_soliton(alg, &seed, tol);
        return SearchOutcome::Found {
            metric: seed,
            certificate,
            iterations: 0,
        };
    }

    // Adjacency between edges (shared vertex), indexed 0-based.
    let adjacent: Vec<Vec<usize>> = (0..p)
        .map(|k| {
            let (a, b) = alg.brackets()[k];
            (0..p)
                .filter(|&m| {
                    let (c, d) = alg.brackets()[m];
                    m != k && (a == c || a == d || b == c || b == d)
                })
                .collect()
        })
        .collect();

    let mut w: Vec<f64> = (0..p)
        .map(|k| {
            let (i, j) = alg.brackets()[k];
            seed.scale(q + k) / (seed.scale(i - 1) * seed.scale(j - 1))
        })
        .collect();

    let metric_of = |w: &[f64]| -> DiagonalMetric {
        let mut scales = vec![1.0; alg.dim()];
        scales[q..].copy_from_slice(w);
        DiagonalMetric::new(scales)
    };

    let defects = |w: &[f64]| -> Vec<f64> {
        (0..p)
            .map(|k| 1.5 * w[k] + 0.5 * adjacent[k].iter().map(|&m| w[m]).sum::<f64>())
            .collect()
    };

    let mut alpha = 0.5f64;
    let mut best_residual = f64::INFINITY;
    let mut last_spread = f64::INFINITY;
    for iter in 0..max_iter {
        let t = defects(&w);
        let mean = t.iter().sum::<f64>() / p as f64;
        let spread = t
            .iter()
            .map(|tk| (tk - mean).abs())
            .fold(0.0f64, f64::max);
        if spread < tol {
            let metric = metric_of(&w);
            let certificate = verify_soliton(alg, &metric, tol);
            if certificate.accepted {
                return SearchOutcome::Found {
                    metric,
                    certificate,
                    iterations: iter,
                };
            }
        }
        best_residual = best_residual.min(spread);
        if spread > last_spread {
            alpha = (alpha * 0.5).max(0.05);
        }
        last_spread = spread;
        for k in 0..p {
            w[k] *= (mean / t[k]).powf(alpha);
        }
        // Keep the overall scale pinned so w neither drifts to 0 nor blows up.
        let norm: f64 = w.iter().sum::<f64>() / p as f64;
        for wk in w.iter_mut() {
            *wk /= norm;
        }
    }
    SearchOutcome::NotFound {
        iterations: max_iter,
        best_residual,
    }
}
