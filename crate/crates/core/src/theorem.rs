//! The `(p, q)`-ladder certification run.
//!
//! For `q >= 21`, start from the five-block graph `G(q)` (blocks
//! `{1}, {2,3}, {4}, {5,6}, {7..q}`, the right5 shape with `v = q - 6`,
//! `p = D_q - 2q + 9` edges) and delete, in order, the edge set
//!
//! ```text
//! H = {4,5}, {4,6};
//!     all {i,j} with 5 <= i < j <= q, lexicographically;
//!     {2,j} for j = 5..q;
//!     {2,3}, {1,2}
//! ```
//!
//! Every intermediate graph stays connected (so the attached algebra is
//! indecomposable), loses exactly one edge per step, and is certified
//! non-positive by the exact solver. That covers every type `(p, q)` with
//! `q - 1 <= p <= D_q - 2q + 9`. Each step's coherent decomposition is also
//! matched against the family shape the case analysis assigns to it; any
//! mismatch is reported in the records rather than suppressed.

use std::fmt;

use rayon::prelude::*;

use crate::coherence::{coherent_decomposition, ComponentKind};
use crate::families::Family;
use crate::graph::{Edge, Graph};
use crate::positivity::{check_positive, Verdict};
use crate::Rational;

/// Smallest `q` the certification argument covers.
pub const Q_MIN: usize = 21;
/// Smallest `q` for which the start graph exists at all (`v = q - 6 >= 1`).
pub const Q_ABSOLUTE_MIN: usize = 7;
/// Exact solving is cubic in `p = Theta(q^2)`; beyond this, require override.
pub const Q_DEFAULT_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum TheoremError {
    QTooSmall { q: usize, min: usize },
    QTooLarge { q: usize, cap: usize },
    /// A certificate failed. Signals an implementation bug for `q >= 21`.
    Violation { l: usize, reason: String, report: Box<TheoremReport> },
}

impl fmt::Display for TheoremError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremError::QTooSmall { q, min } => {
                write!(f, "q={q} is below the covered range (q >= {min}); pass the override to explore")
            }
            TheoremError::QTooLarge { q, cap } => {
                write!(f, "q={q} exceeds the default cap {cap}; pass the override to proceed")
            }
            TheoremError::Violation { l, reason, .. } => {
                write!(f, "certificate failed at step l={l}: {reason}")
            }
        }
    }
}

impl std::error::Error for TheoremError {}

/// The ordered deletion set `H` for a given `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionSequence {
    pub q: usize,
    pub edges: Vec<Edge>,
}

impl DeletionSequence {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

fn check_q(q: usize, override_min: bool) -> Result<(), TheoremError> {
    let min = if override_min { Q_ABSOLUTE_MIN } else { Q_MIN };
    if q < min {
        return Err(TheoremError::QTooSmall { q, min });
    }
    if q > Q_DEFAULT_CAP && !override_min {
        return Err(TheoremError::QTooLarge { q, cap: Q_DEFAULT_CAP });
    }
    Ok(())
}

/// The start graph `G(q)` on blocks `{1}, {2,3}, {4}, {5,6}, {7..q}`.
pub fn build_theorem_graph(q: usize) -> Result<Graph, TheoremError> {
    build_theorem_graph_with(q, false)
}

pub fn build_theorem_graph_with(q: usize, override_min: bool) -> Result<Graph, TheoremError> {
    check_q(q, override_min)?;
    Ok(Family::Right5 { r: 1, u: 2, v: q - 6 }.realize())
}

/// The ordered deletion set `H`; `|H| = C(q-4, 2) + (q-4) + 4`.
pub fn deletion_sequence(q: usize) -> Result<DeletionSequence, TheoremError> {
    deletion_sequence_with(q, false)
}

pub fn deletion_sequence_with(q: usize, override_min: bool) -> Result<DeletionSequence, TheoremError> {
    check_q(q, override_min)?;
    let mut edges = vec![(4, 5), (4, 6)];
    for i in 5..=q {
        for j in i + 1..=q {
            edges.push((i, j));
        }
    }
    for j in 5..=q {
        edges.push((2, j));
    }
    edges.push((2, 3));
    edges.push((1, 2));
    Ok(DeletionSequence { q, edges })
}

/// Canonical description of a coherent decomposition: the multiset of
/// `(size, kind)` parts plus the coherence-graph adjacency up to relabelling
/// of interchangeable components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub parts: Vec<(usize, ComponentKind)>,
    pub edges: Vec<(usize, usize)>,
}

impl Signature {
    /// Comma-free rendering, stable across runs.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(size, kind)| format!("{}{}", size, kind.letter()))
            .collect();
        let edges: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!("{}|{}", parts.join(";"), edges.join(";"))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Computes the canonical signature of `g`'s coherent decomposition.
///
/// Components are sorted by `(size, kind)`. Within groups of interchangeable
/// components the labelling minimizing the edge list is chosen, provided the
/// number of such permutations stays small; otherwise a deterministic
/// neighbor-profile refinement is used instead. The ladder graphs have at
/// most five components, far inside the exact regime.
pub fn coherence_signature(g: &Graph) -> Signature {
    let d = coherent_decomposition(g);
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (d.size(i), d.kind(i)));
    let key = |i: usize| (d.size(i), d.kind(i));

    // Group boundaries of interchangeable components.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for idx in 1..=n {
        if idx == n || key(order[idx]) != key(order[start]) {
            groups.push((start, idx));
            start = idx;
        }
    }

    let perm_count: f64 = groups
        .iter()
        .map(|&(a, b)| (1..=(b - a)).map(|k| k as f64).product::<f64>())
        .product();

    let edges_under = |order: &[usize]| -> Vec<(usize, usize)> {
        let mut pos = vec![0usize; n];
        for (slot, &comp) in order.iter().enumerate() {
            pos[comp] = slot;
        }
        let mut edges: Vec<(usize, usize)> = d
            .coherence_edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (pos[a], pos[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        edges
    };

    let best_order = if perm_count <= 5040.0 {
        let mut best_edges: Option<Vec<(usize, usize)>> = None;
        let mut best_order = order.clone();
        permute_groups(&mut order.clone(), &groups, 0, &mut |candidate| {
            let e = edges_under(candidate);
            if best_edges.as_ref().is_none_or(|be| e < *be) {
                best_edges = Some(e);
                best_order = candidate.to_vec();
            }
        });
        best_order
    } else {
        // Refinement fallback: order inside groups by sorted neighbor keys.
        let mut refined = order.clone();
        refined.sort_by_key(|&i| {
            let mut profile: Vec<(usize, ComponentKind)> = d
                .coherence_edges()
                .iter()
                .filter_map(|&(a, b)| {
                    if a == i {
                        Some(key(b))
                    } else if b == i {
                        Some(key(a))
                    } else {
                        None
                    }
                })
                .collect();
            profile.sort_unstable();
            (key(i), profile)
        });
        refined
    };

    Signature {
        parts: best_order.iter().map(|&i| key(i)).collect(),
        edges: edges_under(&best_order),
    }
}

fn permute_groups(
    order: &mut Vec<usize>,
    groups: &[(usize, usize)],
    g: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if g == groups.len() {
        visit(order);
        return;
    }
    let (lo, hi) = groups[g];
    fn heap(order: &mut Vec<usize>, lo: usize, k: usize, groups: &[(usize, usize)], g: usize, visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            permute_groups(order, groups, g + 1, visit);
            return;
        }
        for i in 0..k {
            heap(order, lo, k - 1, groups, g, visit);
            if k.is_multiple_of(2) {
                order.swap(lo + i, lo + k - 1);
            } else {
                order.swap(lo, lo + k - 1);
            }
        }
    }
    heap(order, lo, hi - lo, groups, g, visit);
}

/// The family shape the case analysis assigns to step `l`.
///
/// Two textual parameters in the source analysis disagree with the drawn
/// decompositions and are corrected here from the graphs themselves:
/// `G(i, i+1)` carries `r = i - 3` (not `i - 2`), and `G(q-2, q-1)` has a
/// singleton fourth block. The final step keeps the assigned `u = q - 4`
/// even though the computed component has `q - 3` vertices; the mismatch is
/// reported, not resolved.
pub fn expected_family(q: usize, l: usize, h: &DeletionSequence) -> Family {
    if l == 0 {
        return Family::Right5 { r: 1, u: 2, v: q - 6 };
    }
    let (i, j) = h.edges[l - 1];
    match (i, j) {
        (4, 5) => Family::Right5 { r: 1, u: 1, v: q - 5 },
        (4, 6) => Family::ThreeChain { r: 2, s: 2, t: q - 4 },
        (2, 3) => Family::Left4 { s: 2, u: q - 4 },
        (1, 2) => Family::Left4 { s: 1, u: q - 4 },
        (2, j) => Family::Mid4 { r: j - 4, s: 1, t: q - j + 2, u: 1 },
        (i, j) if j == i + 1 && i < q - 1 => {
            Family::Mid4 { r: i - 3, s: 2, t: 2, u: q - i - 1 }
        }
        (i, j) if j < q => Family::Right5 { r: i - 3, u: q - j, v: j - i },
        (i, j) if j == q && i < q - 1 => Family::ThreeChain { r: i - 2, s: 2, t: q - i },
        // Only (q-1, q) remains: the pair block's final deletion.
        _ => Family::TwoChain { r: q - 2, s: 2 },
    }
}

/// One certified step of the ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub l: usize,
    /// Edge deleted to reach this step; `None` for `l = 0`.
    pub deleted: Option<Edge>,
    pub p: usize,
    pub q: usize,
    pub verdict: Verdict,
    pub connected: bool,
    pub min_weight: Option<Rational>,
    pub signature: Signature,
    pub expected: Family,
    pub conforms: bool,
}

/// Full run output: one record per graph plus the covered type range.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub q: usize,
    pub steps: Vec<StepRecord>,
}

impl TheoremReport {
    /// Covered edge counts, `(min p, max p)`.
    pub fn p_range(&self) -> (usize, usize) {
        let ps: Vec<usize> = self.steps.iter().map(|s| s.p).collect();
        (*ps.iter().min().unwrap(), *ps.iter().max().unwrap())
    }

    pub fn all_certified(&self) -> bool {
        self.first_failure().is_none()
    }

    /// The first step violating a certificate, with the reason.
    pub fn first_failure(&self) -> Option<(usize, String)> {
        for (idx, s) in self.steps.iter().enumerate() {
            if s.verdict != Verdict::NonPositive {
                return Some((s.l, format!("verdict {} at p={}", s.verdict, s.p)));
            }
            if !s.connected {
                return Some((s.l, "graph disconnected".to_string()));
            }
            if idx > 0 && s.p + 1 != self.steps[idx - 1].p {
                return Some((s.l, "edge count did not drop by one".to_string()));
            }
        }
        None
    }

    pub fn mismatched_steps(&self) -> Vec<&StepRecord> {
        self.steps.iter().filter(|s| !s.conforms).collect()
    }

    /// CSV rows: `l,i,j,p,q,verdict,connected,signature,min_weight`, with a
    /// version header. Byte-identical across runs and thread counts.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# nilgraph theorem v1\n");
        out.push_str("l,i,j,p,q,verdict,connected,signature,min_weight\n");
        for s in &self.steps {
            let (i, j) = match s.deleted {
                Some((i, j)) => (i.to_string(), j.to_string()),
                None => (String::new(), String::new()),
            };
            let signature = if s.conforms {
                s.expected.render()
            } else {
                format!("expected={};computed={}", s.expected.render(), s.signature)
            };
            let min_weight = s.min_weight.as_ref().map(|w| w.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                s.l, i, j, s.p, s.q, s.verdict, s.connected, signature, min_weight
            ));
        }
        out
    }

    /// Human summary with the covered `(p, q)` rectangle.
    pub fn summary(&self) -> String {
        let (pmin, pmax) = self.p_range();
        let mismatches = self.mismatched_steps();
        let mut out = String::new();
        out.push_str("nilgraph theorem summary v1\n");
        out.push_str(&format!("q: {}\n", self.q));
        out.push_str(&format!("steps: {}\n", self.steps.len()));
        out.push_str(&format!("covered: p = {}..{} at q = {}\n", pmin, pmax, self.q));
        out.push_str(&format!(
            "all-nonpositive: {}\n",
            self.steps.iter().all(|s| s.verdict == Verdict::NonPositive)
        ));
        out.push_str(&format!(
            "all-connected: {}\n",
            self.steps.iter().all(|s| s.connected)
        ));
        out.push_str(&format!("signature-mismatches: {}\n", mismatches.len()));
        for s in mismatches {
            out.push_str(&format!(
                "  l={} expected {} computed {}\n",
                s.l,
                s.expected.render(),
                s.signature
            ));
        }
        out
    }
}

fn certify_step(q: usize, l: usize, g: &Graph, deleted: Option<Edge>, expected: Family) -> StepRecord {
    let report = check_positive(g);
    let d = coherent_decomposition(g);
    let conforms = expected.spec().matches_decomposition(&d);
    StepRecord {
        l,
        deleted,
        p: g.p(),
        q,
        verdict: report.verdict,
        connected: g.is_connected(),
        min_weight: report.min_weight().cloned(),
        signature: coherence_signature(g),
        expected,
        conforms,
    }
}

/// Runs the full ladder at `q`, certifying every intermediate graph with the
/// direct exact solver. `jobs > 1` distributes the independent checks;
/// records are assembled by `l`, so the output is deterministic either way.
pub fn run_theorem(q: usize, jobs: usize) -> Result<TheoremReport, TheoremError> {
    run_theorem_with(q, jobs, false)
}

pub fn run_theorem_with(q: usize, jobs: usize, override_min: bool) -> Result<TheoremReport, TheoremError> {
    let g0 = build_theorem_graph_with(q, override_min)?;
    let h = deletion_sequence_with(q, override_min)?;
    let mut graphs = Vec::with_capacity(h.len() + 1);
    graphs.push(g0);
    for &edge in &h.edges {
        let next = graphs
            .last()
            .unwrap()
            .delete_edge(edge)
            .expect("every member of H is an edge of the current graph");
        graphs.push(next);
    }

    let tasks: Vec<(usize, Option<Edge>, &Graph)> = graphs
        .iter()
        .enumerate()
        .map(|(l, g)| (l, if l == 0 { None } else { Some(h.edges[l - 1]) }, g))
        .collect();

    let steps: Vec<StepRecord> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            tasks
                .par_iter()
                .map(|&(l, deleted, g)| certify_step(q, l, g, deleted, expected_family(q, l, &h)))
                .collect()
        })
    } else {
        tasks
            .iter()
            .map(|&(l, deleted, g)| certify_step(q, l, g, deleted, expected_family(q, l, &h)))
            .collect()
    };

    let report = TheoremReport { q, steps };
    if !override_min {
        if let Some((l, reason)) = report.first_failure() {
            return Err(TheoremError::Violation {
                l,
                reason,
                report: Box::new(report),
            });
        }
    }
    Ok(report)
}
