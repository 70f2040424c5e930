//! Parametric coherence-graph families and their closed-form analyses.
//!
//! Each family fixes a small coherence graph (blocks plus block adjacencies)
//! and realizes it as a concrete graph on consecutively labelled vertex
//! blocks. The five shapes, with `o` a discrete block and `*` a complete one:
//!
//! ```text
//! two-chain    o(r) - *(s)
//! three-chain  o(r) - *(s) - *(t)
//! left4        *(1) - o(s) - *(1) - o(u)
//! mid4         o(r) - *(s) - o(t) - *(u),  plus the chord *(s) - *(u)
//! right5       o(r) - *(2) - *(1) - *(u) - *(v),
//!              plus chords *(2) - *(u) and *(2) - *(v)
//! ```
//!
//! The positivity predicates for two and three blocks are exact
//! classifications. The four- and five-block predicates are one-sided claims:
//! sufficient conditions for non-positivity, never biconditionals.

use std::fmt;

use crate::coherence::{
    self, coherent_decomposition, solve_reduced, CoherentDecomposition, ComponentKind,
};
use crate::graph::Graph;
use crate::positivity::Verdict;
use crate::{int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Complete,
    Discrete,
}

/// One block of a family: its vertex count and whether it realizes complete
/// or discrete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentSpec {
    pub size: usize,
    pub kind: BlockKind,
}

impl ComponentSpec {
    pub fn complete(size: usize) -> Self {
        ComponentSpec {
            size,
            kind: BlockKind::Complete,
        }
    }

    pub fn discrete(size: usize) -> Self {
        ComponentSpec {
            size,
            kind: BlockKind::Discrete,
        }
    }
}

/// A coherence-graph shape: blocks plus the set of adjacent block pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub components: Vec<ComponentSpec>,
    pub adjacency: Vec<(usize, usize)>,
}

impl FamilySpec {
    pub fn new(components: Vec<ComponentSpec>, mut adjacency: Vec<(usize, usize)>) -> FamilySpec {
        assert!(components.iter().all(|c| c.size >= 1), "blocks need a vertex");
        for pair in adjacency.iter_mut() {
            assert_ne!(pair.0, pair.1, "block adjacency must be irreflexive");
            if pair.0 > pair.1 {
                *pair = (pair.1, pair.0);
            }
            assert!(pair.1 < components.len(), "block index out of range");
        }
        adjacency.sort_unstable();
        adjacency.dedup();
        FamilySpec {
            components,
            adjacency,
        }
    }

    /// Concrete graph on consecutively labelled blocks: all internal edges for
    /// complete blocks of size > 1, none for discrete; all cross edges between
    /// adjacent blocks; edges in lexicographic order.
    pub fn realize(&self) -> Graph {
        let mut starts = Vec::with_capacity(self.components.len());
        let mut q = 0usize;
        for c in &self.components {
            starts.push(q);
            q += c.size;
        }
        let block = |idx: usize| -> std::ops::RangeInclusive<usize> {
            starts[idx] + 1..=starts[idx] + self.components[idx].size
        };
        let mut edges = Vec::new();
        for (idx, c) in self.components.iter().enumerate() {
            if c.kind == BlockKind::Complete && c.size > 1 {
                for a in block(idx) {
                    for b in a + 1..=starts[idx] + c.size {
                        edges.push((a, b));
                    }
                }
            }
        }
        for &(i, j) in &self.adjacency {
            for a in block(i) {
                for b in block(j) {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        Graph::new(q, edges).expect("realized family graphs are always simple")
    }

    /// Whether a computed decomposition matches this shape under some
    /// bijection of components. Computed singletons match a size-1 block of
    /// either kind; larger components must match the block kind exactly.
    pub fn matches_decomposition(&self, d: &CoherentDecomposition) -> bool {
        let n = self.components.len();
        if d.len() != n {
            return false;
        }
        let compatible = |comp: usize, slot: usize| -> bool {
            let spec = self.components[slot];
            if d.size(comp) != spec.size {
                return false;
            }
            match d.kind(comp) {
                ComponentKind::Singleton => spec.size == 1,
                ComponentKind::Complete => spec.kind == BlockKind::Complete,
                ComponentKind::Discrete => spec.kind == BlockKind::Discrete,
            }
        };
        let spec_adj: Vec<(usize, usize)> = self.adjacency.clone();
        let comp_adj: Vec<(usize, usize)> = d.coherence_edges().to_vec();
        if spec_adj.len() != comp_adj.len() {
            return false;
        }
        let mut assignment = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn assign(
            comp: usize,
            n: usize,
            assignment: &mut Vec<usize>,
            used: &mut Vec<bool>,
            compatible: &dyn Fn(usize, usize) -> bool,
            comp_adj: &[(usize, usize)],
            spec_adj: &[(usize, usize)],
        ) -> bool {
            if comp == n {
                return true;
            }
            for slot in 0..n {
                if used[slot] || !compatible(comp, slot) {
                    continue;
                }
                let consistent = comp_adj.iter().all(|&(a, b)| {
                    if a != comp && b != comp {
                        return true;
                    }
                    let other = if a == comp { b } else { a };
                    if other > comp {
                        return true; // not assigned yet
                    }
                    let (x, y) = (slot.min(assignment[other]), slot.max(assignment[other]));
                    spec_adj.contains(&(x, y))
                }) && spec_adj.iter().all(|&(x, y)| {
                    // no spec edge may be forced absent among assigned slots
                    let a = assignment.iter().take(comp).position(|&s| s == x);
                    let b = assignment.iter().take(comp).position(|&s| s == y);
                    match (a, b, slot == x || slot == y) {
                        (Some(a), None, true) => {
                            let other = a;
                            comp_adj.contains(&(other.min(comp), other.max(comp)))
                        }
                        (None, Some(b), true) => {
                            let other = b;
                            comp_adj.contains(&(other.min(comp), other.max(comp)))
                        }
                        (Some(a), Some(b), _) => comp_adj.contains(&(a.min(b), a.max(b))),
                        _ => true,
                    }
                });
                if !consistent {
                    continue;
                }
                assignment[comp] = slot;
                used[slot] = true;
                if assign(comp + 1, n, assignment, used, compatible, comp_adj, spec_adj) {
                    return true;
                }
                assignment[comp] = usize::MAX;
                used[slot] = false;
            }
            false
        }
        assign(
            0,
            n,
            &mut assignment,
            &mut used,
            &compatible,
            &comp_adj,
            &spec_adj,
        )
    }
}

/// The five analyzed families with their parameters.
///
/// `right5` fixes the second block at `*(2)` and the third at `*(1)`; only
/// `r`, `u`, `v` vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    TwoChain { r: usize, s: usize },
    ThreeChain { r: usize, s: usize, t: usize },
    Left4 { s: usize, u: usize },
    Mid4 { r: usize, s: usize, t: usize, u: usize },
    Right5 { r: usize, u: usize, v: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::TwoChain { .. } => "two-chain",
            Family::ThreeChain { .. } => "three-chain",
            Family::Left4 { .. } => "left4",
            Family::Mid4 { .. } => "mid4",
            Family::Right5 { .. } => "right5",
        }
    }

    pub fn spec(&self) -> FamilySpec {
        match *self {
            Family::TwoChain { r, s } => FamilySpec::new(
                vec![ComponentSpec::discrete(r), ComponentSpec::complete(s)],
                vec![(0, 1)],
            ),
            Family::ThreeChain { r, s, t } => FamilySpec::new(
                vec![
                    ComponentSpec::discrete(r),
                    ComponentSpec::complete(s),
                    ComponentSpec::complete(t),
                ],
                vec![(0, 1), (1, 2)],
            ),
            Family::Left4 { s, u } => FamilySpec::new(
                vec![
                    ComponentSpec::complete(1),
                    ComponentSpec::discrete(s),
                    ComponentSpec::complete(1),
                    ComponentSpec::discrete(u),
                ],
                vec![(0, 1), (1, 2), (2, 3)],
            ),
            Family::Mid4 { r, s, t, u } => FamilySpec::new(
                vec![
                    ComponentSpec::discrete(r),
                    ComponentSpec::complete(s),
                    ComponentSpec::discrete(t),
                    ComponentSpec::complete(u),
                ],
                vec![(0, 1), (1, 2), (1, 3), (2, 3)],
            ),
            Family::Right5 { r, u, v } => FamilySpec::new(
                vec![
                    ComponentSpec::discrete(r),
                    ComponentSpec::complete(2),
                    ComponentSpec::complete(1),
                    ComponentSpec::complete(u),
                    ComponentSpec::complete(v),
                ],
                vec![(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (3, 4)],
            ),
        }
    }

    pub fn realize(&self) -> Graph {
        self.spec().realize()
    }

    /// Rendering used in reports and CSV cells; deliberately comma-free.
    pub fn render(&self) -> String {
        match *self {
            Family::TwoChain { r, s } => format!("two-chain(r={r};s={s})"),
            Family::ThreeChain { r, s, t } => format!("three-chain(r={r};s={s};t={t})"),
            Family::Left4 { s, u } => format!("left4(s={s};u={u})"),
            Family::Mid4 { r, s, t, u } => format!("mid4(r={r};s={s};t={t};u={u})"),
            Family::Right5 { r, u, v } => format!("right5(r={r};s=2;t=1;u={u};v={v})"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Exact classification for `o(r) - *(s)`: positive iff `s >= r` or `s = 1`.
pub fn two_chain_positive(r: usize, s: usize) -> bool {
    debug_assert!(r >= 1 && s >= 1);
    s >= r || s == 1
}

/// Exact classification for `o(r) - *(s) - *(t)`.
pub fn three_chain_positive(r: usize, s: usize, t: usize) -> bool {
    debug_assert!(r >= 1 && s >= 1 && t >= 1);
    let (ri, si, ti) = (r as i64, s as i64, t as i64);
    (si + ti) * (si - ri) > (ri - 1) * (ti - 1)
        || (s == 1 && t == 1)
        || (s == 1 && t >= 2 && (r <= 2 || (r == 3 && t == 2)))
}

/// Non-positivity claim for the left4 shape: holds for `u >= 6`, `s in {1,2}`.
/// A one-sided sufficient condition, not a classification.
pub fn left4_claim_nonpositive(s: usize, u: usize) -> bool {
    debug_assert!(s >= 1 && u >= 1);
    u >= 6 && (s == 1 || s == 2)
}

/// Non-positivity claim for the mid4 shape: `r >= 2, s = t = 2`, or
/// `s = u = 1, t >= 2` away from `(r, t) = (1, 2)`.
///
/// The point `(r, s, t, u) = (1, 1, 2, 1)` is excluded from the second case:
/// that graph is positive, with exact class weights `(9, 5, 8, 1)/38`.
pub fn mid4_claim_nonpositive(r: usize, s: usize, t: usize, u: usize) -> bool {
    debug_assert!(r >= 1 && s >= 1 && t >= 1 && u >= 1);
    (r >= 2 && s == 2 && t == 2) || (s == 1 && u == 1 && t >= 2 && !(r == 1 && t == 2))
}

/// Non-positivity claim for the right5 shape.
pub fn right5_claim_nonpositive(r: usize, u: usize, v: usize) -> bool {
    debug_assert!(r >= 1 && u >= 1 && v >= 1);
    (r >= 2 && u >= 2) || (u == 2 && v >= 15) || (u == 1 && (r >= 2 || v >= 4))
}

/// Whether the family's own claim machinery says anything, and what the
/// solver should then find. `None` means the predicate is silent.
pub fn claim_prediction(f: &Family) -> Option<Verdict> {
    match *f {
        Family::TwoChain { r, s } => Some(if two_chain_positive(r, s) {
            Verdict::Positive
        } else {
            Verdict::NonPositive
        }),
        Family::ThreeChain { r, s, t } => Some(if three_chain_positive(r, s, t) {
            Verdict::Positive
        } else {
            Verdict::NonPositive
        }),
        Family::Left4 { s, u } => left4_claim_nonpositive(s, u).then_some(Verdict::NonPositive),
        Family::Mid4 { r, s, t, u } => {
            mid4_claim_nonpositive(r, s, t, u).then_some(Verdict::NonPositive)
        }
        Family::Right5 { r, u, v } => {
            right5_claim_nonpositive(r, u, v).then_some(Verdict::NonPositive)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    /// The closed form is only available on some parameter regimes; outside
    /// them the determinant was never written down in closed form.
    UnsupportedRegime { family: &'static str },
}

impl fmt::Display for ClosedFormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedFormError::UnsupportedRegime { family } => {
                write!(f, "no closed-form weights for this {family} regime")
            }
        }
    }
}

impl std::error::Error for ClosedFormError {}

/// Closed-form class weights at `nu = 1`, in the documented class order of
/// the realized graph (cross-pair classes lexicographically, then internal
/// classes). Supported regimes:
///
/// - two-chain with `s = 1`: single weight `1/(2+r)`;
/// - three-chain with `s = 1`, `t >= 2`:
///   `((1+t)t, 2t+r-rt, 2(r+t)) / (2t(2t+r+1))` for `(a, b, d)`;
/// - left4, any `s, u`:
///   `(2(1+s+u), 2+2s-u, 3(1+s)) / (6+8s+3u+2s^2+2su)`;
/// - mid4 with `s = t = 2`, `u = 1`:
///   `(48, -3(r-12), -6(r-4), 9(r+4), -6(3r-4)) / (264+18r)` for
///   `(a, b, d, c, e)` in class order.
pub fn closed_form_weights(f: &Family) -> Result<Vec<Rational>, ClosedFormError> {
    match *f {
        Family::TwoChain { r, s: 1 } => Ok(vec![ratio(1, r as i64 + 2)]),
        Family::TwoChain { .. } => Err(ClosedFormError::UnsupportedRegime { family: "two-chain" }),
        Family::ThreeChain { r, s: 1, t } if t >= 2 => {
            let (ri, ti) = (r as i64, t as i64);
            let den = int(2 * ti * (2 * ti + ri + 1));
            Ok(vec![
                int((1 + ti) * ti) / &den,
                int(2 * ti + ri - ri * ti) / &den,
                int(2 * (ri + ti)) / &den,
            ])
        }
        Family::ThreeChain { .. } => {
            Err(ClosedFormError::UnsupportedRegime { family: "three-chain" })
        }
        Family::Left4 { s, u } => {
            let (si, ui) = (s as i64, u as i64);
            let den = int(6 + 8 * si + 3 * ui + 2 * si * si + 2 * si * ui);
            Ok(vec![
                int(2 * (1 + si + ui)) / &den,
                int(2 + 2 * si - ui) / &den,
                int(3 * (1 + si)) / &den,
            ])
        }
        Family::Mid4 { r, s: 2, t: 2, u: 1 } => {
            let ri = r as i64;
            let den = int(264 + 18 * ri);
            Ok(vec![
                int(48) / &den,
                int(-3 * (ri - 12)) / &den,
                int(-6 * (ri - 4)) / &den,
                int(9 * (ri + 4)) / &den,
                int(-6 * (3 * ri - 4)) / &den,
            ])
        }
        Family::Mid4 { .. } => Err(ClosedFormError::UnsupportedRegime { family: "mid4" }),
        Family::Right5 { .. } => Err(ClosedFormError::UnsupportedRegime { family: "right5" }),
    }
}

/// Solver verdict on the realized family graph, via the reduced system.
pub fn solver_verdict(f: &Family) -> Verdict {
    coherence::check_positive_reduced(&f.realize()).verdict
}

/// Reduced class weights of the realized graph, for formula cross-checks.
pub fn solved_class_weights(f: &Family) -> Vec<Rational> {
    let g = f.realize();
    let d = coherent_decomposition(&g);
    let s = coherence::similar_edge_classes(&g, &d);
    let rs = coherence::reduced_system(&g, &s).expect("families always have edges");
    solve_reduced(&rs).expect("reduced system is nonsingular")
}

/// Checks that the realized graph's coherent decomposition reproduces the
/// spec; reports the computed shape when blocks merged into coarser
/// components (for example a three-chain with `t = 1` folding into a
/// two-chain).
pub fn realization_fidelity(f: &Family) -> Result<(), String> {
    let g = f.realize();
    let d = coherent_decomposition(&g);
    if f.spec().matches_decomposition(&d) {
        Ok(())
    } else {
        let shape: Vec<String> = (0..d.len())
            .map(|i| format!("{}{}", d.size(i), d.kind(i).letter()))
            .collect();
        Err(format!(
            "realized {} decomposes as [{}] with {} coherence edges",
            f.render(),
            shape.join(" "),
            d.coherence_edges().len()
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::check_positive_reduced;
    use crate::positivity::check_positive;

    #[test]
    fn realize_k2_from_two_singleton_blocks() {
        let spec = FamilySpec::new(
            vec![ComponentSpec::discrete(1), ComponentSpec::complete(1)],
            vec![(0, 1)],
        );
        let g = spec.realize();
        assert_eq!(g.q(), 2);
        assert_eq!(g.edges(), &[(1, 2)]);
    }

    #[test]
    fn realize_two_chain_1_2_is_triangle() {
        let g = Family::TwoChain { r: 1, s: 2 }.realize();
        assert_eq!(g.q(), 3);
        assert_eq!(g.edges(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn two_chain_classification_samples() {
        assert!(!two_chain_positive(3, 2));
        assert!(two_chain_positive(5, 1));
        assert!(two_chain_positive(2, 2));
    }

    #[test]
    fn three_chain_classification_samples() {
        // (2, 2, 17): (s+t)(s-r) = 0 <= (r-1)(t-1) = 16.
        assert!(!three_chain_positive(2, 2, 17));
        assert!(three_chain_positive(3, 1, 2));
        assert!(three_chain_positive(1, 1, 1));
        assert!(!three_chain_positive(4, 1, 2));
        assert!(three_chain_positive(2, 1, 9));
    }

    #[test]
    fn left4_claim_samples() {
        assert!(left4_claim_nonpositive(1, 6));
        assert!(!left4_claim_nonpositive(2, 5));
        assert!(left4_claim_nonpositive(2, 15));
        assert!(!left4_claim_nonpositive(3, 10));
    }

    #[test]
    fn mid4_claim_samples() {
        assert!(mid4_claim_nonpositive(2, 2, 2, 1));
        assert!(!mid4_claim_nonpositive(1, 2, 2, 3));
        assert!(mid4_claim_nonpositive(5, 1, 4, 1));
        // The excluded corner: positive graph, so no claim.
        assert!(!mid4_claim_nonpositive(1, 1, 2, 1));
        assert!(mid4_claim_nonpositive(2, 1, 2, 1));
        assert!(mid4_claim_nonpositive(1, 1, 3, 1));
    }

    #[test]
    fn mid4_1_1_2_1_is_positive_exactly() {
        // The corner excluded from the claim really is positive.
        let f = Family::Mid4 { r: 1, s: 1, t: 2, u: 1 };
        let weights = solved_class_weights(&f);
        let den = int(38);
        assert_eq!(
            weights,
            vec![int(9) / &den, int(5) / &den, int(1) / &den, int(8) / &den]
        );
        assert_eq!(solver_verdict(&f), Verdict::Positive);
    }

    #[test]
    fn right5_claim_samples() {
        assert!(right5_claim_nonpositive(1, 2, 15));
        assert!(right5_claim_nonpositive(1, 1, 16));
        assert!(!right5_claim_nonpositive(1, 2, 3));
    }

    #[test]
    fn closed_form_two_chain() {
        assert_eq!(
            closed_form_weights(&Family::TwoChain { r: 3, s: 1 }).unwrap(),
            vec![ratio(1, 5)]
        );
        assert!(closed_form_weights(&Family::TwoChain { r: 3, s: 2 }).is_err());
    }

    #[test]
    fn closed_form_left4_samples() {
        // s=1, u=6: determinant 46, weights (16, -2, 6)/46.
        assert_eq!(
            closed_form_weights(&Family::Left4 { s: 1, u: 6 }).unwrap(),
            vec![ratio(8, 23), ratio(-1, 23), ratio(3, 23)]
        );
        // s=2, u=7: determinant 79.
        assert_eq!(
            closed_form_weights(&Family::Left4 { s: 2, u: 7 }).unwrap(),
            vec![ratio(20, 79), ratio(-1, 79), ratio(9, 79)]
        );
    }

    #[test]
    fn closed_form_mid4_u1_sample() {
        let w = closed_form_weights(&Family::Mid4 { r: 3, s: 2, t: 2, u: 1 }).unwrap();
        let den = int(318);
        assert_eq!(
            w,
            vec![
                int(48) / &den,
                int(27) / &den,
                int(6) / &den,
                int(63) / &den,
                int(-30) / &den
            ]
        );
    }

    #[test]
    fn closed_forms_match_solver_on_samples() {
        let cases = [
            Family::TwoChain { r: 1, s: 1 },
            Family::TwoChain { r: 6, s: 1 },
            Family::ThreeChain { r: 1, s: 1, t: 2 },
            Family::ThreeChain { r: 3, s: 1, t: 2 },
            Family::ThreeChain { r: 5, s: 1, t: 4 },
            Family::Left4 { s: 1, u: 6 },
            Family::Left4 { s: 2, u: 2 },
            Family::Mid4 { r: 1, s: 2, t: 2, u: 1 },
            Family::Mid4 { r: 8, s: 2, t: 2, u: 1 },
        ];
        for f in &cases {
            assert_eq!(
                closed_form_weights(f).unwrap(),
                solved_class_weights(f),
                "closed form disagrees for {}",
                f.render()
            );
        }
    }

    #[test]
    fn left4_s1_u6_per_edge_weights() {
        let f = Family::Left4 { s: 1, u: 6 };
        let report = check_positive(&f.realize());
        assert_eq!(report.verdict, Verdict::NonPositive);
        assert_eq!(report.weights[0], ratio(8, 23));
        assert_eq!(report.weights[1], ratio(-1, 23));
        assert!(report.weights[2..].iter().all(|w| *w == ratio(3, 23)));
        assert_eq!(report.negative_or_zero, vec![2]);
    }

    #[test]
    fn fidelity_detects_three_chain_fold() {
        // t = 1 folds the trailing singleton into the discrete head block.
        let folded = Family::ThreeChain { r: 2, s: 2, t: 1 };
        assert!(realization_fidelity(&folded).is_err());
        let d = coherent_decomposition(&folded.realize());
        assert!(Family::TwoChain { r: 3, s: 2 }.spec().matches_decomposition(&d));

        let honest = Family::ThreeChain { r: 2, s: 2, t: 3 };
        assert!(realization_fidelity(&honest).is_ok());
    }

    #[test]
    fn fidelity_of_the_ladder_start() {
        let f = Family::Right5 { r: 1, u: 2, v: 15 };
        assert!(realization_fidelity(&f).is_ok());
        let d = coherent_decomposition(&f.realize());
        let sizes: Vec<usize> = (0..d.len()).map(|i| d.size(i)).collect();
        assert_eq!(sizes, vec![1, 2, 1, 2, 15]);
        assert_eq!(d.coherence_edges().len(), 6);
    }

    #[test]
    fn classification_agrees_with_solver_on_small_grid() {
        for r in 1..=4 {
            for s in 1..=4 {
                let f = Family::TwoChain { r, s };
                let expected = if two_chain_positive(r, s) {
                    Verdict::Positive
                } else {
                    Verdict::NonPositive
                };
                assert_eq!(solver_verdict(&f), expected, "two-chain r={r} s={s}");
            }
        }
    }

    #[test]
    fn reduced_equals_full_on_a_family_instance() {
        let g = Family::Mid4 { r: 2, s: 2, t: 2, u: 3 }.realize();
        assert_eq!(check_positive(&g), check_positive_reduced(&g));
    }
}
