//! Coherent (twin-vertex) decomposition, similar-edge classes, and the
//! reduced weight system.
//!
//! Two vertices are coherent when they have the same neighbors, up to
//! including each other: for non-adjacent vertices the open neighborhoods
//! must agree, for adjacent ones the closed neighborhoods must. Each class
//! induces either a complete subgraph or a discrete one, and between two
//! classes either every cross edge is present or none is. Edges joining the
//! same pair of classes, or lying inside the same class, are "similar" and
//! carry equal weights, which collapses the `p x p` weight system to one row
//! per similarity class.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Zero};

use crate::graph::Graph;
use crate::linalg::{self, LinalgError, Matrix};
use crate::positivity::{self, PositivityReport};
use crate::{Rational, RationalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentKind {
    Complete,
    Discrete,
    /// One vertex: degenerate case of both kinds, tracked separately because
    /// it never contributes an internal-edge class.
    Singleton,
}

impl ComponentKind {
    pub fn letter(self) -> char {
        match self {
            ComponentKind::Complete => 'C',
            ComponentKind::Discrete => 'D',
            ComponentKind::Singleton => 'S',
        }
    }
}

/// Partition of the vertices into coherent components plus the coherence
/// graph on the components.
///
/// Components are indexed `0..len()` in order of their smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentDecomposition {
    components: Vec<Vec<usize>>,
    kinds: Vec<ComponentKind>,
    coherence_edges: Vec<(usize, usize)>,
    component_of: Vec<usize>,
}

impl CoherentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, idx: usize) -> &[usize] {
        &self.components[idx]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn kind(&self, idx: usize) -> ComponentKind {
        self.kinds[idx]
    }

    pub fn size(&self, idx: usize) -> usize {
        self.components[idx].len()
    }

    /// Component index of a vertex (1-based).
    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    /// Adjacent component pairs, sorted.
    pub fn coherence_edges(&self) -> &[(usize, usize)] {
        &self.coherence_edges
    }

    /// Re-checks the structural laws the decomposition relies on: every
    /// component fully complete or fully discrete, and cross edges between two
    /// components all-or-nothing. Returns a description of the first failure.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        for (idx, comp) in self.components.iter().enumerate() {
            let mut present = 0usize;
            let mut total = 0usize;
            for (a_pos, &a) in comp.iter().enumerate() {
                for &b in &comp[a_pos + 1..] {
                    total += 1;
                    if g.has_edge(a, b) {
                        present += 1;
                    }
                }
            }
            let ok = match self.kinds[idx] {
                ComponentKind::Singleton => comp.len() == 1,
                ComponentKind::Complete => comp.len() > 1 && present == total,
                ComponentKind::Discrete => comp.len() > 1 && present == 0,
            };
            if !ok {
                return Err(format!(
                    "component {idx} ({present}/{total} internal edges) is not {:?}",
                    self.kinds[idx]
                ));
            }
        }
        let edge_set: BTreeSet<(usize, usize)> = self.coherence_edges.iter().copied().collect();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let mut present = 0usize;
                let total = self.size(i) * self.size(j);
                for &a in &self.components[i] {
                    for &b in &self.components[j] {
                        if g.has_edge(a, b) {
                            present += 1;
                        }
                    }
                }
                let adjacent = edge_set.contains(&(i, j));
                if adjacent && present != total {
                    return Err(format!("components {i},{j}: only {present}/{total} cross edges"));
                }
                if !adjacent && present != 0 {
                    return Err(format!("components {i},{j}: {present} stray cross edges"));
                }
            }
        }
        Ok(())
    }

    /// DOT rendering of the coherence graph: one node per component labelled
    /// `size:kind`, filled for complete components, hollow for discrete ones.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph coherence {\n  node [shape=circle];\n");
        for idx in 0..self.len() {
            let kind = self.kinds[idx];
            let style = match kind {
                ComponentKind::Complete => " style=filled fillcolor=black fontcolor=white",
                ComponentKind::Discrete => "",
                ComponentKind::Singleton => " style=filled fillcolor=lightgray",
            };
            out.push_str(&format!(
                "  c{idx} [label=\"{}:{}\"{}];\n",
                self.size(idx),
                kind.letter(),
                style
            ));
        }
        for &(i, j) in &self.coherence_edges {
            out.push_str(&format!("  c{i} -- c{j};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// True when `a` and `b` have the same neighbors up to including each other.
pub fn coherent(g: &Graph, a: usize, b: usize) -> bool {
    debug_assert_ne!(a, b);
    let na = g.neighbors(a);
    let nb = g.neighbors(b);
    if na.len() != nb.len() {
        return false;
    }
    if g.has_edge(a, b) {
        na.iter().all(|&x| x == b || nb.contains(&x))
    } else {
        na == nb
    }
}

/// Computes the coherent decomposition of `g`.
#[allow(clippy::needless_range_loop)]
pub fn coherent_decomposition(g: &Graph) -> CoherentDecomposition {
    let q = g.q();
    let mut component_of = vec![usize::MAX; q + 1];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 1..=q {
        if component_of[v] != usize::MAX {
            continue;
        }
        let idx = components.len();
        component_of[v] = idx;
        let mut members = vec![v];
        for w in v + 1..=q {
            if component_of[w] == usize::MAX && coherent(g, v, w) {
                component_of[w] = idx;
                members.push(w);
            }
        }
        components.push(members);
    }

    let kinds: Vec<ComponentKind> = components
        .iter()
        .map(|comp| {
            if comp.len() == 1 {
                return ComponentKind::Singleton;
            }
            let present = g.has_edge(comp[0], comp[1]);
            // Complete or discrete is forced once the partition is right;
            // anything mixed is a decomposition bug.
            for (a_pos, &a) in comp.iter().enumerate() {
                for &b in &comp[a_pos + 1..] {
                    assert_eq!(
                        g.has_edge(a, b),
                        present,
                        "coherent component is neither complete nor discrete"
                    );
                }
            }
            if present {
                ComponentKind::Complete
            } else {
                ComponentKind::Discrete
            }
        })
        .collect();

    let mut coherence_edges = Vec::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let a = components[i][0];
            let present = components[j].iter().any(|&b| g.has_edge(a, b));
            if present {
                // All-or-nothing between components; spot-check the rest.
                debug_assert!(components[i]
                    .iter()
                    .all(|&x| components[j].iter().all(|&y| g.has_edge(x, y))));
                coherence_edges.push((i, j));
            }
        }
    }

    CoherentDecomposition {
        components,
        kinds,
        coherence_edges,
        component_of,
    }
}

/// Which similarity class an edge belongs to: joining a pair of components,
/// or internal to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassDescriptor {
    CrossPair(usize, usize),
    Internal(usize),
}

impl fmt::Display for ClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassDescriptor::CrossPair(a, b) => write!(f, "cross({a},{b})"),
            ClassDescriptor::Internal(a) => write!(f, "internal({a})"),
        }
    }
}

/// Partition of the edge indices into similarity classes.
///
/// Class order is the documented convention: cross-pair classes in
/// lexicographic component-pair order first, then internal classes in
/// component order. Golden tests rely on this being deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityClasses {
    classes: Vec<(ClassDescriptor, Vec<usize>)>,
    class_of_edge: Vec<usize>,
}

impl SimilarityClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn descriptor(&self, class: usize) -> ClassDescriptor {
        self.classes[class].0
    }

    pub fn descriptors(&self) -> Vec<ClassDescriptor> {
        self.classes.iter().map(|(d, _)| *d).collect()
    }

    /// 1-based edge indices of one class.
    pub fn edges(&self, class: usize) -> &[usize] {
        &self.classes[class].1
    }

    /// Class index of a 1-based edge index.
    pub fn class_of_edge(&self, k: usize) -> usize {
        self.class_of_edge[k - 1]
    }

    pub fn class_index(&self, d: ClassDescriptor) -> Option<usize> {
        self.classes.iter().position(|(desc, _)| *desc == d)
    }
}

/// Groups the edges of `g` by similarity under `d`.
pub fn similar_edge_classes(g: &Graph, d: &CoherentDecomposition) -> SimilarityClasses {
    let mut descriptors: Vec<ClassDescriptor> = Vec::new();
    let mut edge_descriptor = Vec::with_capacity(g.p());
    for &(a, b) in g.edges() {
        let (ca, cb) = (d.component_of(a), d.component_of(b));
        let desc = if ca == cb {
            ClassDescriptor::Internal(ca)
        } else {
            ClassDescriptor::CrossPair(ca.min(cb), ca.max(cb))
        };
        edge_descriptor.push(desc);
        if !descriptors.contains(&desc) {
            descriptors.push(desc);
        }
    }
    descriptors.sort_by_key(|desc| match *desc {
        ClassDescriptor::CrossPair(a, b) => (0, a, b),
        ClassDescriptor::Internal(a) => (1, a, 0),
    });
    let classes: Vec<(ClassDescriptor, Vec<usize>)> = descriptors
        .iter()
        .map(|&desc| {
            let members = edge_descriptor
                .iter()
                .enumerate()
                .filter(|(_, &d2)| d2 == desc)
                .map(|(k, _)| k + 1)
                .collect();
            (desc, members)
        })
        .collect();
    let class_of_edge = edge_descriptor
        .iter()
        .map(|desc| descriptors.iter().position(|d2| d2 == desc).unwrap())
        .collect();
    SimilarityClasses {
        classes,
        class_of_edge,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherenceError {
    EmptySystem,
}

impl fmt::Display for CoherenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoherenceError::EmptySystem => write!(f, "graph has no edges, nothing to reduce"),
        }
    }
}

impl std::error::Error for CoherenceError {}

/// The weight system rewritten over similarity classes: one row per class,
/// right-hand side all ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSystem {
    pub variable_order: Vec<ClassDescriptor>,
    pub matrix: RationalMatrix,
    pub rhs: Vec<Rational>,
}

/// Builds the row of the reduced system for a given representative edge:
/// coefficient per class counts the representative's adjacent edges in that
/// class, plus 3 on the representative's own class.
pub fn reduced_row(g: &Graph, s: &SimilarityClasses, rep_edge: usize) -> Vec<Rational> {
    let (a, b) = g.edges()[rep_edge - 1];
    let mut row = vec![Rational::zero(); s.len()];
    for (m, &(c, d)) in g.edges().iter().enumerate() {
        let m1 = m + 1;
        if m1 == rep_edge {
            continue;
        }
        if a == c || a == d || b == c || b == d {
            row[s.class_of_edge(m1)] += Rational::one();
        }
    }
    row[s.class_of_edge(rep_edge)] += Rational::from_integer(3.into());
    row
}

/// Rewrites the weight system over the similarity classes of `s`.
///
/// The row is independent of which representative edge is used; that is a
/// consequence of similarity and is exercised by the property tests.
pub fn reduced_system(g: &Graph, s: &SimilarityClasses) -> Result<ReducedSystem, CoherenceError> {
    if g.p() == 0 {
        return Err(CoherenceError::EmptySystem);
    }
    let rows: Vec<Vec<Rational>> = (0..s.len())
        .map(|class| reduced_row(g, s, s.edges(class)[0]))
        .collect();
    Ok(ReducedSystem {
        variable_order: s.descriptors(),
        matrix: Matrix::from_rows(rows),
        rhs: vec![Rational::one(); s.len()],
    })
}

/// Exact class weights of the reduced system.
pub fn solve_reduced(rs: &ReducedSystem) -> Result<Vec<Rational>, LinalgError> {
    linalg::solve(&rs.matrix, &rs.rhs)
}

/// Expands class weights back to one weight per edge.
pub fn expand_to_edges(s: &SimilarityClasses, class_weights: &[Rational], p: usize) -> Vec<Rational> {
    assert_eq!(class_weights.len(), s.len());
    (1..=p)
        .map(|k| class_weights[s.class_of_edge(k)].clone())
        .collect()
}

/// Positivity decision through the reduced system. Exactly equal to the full
/// per-edge solve, at a fraction of the cost for structured graphs.
pub fn check_positive_reduced(g: &Graph) -> PositivityReport {
    if g.p() == 0 {
        return positivity::report_from_weights(Vec::new());
    }
    let d = coherent_decomposition(g);
    let s = similar_edge_classes(g, &d);
    let rs = reduced_system(g, &s).expect("p > 0");
    let class_weights = solve_reduced(&rs).expect("reduced system inherits nonsingularity");
    positivity::report_from_weights(expand_to_edges(&s, &class_weights, g.p()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::check_positive;
    use crate::{int, ratio};

    #[test]
    fn complete_graph_is_one_component() {
        let d = coherent_decomposition(&Graph::complete(4));
        assert_eq!(d.len(), 1);
        assert_eq!(d.kind(0), ComponentKind::Complete);
        assert!(d.coherence_edges().is_empty());
        assert!(d.validate(&Graph::complete(4)).is_ok());
    }

    #[test]
    fn path3_decomposition() {
        let g = Graph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let d = coherent_decomposition(&g);
        assert_eq!(d.components(), &[vec![1, 3], vec![2]]);
        assert_eq!(d.kind(0), ComponentKind::Discrete);
        assert_eq!(d.kind(1), ComponentKind::Singleton);
        assert_eq!(d.coherence_edges(), &[(0, 1)]);
        assert!(d.validate(&g).is_ok());
    }

    #[test]
    fn k3_similarity_is_one_internal_class() {
        let g = Graph::complete(3);
        let d = coherent_decomposition(&g);
        let s = similar_edge_classes(&g, &d);
        assert_eq!(s.len(), 1);
        assert_eq!(s.descriptor(0), ClassDescriptor::Internal(0));
        assert_eq!(s.edges(0), &[1, 2, 3]);
    }

    #[test]
    fn two_chain_has_cross_and_internal_classes() {
        // Two twins {1,2} joined to a triangle on {3,4,5}.
        let g = Graph::new(
            5,
            vec![
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
                (3, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        let d = coherent_decomposition(&g);
        assert_eq!(d.components(), &[vec![1, 2], vec![3, 4, 5]]);
        let s = similar_edge_classes(&g, &d);
        assert_eq!(
            s.descriptors(),
            vec![ClassDescriptor::CrossPair(0, 1), ClassDescriptor::Internal(1)]
        );
        assert_eq!(s.edges(0).len(), 6);
        assert_eq!(s.edges(1).len(), 3);
    }

    #[test]
    fn reduced_system_of_k3_solves_to_one_fifth() {
        let g = Graph::complete(3);
        let d = coherent_decomposition(&g);
        let s = similar_edge_classes(&g, &d);
        let rs = reduced_system(&g, &s).unwrap();
        assert_eq!(rs.matrix.row_vecs(), vec![vec![int(5)]]);
        assert_eq!(solve_reduced(&rs).unwrap(), vec![ratio(1, 5)]);
    }

    #[test]
    fn reduced_three_chain_golden_rows() {
        // Blocks {1} discrete-like singleton carrier, {2} singleton, {3,4,5} complete,
        // realized as o(1) - *(1) - *(3): r=1, t=3.
        let g = Graph::new(
            5,
            vec![(1, 2), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        let d = coherent_decomposition(&g);
        let s = similar_edge_classes(&g, &d);
        let rs = reduced_system(&g, &s).unwrap();
        let (r, t) = (int(1), int(3));
        let expected = vec![
            vec![r.clone() + int(2), t.clone(), int(0)],
            vec![r, t.clone() + int(2), t.clone() - int(1)],
            vec![int(0), int(2), int(2) * t - int(1)],
        ];
        assert_eq!(rs.matrix.row_vecs(), expected);
    }

    #[test]
    fn reduced_two_chain_matches_direct_equations() {
        // Twins {1,2} joined to a triangle {3,4,5}: classes (a, b), rows
        // matching the per-edge equations written out by hand:
        // a-edge: (r+s+1) a + (s-1) b = 1; internal edge: 2r a + (2s-1) b = 1.
        let g = Graph::new(
            5,
            vec![(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        let d = coherent_decomposition(&g);
        assert_eq!(d.components(), &[vec![1, 2], vec![3, 4, 5]]);
        let s = similar_edge_classes(&g, &d);
        let rs = reduced_system(&g, &s).unwrap();
        assert_eq!(
            rs.matrix.row_vecs(),
            vec![vec![int(6), int(2)], vec![int(4), int(5)]]
        );
        let class_weights = solve_reduced(&rs).unwrap();
        let expanded = expand_to_edges(&s, &class_weights, g.p());
        assert_eq!(expanded, check_positive(&g).weights);
    }

    #[test]
    fn two_chain_with_singleton_head_folds_to_complete() {
        // A single vertex joined to a complete block is just a larger
        // complete graph: one component, one class, a 1x1 system.
        let g = Graph::complete(4);
        let d = coherent_decomposition(&g);
        assert_eq!(d.len(), 1);
        let s = similar_edge_classes(&g, &d);
        assert_eq!(s.len(), 1);
        let rs = reduced_system(&g, &s).unwrap();
        assert_eq!(rs.matrix.row_vecs(), vec![vec![int(7)]]);
        assert_eq!(solve_reduced(&rs).unwrap(), vec![ratio(1, 7)]);
    }

    #[test]
    fn empty_system_is_an_error() {
        let g = Graph::empty(3);
        let d = coherent_decomposition(&g);
        let s = similar_edge_classes(&g, &d);
        assert_eq!(reduced_system(&g, &s), Err(CoherenceError::EmptySystem));
    }

    #[test]
    fn reduced_matches_full_on_samples() {
        let samples = [
            Graph::new(3, vec![(1, 2), (2, 3)]).unwrap(),
            Graph::complete(4),
            Graph::new(5, vec![(1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]).unwrap(),
            Graph::new(6, vec![(1, 2), (3, 4), (5, 6)]).unwrap(),
        ];
        for g in &samples {
            let full = check_positive(g);
            let reduced = check_positive_reduced(g);
            assert_eq!(full, reduced);
        }
    }

    #[test]
    fn representative_choice_does_not_matter() {
        let g = Graph::new(5, vec![(1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]).unwrap();
        let d = coherent_decomposition(&g);
        let s = similar_edge_classes(&g, &d);
        for class in 0..s.len() {
            let rows: BTreeSet<Vec<Rational>> = s
                .edges(class)
                .iter()
                .map(|&rep| reduced_row(&g, &s, rep))
                .collect();
            assert_eq!(rows.len(), 1);
        }
    }

    #[test]
    fn dot_export_shape() {
        let g = Graph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let dot = coherent_decomposition(&g).to_dot();
        assert!(dot.starts_with("graph coherence {"));
        assert!(dot.contains("c0 [label=\"2:D\"]"));
        assert!(dot.contains("c1 [label=\"1:S\""));
        assert!(dot.contains("c0 -- c1;"));
    }
}
