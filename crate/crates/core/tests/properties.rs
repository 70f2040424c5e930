//! Property suites over random graphs and random rational systems.

use num::{One, Signed, Zero};
use proptest::prelude::*;

use nilgraph::coherence::{
    check_positive_reduced, coherent, coherent_decomposition, expand_to_edges, reduced_row,
    reduced_system, similar_edge_classes, solve_reduced,
};
use nilgraph::graph::Graph;
use nilgraph::linalg::{self, Matrix};
use nilgraph::positivity::{check_positive, positivity_matrix};
use nilgraph::{ratio, Rational, RationalMatrix};

/// Graph on `q` vertices from an edge-presence mask over all pairs.
fn graph_from_mask(q: usize, mask: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut idx = 0;
    for i in 1..=q {
        for j in i + 1..=q {
            if mask[idx] {
                edges.push((i, j));
            }
            idx += 1;
        }
    }
    Graph::new(q, edges).expect("mask graphs are simple by construction")
}

fn arb_graph(max_q: usize) -> impl Strategy<Value = Graph> {
    (1..=max_q).prop_flat_map(|q| {
        prop::collection::vec(any::<bool>(), q * (q - 1) / 2)
            .prop_map(move |mask| graph_from_mask(q, &mask))
    })
}

/// Nonsingular rational matrix built as L * U with unit diagonals times a
/// permutation, so singularity never has to be filtered out.
fn arb_nonsingular(max_n: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let entries = prop::collection::vec((-6i64..=6, 1i64..=4), n * n);
            let perm = Just(()).prop_perturb(move |_, mut rng| {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    let j = rng.random_range(0..=i);
                    p.swap(i, j);
                }
                p
            });
            (Just(n), entries, perm)
        })
        .prop_map(|(n, entries, perm)| {
            let at = |i: usize, j: usize| {
                let (num, den) = entries[i * n + j];
                ratio(num, den)
            };
            let l = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    Rational::one()
                } else if i > j {
                    at(i, j)
                } else {
                    Rational::zero()
                }
            });
            let u = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    Rational::one()
                } else if i < j {
                    at(i, j)
                } else {
                    Rational::zero()
                }
            });
            Matrix::from_fn(n, n, |i, j| {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += l[(perm[i], k)].clone() * u[(k, j)].clone();
                }
                acc
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn line_graph_degree_identity(g in arb_graph(9)) {
        // Degree of edge {i, j} in the line graph is deg(i) + deg(j) - 2.
        let l = g.line_graph();
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            prop_assert_eq!(l.degree(k + 1), g.degree(i) + g.degree(j) - 2);
        }
    }

    #[test]
    fn line_graph_adjacency_is_symmetric_zero_diagonal(g in arb_graph(8)) {
        let a = g.line_graph().adjacency();
        prop_assert!(a.is_valid());
        prop_assert!(g.lie_type().p <= g.lie_type().d_q());
    }

    #[test]
    fn solve_round_trips(a in arb_nonsingular(12)) {
        let n = a.rows();
        let b: Vec<Rational> = (0..n).map(|i| ratio(i as i64 % 5 - 2, 1 + i as i64 % 3)).collect();
        let x = linalg::solve(&a, &b).unwrap();
        prop_assert_eq!(a.mul_vec(&x), b.clone());
        // The generic field elimination is a second exact route.
        let y = linalg::solve_field(&a, &b).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn coherence_is_an_equivalence(g in arb_graph(8)) {
        let q = g.q();
        // Symmetry of the defining relation.
        for a in 1..=q {
            for b in a + 1..=q {
                prop_assert_eq!(coherent(&g, a, b), coherent(&g, b, a));
            }
        }
        // Transitivity plus consistency with the computed partition.
        let d = coherent_decomposition(&g);
        for a in 1..=q {
            for b in a + 1..=q {
                prop_assert_eq!(
                    d.component_of(a) == d.component_of(b),
                    coherent(&g, a, b),
                    "vertices {} and {}", a, b
                );
            }
        }
        prop_assert!(d.validate(&g).is_ok());
    }

    #[test]
    fn reduced_rows_do_not_depend_on_representative(g in arb_graph(8)) {
        prop_assume!(g.p() > 0);
        let d = coherent_decomposition(&g);
        let s = similar_edge_classes(&g, &d);
        for class in 0..s.len() {
            let rows: Vec<Vec<Rational>> = s.edges(class)
                .iter()
                .map(|&rep| reduced_row(&g, &s, rep))
                .collect();
            for row in &rows[1..] {
                prop_assert_eq!(row, &rows[0]);
            }
        }
    }

    #[test]
    fn reduction_is_sound(g in arb_graph(8)) {
        prop_assume!(g.p() > 0);
        let full = check_positive(&g);
        let d = coherent_decomposition(&g);
        let s = similar_edge_classes(&g, &d);
        let rs = reduced_system(&g, &s).unwrap();
        let class_weights = solve_reduced(&rs).unwrap();
        let expanded = expand_to_edges(&s, &class_weights, g.p());
        prop_assert_eq!(&expanded, &full.weights);
        prop_assert_eq!(check_positive_reduced(&g), full.clone());
        // Similar edges carry exactly equal weights.
        for class in 0..s.len() {
            let w0 = &full.weights[s.edges(class)[0] - 1];
            for &k in s.edges(class) {
                prop_assert_eq!(&full.weights[k - 1], w0);
            }
        }
    }

    #[test]
    fn positivity_matrix_is_positive_definite(g in arb_graph(7)) {
        prop_assume!(g.p() > 0);
        let m = positivity_matrix(&g);
        prop_assert!(m.is_symmetric());
        for minor in linalg::leading_principal_minors(&m) {
            prop_assert!(minor.is_positive());
        }
    }

    #[test]
    fn scaling_covariance(g in arb_graph(7)) {
        prop_assume!(g.p() > 0);
        let base = nilgraph::positivity::solve_weights(&g, &Rational::one());
        let nu = ratio(7, 2);
        let scaled = nilgraph::positivity::solve_weights(&g, &nu);
        for (b, s) in base.iter().zip(&scaled) {
            prop_assert_eq!(&(b * &nu), s);
        }
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(9)) {
        let text = g.to_edge_list();
        let parsed = Graph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(parsed.to_edge_list(), text);
        prop_assert_eq!(parsed, g);
    }
}
