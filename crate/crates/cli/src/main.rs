//! Command-line surface tying the decision tools together.
//!
//! Exit codes are stable: 0 for success (and positive/vacuous verdicts),
//! 1 for a non-positive verdict, a failed certificate run, or a search that
//! found nothing, 2 for input or usage errors.

mod input;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num::Signed;

use nilgraph::coherence::{
    coherent_decomposition, reduced_system, similar_edge_classes,
};
use nilgraph::families::{claim_prediction, closed_form_weights, realization_fidelity};
use nilgraph::graph::Graph;
use nilgraph::positivity::{check_positive_with_nu, Verdict};
use nilgraph::soliton::{build_algebra, search_soliton_from, DiagonalMetric, SearchOutcome};
use nilgraph::theorem::{run_theorem_with, TheoremError};
use nilgraph::Rational;

use input::{build_family, load_graph, FamilyName, FamilyParams, InputFormat};

#[derive(Parser)]
#[command(
    name = "nilgraph",
    version,
    about = "Exact nilsoliton-existence decisions for 2-step nilpotent Lie algebras attached to graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecomposeFormat {
    Text,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremFormat {
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide positivity of a graph; exit 0 if positive or vacuous, 1 if not
    Check {
        path: PathBuf,
        /// Right-hand-side scale; weights scale with it, the verdict never does
        #[arg(long, default_value = "1")]
        nu: String,
        /// Append decimal approximations for human reading
        #[arg(long)]
        float: bool,
        /// Force the input format instead of detecting by extension
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
    },
    /// Print the coherent decomposition, similarity classes, and reduced size
    Decompose {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = DecomposeFormat::Text)]
        format: DecomposeFormat,
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
    },
    /// Realize a parametric family instance (edge list to stdout)
    Family {
        name: FamilyName,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        v: Option<usize>,
        /// Print the analysis report instead of the edge list
        #[arg(long)]
        report: bool,
    },
    /// Certify the whole deletion ladder at q; CSV to stdout, summary to stderr
    Theorem {
        #[arg(long)]
        q: usize,
        /// Worker threads (default: NILGRAPH_JOBS or 1); output is identical
        #[arg(long)]
        jobs: Option<usize>,
        /// Allow q outside the certified range, for exploration
        #[arg(long)]
        override_q_min: bool,
        #[arg(long, value_enum, default_value_t = TheoremFormat::Csv)]
        format: TheoremFormat,
    },
    /// Search numerically for a diagonal nilsoliton metric
    Soliton {
        path: PathBuf,
        /// Acceptance tolerance on the derivation residual
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Seed edge scales from the solved weights when they are positive
        #[arg(long)]
        seed_weights: bool,
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
    },
    /// Grid-check a family: prediction vs exact verdict, one CSV row per tuple
    Sweep {
        name: FamilyName,
        /// Inclusive range, e.g. 3 or 1..8 (default grid per family)
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn resolve_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("NILGRAPH_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Check {
            path,
            nu,
            float,
            input_format,
        } => {
            let nu = Rational::from_str(&nu).map_err(|e| format!("bad --nu: {e}"))?;
            if !nu.is_positive() {
                return Err("--nu must be positive".to_string());
            }
            let graph = load_graph(&path, input_format)?;
            let report = check_positive_with_nu(&graph, nu);
            print!("{}", report.render_text(graph.q(), float));
            Ok(match report.verdict {
                Verdict::Positive | Verdict::VacuouslyPositive => ExitCode::SUCCESS,
                Verdict::NonPositive => ExitCode::from(1),
            })
        }

        Command::Decompose {
            path,
            format,
            input_format,
        } => {
            let graph = load_graph(&path, input_format)?;
            let d = coherent_decomposition(&graph);
            match format {
                DecomposeFormat::Dot => print!("{}", d.to_dot()),
                DecomposeFormat::Text => {
                    let s = similar_edge_classes(&graph, &d);
                    print!("{}", render_decomposition(&graph, &d, &s));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Family {
            name,
            r,
            s,
            t,
            u,
            v,
            report,
        } => {
            let params = FamilyParams { r, s, t, u, v };
            let family = build_family(name, &params)?;
            let graph = family.realize();
            if report {
                print!("{}", render_family_report(&family, &graph));
            } else {
                print!("{}", graph.to_edge_list());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Theorem {
            q,
            jobs,
            override_q_min,
            format,
        } => {
            let jobs = resolve_jobs(jobs);
            let (report, failed) = match run_theorem_with(q, jobs, override_q_min) {
                Ok(report) => {
                    let ok = report.all_certified();
                    (report, !ok)
                }
                Err(TheoremError::Violation { l, reason, report }) => {
                    eprintln!("certificate failed at l={l}: {reason}");
                    (*report, true)
                }
                Err(other) => return Err(other.to_string()),
            };
            match format {
                TheoremFormat::Csv => {
                    print!("{}", report.to_csv());
                    eprint!("{}", report.summary());
                }
                TheoremFormat::Text => print!("{}", report.summary()),
            }
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }

        Command::Soliton {
            path,
            tol,
            max_iter,
            seed_weights,
            input_format,
        } => {
            if tol <= 0.0 {
                return Err("--tol must be positive".to_string());
            }
            if max_iter == 0 {
                return Err("--max-iter must be at least 1".to_string());
            }
            let graph = load_graph(&path, input_format)?;
            let algebra = build_algebra(&graph);
            let (seed, seed_name) = if seed_weights {
                match positivity_seed(&graph, &algebra) {
                    Some(metric) => (metric, "positivity-weights"),
                    None => (DiagonalMetric::identity(algebra.dim()), "identity (weights not positive)"),
                }
            } else {
                (DiagonalMetric::identity(algebra.dim()), "identity")
            };
            let outcome = search_soliton_from(&algebra, seed, max_iter, tol);
            println!("nilgraph soliton v1");
            println!("seed: {seed_name}");
            match outcome {
                SearchOutcome::Found {
                    certificate,
                    iterations,
                    metric,
                } => {
                    print!("{}", certificate.render_body(Some(iterations)));
                    let scales: Vec<String> =
                        metric.scales().iter().map(|x| format!("{x:.9}")).collect();
                    println!("metric-diagonal: {}", scales.join(" "));
                    Ok(ExitCode::SUCCESS)
                }
                SearchOutcome::NotFound {
                    iterations,
                    best_residual,
                } => {
                    println!("not-found: iterations={iterations} best-residual={best_residual:.3e}");
                    println!("note: absence of convergence is not a proof of non-existence");
                    Ok(ExitCode::from(1))
                }
            }
        }

        Command::Sweep {
            name,
            r,
            s,
            t,
            u,
            v,
            jobs,
        } => {
            let overrides = [
                ('r', r.as_deref()),
                ('s', s.as_deref()),
                ('t', t.as_deref()),
                ('u', u.as_deref()),
                ('v', v.as_deref()),
            ];
            let ranges = sweep::resolve_ranges(name, &overrides)?;
            let rows = sweep::run_sweep(name, &ranges, resolve_jobs(jobs))?;
            print!("{}", sweep::to_csv(&rows));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render_decomposition(
    graph: &Graph,
    d: &nilgraph::coherence::CoherentDecomposition,
    s: &nilgraph::coherence::SimilarityClasses,
) -> String {
    let mut out = String::from("nilgraph decompose v1\n");
    out.push_str(&format!("graph: q={} p={}\n", graph.q(), graph.p()));
    out.push_str(&format!("components: {}\n", d.len()));
    for idx in 0..d.len() {
        let members: Vec<String> = d.component(idx).iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "  {idx}: {{{}}} kind={} size={}\n",
            members.join(","),
            d.kind(idx).letter(),
            d.size(idx)
        ));
    }
    let edges: Vec<String> = d
        .coherence_edges()
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    out.push_str(&format!("coherence-edges: {}\n", edges.join(" ")));
    out.push_str(&format!("similar-classes: {}\n", s.len()));
    for class in 0..s.len() {
        let members: Vec<String> = s.edges(class).iter().map(|k| k.to_string()).collect();
        out.push_str(&format!(
            "  {class}: {} edges=[{}]\n",
            s.descriptor(class),
            members.join(",")
        ));
    }
    match reduced_system(graph, s) {
        Ok(rs) => out.push_str(&format!("reduced-dimension: {}\n", rs.matrix.rows())),
        Err(_) => out.push_str("reduced-dimension: 0\n"),
    }
    out
}

fn render_family_report(family: &nilgraph::families::Family, graph: &Graph) -> String {
    let mut out = String::from("nilgraph family v1\n");
    out.push_str(&format!("family: {}\n", family.render()));
    out.push_str(&format!("graph: q={} p={}\n", graph.q(), graph.p()));
    match realization_fidelity(family) {
        Ok(()) => out.push_str("fidelity: ok\n"),
        Err(msg) => out.push_str(&format!("fidelity: merged ({msg})\n")),
    }
    let prediction = match claim_prediction(family) {
        Some(Verdict::Positive) => "positive".to_string(),
        Some(_) => "non-positive".to_string(),
        None => "none".to_string(),
    };
    out.push_str(&format!("prediction: {prediction}\n"));
    match closed_form_weights(family) {
        Ok(weights) => {
            let cells: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!("closed-form: {}\n", cells.join(" ")));
        }
        Err(_) => out.push_str("closed-form: unsupported\n"),
    }
    let verdict = nilgraph::coherence::check_positive_reduced(graph).verdict;
    out.push_str(&format!("verdict: {verdict}\n"));
    out
}

/// Metric seeded from the solved weights: vertex scales 1, edge scale `c_k`.
/// Only meaningful when every weight is positive.
fn positivity_seed(
    graph: &Graph,
    algebra: &nilgraph::soliton::LieAlgebra2Step,
) -> Option<DiagonalMetric> {
    let report = nilgraph::coherence::check_positive_reduced(graph);
    if report.verdict != Verdict::Positive {
        return None;
    }
    let mut scales = vec![1.0; algebra.dim()];
    for (k, w) in report.weights.iter().enumerate() {
        let numer = w.numer().to_string().parse::<f64>().ok()?;
        let denom = w.denom().to_string().parse::<f64>().ok()?;
        scales[algebra.q() + k] = numer / denom;
    }
    Some(DiagonalMetric::new(scales))
}
