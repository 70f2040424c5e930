//! Grid sweeps: one CSV row per parameter tuple, comparing the family's own
//! prediction (classification or one-sided claim) against the exact solver.

use nilgraph::families::{claim_prediction, solver_verdict, Family};
use nilgraph::positivity::Verdict;
use rayon::prelude::*;

use crate::input::{family_keys, parse_range, FamilyName, FamilyParams};

/// Per-parameter inclusive bounds, keyed by the parameter letter.
pub type Ranges = Vec<(char, (usize, usize))>;

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub family: Family,
    pub prediction: Option<Verdict>,
    pub verdict: Verdict,
}

impl SweepRow {
    pub fn agrees(&self) -> bool {
        match self.prediction {
            // Classifications must match exactly; one-sided claims must be
            // confirmed; silence is vacuously fine.
            Some(Verdict::Positive) => self.verdict == Verdict::Positive,
            Some(_) => self.verdict == Verdict::NonPositive,
            None => true,
        }
    }
}

/// Default grids, used when no range flags are given.
fn default_ranges(name: FamilyName) -> Ranges {
    match name {
        FamilyName::TwoChain => vec![('r', (1, 8)), ('s', (1, 8))],
        FamilyName::ThreeChain => vec![('r', (1, 6)), ('s', (1, 6)), ('t', (1, 6))],
        FamilyName::Left4 => vec![('s', (1, 2)), ('u', (6, 20))],
        FamilyName::Mid4 => vec![('r', (1, 6)), ('s', (1, 2)), ('t', (1, 6)), ('u', (1, 6))],
        FamilyName::Right5 => vec![('r', (1, 6)), ('u', (1, 6)), ('v', (1, 20))],
    }
}

/// Expands flag overrides into per-key inclusive ranges for a family.
pub fn resolve_ranges(
    name: FamilyName,
    overrides: &[(char, Option<&str>)],
) -> Result<Ranges, String> {
    let keys = family_keys(name);
    for (key, value) in overrides {
        if value.is_some() && !keys.contains(key) {
            return Err(format!("family does not take parameter {key}"));
        }
    }
    let mut ranges = default_ranges(name);
    for (key, range) in ranges.iter_mut() {
        if let Some((_, Some(text))) = overrides.iter().find(|(k, v)| k == key && v.is_some()) {
            *range = parse_range(text)?;
        }
    }
    Ok(ranges)
}

fn tuples(ranges: &[(char, (usize, usize))]) -> Vec<FamilyParams> {
    let mut out = vec![FamilyParams::default()];
    for &(key, (lo, hi)) in ranges {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1));
        for base in &out {
            for value in lo..=hi {
                let mut params = base.clone();
                match key {
                    'r' => params.r = Some(value),
                    's' => params.s = Some(value),
                    't' => params.t = Some(value),
                    'u' => params.u = Some(value),
                    _ => params.v = Some(value),
                }
                next.push(params);
            }
        }
        out = next;
    }
    out
}

/// Runs the sweep. Rows are computed independently (in parallel when
/// `jobs > 1`) and assembled in tuple order, so output is deterministic.
pub fn run_sweep(
    name: FamilyName,
    ranges: &[(char, (usize, usize))],
    jobs: usize,
) -> Result<Vec<SweepRow>, String> {
    let instances: Vec<Family> = tuples(ranges)
        .iter()
        .map(|params| crate::input::build_family(name, params))
        .collect::<Result<_, _>>()?;

    let row_of = |family: &Family| SweepRow {
        family: *family,
        prediction: claim_prediction(family),
        verdict: solver_verdict(family),
    };

    let rows = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| instances.par_iter().map(row_of).collect())
    } else {
        instances.iter().map(row_of).collect()
    };
    Ok(rows)
}

fn param_cell(f: &Family, key: char) -> String {
    let value = match (f, key) {
        (Family::TwoChain { r, .. }, 'r') => Some(*r),
        (Family::TwoChain { s, .. }, 's') => Some(*s),
        (Family::ThreeChain { r, .. }, 'r') => Some(*r),
        (Family::ThreeChain { s, .. }, 's') => Some(*s),
        (Family::ThreeChain { t, .. }, 't') => Some(*t),
        (Family::Left4 { s, .. }, 's') => Some(*s),
        (Family::Left4 { u, .. }, 'u') => Some(*u),
        (Family::Mid4 { r, .. }, 'r') => Some(*r),
        (Family::Mid4 { s, .. }, 's') => Some(*s),
        (Family::Mid4 { t, .. }, 't') => Some(*t),
        (Family::Mid4 { u, .. }, 'u') => Some(*u),
        (Family::Right5 { r, .. }, 'r') => Some(*r),
        (Family::Right5 { u, .. }, 'u') => Some(*u),
        (Family::Right5 { v, .. }, 'v') => Some(*v),
        _ => None,
    };
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with a version header; byte-identical across runs and thread counts.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("# nilgraph sweep v1\n");
    out.push_str("family,r,s,t,u,v,prediction,verdict,agree\n");
    for row in rows {
        let prediction = match row.prediction {
            Some(Verdict::Positive) => "positive",
            Some(_) => "non-positive",
            None => "none",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.family.name(),
            param_cell(&row.family, 'r'),
            param_cell(&row.family, 's'),
            param_cell(&row.family, 't'),
            param_cell(&row.family, 'u'),
            param_cell(&row.family, 'v'),
            prediction,
            row.verdict,
            row.agrees()
        ));
    }
    out
}
