//! Graph input: the canonical edge-list format plus a structured family
//! format carrying the family name and parameters. The format is detected
//! from the extension (`.family` or `.toml` means structured) and can be
//! forced with `--input-format`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use nilgraph::families::Family;
use nilgraph::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Plain edge list: header `q p`, then `p` lines `i j`.
    Edges,
    /// TOML with `family = "<name>"` plus integer parameters.
    Family,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    #[value(name = "two-chain")]
    TwoChain,
    #[value(name = "three-chain")]
    ThreeChain,
    Left4,
    Mid4,
    Right5,
}

/// Named integer parameters collected from flags or a structured file.
#[derive(Debug, Clone, Default)]
pub struct FamilyParams {
    pub r: Option<usize>,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub u: Option<usize>,
    pub v: Option<usize>,
}

impl FamilyParams {
    fn get(&self, key: char) -> Option<usize> {
        match key {
            'r' => self.r,
            's' => self.s,
            't' => self.t,
            'u' => self.u,
            'v' => self.v,
            _ => None,
        }
    }

    fn provided(&self) -> Vec<char> {
        ['r', 's', 't', 'u', 'v']
            .into_iter()
            .filter(|&k| self.get(k).is_some())
            .collect()
    }
}

/// Parameters each family accepts, in report order.
pub fn family_keys(name: FamilyName) -> &'static [char] {
    match name {
        FamilyName::TwoChain => &['r', 's'],
        FamilyName::ThreeChain => &['r', 's', 't'],
        FamilyName::Left4 => &['s', 'u'],
        FamilyName::Mid4 => &['r', 's', 't', 'u'],
        FamilyName::Right5 => &['r', 'u', 'v'],
    }
}

/// Builds a family instance, rejecting missing, extra, or zero parameters.
pub fn build_family(name: FamilyName, params: &FamilyParams) -> Result<Family, String> {
    let keys = family_keys(name);
    for key in params.provided() {
        if !keys.contains(&key) {
            return Err(format!(
                "family {} does not take parameter {key}",
                render_name(name)
            ));
        }
    }
    let mut values = BTreeMap::new();
    for &key in keys {
        let value = params
            .get(key)
            .ok_or_else(|| format!("family {} needs --{key}", render_name(name)))?;
        if value == 0 {
            return Err(format!("parameter {key} must be at least 1"));
        }
        values.insert(key, value);
    }
    Ok(match name {
        FamilyName::TwoChain => Family::TwoChain {
            r: values[&'r'],
            s: values[&'s'],
        },
        FamilyName::ThreeChain => Family::ThreeChain {
            r: values[&'r'],
            s: values[&'s'],
            t: values[&'t'],
        },
        FamilyName::Left4 => Family::Left4 {
            s: values[&'s'],
            u: values[&'u'],
        },
        FamilyName::Mid4 => Family::Mid4 {
            r: values[&'r'],
            s: values[&'s'],
            t: values[&'t'],
            u: values[&'u'],
        },
        FamilyName::Right5 => Family::Right5 {
            r: values[&'r'],
            u: values[&'u'],
            v: values[&'v'],
        },
    })
}

pub fn render_name(name: FamilyName) -> &'static str {
    match name {
        FamilyName::TwoChain => "two-chain",
        FamilyName::ThreeChain => "three-chain",
        FamilyName::Left4 => "left4",
        FamilyName::Mid4 => "mid4",
        FamilyName::Right5 => "right5",
    }
}

fn parse_family_name(text: &str) -> Result<FamilyName, String> {
    match text {
        "two-chain" => Ok(FamilyName::TwoChain),
        "three-chain" => Ok(FamilyName::ThreeChain),
        "left4" => Ok(FamilyName::Left4),
        "mid4" => Ok(FamilyName::Mid4),
        "right5" => Ok(FamilyName::Right5),
        other => Err(format!("unknown family \"{other}\"")),
    }
}

/// Parses the structured family format.
pub fn parse_family_file(text: &str) -> Result<Family, String> {
    let table: toml::Table = text.parse().map_err(|e| format!("bad family file: {e}"))?;
    let mut name = None;
    let mut params = FamilyParams::default();
    for (key, value) in &table {
        match key.as_str() {
            "family" => {
                let s = value
                    .as_str()
                    .ok_or_else(|| "family must be a string".to_string())?;
                name = Some(parse_family_name(s)?);
            }
            "r" | "s" | "t" | "u" | "v" => {
                let n = value
                    .as_integer()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| format!("parameter {key} must be a positive integer"))?;
                let slot = match key.as_str() {
                    "r" => &mut params.r,
                    "s" => &mut params.s,
                    "t" => &mut params.t,
                    "u" => &mut params.u,
                    _ => &mut params.v,
                };
                *slot = Some(n as usize);
            }
            other => return Err(format!("unknown key \"{other}\" in family file")),
        }
    }
    let name = name.ok_or_else(|| "family file needs a family = \"...\" entry".to_string())?;
    build_family(name, &params)
}

fn detect_format(path: &Path) -> InputFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("family") | Some("toml") => InputFormat::Family,
        _ => InputFormat::Edges,
    }
}

/// Loads a graph from either input format.
pub fn load_graph(path: &Path, forced: Option<InputFormat>) -> Result<Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match forced.unwrap_or_else(|| detect_format(path)) {
        InputFormat::Edges => {
            Graph::parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
        InputFormat::Family => {
            let family = parse_family_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(family.realize())
        }
    }
}

/// Inclusive range spec: `"4"` or `"2..9"`.
pub fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let bad = || format!("bad range \"{text}\" (expected N or LO..HI)");
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo < 1 || hi < lo {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let n: usize = text.trim().parse().map_err(|_| bad())?;
        if n < 1 {
            return Err(bad());
        }
        Ok((n, n))
    }
}
