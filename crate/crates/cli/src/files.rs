//! File formats: JSON parameter files, tab-separated transversal files,
//! plain-text array files and JSON profile-matrix targets.
//!
//! Rationals in files and on the command line are written `p/q` (or a bare
//! integer); decimals are rejected. Part and coordinate indices are 0-based
//! everywhere.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use moatk::domain::{Dimensions, MultiTransversal, ParamSet, ProfileVector, Rational};
use moatk::hull::{CapRow, MultiplicityConstraint};
use moatk::sperner::ProfileMatrix;
use moatk::transversal::Moa;

use crate::CliError;

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    Rational::from_str(s.trim())
        .map_err(|e| CliError::Parse(format!("bad rational '{s}': {e}")))
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundEntry {
    #[serde(rename = "P")]
    pub p: Vec<usize>,
    pub value: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaEntry {
    pub v: Vec<usize>,
    pub c: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaEntry {
    #[serde(rename = "A")]
    pub a: u64,
    pub alpha: Vec<AlphaEntry>,
}

/// JSON parameter file: box sizes, level, bounds, optional part sizes and
/// optional multiplicity caps. Unknown keys are rejected.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub n: Vec<usize>,
    pub k: usize,
    #[serde(rename = "L")]
    pub l: Vec<BoundEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<GammaEntry>>,
}

/// Everything a parameter file can describe.
pub struct LoadedParams {
    pub params: ParamSet,
    pub part_sizes: Option<Vec<usize>>,
    pub constraint: Option<MultiplicityConstraint>,
}

pub fn read_params(path: &Path) -> Result<LoadedParams, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let file: ParamFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let dims = Dimensions::new(file.n.clone())
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if let Some(m) = &file.m {
        if m.len() != file.n.len() || m.iter().zip(&file.n).any(|(&mj, &nj)| mj + 1 != nj) {
            return Err(CliError::Parse(format!(
                "{}: part sizes m must satisfy n_j = m_j + 1",
                path.display()
            )));
        }
    }
    let mut bounds = BTreeMap::new();
    for entry in &file.l {
        let mut subset = entry.p.clone();
        subset.sort_unstable();
        if bounds.insert(subset, entry.value).is_some() {
            return Err(CliError::Parse(format!(
                "{}: duplicate bound for subset {:?}",
                path.display(),
                entry.p
            )));
        }
    }
    let params = ParamSet::new(dims.clone(), file.k, bounds)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let constraint = match &file.gamma {
        None => None,
        Some(rows) => {
            let mut out = Vec::with_capacity(rows.len());
            for row in rows {
                let mut coeffs = BTreeMap::new();
                for a in &row.alpha {
                    let v = ProfileVector::new(a.v.clone(), &dims)
                        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
                    coeffs.insert(v, a.c);
                }
                out.push(CapRow { cap: row.a, coeffs });
            }
            Some(MultiplicityConstraint { rows: out })
        }
    };
    Ok(LoadedParams {
        params,
        part_sizes: file.m,
        constraint,
    })
}

pub fn write_params(path: &Path, params: &ParamSet, m: Option<&[usize]>) -> Result<(), CliError> {
    let file = ParamFile {
        n: params.dims().sizes().to_vec(),
        k: params.k(),
        l: params
            .bounds()
            .map(|(p, value)| BoundEntry { p: p.clone(), value })
            .collect(),
        m: m.map(|m| m.to_vec()),
        gamma: None,
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    fs::write(path, text + "\n").map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn join_sizes(sizes: &[usize]) -> String {
    sizes
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|e| CliError::Parse(format!("bad size '{tok}': {e}")))
        })
        .collect()
}

/// Tab-separated transversal file: a `# transversal n=...` header, then one
/// line per support vector (`i1 … iM mult`), lexicographically sorted.
pub fn write_transversal(path: &Path, t: &MultiTransversal) -> Result<(), CliError> {
    let mut out = format!("# transversal n={}\n", join_sizes(t.dims().sizes()));
    for (v, mult) in t.entries() {
        let coords: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
        out.push_str(&coords.join("\t"));
        out.push('\t');
        out.push_str(&mult.to_string());
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_transversal(path: &Path) -> Result<MultiTransversal, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let bad = |msg: String| CliError::Parse(format!("{}: {msg}", path.display()));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let sizes_text = header
        .trim()
        .strip_prefix("# transversal n=")
        .ok_or_else(|| bad(format!("bad header '{header}'")))?;
    let dims = Dimensions::new(parse_sizes(sizes_text.trim())?)
        .map_err(|e| bad(e.to_string()))?;
    let m = dims.len();
    let mut entries: Vec<(ProfileVector, u64)> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != m + 1 {
            return Err(bad(format!(
                "line '{line}' has {} fields, expected {}",
                fields.len(),
                m + 1
            )));
        }
        let coords: Vec<usize> = fields[..m]
            .iter()
            .map(|f| f.parse::<usize>().map_err(|e| bad(format!("'{f}': {e}"))))
            .collect::<Result<_, _>>()?;
        let mult: u64 = fields[m]
            .parse()
            .map_err(|e| bad(format!("'{}': {e}", fields[m])))?;
        if mult == 0 {
            return Err(bad(format!("zero multiplicity at {coords:?}")));
        }
        let v = ProfileVector::new(coords, &dims).map_err(|e| bad(e.to_string()))?;
        if let Some((prev, _)) = entries.last() {
            if *prev >= v {
                return Err(bad(format!(
                    "vectors must be strictly increasing; {v} follows {prev}"
                )));
            }
        }
        entries.push((v, mult));
    }
    MultiTransversal::from_entries(dims, entries).map_err(|e| bad(e.to_string()))
}

/// Plain-text array file: a header with constraint, strength, levels and run
/// count, then one space-separated row per line.
pub fn write_moa(path: &Path, a: &Moa) -> Result<(), CliError> {
    let mut out = format!(
        "MOA constraint={} strength={} levels={} runs={}\n",
        a.constraint(),
        a.strength(),
        join_sizes(a.levels()),
        a.runs()
    );
    for row in a.rows() {
        let symbols: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        out.push_str(&symbols.join(" "));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_moa(path: &Path) -> Result<Moa, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let bad = |msg: String| CliError::Parse(format!("{}: {msg}", path.display()));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let mut constraint = None;
    let mut strength = None;
    let mut levels = None;
    let mut runs = None;
    let rest = header
        .trim()
        .strip_prefix("MOA ")
        .ok_or_else(|| bad(format!("bad header '{header}'")))?;
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad(format!("bad header field '{field}'")))?;
        match key {
            "constraint" => constraint = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "strength" => strength = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "levels" => levels = Some(parse_sizes(value)?),
            "runs" => runs = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            other => return Err(bad(format!("unknown header field '{other}'"))),
        }
    }
    let constraint = constraint.ok_or_else(|| bad("missing constraint".into()))?;
    let strength = strength.ok_or_else(|| bad("missing strength".into()))?;
    let levels = levels.ok_or_else(|| bad("missing levels".into()))?;
    let runs = runs.ok_or_else(|| bad("missing runs".into()))?;
    if levels.len() != constraint {
        return Err(bad(format!(
            "{} levels for constraint {constraint}",
            levels.len()
        )));
    }
    let mut rows = Vec::with_capacity(runs);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|f| f.parse::<usize>().map_err(|e| bad(format!("'{f}': {e}"))))
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    if rows.len() != runs {
        return Err(bad(format!("{} rows, header says {runs}", rows.len())));
    }
    Moa::from_rows(levels, rows, strength).map_err(|e| bad(e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub v: Vec<usize>,
    pub value: u64,
}

/// JSON profile-matrix file: the box sizes and the non-zero entries.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: Vec<usize>,
    pub entries: Vec<MatrixEntry>,
}

pub fn read_matrix(path: &Path) -> Result<ProfileMatrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let dims = Dimensions::new(file.n)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let mut counts = Vec::with_capacity(file.entries.len());
    for entry in file.entries {
        let v = ProfileVector::new(entry.v, &dims)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        counts.push((v, entry.value));
    }
    ProfileMatrix::from_counts(dims, counts)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn matrix_to_entries(m: &ProfileMatrix) -> Vec<MatrixEntry> {
    m.counts()
        .map(|(v, value)| MatrixEntry {
            v: v.coords().to_vec(),
            value,
        })
        .collect()
}
