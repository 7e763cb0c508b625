//! Packing inequalities for multisets over the box, fullness, and the
//! correspondence with mixed orthogonal arrays.
//!
//! A multiset `T` over the box is a k-dimensional multi-transversal for a
//! parameter set when, for every k-subset `P` and every way of fixing the
//! coordinates outside `P`, the entries matching the fixing have total
//! multiplicity at most `L_P`.

use std::collections::BTreeMap;

use crate::domain::{Dimensions, MultiTransversal, ParamSet, ProfileVector, Rational};
use crate::error::{Error, Result};

use num_bigint::BigInt;

/// One failed packing inequality: fixing `fixed` outside `subset` matched
/// `observed > bound` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub subset: Vec<usize>,
    /// Per-coordinate fixing; `None` on the free coordinates of `subset`.
    pub fixed: Vec<Option<usize>>,
    pub observed: u64,
    pub bound: u64,
}

/// Outcome of a packing check; `ok` holds exactly when no witness was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationReport {
    pub witnesses: Vec<Witness>,
}

impl ViolationReport {
    pub fn ok(&self) -> bool {
        self.witnesses.is_empty()
    }
}

fn fiber_strides(dims: &Dimensions, support: &[usize]) -> (Vec<u64>, u64) {
    let mut strides = vec![0u64; support.len()];
    let mut total = 1u64;
    for (slot, &j) in support.iter().enumerate().rev() {
        strides[slot] = total;
        total *= dims.size(j) as u64;
    }
    (strides, total)
}

/// Checks every packing inequality of `p` against `t`, enumerating all
/// fixings of the coordinates outside each k-subset. Every violation is
/// reported, not just the first.
pub fn check_transversal(t: &MultiTransversal, p: &ParamSet) -> ViolationReport {
    assert_eq!(
        t.dims(),
        p.dims(),
        "multiset and parameter set live on different boxes"
    );
    let mut witnesses = Vec::new();
    for (subset, bound) in p.bounds() {
        let outside = p.complement(subset);
        let (strides, fiber_count) = fiber_strides(p.dims(), &outside);
        let mut counts = vec![0u64; fiber_count as usize];
        for (v, mult) in t.entries() {
            let mut idx = 0u64;
            for (slot, &j) in outside.iter().enumerate() {
                idx += v.coord(j) as u64 * strides[slot];
            }
            counts[idx as usize] += mult;
        }
        for (idx, &count) in counts.iter().enumerate() {
            if count > bound {
                let mut fixed = vec![None; p.m()];
                let mut rest = idx as u64;
                for (slot, &j) in outside.iter().enumerate() {
                    fixed[j] = Some((rest / strides[slot]) as usize);
                    rest %= strides[slot];
                }
                witnesses.push(Witness {
                    subset: subset.clone(),
                    fixed,
                    observed: count,
                    bound,
                });
            }
        }
    }
    ViolationReport { witnesses }
}

/// Fullness of a valid multi-transversal: which k-subsets meet the size
/// bound `|T| = L_P · ∏_{j∉P} n_j` with equality.
///
/// Errors when `t` is not a multi-transversal for `p`.
pub fn fullness(t: &MultiTransversal, p: &ParamSet) -> Result<(bool, Vec<Vec<usize>>)> {
    let report = check_transversal(t, p);
    if !report.ok() {
        return Err(Error::Precondition(format!(
            "fullness needs a valid multi-transversal; {} packing inequalities fail",
            report.witnesses.len()
        )));
    }
    let size = t.size();
    let tight: Vec<Vec<usize>> = p
        .subsets()
        .filter(|sub| p.size_bound(sub) == size)
        .cloned()
        .collect();
    Ok((!tight.is_empty(), tight))
}

/// True iff the ratio `(∏_{i∈P} n_i) / L_P` is the same for every k-subset.
/// Under this condition equality in one size bound forces equality in all.
pub fn constant_ratio(p: &ParamSet) -> bool {
    let mut first: Option<Rational> = None;
    for (subset, bound) in p.bounds() {
        let ratio = Rational::new(
            BigInt::from(p.k_product(subset)),
            BigInt::from(bound),
        );
        match &first {
            None => first = Some(ratio),
            Some(r) => {
                if *r != ratio {
                    return false;
                }
            }
        }
    }
    true
}

/// Mixed orthogonal array: per-column symbol counts, rows over those
/// symbols, a strength and the per-column-subset index `λ`.
///
/// `lambda` is keyed by the d-subsets of columns that are projected onto;
/// projecting the rows to a subset `J` shows every symbol tuple exactly
/// `lambda[J]` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Moa {
    levels: Vec<usize>,
    rows: Vec<Vec<usize>>,
    strength: usize,
    lambda: BTreeMap<Vec<usize>, u64>,
}

impl Moa {
    /// Builds an array from raw rows and verifies it has strength `d`,
    /// filling in the index map.
    pub fn from_rows(levels: Vec<usize>, rows: Vec<Vec<usize>>, d: usize) -> Result<Self> {
        let dims = Dimensions::new(levels.clone())?;
        for row in &rows {
            if row.len() != levels.len() {
                return Err(Error::ShapeMismatch(format!(
                    "row {row:?} does not have {} symbols",
                    levels.len()
                )));
            }
            for (j, &s) in row.iter().enumerate() {
                if s >= levels[j] {
                    return Err(Error::CoordOutOfRange {
                        part: j,
                        value: s,
                        limit: levels[j],
                    });
                }
            }
        }
        match strength_check(&dims, &rows, d) {
            StrengthCheck::Holds { lambda } => {
                let mut rows = rows;
                rows.sort();
                Ok(Moa {
                    levels,
                    rows,
                    strength: d,
                    lambda,
                })
            }
            StrengthCheck::Fails(w) => Err(Error::Strength(format!(
                "columns {:?}: tuple {:?} appears {} times, tuple {:?} appears {}",
                w.columns, w.tuple_a, w.count_a, w.tuple_b, w.count_b
            ))),
        }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn runs(&self) -> usize {
        self.rows.len()
    }

    pub fn constraint(&self) -> usize {
        self.levels.len()
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn lambda(&self) -> &BTreeMap<Vec<usize>, u64> {
        &self.lambda
    }

    /// True iff no row repeats.
    pub fn is_simple(&self) -> bool {
        self.rows.windows(2).all(|w| w[0] != w[1])
    }
}

/// Two projected tuples with different occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrengthWitness {
    pub columns: Vec<usize>,
    pub tuple_a: Vec<usize>,
    pub count_a: u64,
    pub tuple_b: Vec<usize>,
    pub count_b: u64,
}

/// Result of a strength check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrengthCheck {
    /// Every d-column projection is balanced; `lambda` maps each d-subset of
    /// columns to its constant tuple count.
    Holds { lambda: BTreeMap<Vec<usize>, u64> },
    Fails(StrengthWitness),
}

impl StrengthCheck {
    pub fn holds(&self) -> bool {
        matches!(self, StrengthCheck::Holds { .. })
    }
}

fn strength_check(dims: &Dimensions, rows: &[Vec<usize>], d: usize) -> StrengthCheck {
    let m = dims.len();
    let mut lambda = BTreeMap::new();
    for columns in crate::domain::k_subsets(m, d) {
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for row in rows {
            let tuple: Vec<usize> = columns.iter().map(|&j| row[j]).collect();
            *counts.entry(tuple).or_insert(0) += 1;
        }
        // Every possible tuple must appear the same number of times; tuples
        // that never occur count as zero.
        let mut constant: Option<(Vec<usize>, u64)> = None;
        for tuple in dims.assignments(&columns) {
            let count = counts.get(&tuple).copied().unwrap_or(0);
            match &constant {
                None => constant = Some((tuple, count)),
                Some((first, expect)) => {
                    if count != *expect {
                        return StrengthCheck::Fails(StrengthWitness {
                            columns,
                            tuple_a: first.clone(),
                            count_a: *expect,
                            tuple_b: tuple,
                            count_b: count,
                        });
                    }
                }
            }
        }
        let value = constant.map(|(_, c)| c).unwrap_or(rows.len() as u64);
        lambda.insert(columns, value);
    }
    StrengthCheck::Holds { lambda }
}

/// Checks whether `a`'s rows form an orthogonal array of strength `d`,
/// regardless of the strength recorded in `a`.
pub fn moa_strength(a: &Moa, d: usize) -> StrengthCheck {
    let dims = Dimensions::new(a.levels.to_vec()).expect("array levels are valid dimensions");
    strength_check(&dims, &a.rows, d)
}

/// Converts a full multi-transversal with constant ratio into a mixed
/// orthogonal array of strength `M − k` (rows are the entries expanded by
/// multiplicity, index `λ(J) = L_{complement of J}`).
pub fn to_moa(t: &MultiTransversal, p: &ParamSet) -> Result<Moa> {
    let report = check_transversal(t, p);
    if !report.ok() {
        return Err(Error::Precondition(
            "packing inequalities fail; not a multi-transversal".into(),
        ));
    }
    let (is_full, _) = fullness(t, p)?;
    if !is_full {
        return Err(Error::Precondition(
            "multi-transversal is not full; no size bound is met with equality".into(),
        ));
    }
    if !constant_ratio(p) {
        return Err(Error::Precondition(
            "ratio (∏_{i∈P} n_i)/L_P depends on P; rows do not form an orthogonal array".into(),
        ));
    }
    let d = p.m() - p.k();
    let mut rows = Vec::with_capacity(t.size() as usize);
    for (v, mult) in t.entries() {
        for _ in 0..mult {
            rows.push(v.coords().to_vec());
        }
    }
    let mut lambda = BTreeMap::new();
    for columns in crate::domain::k_subsets(p.m(), d) {
        let complement: Vec<usize> = (0..p.m()).filter(|j| !columns.contains(j)).collect();
        lambda.insert(columns, p.bound(&complement));
    }
    Ok(Moa {
        levels: p.dims().sizes().to_vec(),
        rows,
        strength: d,
        lambda,
    })
}

/// Reads a strength-`d` array back as a full `(M−d)`-dimensional
/// multi-transversal with `L_P = λ([M] \ P)`.
pub fn from_moa(a: &Moa, d: usize) -> Result<(MultiTransversal, ParamSet)> {
    let dims = Dimensions::new(a.levels.to_vec())?;
    let lambda = match strength_check(&dims, &a.rows, d) {
        StrengthCheck::Holds { lambda } => lambda,
        StrengthCheck::Fails(w) => {
            return Err(Error::Strength(format!(
                "columns {:?}: tuple {:?} appears {} times, tuple {:?} appears {}",
                w.columns, w.tuple_a, w.count_a, w.tuple_b, w.count_b
            )))
        }
    };
    if a.rows.is_empty() {
        return Err(Error::Precondition(
            "empty array has no positive index set".into(),
        ));
    }
    let m = dims.len();
    let k = m - d;
    let mut bounds = BTreeMap::new();
    for p_subset in crate::domain::k_subsets(m, k) {
        let complement: Vec<usize> = (0..m).filter(|j| !p_subset.contains(j)).collect();
        bounds.insert(p_subset, lambda[&complement]);
    }
    let params = ParamSet::new(dims.clone(), k, bounds)?;
    let mut t = MultiTransversal::new(dims.clone());
    for row in &a.rows {
        let v = ProfileVector::new(row.clone(), &dims)?;
        t.add(v, 1)?;
    }
    Ok((t, params))
}
