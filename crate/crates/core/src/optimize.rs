//! Max-weight packing: find the simple multiset over the box with the
//! largest total weight `Σ_v ∏_j C(m_j, v_j)` subject to the packing
//! inequalities. An exhaustive search and a branch-and-bound search act as
//! oracles for each other, and closed-form maximum sizes cover the top two
//! levels `k = M` and `k = M−1`.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::domain::{weight, MultiTransversal, ParamSet, ProfileVector, Rational};
use crate::error::{Error, Result};
use crate::hull::{enumerate_transversals, MultiplicityConstraint};
use crate::sperner::{
    blym_report, check_sperner, is_homogeneous, realize_homogeneous, GroundSet, SetFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Visit every feasible simple multiset (no bound pruning).
    Exhaustive,
    /// Prune with an admissible weight bound.
    BranchAndBound,
}

/// Outcome of a solve: the best multiset, its weight and the search size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub best: MultiTransversal,
    pub weight: BigUint,
    pub node_count: u64,
    pub optimal: bool,
}

struct Search {
    cells: Vec<ProfileVector>,
    weights: Vec<BigUint>,
    /// Suffix sums of `weights` (sorted descending in bound mode).
    suffix: Vec<BigUint>,
    subsets: Vec<u64>,
    fiber_of: Vec<Vec<usize>>,
    fiber_counts: Vec<Vec<u64>>,
    /// `L_P · ∏_{j∉P} n_j − current size` per subset; the minimum bounds how
    /// many more cells any completion may add.
    residual: Vec<u64>,
    chosen: Vec<usize>,
    current: BigUint,
    best_weight: BigUint,
    best_cells: Vec<Vec<usize>>,
    node_count: u64,
    bound: bool,
}

impl Search {
    fn leaf(&mut self) {
        let mut sorted: Vec<Vec<usize>> = self
            .chosen
            .iter()
            .map(|&i| self.cells[i].coords().to_vec())
            .collect();
        sorted.sort();
        let better = self.current > self.best_weight
            || (self.current == self.best_weight && sorted < self.best_cells);
        if better {
            self.best_weight = self.current.clone();
            self.best_cells = sorted;
        }
    }

    fn go(&mut self, idx: usize) {
        self.node_count += 1;
        if idx == self.cells.len() {
            self.leaf();
            return;
        }
        if self.bound {
            // Admissible bound: at most `r = min_P residual_P` more cells fit,
            // and the heaviest remaining cells are first in the suffix order.
            let r = *self.residual.iter().min().unwrap() as usize;
            let take = r.min(self.cells.len() - idx);
            let optimistic = &self.current + (&self.suffix[idx] - &self.suffix[idx + take]);
            if optimistic < self.best_weight {
                return;
            }
        }
        let feasible = (0..self.subsets.len())
            .all(|s| self.fiber_counts[s][self.fiber_of[s][idx]] < self.subsets[s]);
        if feasible {
            for s in 0..self.subsets.len() {
                self.fiber_counts[s][self.fiber_of[s][idx]] += 1;
                self.residual[s] -= 1;
            }
            self.chosen.push(idx);
            self.current += &self.weights[idx];
            self.go(idx + 1);
            self.current -= &self.weights[idx];
            self.chosen.pop();
            for s in 0..self.subsets.len() {
                self.fiber_counts[s][self.fiber_of[s][idx]] -= 1;
                self.residual[s] += 1;
            }
        }
        self.go(idx + 1);
    }
}

/// Maximizes the total weight `Σ_{v∈C} ∏_j C(m_j, v_j)` over simple
/// multisets `C` satisfying the packing inequalities of `p`. Both modes are
/// exact and agree; ties are broken by the lexicographically smallest sorted
/// cell list.
pub fn max_weight_transversal(
    p: &ParamSet,
    m: &[usize],
    mode: SolveMode,
) -> Result<SolveResult> {
    let dims = p.dims();
    if m.len() != dims.len() || m.iter().zip(dims.sizes()).any(|(&mj, &nj)| mj + 1 != nj) {
        return Err(Error::ShapeMismatch(
            "part sizes must satisfy n_j = m_j + 1".into(),
        ));
    }
    let cell_count = dims.cell_count();
    let limit = match mode {
        SolveMode::Exhaustive => 20,
        SolveMode::BranchAndBound => 10_000,
    };
    if cell_count > limit {
        return Err(Error::ScaleGuard(format!(
            "{cell_count} cells exceed the limit {limit} for this mode"
        )));
    }

    let mut cells: Vec<ProfileVector> = dims.profiles().collect();
    let mut weights: Vec<BigUint> = cells
        .iter()
        .map(|v| weight(v, m))
        .collect::<Result<_>>()?;
    if mode == SolveMode::BranchAndBound {
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(cells[a].cmp(&cells[b])));
        cells = order.iter().map(|&i| cells[i].clone()).collect();
        weights = order.iter().map(|&i| weights[i].clone()).collect();
    }
    let mut suffix = vec![BigUint::zero(); cells.len() + 1];
    for i in (0..cells.len()).rev() {
        suffix[i] = &suffix[i + 1] + &weights[i];
    }

    let mut subsets = Vec::new();
    let mut fiber_of = Vec::new();
    let mut fiber_counts = Vec::new();
    let mut residual = Vec::new();
    for (subset, bound) in p.bounds() {
        let outside: Vec<usize> = (0..p.m()).filter(|j| !subset.contains(j)).collect();
        let mut strides = vec![0u64; outside.len()];
        let mut total = 1u64;
        for (slot, &j) in outside.iter().enumerate().rev() {
            strides[slot] = total;
            total *= dims.size(j) as u64;
        }
        fiber_of.push(
            cells
                .iter()
                .map(|v| {
                    outside
                        .iter()
                        .enumerate()
                        .map(|(slot, &j)| v.coord(j) as u64 * strides[slot])
                        .sum::<u64>() as usize
                })
                .collect::<Vec<usize>>(),
        );
        fiber_counts.push(vec![0u64; total as usize]);
        residual.push(bound * total);
        subsets.push(bound);
    }

    let mut search = Search {
        cells,
        weights,
        suffix,
        subsets,
        fiber_of,
        fiber_counts,
        residual,
        chosen: Vec::new(),
        current: BigUint::zero(),
        best_weight: BigUint::zero(),
        best_cells: Vec::new(),
        node_count: 0,
        bound: mode == SolveMode::BranchAndBound,
    };
    search.go(0);

    let best = MultiTransversal::from_vectors(dims.clone(), search.best_cells)?;
    Ok(SolveResult {
        best,
        weight: search.best_weight,
        node_count: search.node_count,
        optimal: true,
    })
}

/// Maximum size of a family in which distinct members differ in every part:
/// `∏_i C(m_i, ⌊m_i/2⌋)`.
pub fn max_size_full_dimension(m: &[usize]) -> BigUint {
    m.iter()
        .map(|&mi| crate::domain::binomial(mi, mi / 2))
        .product()
}

/// Maximum size at one level below the full dimension, for part sizes with
/// the last one minimal: `Σ_{i=0}^{m_M} ∏_j C(m_j, ⌈m_j/2⌉ + (−1)^i ⌈i/2⌉)`.
pub fn max_size_codimension_one(m: &[usize]) -> Result<BigUint> {
    let last = *m
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty part list".into()))?;
    if m.len() < 2 {
        return Err(Error::InvalidParameter(
            "codimension-one maximum needs at least two parts".into(),
        ));
    }
    if m.iter().any(|&mj| mj < last) {
        return Err(Error::Precondition(
            "the last part size must be the minimum; permute the parts first".into(),
        ));
    }
    let mut total = BigUint::zero();
    for i in 0..=last {
        let mut term = BigUint::one();
        for &mj in m {
            let mid = mj.div_ceil(2);
            let step = i.div_ceil(2);
            let index = if i % 2 == 0 { mid + step } else { mid - step };
            term *= crate::domain::binomial(mj, index);
        }
        total += term;
    }
    Ok(total)
}

/// Value of the aligned sum `Σ_ℓ ∏_j a[ℓ][j]` for a matrix whose columns
/// are sorted in non-increasing order; no per-column permutations can beat
/// this alignment.
pub fn rearrangement_max(a: &[Vec<Rational>]) -> Result<Rational> {
    let Some(first) = a.first() else {
        return Ok(Rational::zero());
    };
    let m = first.len();
    for row in a {
        if row.len() != m {
            return Err(Error::ShapeMismatch("ragged matrix".into()));
        }
        if row.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidParameter(
                "matrix entries must be non-negative".into(),
            ));
        }
    }
    for j in 0..m {
        for i in 1..a.len() {
            if a[i - 1][j] < a[i][j] {
                return Err(Error::InvalidParameter(format!(
                    "column {j} is not sorted in non-increasing order"
                )));
            }
        }
    }
    let mut total = Rational::zero();
    for row in a {
        let mut prod = Rational::one();
        for x in row {
            prod *= x;
        }
        total += prod;
    }
    Ok(total)
}

/// Verdict of the maxima-homogeneity experiment.
#[derive(Debug, Clone)]
pub struct MaximaVerdict {
    /// Largest family size among the enumerated Sperner families.
    pub max_size: u64,
    /// The multisets realizing maximum-size homogeneous families.
    pub homogeneous_maxima: Vec<MultiTransversal>,
    /// Every maximum-size homogeneous family meets every BLYM bound with
    /// equality.
    pub hypothesis_holds: bool,
    /// Checked only when the hypothesis holds.
    pub all_maxima_homogeneous: Option<bool>,
    /// A non-homogeneous maximum-size family, when one exists.
    pub counterexample: Option<SetFamily>,
}

/// Exhaustive experiment: are all maximum-size families homogeneous
/// whenever every maximum-size homogeneous family attains the BLYM bounds
/// with equality?
///
/// With `multiplicity_cap = None` the experiment runs over simple families;
/// with `Some(c)` over multi-families with per-set multiplicity at most `c`
/// (the homogeneous candidates then carry the same per-profile cap).
pub fn maxima_homogeneity(
    p: &ParamSet,
    ground: &GroundSet,
    multiplicity_cap: Option<u64>,
) -> Result<MaximaVerdict> {
    if ground.dims() != *p.dims() {
        return Err(Error::ShapeMismatch(
            "ground set does not match the parameter box".into(),
        ));
    }
    let total_elements: usize = ground.part_sizes().iter().sum();
    if total_elements > 4 {
        return Err(Error::ScaleGuard(format!(
            "{total_elements} ground elements give 2^{} subsets; the family walk needs at most 4",
            1u64 << total_elements
        )));
    }
    let cap = multiplicity_cap.unwrap_or(1);
    let subsets = ground.subsets();
    let family_space = ((cap + 1) as f64).powi(subsets.len() as i32);
    if family_space > 2e6 {
        return Err(Error::ScaleGuard(format!(
            "{family_space:.0} candidate families exceed the walk limit"
        )));
    }

    // Homogeneous side, through the candidate multisets.
    let constraint = MultiplicityConstraint::uniform_cap(p.dims(), cap);
    let candidates = enumerate_transversals(p, &constraint, multiplicity_cap.is_none())?;
    let m = ground.part_sizes();
    let mut best_hom: u64 = 0;
    let mut sizes: Vec<u64> = Vec::with_capacity(candidates.len());
    for cand in &candidates {
        let mut size = 0u64;
        for (v, mult) in cand.entries() {
            let w: BigUint = weight(v, m)?;
            let w: u64 = w
                .try_into()
                .map_err(|_| Error::ScaleGuard("family size overflows".into()))?;
            size += mult * w;
        }
        best_hom = best_hom.max(size);
        sizes.push(size);
    }
    let homogeneous_maxima: Vec<MultiTransversal> = candidates
        .iter()
        .zip(&sizes)
        .filter(|&(_, &s)| s == best_hom)
        .map(|(c, _)| c.clone())
        .collect();

    let hypothesis_holds = homogeneous_maxima.iter().all(|i| {
        let family = realize_homogeneous(i, ground).expect("candidate fits the ground set");
        blym_report(&family, p).values().all(|line| line.equal)
    });

    if !hypothesis_holds {
        return Ok(MaximaVerdict {
            max_size: best_hom,
            homogeneous_maxima,
            hypothesis_holds,
            all_maxima_homogeneous: None,
            counterexample: None,
        });
    }

    // Exhaustive side: walk every family with multiplicities ≤ cap.
    let mut max_size = 0u64;
    let mut maxima: Vec<SetFamily> = Vec::new();
    let mut mults = vec![0u64; subsets.len()];
    'families: loop {
        let mut f = SetFamily::new(ground.clone());
        for (set, &mult) in subsets.iter().zip(&mults) {
            f.add(set.clone(), mult);
        }
        if check_sperner(&f, p).ok() {
            let size = f.size();
            if size > max_size {
                max_size = size;
                maxima.clear();
            }
            if size == max_size {
                maxima.push(f);
            }
        }
        let mut pos = 0;
        loop {
            if pos == mults.len() {
                break 'families;
            }
            mults[pos] += 1;
            if mults[pos] <= cap {
                break;
            }
            mults[pos] = 0;
            pos += 1;
        }
    }

    let counterexample = maxima.iter().find(|f| is_homogeneous(f).is_none()).cloned();
    Ok(MaximaVerdict {
        max_size,
        homogeneous_maxima,
        hypothesis_holds,
        all_maxima_homogeneous: Some(counterexample.is_none()),
        counterexample,
    })
}
