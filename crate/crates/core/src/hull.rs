//! Profile-matrix polytopes: candidate matrices of homogeneous families,
//! extreme points decided by exact linear feasibility, multiplicity
//! constraints, initial families under product-permutations, and
//! lexicographically maximal transversals.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::domain::{binomial, Dimensions, MultiTransversal, ParamSet, ProfileVector, Rational};
use crate::error::{Error, Result};
use crate::sperner::{cartesian, GroundSet, ProfileMatrix, SetFamily};

/// One linear cap `Σ_v coeffs[v] · (multiplicity measure of v) ≤ cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapRow {
    pub cap: u64,
    pub coeffs: BTreeMap<ProfileVector, u64>,
}

/// A system of linear multiplicity caps. For a multiset over the box the
/// measure of `v` is its multiplicity; for a set family it is the largest
/// multiplicity among sets with profile `v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiplicityConstraint {
    pub rows: Vec<CapRow>,
}

impl MultiplicityConstraint {
    /// No constraint at all.
    pub fn none() -> Self {
        MultiplicityConstraint { rows: Vec::new() }
    }

    /// Per-profile cap `c` on every cell of the box.
    pub fn uniform_cap(dims: &Dimensions, c: u64) -> Self {
        let rows = dims
            .profiles()
            .map(|v| CapRow {
                cap: c,
                coeffs: [(v, 1u64)].into_iter().collect(),
            })
            .collect();
        MultiplicityConstraint { rows }
    }

    /// The simple-family constraint: every profile capped at 1.
    pub fn simplicity(dims: &Dimensions) -> Self {
        Self::uniform_cap(dims, 1)
    }
}

/// Does the multiset satisfy every cap row (plain multiplicities)?
pub fn constraint_ok_multiset(i: &MultiTransversal, g: &MultiplicityConstraint) -> bool {
    g.rows.iter().all(|row| {
        let total: u64 = row.coeffs.iter().map(|(v, c)| c * i.multiplicity(v)).sum();
        total <= row.cap
    })
}

/// Does the family satisfy every cap row, measuring each profile by the
/// largest multiplicity among its sets?
pub fn constraint_ok_family(f: &SetFamily, g: &MultiplicityConstraint) -> bool {
    let dims = f.ground().dims();
    let mut max_mult: BTreeMap<ProfileVector, u64> = BTreeMap::new();
    for (set, mult) in f.entries() {
        let v = set.profile(&dims);
        let slot = max_mult.entry(v).or_insert(0);
        *slot = (*slot).max(mult);
    }
    g.rows.iter().all(|row| {
        let total: u64 = row
            .coeffs
            .iter()
            .map(|(v, c)| c * max_mult.get(v).copied().unwrap_or(0))
            .sum();
        total <= row.cap
    })
}

/// The multiplicity matrix `T(I)`.
pub fn t_matrix(i: &MultiTransversal) -> ProfileMatrix {
    ProfileMatrix::from_counts(i.dims().clone(), i.entries().map(|(v, m)| (v.clone(), m)))
        .expect("multiset keys are valid cells")
}

/// The binomial-weighted matrix `S(I)`: entry `#[v,I] · ∏_j C(m_j, v_j)`
/// with `m_j = n_j − 1`; this is the profile matrix of the homogeneous
/// family realizing `I`.
pub fn s_matrix(i: &MultiTransversal) -> ProfileMatrix {
    let m = i.dims().part_sizes();
    ProfileMatrix::from_counts(
        i.dims().clone(),
        i.entries().map(|(v, mult)| {
            let scale: u64 = v
                .coords()
                .iter()
                .zip(&m)
                .map(|(&vj, &mj)| {
                    binomial(mj, vj)
                        .to_u64()
                        .expect("desk-scale binomials fit in u64")
                })
                .product();
            (v.clone(), mult * scale)
        }),
    )
    .expect("multiset keys are valid cells")
}

/// Juxtaposed per-part orderings of the ground set elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPermutation {
    orders: Vec<Vec<usize>>,
}

impl ProductPermutation {
    pub fn new(orders: Vec<Vec<usize>>, ground: &GroundSet) -> Result<Self> {
        if orders.len() != ground.parts() {
            return Err(Error::ShapeMismatch(format!(
                "{} orderings for {} parts",
                orders.len(),
                ground.parts()
            )));
        }
        for (i, order) in orders.iter().enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            let expect: Vec<usize> = (0..ground.part_size(i)).collect();
            if sorted != expect {
                return Err(Error::InvalidParameter(format!(
                    "ordering {order:?} is not a permutation of part {i}"
                )));
            }
        }
        Ok(ProductPermutation { orders })
    }

    pub fn identity(ground: &GroundSet) -> Self {
        ProductPermutation {
            orders: (0..ground.parts())
                .map(|i| (0..ground.part_size(i)).collect())
                .collect(),
        }
    }

    /// All product-permutations of the ground set.
    pub fn all(ground: &GroundSet) -> Vec<Self> {
        let per_part: Vec<Vec<Vec<usize>>> = (0..ground.parts())
            .map(|i| {
                (0..ground.part_size(i))
                    .permutations(ground.part_size(i))
                    .collect()
            })
            .collect();
        cartesian(&per_part)
            .into_iter()
            .map(|orders| ProductPermutation { orders })
            .collect()
    }

    pub fn order(&self, part: usize) -> &[usize] {
        &self.orders[part]
    }

    /// The unique initial set with the given profile: the first `v_j`
    /// elements of each part's ordering.
    pub fn initial_set(&self, v: &ProfileVector, ground: &GroundSet) -> crate::sperner::PartedSet {
        let parts: Vec<Vec<usize>> = self
            .orders
            .iter()
            .zip(v.coords())
            .map(|(order, &vj)| order[..vj].to_vec())
            .collect();
        crate::sperner::PartedSet::new(parts, ground).expect("initial segments are valid sets")
    }

    fn is_initial(&self, set: &crate::sperner::PartedSet) -> bool {
        self.orders.iter().enumerate().all(|(i, order)| {
            let part = set.part(i);
            let mut prefix: Vec<usize> = order[..part.len()].to_vec();
            prefix.sort_unstable();
            prefix == part
        })
    }
}

/// The family of initial sets realizing a multiset: for each `v` in the
/// support, the unique initial set with profile `v`, with multiplicity
/// `#[v, I]`. Its profile matrix is `T(I)` and it is invariant under
/// [`initial_restriction`].
pub fn initial_family(
    i: &MultiTransversal,
    perm: &ProductPermutation,
    ground: &GroundSet,
) -> Result<SetFamily> {
    if *i.dims() != ground.dims() {
        return Err(Error::ShapeMismatch(
            "multiset box does not match the ground set".into(),
        ));
    }
    let mut family = SetFamily::new(ground.clone());
    for (v, mult) in i.entries() {
        family.add(perm.initial_set(v, ground), mult);
    }
    Ok(family)
}

/// The sub-multiset of members that are initial with respect to `perm`.
pub fn initial_restriction(f: &SetFamily, perm: &ProductPermutation) -> SetFamily {
    let mut out = SetFamily::new(f.ground().clone());
    for (set, mult) in f.entries() {
        if perm.is_initial(set) {
            out.add(set.clone(), mult);
        }
    }
    out
}

/// All multisets over the box that satisfy the packing inequalities of `p`
/// and the multiplicity constraint, in lexicographic order of their
/// multiplicity vectors. `simple_only` restricts to 0/1 multiplicities.
///
/// Every cell's multiplicity is capped by `min_P L_P` (a single cell lies in
/// one fiber of every k-subset) and by `⌊cap/coeff⌋` over the covering
/// constraint rows; the walk errors out if the remaining space is too large.
pub fn enumerate_transversals(
    p: &ParamSet,
    g: &MultiplicityConstraint,
    simple_only: bool,
) -> Result<Vec<MultiTransversal>> {
    let dims = p.dims().clone();
    let cells: Vec<ProfileVector> = dims.profiles().collect();
    let min_bound = p.bounds().map(|(_, l)| l).min().unwrap();

    let mut caps: Vec<u64> = Vec::with_capacity(cells.len());
    for v in &cells {
        let mut cap = if simple_only { 1 } else { min_bound };
        for row in &g.rows {
            if let Some(&c) = row.coeffs.get(v) {
                if c > 0 {
                    cap = cap.min(row.cap / c);
                }
            }
        }
        caps.push(cap);
    }

    let mut space = 1f64;
    for &c in &caps {
        space *= (c + 1) as f64;
    }
    if space > 2e6 {
        return Err(Error::SearchSpace(format!(
            "{space:.0} multiplicity vectors; add a multiplicity constraint"
        )));
    }

    // Fiber bookkeeping per k-subset: cell → fiber index.
    let subsets: Vec<(Vec<usize>, u64)> = p.bounds().map(|(s, l)| (s.clone(), l)).collect();
    let mut fiber_of: Vec<Vec<usize>> = Vec::with_capacity(subsets.len());
    let mut fiber_counts: Vec<Vec<u64>> = Vec::with_capacity(subsets.len());
    for (subset, _) in &subsets {
        let outside: Vec<usize> = (0..p.m()).filter(|j| !subset.contains(j)).collect();
        let mut strides = vec![0u64; outside.len()];
        let mut total = 1u64;
        for (slot, &j) in outside.iter().enumerate().rev() {
            strides[slot] = total;
            total *= dims.size(j) as u64;
        }
        let of: Vec<usize> = cells
            .iter()
            .map(|v| {
                outside
                    .iter()
                    .enumerate()
                    .map(|(slot, &j)| v.coord(j) as u64 * strides[slot])
                    .sum::<u64>() as usize
            })
            .collect();
        fiber_of.push(of);
        fiber_counts.push(vec![0u64; total as usize]);
    }

    struct Walk<'a> {
        cells: &'a [ProfileVector],
        caps: &'a [u64],
        dims: &'a Dimensions,
        subsets: &'a [(Vec<usize>, u64)],
        fiber_of: &'a [Vec<usize>],
        fiber_counts: Vec<Vec<u64>>,
        g: &'a MultiplicityConstraint,
        gamma_sums: Vec<u64>,
        mults: Vec<u64>,
        out: Vec<MultiTransversal>,
    }

    impl Walk<'_> {
        fn go(&mut self, idx: usize) {
            if idx == self.cells.len() {
                let t = MultiTransversal::from_entries(
                    self.dims.clone(),
                    self.cells.iter().cloned().zip(self.mults.iter().copied()),
                )
                .expect("enumerated cells are valid");
                self.out.push(t);
                return;
            }
            let v = &self.cells[idx];
            for mult in 0..=self.caps[idx] {
                let fits_fibers = self
                    .subsets
                    .iter()
                    .enumerate()
                    .all(|(s, (_, l))| self.fiber_counts[s][self.fiber_of[s][idx]] + mult <= *l);
                if !fits_fibers {
                    break;
                }
                let fits_gamma = self.g.rows.iter().enumerate().all(|(r, row)| {
                    let coeff = row.coeffs.get(v).copied().unwrap_or(0);
                    self.gamma_sums[r] + coeff * mult <= row.cap
                });
                if !fits_gamma {
                    break;
                }
                for s in 0..self.subsets.len() {
                    self.fiber_counts[s][self.fiber_of[s][idx]] += mult;
                }
                for (r, row) in self.g.rows.iter().enumerate() {
                    self.gamma_sums[r] += row.coeffs.get(v).copied().unwrap_or(0) * mult;
                }
                self.mults[idx] = mult;
                self.go(idx + 1);
                self.mults[idx] = 0;
                for s in 0..self.subsets.len() {
                    self.fiber_counts[s][self.fiber_of[s][idx]] -= mult;
                }
                for (r, row) in self.g.rows.iter().enumerate() {
                    self.gamma_sums[r] -= row.coeffs.get(v).copied().unwrap_or(0) * mult;
                }
            }
        }
    }

    let mut walk = Walk {
        cells: &cells,
        caps: &caps,
        dims: &dims,
        subsets: &subsets,
        fiber_of: &fiber_of,
        fiber_counts,
        g,
        gamma_sums: vec![0u64; g.rows.len()],
        mults: vec![0u64; cells.len()],
        out: Vec::new(),
    };
    walk.go(0);
    Ok(walk.out)
}

fn lem_ordering_works(
    i: &MultiTransversal,
    ordering: &[ProfileVector],
    competitors: &[MultiTransversal],
) -> bool {
    for other in competitors {
        if ordering.is_empty() {
            continue;
        }
        let first = &ordering[0];
        if other.multiplicity(first) > 0 && i.multiplicity(first) < other.multiplicity(first) {
            return false;
        }
        for ell in 1..ordering.len() {
            let prefix_tight = ordering[..ell].iter().all(|v| {
                let om = other.multiplicity(v);
                om > 0 && om == i.multiplicity(v)
            });
            if !prefix_tight {
                break;
            }
            if i.multiplicity(&ordering[ell]) < other.multiplicity(&ordering[ell]) {
                return false;
            }
        }
    }
    true
}

/// Searches for a support ordering witnessing that `i` is lexicographically
/// maximal among the multisets enumerated for `(p, g)`: the first support
/// element dominates every competitor carrying it, and whenever a competitor
/// agrees on a prefix it is dominated on the next element.
///
/// A greedy ordering (multiplicity descending, then lexicographic) is tried
/// first, then all support orderings.
pub fn lem_ordering(
    i: &MultiTransversal,
    p: &ParamSet,
    g: &MultiplicityConstraint,
) -> Result<Option<Vec<ProfileVector>>> {
    if !crate::transversal::check_transversal(i, p).ok() || !constraint_ok_multiset(i, g) {
        return Err(Error::InvalidParameter(
            "multiset is not in the constrained transversal class".into(),
        ));
    }
    let competitors = enumerate_transversals(p, g, false)?;
    let mut greedy: Vec<ProfileVector> = i.support().cloned().collect();
    greedy.sort_by(|a, b| {
        i.multiplicity(b)
            .cmp(&i.multiplicity(a))
            .then_with(|| a.cmp(b))
    });
    if lem_ordering_works(i, &greedy, &competitors) {
        return Ok(Some(greedy));
    }
    let support: Vec<ProfileVector> = i.support().cloned().collect();
    let s = support.len();
    for perm in support.into_iter().permutations(s) {
        if lem_ordering_works(i, &perm, &competitors) {
            return Ok(Some(perm));
        }
    }
    Ok(None)
}

/// Exact feasibility of `Σ_j λ_j columns[j] = target, λ ≥ 0, Σ λ_j = 1`,
/// solved by a phase-one simplex over the rationals with Bland's rule.
fn convex_feasibility(target: &[Rational], columns: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let rows = target.len() + 1;
    let n = columns.len();
    let width = n + rows + 1;
    let rhs = width - 1;
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for (j, col) in columns.iter().enumerate() {
                row[j] = if i < target.len() {
                    col[i].clone()
                } else {
                    Rational::one()
                };
            }
            row[n + i] = Rational::one();
            row[rhs] = if i < target.len() {
                target[i].clone()
            } else {
                Rational::one()
            };
            row
        })
        .collect();

    // Right sides are non-negative, so the artificial basis is feasible;
    // minimize the sum of artificials.
    let mut basis: Vec<usize> = (n..n + rows).collect();
    let mut cost = vec![Rational::zero(); width];
    for j in (0..n).chain([rhs]) {
        let mut column_sum = Rational::zero();
        for row in tab.iter() {
            column_sum += &row[j];
        }
        cost[j] = -column_sum;
    }

    loop {
        // Bland's rule: lowest-index entering and leaving variables.
        let Some(enter) = (0..n + rows).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[rhs] / &row[enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave?;
        let pivot = tab[leave][enter].clone();
        for x in tab[leave].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..rows {
            if i != leave && !tab[i][enter].is_zero() {
                let factor = tab[i][enter].clone();
                for j in 0..width {
                    let delta = &factor * &tab[leave][j];
                    tab[i][j] -= delta;
                }
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for j in 0..width {
                let delta = &factor * &tab[leave][j];
                cost[j] -= delta;
            }
        }
        basis[leave] = enter;
    }

    // The objective is Σ artificials = −cost[rhs]; feasible iff zero.
    if !cost[rhs].is_zero() {
        return None;
    }
    let mut lambda = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            lambda[b] = tab[i][rhs].clone();
        }
    }
    Some(lambda)
}

/// Exact non-negative coefficients summing to 1 with
/// `Σ λ_u · candidates[u] = target`, or `None` when no such combination
/// exists.
pub fn convex_decomposition(
    target: &ProfileMatrix,
    candidates: &[ProfileMatrix],
) -> Option<Vec<Rational>> {
    let t: Vec<Rational> = target
        .dense()
        .into_iter()
        .map(|c| Rational::from_integer(BigInt::from(c)))
        .collect();
    let cols: Vec<Vec<Rational>> = candidates
        .iter()
        .map(|c| {
            assert_eq!(c.dims(), target.dims(), "candidate on a different box");
            c.dense()
                .into_iter()
                .map(|x| Rational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    convex_feasibility(&t, &cols)
}

/// The enumerated candidate multisets with their binomial-weighted matrices
/// and whether each matrix is an extreme point of the candidate hull
/// (i.e. not an exact convex combination of the other candidates).
pub fn extreme_candidates(
    p: &ParamSet,
    g: &MultiplicityConstraint,
) -> Result<Vec<(MultiTransversal, ProfileMatrix, bool)>> {
    let cands = enumerate_transversals(p, g, false)?;
    let mats: Vec<ProfileMatrix> = cands.iter().map(s_matrix).collect();
    let mut out = Vec::with_capacity(cands.len());
    for (u, (cand, mat)) in cands.into_iter().zip(mats.iter()).enumerate() {
        let others: Vec<ProfileMatrix> = mats
            .iter()
            .enumerate()
            .filter(|&(w, _)| w != u)
            .map(|(_, m)| m.clone())
            .collect();
        let extreme = convex_decomposition(mat, &others).is_none();
        out.push((cand, mat.clone(), extreme));
    }
    Ok(out)
}

/// The extreme points of the hull of candidate matrices, in lexicographic
/// candidate order.
pub fn extreme_points(p: &ParamSet, g: &MultiplicityConstraint) -> Result<Vec<ProfileMatrix>> {
    Ok(extreme_candidates(p, g)?
        .into_iter()
        .filter(|(_, _, extreme)| *extreme)
        .map(|(_, mat, _)| mat)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sperner::{check_sperner, profile_matrix, realize_homogeneous};

    fn dims(n: &[usize]) -> Dimensions {
        Dimensions::new(n.to_vec()).unwrap()
    }

    fn pv(coords: &[usize], d: &Dimensions) -> ProfileVector {
        ProfileVector::new(coords.to_vec(), d).unwrap()
    }

    #[test]
    fn matrices_match_realization() {
        let d = dims(&[3, 3]);
        let i = MultiTransversal::from_entries(
            d.clone(),
            vec![(pv(&[1, 1], &d), 1), (pv(&[2, 0], &d), 3)],
        )
        .unwrap();
        let t = t_matrix(&i);
        assert_eq!(t.count(&pv(&[1, 1], &d)), 1);
        assert_eq!(t.count(&pv(&[2, 0], &d)), 3);

        let s = s_matrix(&i);
        assert_eq!(s.count(&pv(&[1, 1], &d)), 4);
        assert_eq!(s.count(&pv(&[2, 0], &d)), 3);

        // S(I) is the profile matrix of the homogeneous realization.
        let g = GroundSet::new(vec![2, 2]).unwrap();
        let f = realize_homogeneous(&i, &g).unwrap();
        assert_eq!(profile_matrix(&f), s);

        let empty = MultiTransversal::new(d);
        assert_eq!(t_matrix(&empty).total(), 0);
        assert_eq!(s_matrix(&empty).total(), 0);
    }

    #[test]
    fn initial_family_examples() {
        let g = GroundSet::new(vec![2, 1]).unwrap();
        let i = MultiTransversal::from_vectors(g.dims(), vec![vec![1, 0]]).unwrap();
        let id = ProductPermutation::identity(&g);
        let f = initial_family(&i, &id, &g).unwrap();
        assert_eq!(f.size(), 1);
        assert_eq!(f.support().next().unwrap().part(0), &[0]);

        let swapped = ProductPermutation::new(vec![vec![1, 0], vec![0]], &g).unwrap();
        let f = initial_family(&i, &swapped, &g).unwrap();
        assert_eq!(f.support().next().unwrap().part(0), &[1]);

        let empty = MultiTransversal::new(g.dims());
        assert!(initial_family(&empty, &id, &g).unwrap().is_empty());

        // The initial family's profile matrix is T(I) and it is invariant
        // under the initial restriction.
        let i2 = MultiTransversal::from_vectors(g.dims(), vec![vec![1, 0], vec![2, 1]]).unwrap();
        let f2 = initial_family(&i2, &id, &g).unwrap();
        assert_eq!(profile_matrix(&f2), t_matrix(&i2));
        assert_eq!(initial_restriction(&f2, &id), f2);
    }

    #[test]
    fn constraint_modes() {
        let d = dims(&[2, 2]);
        let simple = MultiplicityConstraint::simplicity(&d);
        let diag = MultiTransversal::from_vectors(d.clone(), vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert!(constraint_ok_multiset(&diag, &simple));
        let doubled =
            MultiTransversal::from_entries(d.clone(), vec![(pv(&[0, 0], &d), 2)]).unwrap();
        assert!(!constraint_ok_multiset(&doubled, &simple));
        assert!(constraint_ok_multiset(
            &doubled,
            &MultiplicityConstraint::none()
        ));

        // Zero cap with an all-ones row accepts only the empty multiset.
        let all_ones = MultiplicityConstraint {
            rows: vec![CapRow {
                cap: 0,
                coeffs: d.profiles().map(|v| (v, 1u64)).collect(),
            }],
        };
        assert!(constraint_ok_multiset(
            &MultiTransversal::new(d.clone()),
            &all_ones
        ));
        assert!(!constraint_ok_multiset(&diag, &all_ones));

        // Family mode measures the max multiplicity per profile class.
        let g = GroundSet::new(vec![1, 1]).unwrap();
        let f = realize_homogeneous(
            &MultiTransversal::from_vectors(g.dims(), vec![vec![0, 0], vec![1, 1]]).unwrap(),
            &g,
        )
        .unwrap();
        assert!(constraint_ok_family(
            &f,
            &MultiplicityConstraint::simplicity(&g.dims())
        ));
    }

    #[test]
    fn enumerate_simple_2x2() {
        let d = dims(&[2, 2]);
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let all =
            enumerate_transversals(&p, &MultiplicityConstraint::simplicity(&d), true).unwrap();
        // Empty, four singletons and the two diagonals.
        assert_eq!(all.len(), 7);
        assert!(all.iter().any(|t| t.is_empty()));
        assert_eq!(all.iter().filter(|t| t.size() == 1).count(), 4);
        assert_eq!(all.iter().filter(|t| t.size() == 2).count(), 2);
    }

    #[test]
    fn enumerate_single_column() {
        let d = dims(&[3]);
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let all =
            enumerate_transversals(&p, &MultiplicityConstraint::simplicity(&d), true).unwrap();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn enumerate_unconstrained_includes_box() {
        let d = dims(&[2, 2]);
        let p = ParamSet::uniform(d.clone(), 1, 2).unwrap();
        let all = enumerate_transversals(&p, &MultiplicityConstraint::none(), false).unwrap();
        let full =
            MultiTransversal::from_vectors(d.clone(), d.profiles().map(|v| v.coords().to_vec()))
                .unwrap();
        assert!(all.contains(&full));
    }

    #[test]
    fn extreme_points_single_part() {
        let d = dims(&[3]);
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let points = extreme_points(&p, &MultiplicityConstraint::simplicity(&d)).unwrap();
        let dense: Vec<Vec<u64>> = points.iter().map(|m| m.dense()).collect();
        assert_eq!(
            dense,
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 2, 0], vec![1, 0, 0]]
        );
    }

    #[test]
    fn extreme_points_simple_all_extreme() {
        let d = dims(&[2, 2]);
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let detail = extreme_candidates(&p, &MultiplicityConstraint::simplicity(&d)).unwrap();
        assert_eq!(detail.len(), 7);
        assert!(detail.iter().all(|(_, _, extreme)| *extreme));
    }

    #[test]
    fn multiplicity_cap_creates_midpoints() {
        // One part of size 1: candidates ∅, {0}, {1}, {0²}, {1²}, {0,1}.
        // The midpoints (1,0), (0,1), (1,1) are convex combinations.
        let d = dims(&[2]);
        let p = ParamSet::uniform(d.clone(), 1, 2).unwrap();
        let cap2 = MultiplicityConstraint::uniform_cap(&d, 2);
        let detail = extreme_candidates(&p, &cap2).unwrap();
        assert_eq!(detail.len(), 6);
        let extremes: Vec<Vec<u64>> = detail
            .iter()
            .filter(|(_, _, e)| *e)
            .map(|(_, m, _)| m.dense())
            .collect();
        assert_eq!(extremes, vec![vec![0, 0], vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn decomposition_examples() {
        let d = dims(&[2]);
        let a = ProfileMatrix::from_counts(d.clone(), vec![(pv(&[0], &d), 2)]).unwrap();
        let b = ProfileMatrix::from_counts(d.clone(), vec![(pv(&[1], &d), 2)]).unwrap();

        // A target equal to one candidate gets a unit coefficient.
        let lam = convex_decomposition(&a, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(lam, vec![Rational::one(), Rational::zero()]);

        // The average of two candidates splits evenly.
        let mid = ProfileMatrix::from_counts(d.clone(), vec![(pv(&[0], &d), 1), (pv(&[1], &d), 1)])
            .unwrap();
        let lam = convex_decomposition(&mid, &[a.clone(), b.clone()]).unwrap();
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(lam, vec![half.clone(), half]);

        // An unreachable target is infeasible.
        let heavy = ProfileMatrix::from_counts(d.clone(), vec![(pv(&[0], &d), 3)]).unwrap();
        assert!(convex_decomposition(&heavy, &[a, b]).is_none());
    }

    #[test]
    fn lem_examples() {
        let d = dims(&[2]);
        let p = ParamSet::uniform(d.clone(), 1, 2).unwrap();
        let cap2 = MultiplicityConstraint::uniform_cap(&d, 2);

        let doubled = MultiTransversal::from_entries(d.clone(), vec![(pv(&[0], &d), 2)]).unwrap();
        assert!(lem_ordering(&doubled, &p, &cap2).unwrap().is_some());

        let single = MultiTransversal::from_vectors(d.clone(), vec![vec![0]]).unwrap();
        assert!(lem_ordering(&single, &p, &cap2).unwrap().is_none());

        let empty = MultiTransversal::new(d.clone());
        assert_eq!(lem_ordering(&empty, &p, &cap2).unwrap(), Some(vec![]));
    }

    #[test]
    fn lem_simple_always() {
        let d = dims(&[2, 2]);
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let simple = MultiplicityConstraint::simplicity(&d);
        for t in enumerate_transversals(&p, &simple, true).unwrap() {
            assert!(
                lem_ordering(&t, &p, &simple).unwrap().is_some(),
                "simple multiset {t} must be lexicographically maximal"
            );
        }
    }

    #[test]
    fn lem_implies_extreme() {
        // Cross-check the ordering-based and feasibility-based routes.
        let d = dims(&[2]);
        let p = ParamSet::uniform(d.clone(), 1, 2).unwrap();
        let cap2 = MultiplicityConstraint::uniform_cap(&d, 2);
        for (cand, _, extreme) in extreme_candidates(&p, &cap2).unwrap() {
            if lem_ordering(&cand, &p, &cap2).unwrap().is_some() {
                assert!(extreme, "{cand} is maximal but not extreme");
            }
        }
    }

    #[test]
    fn initial_family_preserves_constraints() {
        // The initial family satisfies the family constraint exactly when
        // the multiset satisfies the multiset constraint.
        let g = GroundSet::new(vec![1, 2]).unwrap();
        let d = g.dims();
        let p = ParamSet::uniform(d.clone(), 1, 2).unwrap();
        let cap1 = MultiplicityConstraint::simplicity(&d);
        let id = ProductPermutation::identity(&g);
        for t in
            enumerate_transversals(&p, &MultiplicityConstraint::uniform_cap(&d, 2), false).unwrap()
        {
            let f = initial_family(&t, &id, &g).unwrap();
            assert_eq!(
                constraint_ok_family(&f, &cap1),
                constraint_ok_multiset(&t, &cap1),
                "multiset {t}"
            );
        }
    }

    #[test]
    fn initial_profile_set_is_permutation_invariant() {
        // The set of profile matrices of initial restrictions does not
        // depend on the product-permutation; checked over every multi-family
        // with multiplicities ≤ 2 on the (1,2) ground set.
        let g = GroundSet::new(vec![1, 2]).unwrap();
        let d = g.dims();
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let cap2 = MultiplicityConstraint::uniform_cap(&d, 2);

        let subsets: Vec<Vec<Vec<usize>>> = cartesian(&[g.part_subsets(0), g.part_subsets(1)]);
        let perms = ProductPermutation::all(&g);
        let mut profile_sets: Vec<std::collections::BTreeSet<Vec<u64>>> =
            vec![Default::default(); perms.len()];

        let mut mults = vec![0u64; subsets.len()];
        loop {
            let mut f = SetFamily::new(g.clone());
            for (raw, &mult) in subsets.iter().zip(&mults) {
                if mult > 0 {
                    f.add(
                        crate::sperner::PartedSet::new(raw.clone(), &g).unwrap(),
                        mult,
                    );
                }
            }
            if check_sperner(&f, &p).ok() && constraint_ok_family(&f, &cap2) {
                for (slot, perm) in perms.iter().enumerate() {
                    let h = initial_restriction(&f, perm);
                    profile_sets[slot].insert(profile_matrix(&h).dense());
                }
            }
            let mut pos = 0;
            loop {
                if pos == mults.len() {
                    for set in &profile_sets[1..] {
                        assert_eq!(set, &profile_sets[0]);
                    }
                    return;
                }
                mults[pos] += 1;
                if mults[pos] <= 2 {
                    break;
                }
                mults[pos] = 0;
                pos += 1;
            }
        }
    }
}
