//! Shared domain types: the profile box, multisets over it, parameter sets
//! and exact rational plumbing.
//!
//! Conventions used throughout the crate:
//!
//! * parts and coordinates are 0-based, also in files and reports;
//! * a k-subset `P ⊆ {0,…,M-1}` is a strictly increasing `Vec<usize>`;
//! * multiplicities are `u64`, weights are arbitrary-precision integers and
//!   every real-valued parameter is an exact [`Rational`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used for window bounds, BLYM sums and coefficients.
pub type Rational = num_rational::BigRational;

/// Shorthand for a small integer rational.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Fractional part `x - ⌊x⌋`, always in `[0, 1)`.
pub fn frac_part(x: &Rational) -> Rational {
    x - x.floor()
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// All k-element subsets of `{0,…,m-1}` as sorted index lists, in
/// lexicographic order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..m).combinations(k).collect()
}

/// Sizes of the coordinate box `π_M = ∏_j {0,…,n_j−1}`.
///
/// When a partitioned ground set is attached, the part sizes are
/// `m_j = n_j − 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimensions {
    n: Vec<usize>,
}

impl Dimensions {
    /// Box with the given per-coordinate sizes; every `n_j ≥ 1`, `M ≥ 1`.
    pub fn new(n: Vec<usize>) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::InvalidParameter(
                "dimensions need at least one coordinate".into(),
            ));
        }
        if let Some(j) = n.iter().position(|&nj| nj == 0) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {j} has size 0; every n_j must be >= 1"
            )));
        }
        Ok(Dimensions { n })
    }

    /// Box attached to a ground set with part sizes `m` (so `n_j = m_j + 1`).
    pub fn from_part_sizes(m: &[usize]) -> Result<Self> {
        Dimensions::new(m.iter().map(|&mj| mj + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sizes(&self) -> &[usize] {
        &self.n
    }

    pub fn size(&self, j: usize) -> usize {
        self.n[j]
    }

    /// Part sizes `m_j = n_j − 1` of the attached ground set.
    pub fn part_sizes(&self) -> Vec<usize> {
        self.n.iter().map(|&nj| nj - 1).collect()
    }

    /// Number of cells `∏ n_j` of the box.
    pub fn cell_count(&self) -> u64 {
        self.n.iter().map(|&nj| nj as u64).product()
    }

    /// `lcm(n_1,…,n_M)`.
    pub fn lcm(&self) -> u64 {
        self.n.iter().fold(1u64, |acc, &nj| acc.lcm(&(nj as u64)))
    }

    /// All profile vectors of the box, exactly once, in lexicographic order.
    pub fn profiles(&self) -> ProfileIter {
        ProfileIter {
            dims: self.clone(),
            next: Some(vec![0; self.n.len()]),
        }
    }

    /// All assignments over the coordinates listed in `support`, in
    /// lexicographic order; used to enumerate fixings of a coordinate subset.
    pub fn assignments(&self, support: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &j in support {
            let mut next = Vec::with_capacity(out.len() * self.n[j]);
            for prefix in &out {
                for v in 0..self.n[j] {
                    let mut row = prefix.clone();
                    row.push(v);
                    next.push(row);
                }
            }
            out = next;
        }
        out
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        if coords.len() != self.n.len() {
            return Err(Error::ShapeMismatch(format!(
                "profile vector has {} coordinates, box has {}",
                coords.len(),
                self.n.len()
            )));
        }
        for (j, (&c, &nj)) in coords.iter().zip(&self.n).enumerate() {
            if c >= nj {
                return Err(Error::CoordOutOfRange {
                    part: j,
                    value: c,
                    limit: nj,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Dimensions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.n.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Iterator over the box in lexicographic order.
pub struct ProfileIter {
    dims: Dimensions,
    next: Option<Vec<usize>>,
}

impl Iterator for ProfileIter {
    type Item = ProfileVector;

    fn next(&mut self) -> Option<ProfileVector> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut j = succ.len();
        loop {
            if j == 0 {
                self.next = None;
                break;
            }
            j -= 1;
            succ[j] += 1;
            if succ[j] < self.dims.n[j] {
                self.next = Some(succ);
                break;
            }
            succ[j] = 0;
        }
        Some(ProfileVector { coords: current })
    }
}

/// A point of the box: one coordinate per part, `coords[j] ∈ {0,…,n_j−1}`.
///
/// Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileVector {
    coords: Vec<usize>,
}

impl ProfileVector {
    pub fn new(coords: Vec<usize>, dims: &Dimensions) -> Result<Self> {
        dims.check_coords(&coords)?;
        Ok(ProfileVector { coords })
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> usize {
        self.coords[j]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates restricted to `support`, in the order listed there.
    pub fn project(&self, support: &[usize]) -> Vec<usize> {
        support.iter().map(|&j| self.coords[j]).collect()
    }
}

impl fmt::Display for ProfileVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weight `W(t) = ∏_j C(m_j, t_j)` of a profile vector over part sizes `m`.
pub fn weight(t: &ProfileVector, m: &[usize]) -> Result<BigUint> {
    if t.len() != m.len() {
        return Err(Error::ShapeMismatch(format!(
            "weight: vector has {} coordinates, {} part sizes given",
            t.len(),
            m.len()
        )));
    }
    let mut acc = BigUint::one();
    for (j, (&tj, &mj)) in t.coords().iter().zip(m).enumerate() {
        if tj > mj {
            return Err(Error::CoordOutOfRange {
                part: j,
                value: tj,
                limit: mj + 1,
            });
        }
        acc *= binomial(mj, tj);
    }
    Ok(acc)
}

/// Exact fractional part of `α + Σ_j v_j / n_j`, in `[0, 1)`.
pub fn frac_sum(v: &ProfileVector, dims: &Dimensions, alpha: &Rational) -> Rational {
    let mut acc = alpha.clone();
    for (&vj, &nj) in v.coords().iter().zip(dims.sizes()) {
        acc += Rational::new(BigInt::from(vj), BigInt::from(nj));
    }
    frac_part(&acc)
}

/// Scaled residues of the box: returns `(N, r)` with `N = lcm(n)` and
/// `r[i] = N · frac_sum(v_i, dims, 0)` for the i-th profile vector in
/// lexicographic order. Everything stays in integer arithmetic; the identity
/// `r[i]/N = frac_sum(v_i)` is checked by tests.
pub fn frac_residues(dims: &Dimensions) -> (u64, Vec<u64>) {
    let n_lcm = dims.lcm();
    let steps: Vec<u64> = dims.sizes().iter().map(|&nj| n_lcm / nj as u64).collect();
    let mut residues = Vec::with_capacity(dims.cell_count() as usize);
    for v in dims.profiles() {
        let mut acc: u64 = 0;
        for (j, &vj) in v.coords().iter().enumerate() {
            acc = (acc + vj as u64 * steps[j]) % n_lcm;
        }
        residues.push(acc);
    }
    (n_lcm, residues)
}

/// Finite multiset over the box: profile vector → positive multiplicity.
///
/// Absent vectors have multiplicity 0; stored keys always have multiplicity
/// at least 1 and are valid for the attached dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTransversal {
    dims: Dimensions,
    entries: BTreeMap<ProfileVector, u64>,
}

impl MultiTransversal {
    pub fn new(dims: Dimensions) -> Self {
        MultiTransversal {
            dims,
            entries: BTreeMap::new(),
        }
    }

    /// Builds from `(vector, multiplicity)` pairs, adding multiplicities of
    /// repeated vectors and dropping zeros.
    pub fn from_entries<I>(dims: Dimensions, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ProfileVector, u64)>,
    {
        let mut t = MultiTransversal::new(dims);
        for (v, mult) in entries {
            t.add(v, mult)?;
        }
        Ok(t)
    }

    /// Builds a simple multiset (all multiplicities 1) from raw coordinate
    /// lists.
    pub fn from_vectors<I>(dims: Dimensions, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut t = MultiTransversal::new(dims);
        for coords in vectors {
            let v = ProfileVector::new(coords, &t.dims)?;
            t.add(v, 1)?;
        }
        Ok(t)
    }

    /// Adds `mult` copies of `v`.
    pub fn add(&mut self, v: ProfileVector, mult: u64) -> Result<()> {
        self.dims.check_coords(v.coords())?;
        if mult > 0 {
            *self.entries.entry(v).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn dims(&self) -> &Dimensions {
        &self.dims
    }

    pub fn multiplicity(&self, v: &ProfileVector) -> u64 {
        self.entries.get(v).copied().unwrap_or(0)
    }

    /// Total size `Σ_v #[v]`, counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Number of distinct vectors in the support.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True iff every multiplicity is 1.
    pub fn is_simple(&self) -> bool {
        self.entries.values().all(|&m| m == 1)
    }

    /// Entries in lexicographic vector order.
    pub fn entries(&self) -> impl Iterator<Item = (&ProfileVector, u64)> {
        self.entries.iter().map(|(v, &m)| (v, m))
    }

    /// Support in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = &ProfileVector> {
        self.entries.keys()
    }
}

impl fmt::Display for MultiTransversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, m)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if m == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{m}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Packing parameters: the box, the level `k` and one bound `L_P` for every
/// k-subset `P` of the coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    dims: Dimensions,
    k: usize,
    bounds: BTreeMap<Vec<usize>, u64>,
}

impl ParamSet {
    /// Validates that `bounds` assigns `1 ≤ L_P ≤ ∏_{i∈P} n_i` to every
    /// k-subset `P`, with no extras.
    pub fn new(dims: Dimensions, k: usize, bounds: BTreeMap<Vec<usize>, u64>) -> Result<Self> {
        let m = dims.len();
        if k == 0 || k > m {
            return Err(Error::InvalidParameter(format!(
                "level k={k} must lie in 1..={m}"
            )));
        }
        let expected = k_subsets(m, k);
        if bounds.len() != expected.len() {
            return Err(Error::InvalidParameter(format!(
                "expected bounds for {} subsets, got {}",
                expected.len(),
                bounds.len()
            )));
        }
        for p in &expected {
            match bounds.get(p) {
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "missing bound for subset {p:?}"
                    )))
                }
                Some(&l) => {
                    let cap: u64 = p.iter().map(|&i| dims.size(i) as u64).product();
                    if l == 0 || l > cap {
                        return Err(Error::InvalidParameter(format!(
                            "bound {l} for subset {p:?} outside 1..={cap}"
                        )));
                    }
                }
            }
        }
        Ok(ParamSet { dims, k, bounds })
    }

    /// Same bound for every k-subset.
    pub fn uniform(dims: Dimensions, k: usize, l: u64) -> Result<Self> {
        let bounds = k_subsets(dims.len(), k).into_iter().map(|p| (p, l)).collect();
        ParamSet::new(dims, k, bounds)
    }

    pub fn dims(&self) -> &Dimensions {
        &self.dims
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.dims.len()
    }

    /// The k-subsets in lexicographic order.
    pub fn subsets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.bounds.keys()
    }

    pub fn bound(&self, p: &[usize]) -> u64 {
        self.bounds[p]
    }

    pub fn bounds(&self) -> impl Iterator<Item = (&Vec<usize>, u64)> {
        self.bounds.iter().map(|(p, &l)| (p, l))
    }

    /// `K_P = ∏_{i∈P} n_i`.
    pub fn k_product(&self, p: &[usize]) -> u64 {
        p.iter().map(|&i| self.dims.size(i) as u64).product()
    }

    /// `N_P = lcm{n_i : i∈P}`.
    pub fn k_lcm(&self, p: &[usize]) -> u64 {
        p.iter().fold(1u64, |acc, &i| acc.lcm(&(self.dims.size(i) as u64)))
    }

    /// Complement `{0,…,M-1} \ P`, sorted.
    pub fn complement(&self, p: &[usize]) -> Vec<usize> {
        (0..self.m()).filter(|j| !p.contains(j)).collect()
    }

    /// Size bound `L_P · ∏_{j∉P} n_j` implied by the packing inequalities.
    pub fn size_bound(&self, p: &[usize]) -> u64 {
        self.bound(p)
            * self
                .complement(p)
                .iter()
                .map(|&j| self.dims.size(j) as u64)
                .product::<u64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn dims(n: &[usize]) -> Dimensions {
        Dimensions::new(n.to_vec()).unwrap()
    }

    fn pv(coords: &[usize], d: &Dimensions) -> ProfileVector {
        ProfileVector::new(coords.to_vec(), d).unwrap()
    }

    #[test]
    fn profiles_single_cell() {
        let d = dims(&[1]);
        let all: Vec<_> = d.profiles().collect();
        assert_eq!(all, vec![pv(&[0], &d)]);
    }

    #[test]
    fn profiles_lexicographic_2x2() {
        let d = dims(&[2, 2]);
        let all: Vec<Vec<usize>> = d.profiles().map(|v| v.coords().to_vec()).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn profiles_2x3_endpoints() {
        let d = dims(&[2, 3]);
        let all: Vec<_> = d.profiles().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].coords(), &[0, 0]);
        assert_eq!(all[5].coords(), &[1, 2]);
    }

    #[test]
    fn profiles_no_duplicates() {
        let d = dims(&[3, 2, 4]);
        let all: Vec<_> = d.profiles().collect();
        assert_eq!(all.len() as u64, d.cell_count());
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn weight_examples() {
        let d = dims(&[3, 3]);
        let m = [2, 2];
        assert_eq!(weight(&pv(&[0, 0], &d), &m).unwrap(), BigUint::from(1u32));
        assert_eq!(weight(&pv(&[1, 1], &d), &m).unwrap(), BigUint::from(4u32));
        assert_eq!(weight(&pv(&[1, 2], &d), &m).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn weight_out_of_range() {
        let d = dims(&[4]);
        let err = weight(&pv(&[3], &d), &[2]);
        assert!(matches!(err, Err(Error::CoordOutOfRange { .. })));
    }

    #[test]
    fn frac_sum_examples() {
        let zero = Rational::zero();
        let d23 = dims(&[2, 3]);
        assert_eq!(frac_sum(&pv(&[0, 0], &d23), &d23, &zero), Rational::zero());
        assert_eq!(frac_sum(&pv(&[1, 2], &d23), &d23, &zero), rational(1, 6));
        let d2 = dims(&[2]);
        assert_eq!(
            frac_sum(&pv(&[1], &d2), &d2, &rational(1, 2)),
            Rational::zero()
        );
    }

    #[test]
    fn residues_match_frac_sum() {
        for n in [vec![2, 3], vec![4], vec![2, 4, 8], vec![3, 3, 2]] {
            let d = dims(&n);
            let (den, res) = frac_residues(&d);
            for (v, r) in d.profiles().zip(res) {
                let expect = frac_sum(&v, &d, &Rational::zero());
                assert_eq!(
                    Rational::new(BigInt::from(r), BigInt::from(den)),
                    expect,
                    "cell {v}"
                );
            }
        }
    }

    #[test]
    fn paramset_rejects_bad_bounds() {
        let d = dims(&[2, 3]);
        assert!(ParamSet::uniform(d.clone(), 1, 0).is_err());
        assert!(ParamSet::uniform(d.clone(), 0, 1).is_err());
        assert!(ParamSet::uniform(d.clone(), 3, 1).is_err());
        // L exceeding the subset product is rejected.
        assert!(ParamSet::uniform(d.clone(), 1, 4).is_err());
        assert!(ParamSet::uniform(d, 1, 2).is_ok());
    }

    #[test]
    fn paramset_requires_every_subset() {
        let d = dims(&[2, 2]);
        let mut bounds = BTreeMap::new();
        bounds.insert(vec![0], 1u64);
        assert!(ParamSet::new(d, 1, bounds).is_err());
    }

    #[test]
    fn multitransversal_merges_and_drops_zero() {
        let d = dims(&[2, 2]);
        let t = MultiTransversal::from_entries(
            d.clone(),
            vec![
                (pv(&[0, 0], &d), 1),
                (pv(&[0, 0], &d), 2),
                (pv(&[1, 1], &d), 0),
            ],
        )
        .unwrap();
        assert_eq!(t.multiplicity(&pv(&[0, 0], &d)), 3);
        assert_eq!(t.multiplicity(&pv(&[1, 1], &d)), 0);
        assert_eq!(t.size(), 3);
        assert!(!t.is_simple());
    }

    proptest! {
        // Weight is symmetric under t_j ↦ m_j − t_j and multiplies across
        // coordinates.
        #[test]
        fn weight_symmetry_and_product(parts in proptest::collection::vec((1usize..6, 0usize..6), 1..4)) {
            let m: Vec<usize> = parts.iter().map(|&(mj, _)| mj).collect();
            let t: Vec<usize> = parts.iter().map(|&(mj, tj)| tj.min(mj)).collect();
            let d = Dimensions::from_part_sizes(&m).unwrap();
            let v = ProfileVector::new(t.clone(), &d).unwrap();
            let w = weight(&v, &m).unwrap();

            let reflected: Vec<usize> = m.iter().zip(&t).map(|(&mj, &tj)| mj - tj).collect();
            let rv = ProfileVector::new(reflected, &d).unwrap();
            prop_assert_eq!(weight(&rv, &m).unwrap(), w.clone());

            let product: BigUint = t.iter().zip(&m)
                .map(|(&tj, &mj)| binomial(mj, tj))
                .product();
            prop_assert_eq!(w, product);
        }

        // {{c} + {d}} = {c + d}: adding coordinates modulo n_j changes the
        // fractional sum by an integer.
        #[test]
        fn frac_sum_additivity(
            n in proptest::collection::vec(1usize..7, 1..4),
            seed_v in proptest::collection::vec(0usize..7, 4),
            seed_w in proptest::collection::vec(0usize..7, 4),
            alpha_num in 0i64..12,
        ) {
            let d = Dimensions::new(n.clone()).unwrap();
            let v: Vec<usize> = n.iter().zip(&seed_v).map(|(&nj, &s)| s % nj).collect();
            let w: Vec<usize> = n.iter().zip(&seed_w).map(|(&nj, &s)| s % nj).collect();
            let vw: Vec<usize> = n.iter().zip(v.iter().zip(&w))
                .map(|(&nj, (&a, &b))| (a + b) % nj)
                .collect();
            let alpha = rational(alpha_num, 12);
            let pv = ProfileVector::new(v, &d).unwrap();
            let pw = ProfileVector::new(w, &d).unwrap();
            let pvw = ProfileVector::new(vw, &d).unwrap();
            let lhs = frac_part(&(frac_sum(&pv, &d, &alpha) + frac_sum(&pw, &d, &Rational::zero())));
            let rhs = frac_sum(&pvw, &d, &alpha);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn binomial_matches_f64(n in 0usize..20, k in 0usize..20) {
            let b = binomial(n, k).to_f64().unwrap();
            let mut expect = 1f64;
            if k > n {
                expect = 0.0;
            } else {
                for i in 0..k {
                    expect = expect * (n - i) as f64 / (i + 1) as f64;
                }
            }
            prop_assert!((b - expect).abs() < 1e-6 * expect.max(1.0));
        }
    }
}
