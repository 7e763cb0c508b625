//! Constructions of full k-dimensional transversals and simple MOAs from
//! fractional parts, plus closure operations (partitions of the box, linear
//! combinations, tensor products, interval unions).
//!
//! The basic device is the window construction: fix a half-open window
//! `[β, β+μ) ⊆ [0,1)` and keep the cells whose scaled coordinate sum
//! `Σ_j v_j/n_j` has fractional part inside the window. Engel's lemma and its
//! generalization control how many cells land in any window, which yields
//! the packing inequalities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::domain::{
    frac_part, frac_residues, k_subsets, Dimensions, MultiTransversal, ParamSet,
    ProfileVector, Rational,
};
use crate::error::{Error, Result};
use crate::transversal::{check_transversal, constant_ratio, fullness};

/// Half-open window `[beta, beta+mu) ⊆ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    beta: Rational,
    mu: Rational,
}

impl Window {
    pub fn new(beta: Rational, mu: Rational) -> Result<Self> {
        if beta.is_negative() {
            return Err(Error::InvalidParameter(format!("window start {beta} < 0")));
        }
        if !mu.is_positive() {
            return Err(Error::InvalidParameter(format!("window width {mu} <= 0")));
        }
        if &beta + &mu > Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "window [{beta}, {beta}+{mu}) leaves [0,1)"
            )));
        }
        Ok(Window { beta, mu })
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.beta && *x < &self.beta + &self.mu
    }

    /// Integers `r` with `r/den` in the window, as an inclusive range.
    /// `beta ≤ r/den < beta+mu` iff `⌈beta·den⌉ ≤ r ≤ ⌈(beta+mu)·den⌉ − 1`.
    fn residue_range(&self, den: u64) -> (i128, i128) {
        let den_big = BigInt::from(den);
        let lo: BigInt = (&self.beta * &den_big).ceil().to_integer();
        let hi: BigInt = ((&self.beta + &self.mu) * &den_big).ceil().to_integer() - 1;
        (lo.to_i128().unwrap(), hi.to_i128().unwrap())
    }
}

/// Number of `i ∈ {0,…,n−1}` with `frac(α + i/n)` inside the window.
/// Engel's lemma puts the value in `{⌊μn⌋, ⌈μn⌉}`.
pub fn engel_count(n: usize, alpha: &Rational, window: &Window) -> u64 {
    let n_big = BigInt::from(n);
    (0..n)
        .filter(|&i| {
            let x = alpha + Rational::new(BigInt::from(i), n_big.clone());
            window.contains(&frac_part(&x))
        })
        .count() as u64
}

/// Window construction: the simple multiset of all cells whose fractional
/// coordinate sum lands in the window.
pub fn fractional_construction(dims: &Dimensions, window: &Window) -> MultiTransversal {
    let (den, residues) = frac_residues(dims);
    let (lo, hi) = window.residue_range(den);
    let mut t = MultiTransversal::new(dims.clone());
    for (v, r) in dims.profiles().zip(residues) {
        let r = r as i128;
        if r >= lo && r <= hi {
            t.add(v, 1).expect("cells of the box are in range");
        }
    }
    t
}

/// Sufficient condition for the window construction of width `mu` to satisfy
/// every packing inequality: `ℓ_P · ⌈μ N_P⌉ ≤ L_P` for all k-subsets `P`,
/// where `K_P = ∏_{i∈P} n_i`, `N_P = lcm{n_i}` and `ℓ_P = K_P/N_P`.
pub fn window_admissible(p: &ParamSet, mu: &Rational) -> bool {
    window_violations(p, mu).is_empty()
}

/// The k-subsets at which the window condition fails.
pub fn window_violations(p: &ParamSet, mu: &Rational) -> Vec<Vec<usize>> {
    assert!(mu.is_positive(), "window width must be positive");
    let mut out = Vec::new();
    for (subset, bound) in p.bounds() {
        let k_prod = p.k_product(subset);
        let n_lcm = p.k_lcm(subset);
        let ell = k_prod / n_lcm;
        let ceil = (mu * BigInt::from(n_lcm)).ceil().to_integer();
        let lhs = BigInt::from(ell) * ceil;
        if lhs > BigInt::from(bound) {
            out.push(subset.clone());
        }
    }
    out
}

/// The widest admissible window width `μ* = min_P L_P / K_P`.
pub fn min_window(p: &ParamSet) -> Rational {
    p.bounds()
        .map(|(subset, bound)| {
            Rational::new(BigInt::from(bound), BigInt::from(p.k_product(subset)))
        })
        .min()
        .expect("parameter sets have at least one subset")
}

/// Builds the window construction at width `μ* = min_P L_P/K_P`; when the
/// window condition holds the result is a full transversal for `p`.
pub fn full_construction(p: &ParamSet, beta: &Rational) -> Result<MultiTransversal> {
    let mu = min_window(p);
    let violations = window_violations(p, &mu);
    if let Some(subset) = violations.first() {
        return Err(Error::WindowCondition {
            subset: subset.clone(),
            detail: format!("width {mu} does not fit the bound at this subset"),
        });
    }
    let window = Window::new(beta.clone(), mu)?;
    Ok(fractional_construction(p.dims(), &window))
}

/// Splits the box into `⌈1/μ₀⌉` disjoint window constructions covering
/// `[0,1)` left to right (the last window may be shorter). Requires the
/// window condition at width `μ₀`.
pub fn partition_box(p: &ParamSet, mu0: &Rational) -> Result<Vec<MultiTransversal>> {
    if !mu0.is_positive() || mu0 > &Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "partition width {mu0} outside (0,1]"
        )));
    }
    let violations = window_violations(p, mu0);
    if let Some(subset) = violations.first() {
        return Err(Error::WindowCondition {
            subset: subset.clone(),
            detail: format!("width {mu0} does not fit the bound at this subset"),
        });
    }
    let mut parts = Vec::new();
    let mut start = Rational::zero();
    while start < Rational::one() {
        let width = (Rational::one() - &start).min(mu0.clone());
        let window = Window::new(start.clone(), width.clone())?;
        parts.push(fractional_construction(p.dims(), &window));
        start += width;
    }
    Ok(parts)
}

/// Checks that the window construction at width `mu0` is a full transversal
/// for every admissible start `β ∈ [0, 1−μ₀]`.
///
/// Only starts on the grid of rationals with denominator
/// `D = lcm(n_1,…,n_M, den(μ₀))` are tested. This suffices: all fractional
/// coordinate sums are multiples of `1/lcm(n)`, so membership in
/// `[β, β+μ₀)` can only change when `β` or `β+μ₀` crosses such a multiple,
/// and all those crossing points lie on the grid. Every start therefore
/// selects the same cells as the nearest grid start below it.
pub fn full_for_all_starts(p: &ParamSet, mu0: &Rational) -> Result<bool> {
    if !mu0.is_positive() || mu0 > &Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "window width {mu0} outside (0,1]"
        )));
    }
    let d = BigInt::from(p.dims().lcm()).lcm(mu0.denom());
    let top = ((Rational::one() - mu0) * Rational::from_integer(d.clone()))
        .floor()
        .to_integer();
    let mut t = BigInt::zero();
    while t <= top {
        let beta = Rational::new(t.clone(), d.clone());
        let window = Window::new(beta, mu0.clone())?;
        let cells = fractional_construction(p.dims(), &window);
        if !check_transversal(&cells, p).ok() || !fullness(&cells, p)?.0 {
            return Ok(false);
        }
        t += 1;
    }
    Ok(true)
}

/// Parameter recipe from a chain of factors: `n_i = ∏_{t≤i} j_t`,
/// `μ = 1/q` for a divisor `q` of the k-th prefix product, and
/// `L_P = μ K_P`. The output always meets the window condition with
/// `μ N_P` integral, so the construction yields simple MOAs of strength
/// `M − k`.
pub fn recipe_from_factors(factors: &[usize], k: usize, q: usize) -> Result<(ParamSet, Rational)> {
    if factors.is_empty() || factors.contains(&0) {
        return Err(Error::InvalidParameter(
            "factor chain must be non-empty and positive".into(),
        ));
    }
    let m = factors.len();
    if k == 0 || k > m {
        return Err(Error::InvalidParameter(format!(
            "level k={k} must lie in 1..={m}"
        )));
    }
    let mut n = Vec::with_capacity(m);
    let mut acc = 1usize;
    for &j in factors {
        acc = acc
            .checked_mul(j)
            .ok_or_else(|| Error::ScaleGuard("factor chain overflows".into()))?;
        n.push(acc);
    }
    if q == 0 || n[k - 1] % q != 0 {
        return Err(Error::InvalidParameter(format!(
            "q={q} does not divide the k-th prefix product {}",
            n[k - 1]
        )));
    }
    let dims = Dimensions::new(n)?;
    let mut bounds = BTreeMap::new();
    for subset in k_subsets(m, k) {
        let k_prod: u64 = subset.iter().map(|&i| dims.size(i) as u64).product();
        bounds.insert(subset, k_prod / q as u64);
    }
    let p = ParamSet::new(dims, k, bounds)?;
    let mu = Rational::new(BigInt::one(), BigInt::from(q));
    Ok((p, mu))
}

/// Union-of-intervals construction. `starts` is an odd-length increasing
/// list `β_1 < … < β_{2Q+1}` with `β_{2Q+1} < β_1 + μ ≤ 1` and
/// `β_{2Q+1} ≤ 1 − μ`; the selected set is
///
/// ```text
/// 𝓘 = ⋃_{ℓ=1}^{Q} [β_{2ℓ−1}, β_{2ℓ})  ∪  [β_{2Q+1}, β_1+μ)
///     ∪ ⋃_{ℓ=1}^{Q} [β_{2ℓ}+μ, β_{2ℓ+1}+μ).
/// ```
///
/// Requires `μ N_P` integral for every k-subset; the bounds are
/// `L_P = μ K_P` and the result is a full transversal equal to the
/// alternating combination `Σ_ℓ (−1)^{ℓ+1} C(β_ℓ, μ)` of single windows.
pub fn interval_union_construction(
    dims: &Dimensions,
    k: usize,
    mu: &Rational,
    starts: &[Rational],
) -> Result<(MultiTransversal, ParamSet)> {
    if starts.is_empty() || starts.len() % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "need an odd number of interval starts, got {}",
            starts.len()
        )));
    }
    if !mu.is_positive() || mu > &Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "window width {mu} outside (0,1]"
        )));
    }
    for pair in starts.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::InvalidParameter(
                "interval starts must be strictly increasing".into(),
            ));
        }
    }
    let first = &starts[0];
    let last = &starts[starts.len() - 1];
    if first.is_negative() {
        return Err(Error::InvalidParameter("interval starts must be >= 0".into()));
    }
    if !(last < &(first + mu)) {
        return Err(Error::InvalidParameter(
            "last start must precede first start + width".into(),
        ));
    }
    if first + mu > Rational::one() || last + mu > Rational::one() {
        return Err(Error::InvalidParameter(
            "intervals must stay inside [0,1)".into(),
        ));
    }

    let m = dims.len();
    let mut bounds = BTreeMap::new();
    for subset in k_subsets(m, k) {
        let n_lcm: u64 = subset
            .iter()
            .fold(1u64, |acc, &i| num_integer::lcm(acc, dims.size(i) as u64));
        if !(mu * BigInt::from(n_lcm)).is_integer() {
            return Err(Error::WindowCondition {
                subset,
                detail: format!("μ·lcm = {} is not an integer", mu * BigInt::from(n_lcm)),
            });
        }
        let k_prod: u64 = subset.iter().map(|&i| dims.size(i) as u64).product();
        let l = (mu * BigInt::from(k_prod)).to_integer().to_u64().unwrap();
        bounds.insert(subset, l);
    }
    let params = ParamSet::new(dims.clone(), k, bounds)?;

    let q_len = starts.len() / 2;
    let mut intervals: Vec<(Rational, Rational)> = Vec::new();
    for ell in 1..=q_len {
        intervals.push((starts[2 * ell - 2].clone(), starts[2 * ell - 1].clone()));
    }
    intervals.push((last.clone(), first + mu));
    for ell in 1..=q_len {
        intervals.push((starts[2 * ell - 1].clone() + mu, starts[2 * ell].clone() + mu));
    }

    let (den, residues) = frac_residues(dims);
    let den_big = BigInt::from(den);
    let mut selected = MultiTransversal::new(dims.clone());
    for (v, r) in dims.profiles().zip(residues) {
        let x = Rational::new(BigInt::from(r), den_big.clone());
        if intervals.iter().any(|(lo, hi)| &x >= lo && &x < hi) {
            selected.add(v, 1)?;
        }
    }
    Ok((selected, params))
}

/// How combined parameters are derived in [`linear_combination`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinationMode {
    /// `L*_P = ⌊Σ α_ℓ L_P^{(ℓ)}⌋`; terms need only be multi-transversals.
    Transversal,
    /// `L*_P = Σ α_ℓ L_P^{(ℓ)}` exactly; every term must be full with
    /// constant ratio (an orthogonal array), and so is the result.
    Moa,
}

/// Pointwise rational combination `Σ_ℓ α_ℓ T_ℓ` of multi-transversals on a
/// common box. Every combined multiplicity must be a non-negative integer.
/// The result is returned together with its derived parameter set and is
/// verified against it.
pub fn linear_combination(
    terms: &[(Rational, &MultiTransversal, &ParamSet)],
    mode: CombinationMode,
) -> Result<(MultiTransversal, ParamSet)> {
    let (_, first_t, first_p) = terms
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty combination".into()))?;
    let dims = first_t.dims().clone();
    let k = first_p.k();
    for (_, t, p) in terms {
        if t.dims() != &dims || p.dims() != &dims {
            return Err(Error::ShapeMismatch(
                "combination terms live on different boxes".into(),
            ));
        }
        if p.k() != k {
            return Err(Error::ShapeMismatch(
                "combination terms have different levels k".into(),
            ));
        }
        if mode == CombinationMode::Moa {
            if !constant_ratio(p) {
                return Err(Error::Precondition(
                    "MOA-mode combination needs constant ratio for every term".into(),
                ));
            }
            if !fullness(t, p)?.0 {
                return Err(Error::Precondition(
                    "MOA-mode combination needs every term full".into(),
                ));
            }
        }
    }

    let mut combined = MultiTransversal::new(dims.clone());
    for v in dims.profiles() {
        let mut acc = Rational::zero();
        for (alpha, t, _) in terms {
            acc += alpha * BigInt::from(t.multiplicity(&v));
        }
        if acc.is_negative() || !acc.is_integer() {
            return Err(Error::BadMultiplicity {
                vector: v.coords().to_vec(),
                value: acc.to_string(),
            });
        }
        let mult = acc.to_integer().to_u64().ok_or_else(|| Error::ScaleGuard(
            format!("combined multiplicity at {v} overflows"),
        ))?;
        combined.add(v, mult)?;
    }

    let mut bounds = BTreeMap::new();
    for subset in k_subsets(dims.len(), k) {
        let mut acc = Rational::zero();
        for (alpha, _, p) in terms {
            acc += alpha * BigInt::from(p.bound(&subset));
        }
        let l = match mode {
            CombinationMode::Transversal => acc.floor().to_integer(),
            CombinationMode::Moa => {
                if !acc.is_integer() {
                    return Err(Error::InvalidParameter(format!(
                        "combined bound {acc} at subset {subset:?} is not an integer"
                    )));
                }
                acc.to_integer()
            }
        };
        let l = l.to_u64().ok_or_else(|| {
            Error::InvalidParameter(format!("combined bound at {subset:?} is negative or huge"))
        })?;
        bounds.insert(subset, l);
    }
    let params = ParamSet::new(dims, k, bounds)?;

    let report = check_transversal(&combined, &params);
    if !report.ok() {
        return Err(Error::Precondition(format!(
            "combined multiset violates the derived bounds at {} fixings",
            report.witnesses.len()
        )));
    }
    Ok((combined, params))
}

/// Tensor product of multi-transversals with the same constraint and level:
/// cell `(a_j n_j'' + b_j)_j` gets multiplicity `#[a,T₁]·#[b,T₂]`, on the
/// box with `n_j = n_j' n_j''`, with `L_P = L'_P L''_P`.
pub fn tensor_product(
    t1: &MultiTransversal,
    p1: &ParamSet,
    t2: &MultiTransversal,
    p2: &ParamSet,
) -> Result<(MultiTransversal, ParamSet)> {
    if t1.dims().len() != t2.dims().len() {
        return Err(Error::ShapeMismatch(
            "tensor factors have different constraint".into(),
        ));
    }
    if p1.k() != p2.k() {
        return Err(Error::ShapeMismatch(
            "tensor factors have different level k".into(),
        ));
    }
    let m = t1.dims().len();
    let n: Vec<usize> = (0..m)
        .map(|j| t1.dims().size(j) * t2.dims().size(j))
        .collect();
    let dims = Dimensions::new(n)?;
    let mut product = MultiTransversal::new(dims.clone());
    for (a, ma) in t1.entries() {
        for (b, mb) in t2.entries() {
            let coords: Vec<usize> = (0..m)
                .map(|j| a.coord(j) * t2.dims().size(j) + b.coord(j))
                .collect();
            let v = ProfileVector::new(coords, &dims)?;
            product.add(v, ma * mb)?;
        }
    }
    let mut bounds = BTreeMap::new();
    for subset in k_subsets(m, p1.k()) {
        bounds.insert(subset.clone(), p1.bound(&subset) * p2.bound(&subset));
    }
    let params = ParamSet::new(dims, p1.k(), bounds)?;
    Ok((product, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{frac_sum, rational};
    use crate::transversal::{moa_strength, to_moa};

    fn dims(n: &[usize]) -> Dimensions {
        Dimensions::new(n.to_vec()).unwrap()
    }

    fn vecs(t: &MultiTransversal) -> Vec<Vec<usize>> {
        t.support().map(|v| v.coords().to_vec()).collect()
    }

    #[test]
    fn engel_count_examples() {
        let w = Window::new(Rational::zero(), rational(2, 5)).unwrap();
        assert_eq!(engel_count(5, &Rational::zero(), &w), 2);

        let whole = Window::new(Rational::zero(), Rational::one()).unwrap();
        assert_eq!(engel_count(4, &Rational::zero(), &whole), 4);

        // Frozen by direct enumeration: frac(1/7 + i/3) for i = 0,1,2 is
        // 3/21, 10/21, 17/21 and only 17/21 lies in [1/2, 5/6).
        let w = Window::new(rational(1, 2), rational(1, 3)).unwrap();
        assert_eq!(engel_count(3, &rational(1, 7), &w), 1);
    }

    #[test]
    fn engel_bound_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=50);
            let alpha = rational(rng.gen_range(0..100), rng.gen_range(1..100));
            let q = rng.gen_range(1..100i64);
            let mu_num = rng.gen_range(1..=q);
            let mu = rational(mu_num, q);
            let beta_cap = Rational::one() - &mu;
            let beta = &beta_cap * rational(rng.gen_range(0..=64), 64);
            let w = Window::new(beta, mu.clone()).unwrap();
            let count = engel_count(n, &alpha, &w);
            let lo = (&mu * BigInt::from(n)).floor().to_integer().to_u64().unwrap();
            let hi = (&mu * BigInt::from(n)).ceil().to_integer().to_u64().unwrap();
            assert!(count == lo || count == hi, "n={n} count={count} not in {{{lo},{hi}}}");
        }
    }

    #[test]
    fn construction_examples() {
        let w = Window::new(Rational::zero(), rational(1, 3)).unwrap();
        let t = fractional_construction(&dims(&[2, 3]), &w);
        assert_eq!(vecs(&t), vec![vec![0, 0], vec![1, 2]]);

        let w = Window::new(Rational::zero(), rational(1, 2)).unwrap();
        let t = fractional_construction(&dims(&[2, 2]), &w);
        assert_eq!(vecs(&t), vec![vec![0, 0], vec![1, 1]]);

        let whole = Window::new(Rational::zero(), Rational::one()).unwrap();
        let t = fractional_construction(&dims(&[3, 4]), &whole);
        assert_eq!(t.size(), 12);
        assert!(t.is_simple());
    }

    #[test]
    fn construction_agrees_with_frac_sum_filter() {
        // The fast residue path must select exactly the cells whose
        // fractional sum lies in the window.
        let cases = [
            (vec![2, 3], rational(1, 6), rational(1, 3)),
            (vec![4, 6], rational(2, 7), rational(1, 5)),
            (vec![2, 4, 8], Rational::zero(), rational(1, 4)),
            (vec![5], rational(3, 10), rational(7, 10)),
        ];
        for (n, beta, mu) in cases {
            let d = dims(&n);
            let w = Window::new(beta, mu).unwrap();
            let fast = fractional_construction(&d, &w);
            let slow = MultiTransversal::from_vectors(
                d.clone(),
                d.profiles()
                    .filter(|v| w.contains(&frac_sum(v, &d, &Rational::zero())))
                    .map(|v| v.coords().to_vec()),
            )
            .unwrap();
            assert_eq!(fast, slow, "window {:?}", w);
        }
    }

    #[test]
    fn window_condition_examples() {
        let p = ParamSet::uniform(dims(&[2, 3, 5]), 2, 1).unwrap();
        assert!(window_admissible(&p, &rational(1, 15)));
        assert!(!window_admissible(&p, &rational(1, 5)));
        // ⌈N_P/5⌉ ≥ 2 > 1 for every pair, so all three subsets fail.
        assert_eq!(
            window_violations(&p, &rational(1, 5)),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        // Width 1/∏n_j is admissible whenever L_P ≥ ℓ_P.
        assert!(window_admissible(&p, &rational(1, 30)));
    }

    #[test]
    fn full_construction_small() {
        let p = ParamSet::uniform(dims(&[2, 3]), 1, 1).unwrap();
        let t = full_construction(&p, &Rational::zero()).unwrap();
        assert_eq!(vecs(&t), vec![vec![0, 0], vec![1, 2]]);
        assert!(fullness(&t, &p).unwrap().0);
    }

    #[test]
    fn full_construction_coprime() {
        // Pairwise coprime sizes always admit the minimal window.
        let p = ParamSet::uniform(dims(&[2, 3, 5]), 2, 1).unwrap();
        let t = full_construction(&p, &Rational::zero()).unwrap();
        assert_eq!(t.size(), 2);
        assert!(check_transversal(&t, &p).ok());
        assert!(fullness(&t, &p).unwrap().0);
    }

    #[test]
    fn full_construction_chain_moa() {
        let (p, mu) = recipe_from_factors(&[2, 2, 2], 2, 4).unwrap();
        assert_eq!(p.dims().sizes(), &[2, 4, 8]);
        assert_eq!(mu, rational(1, 4));
        assert_eq!(p.bound(&[0, 1]), 2);
        assert_eq!(p.bound(&[0, 2]), 4);
        assert_eq!(p.bound(&[1, 2]), 8);
        let t = full_construction(&p, &Rational::zero()).unwrap();
        assert_eq!(t.size(), 16);
        assert!(t.is_simple());
        assert!(fullness(&t, &p).unwrap().0);
        let a = to_moa(&t, &p).unwrap();
        assert!(moa_strength(&a, 1).holds());
    }

    #[test]
    fn recipe_examples() {
        let (p, mu) = recipe_from_factors(&[2, 3], 1, 2).unwrap();
        assert_eq!(p.dims().sizes(), &[2, 6]);
        assert_eq!(mu, rational(1, 2));
        assert_eq!(p.bound(&[0]), 1);
        assert_eq!(p.bound(&[1]), 3);

        let (p, mu) = recipe_from_factors(&[7], 1, 7).unwrap();
        assert_eq!(p.bound(&[0]), 1);
        assert_eq!(mu, rational(1, 7));

        assert!(recipe_from_factors(&[2, 3], 1, 4).is_err());
    }

    #[test]
    fn partition_examples() {
        let p = ParamSet::uniform(dims(&[2, 2]), 1, 1).unwrap();
        let parts = partition_box(&p, &rational(1, 2)).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(vecs(&parts[0]), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(vecs(&parts[1]), vec![vec![0, 1], vec![1, 0]]);

        // Width 1 needs L_P = K_P; the single window is the whole box.
        let loose = ParamSet::uniform(dims(&[2, 2]), 1, 2).unwrap();
        let whole = partition_box(&loose, &Rational::one()).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].size(), 4);

        let p23 = ParamSet::uniform(dims(&[2, 3]), 1, 1).unwrap();
        let parts = partition_box(&p23, &rational(1, 3)).unwrap();
        assert_eq!(parts.len(), 3);
        for part in &parts {
            assert_eq!(part.size(), 2);
            assert!(check_transversal(part, &p23).ok());
        }
        let total: u64 = parts.iter().map(|t| t.size()).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn partition_is_disjoint_cover() {
        let (p, _) = recipe_from_factors(&[2, 2], 1, 2).unwrap();
        let parts = partition_box(&p, &rational(1, 3)).unwrap();
        assert_eq!(parts.len(), 3);
        let mut seen = std::collections::BTreeSet::new();
        let mut total = 0;
        for part in &parts {
            for v in part.support() {
                assert!(seen.insert(v.clone()), "cell {v} appears twice");
            }
            total += part.size();
        }
        assert_eq!(total, p.dims().cell_count());
    }

    #[test]
    fn all_starts_checker() {
        let p = ParamSet::uniform(dims(&[2, 2]), 1, 1).unwrap();
        assert!(full_for_all_starts(&p, &rational(1, 2)).unwrap());
        // Width 1/3 gives windows of size 1 < bound 2 somewhere, not full.
        assert!(!full_for_all_starts(&p, &rational(1, 3)).unwrap());
    }

    #[test]
    fn shrinking_window_keeps_packing() {
        // Any narrower, shifted window still satisfies the inequalities.
        let (p, mu) = recipe_from_factors(&[2, 2, 2], 2, 4).unwrap();
        for (num, den) in [(1i64, 5i64), (1, 8), (3, 13), (1, 4)] {
            let small = &mu * rational(num, den) / rational(1, 1);
            let beta_room = Rational::one() - &small;
            for shift in [rational(0, 1), rational(1, 3), rational(9, 11)] {
                let beta = beta_room.clone() * shift;
                let w = Window::new(beta, small.clone()).unwrap();
                let t = fractional_construction(p.dims(), &w);
                assert!(check_transversal(&t, &p).ok());
            }
        }
    }

    #[test]
    fn interval_union_degenerate_is_single_window() {
        let d = dims(&[2, 4, 8]);
        let beta = rational(1, 16);
        let (t, p) = interval_union_construction(&d, 2, &rational(1, 4), &[beta.clone()]).unwrap();
        let w = Window::new(beta, rational(1, 4)).unwrap();
        assert_eq!(t, fractional_construction(&d, &w));
        assert_eq!(p.bound(&[1, 2]), 8);
    }

    #[test]
    fn interval_union_three_windows() {
        let d = dims(&[2, 4, 8]);
        let starts = [Rational::zero(), rational(1, 16), rational(1, 8)];
        let (t, p) = interval_union_construction(&d, 2, &rational(1, 4), &starts).unwrap();
        assert_eq!(t.size(), 16);
        assert!(t.is_simple());
        assert!(fullness(&t, &p).unwrap().0);
        let a = to_moa(&t, &p).unwrap();
        assert!(moa_strength(&a, 1).holds());

        // Alternating-sum identity: membership = 1_{W1} − 1_{W2} + 1_{W3}.
        let mu = rational(1, 4);
        let windows: Vec<Window> = starts
            .iter()
            .map(|b| Window::new(b.clone(), mu.clone()).unwrap())
            .collect();
        for v in d.profiles() {
            let x = frac_sum(&v, &d, &Rational::zero());
            let signed = windows[0].contains(&x) as i64 - windows[1].contains(&x) as i64
                + windows[2].contains(&x) as i64;
            assert_eq!(t.multiplicity(&v) as i64, signed, "cell {v}");
        }
    }

    #[test]
    fn interval_union_can_differ_from_every_single_window() {
        let d = dims(&[2, 4, 8]);
        let mu = rational(1, 4);
        let starts = [Rational::zero(), rational(1, 16), rational(3, 16)];
        let (t, p) = interval_union_construction(&d, 2, &mu, &starts).unwrap();
        assert!(fullness(&t, &p).unwrap().0);
        // Compare against every single window on the residue grid.
        let den = d.lcm() * 2;
        let mut differs_from_all = true;
        for num in 0..den {
            let beta = Rational::new(BigInt::from(num), BigInt::from(den));
            if &beta + &mu > Rational::one() {
                break;
            }
            let w = Window::new(beta, mu.clone()).unwrap();
            if fractional_construction(&d, &w) == t {
                differs_from_all = false;
            }
        }
        assert!(differs_from_all);
    }

    #[test]
    fn interval_union_rejects_bad_order() {
        let d = dims(&[2, 4, 8]);
        let starts = [rational(1, 16), Rational::zero(), rational(1, 8)];
        assert!(interval_union_construction(&d, 2, &rational(1, 4), &starts).is_err());
    }

    #[test]
    fn linear_combination_union() {
        let d = dims(&[2, 2]);
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let t1 = MultiTransversal::from_vectors(d.clone(), vec![vec![0, 0], vec![1, 1]]).unwrap();
        let t2 = MultiTransversal::from_vectors(d.clone(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let (sum, ps) = linear_combination(
            &[(Rational::one(), &t1, &p), (Rational::one(), &t2, &p)],
            CombinationMode::Transversal,
        )
        .unwrap();
        assert_eq!(sum.size(), 4);
        assert!(ps.bounds().all(|(_, l)| l == 2));
    }

    #[test]
    fn linear_combination_complement() {
        let d = dims(&[2, 2]);
        let grid = MultiTransversal::from_vectors(
            d.clone(),
            d.profiles().map(|v| v.coords().to_vec()),
        )
        .unwrap();
        let p_grid = ParamSet::uniform(d.clone(), 1, 2).unwrap();
        let diag = MultiTransversal::from_vectors(d.clone(), vec![vec![0, 0], vec![1, 1]]).unwrap();
        let p_diag = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let (anti, ps) = linear_combination(
            &[
                (Rational::one(), &grid, &p_grid),
                (-Rational::one(), &diag, &p_diag),
            ],
            CombinationMode::Moa,
        )
        .unwrap();
        assert_eq!(vecs(&anti), vec![vec![0, 1], vec![1, 0]]);
        assert!(ps.bounds().all(|(_, l)| l == 1));
        assert!(fullness(&anti, &ps).unwrap().0);
        assert!(constant_ratio(&ps));
    }

    #[test]
    fn linear_combination_average_identity() {
        let d = dims(&[2, 2]);
        let t = MultiTransversal::from_entries(
            d.clone(),
            d.profiles()
                .filter(|v| v.coord(0) == v.coord(1))
                .map(|v| (v, 2)),
        )
        .unwrap();
        let p = ParamSet::uniform(d, 1, 2).unwrap();
        let (avg, ps) = linear_combination(
            &[(rational(1, 2), &t, &p), (rational(1, 2), &t, &p)],
            CombinationMode::Transversal,
        )
        .unwrap();
        assert_eq!(avg, t);
        assert!(ps.bounds().all(|(_, l)| l == 2));
    }

    #[test]
    fn linear_combination_rejects_fractional_result() {
        let d = dims(&[2, 2]);
        let t = MultiTransversal::from_vectors(d.clone(), vec![vec![0, 0]]).unwrap();
        let p = ParamSet::uniform(d, 1, 1).unwrap();
        let err = linear_combination(&[(rational(1, 2), &t, &p)], CombinationMode::Transversal);
        assert!(matches!(err, Err(Error::BadMultiplicity { .. })));
    }

    #[test]
    fn tensor_product_examples() {
        let d = dims(&[2, 2]);
        let diag = MultiTransversal::from_vectors(d.clone(), vec![vec![0, 0], vec![1, 1]]).unwrap();
        let p = ParamSet::uniform(d.clone(), 1, 1).unwrap();
        let (t, ps) = tensor_product(&diag, &p, &diag, &p).unwrap();
        assert_eq!(ps.dims().sizes(), &[4, 4]);
        assert_eq!(
            vecs(&t),
            vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]
        );
        assert!(ps.bounds().all(|(_, l)| l == 1));
        assert!(fullness(&t, &ps).unwrap().0);

        // Tensoring with the one-point box is the identity.
        let unit_d = dims(&[1, 1]);
        let unit = MultiTransversal::from_vectors(unit_d.clone(), vec![vec![0, 0]]).unwrap();
        let unit_p = ParamSet::uniform(unit_d, 1, 1).unwrap();
        let (same, ps2) = tensor_product(&diag, &p, &unit, &unit_p).unwrap();
        assert_eq!(same, diag);
        assert_eq!(ps2.dims().sizes(), &[2, 2]);
        assert!(same.is_simple());
    }
}
