//! M-part Sperner multi-families: multisets of subsets of a partitioned
//! ground set, the chain-product packing condition, profile matrices, BLYM
//! sums, homogeneity, traces, restrictions and shadows.
//!
//! The ground set is `X = X_1 ⊎ … ⊎ X_M` with `|X_i| = m_i`; elements are
//! addressed as `(part, index)` with `index < m_i`. The profile vector of a
//! set records `|F ∩ X_i|` per part, a point of the box with `n_i = m_i+1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::domain::{binomial, Dimensions, MultiTransversal, ParamSet, ProfileVector, Rational};
use crate::error::{Error, Result};

/// Partitioned ground set, described by its part sizes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundSet {
    m: Vec<usize>,
}

impl GroundSet {
    pub fn new(m: Vec<usize>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidParameter(
                "ground set needs at least one part".into(),
            ));
        }
        if let Some(i) = m.iter().position(|&mi| mi == 0) {
            return Err(Error::InvalidParameter(format!(
                "part {i} is empty; every part size must be >= 1"
            )));
        }
        Ok(GroundSet { m })
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.m
    }

    pub fn part_size(&self, i: usize) -> usize {
        self.m[i]
    }

    pub fn parts(&self) -> usize {
        self.m.len()
    }

    /// The attached box, with `n_i = m_i + 1`.
    pub fn dims(&self) -> Dimensions {
        Dimensions::from_part_sizes(&self.m).expect("part sizes give a valid box")
    }

    /// All subsets of part `i` as sorted index lists, in lexicographic order.
    pub fn part_subsets(&self, i: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..=self.m[i])
            .flat_map(|t| (0..self.m[i]).combinations(t))
            .collect();
        out.sort();
        out
    }

    /// All `2^(Σ m_i)` subsets of the ground set.
    pub fn subsets(&self) -> Vec<PartedSet> {
        let per_part: Vec<Vec<Vec<usize>>> = (0..self.parts()).map(|i| self.part_subsets(i)).collect();
        cartesian(&per_part)
            .into_iter()
            .map(|parts| PartedSet::new(parts, self).expect("enumerated subsets are valid"))
            .collect()
    }
}

/// A subset of the ground set, stored per part as sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartedSet {
    parts: Vec<Vec<usize>>,
}

impl PartedSet {
    /// Canonicalizes (sorts) and validates the per-part index lists.
    pub fn new(parts: Vec<Vec<usize>>, ground: &GroundSet) -> Result<Self> {
        if parts.len() != ground.parts() {
            return Err(Error::ShapeMismatch(format!(
                "set has {} parts, ground set has {}",
                parts.len(),
                ground.parts()
            )));
        }
        let mut canonical = Vec::with_capacity(parts.len());
        for (i, mut indices) in parts.into_iter().enumerate() {
            indices.sort_unstable();
            for pair in indices.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::InvalidParameter(format!(
                        "element {} repeats in part {i}",
                        pair[0]
                    )));
                }
            }
            if let Some(&bad) = indices.iter().find(|&&x| x >= ground.part_size(i)) {
                return Err(Error::CoordOutOfRange {
                    part: i,
                    value: bad,
                    limit: ground.part_size(i),
                });
            }
            canonical.push(indices);
        }
        Ok(PartedSet { parts: canonical })
    }

    /// The empty subset.
    pub fn empty(ground: &GroundSet) -> Self {
        PartedSet {
            parts: vec![Vec::new(); ground.parts()],
        }
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Per-part intersection sizes.
    pub fn profile(&self, dims: &Dimensions) -> ProfileVector {
        let coords: Vec<usize> = self.parts.iter().map(|p| p.len()).collect();
        ProfileVector::new(coords, dims).expect("profile of a valid set is in the box")
    }
}

impl fmt::Display for PartedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let items: Vec<String> = part.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, ")")
    }
}

/// Multiset of subsets of a partitioned ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground: GroundSet,
    entries: BTreeMap<PartedSet, u64>,
}

impl SetFamily {
    pub fn new(ground: GroundSet) -> Self {
        SetFamily {
            ground,
            entries: BTreeMap::new(),
        }
    }

    /// Simple family from raw per-part index lists.
    pub fn from_sets<I>(ground: GroundSet, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Vec<usize>>>,
    {
        let mut family = SetFamily::new(ground);
        for raw in sets {
            let set = PartedSet::new(raw, &family.ground)?;
            family.add(set, 1);
        }
        Ok(family)
    }

    pub fn add(&mut self, set: PartedSet, mult: u64) {
        if mult > 0 {
            *self.entries.entry(set).or_insert(0) += mult;
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn multiplicity(&self, set: &PartedSet) -> u64 {
        self.entries.get(set).copied().unwrap_or(0)
    }

    /// Total size, counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.entries.values().all(|&m| m == 1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PartedSet, u64)> {
        self.entries.iter().map(|(s, &m)| (s, m))
    }

    pub fn support(&self) -> impl Iterator<Item = &PartedSet> {
        self.entries.keys()
    }
}

/// Multiplicity-weighted census of profile vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileMatrix {
    dims: Dimensions,
    counts: BTreeMap<ProfileVector, u64>,
}

impl ProfileMatrix {
    pub fn new(dims: Dimensions) -> Self {
        ProfileMatrix {
            dims,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts<I>(dims: Dimensions, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ProfileVector, u64)>,
    {
        let mut pm = ProfileMatrix::new(dims);
        for (v, c) in counts {
            pm.bump(v, c)?;
        }
        Ok(pm)
    }

    pub fn bump(&mut self, v: ProfileVector, by: u64) -> Result<()> {
        ProfileVector::new(v.coords().to_vec(), &self.dims)?;
        if by > 0 {
            *self.counts.entry(v).or_insert(0) += by;
        }
        Ok(())
    }

    pub fn dims(&self) -> &Dimensions {
        &self.dims
    }

    pub fn count(&self, v: &ProfileVector) -> u64 {
        self.counts.get(v).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> impl Iterator<Item = (&ProfileVector, u64)> {
        self.counts.iter().map(|(v, &c)| (v, c))
    }

    /// Total over all cells.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Entries over the whole box in lexicographic order, including zeros.
    pub fn dense(&self) -> Vec<u64> {
        self.dims.profiles().map(|v| self.count(&v)).collect()
    }
}

/// One failed chain-product packing condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpernerViolation {
    pub subset: Vec<usize>,
    /// Fixed per-part intersections; `None` on the free parts of `subset`.
    pub fixed: Vec<Option<Vec<usize>>>,
    /// One element ordering per free part (aligned with `subset`); the chain
    /// is its list of prefixes.
    pub chains: Vec<Vec<usize>>,
    pub observed: u64,
    pub bound: u64,
}

/// Outcome of a chain-product packing check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpernerReport {
    pub witnesses: Vec<SpernerViolation>,
}

impl SpernerReport {
    pub fn ok(&self) -> bool {
        self.witnesses.is_empty()
    }
}

pub(crate) fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Is `set` (sorted) an initial segment of `order` as an unordered set?
fn is_prefix_of(set: &[usize], order: &[usize]) -> bool {
    let mut prefix: Vec<usize> = order[..set.len()].to_vec();
    prefix.sort_unstable();
    prefix == set
}

/// Checks the k-dimensional M-part Sperner condition: for every k-subset
/// `P`, every fixing of the parts outside `P` and every product of maximal
/// chains on the parts in `P`, the members matching the fixing whose free
/// parts lie on the chains have total multiplicity at most `L_P`.
///
/// Only maximal chains are enumerated; every chain extends to a maximal one,
/// so the maximum over chain products is attained there.
pub fn check_sperner(f: &SetFamily, p: &ParamSet) -> SpernerReport {
    assert_eq!(
        f.ground().dims(),
        *p.dims(),
        "family and parameter set live on different boxes"
    );
    let ground = f.ground();
    let m = ground.parts();
    let mut witnesses = Vec::new();
    for (subset, bound) in p.bounds() {
        let outside: Vec<usize> = (0..m).filter(|j| !subset.contains(j)).collect();

        // Group members by their intersections with the fixed parts.
        let mut groups: BTreeMap<Vec<Vec<usize>>, Vec<(&PartedSet, u64)>> = BTreeMap::new();
        for (set, mult) in f.entries() {
            let key: Vec<Vec<usize>> = outside.iter().map(|&i| set.part(i).to_vec()).collect();
            groups.entry(key).or_default().push((set, mult));
        }

        let fixings: Vec<Vec<Vec<usize>>> = cartesian(
            &outside
                .iter()
                .map(|&i| ground.part_subsets(i))
                .collect::<Vec<_>>(),
        );
        let orders_per_part: Vec<Vec<Vec<usize>>> = subset
            .iter()
            .map(|&j| {
                (0..ground.part_size(j))
                    .permutations(ground.part_size(j))
                    .collect()
            })
            .collect();
        let chain_tuples = cartesian(&orders_per_part);

        for fixing in &fixings {
            let Some(members) = groups.get(fixing) else {
                continue;
            };
            for chains in &chain_tuples {
                let mut count = 0u64;
                for (set, mult) in members {
                    let on_chains = subset
                        .iter()
                        .zip(chains)
                        .all(|(&j, order)| is_prefix_of(set.part(j), order));
                    if on_chains {
                        count += mult;
                    }
                }
                if count > bound {
                    let mut fixed = vec![None; m];
                    for (slot, &i) in outside.iter().enumerate() {
                        fixed[i] = Some(fixing[slot].clone());
                    }
                    witnesses.push(SpernerViolation {
                        subset: subset.clone(),
                        fixed,
                        chains: chains.clone(),
                        observed: count,
                        bound,
                    });
                }
            }
        }
    }
    SpernerReport { witnesses }
}

/// Census of profile vectors of the family, counted with multiplicity.
pub fn profile_matrix(f: &SetFamily) -> ProfileMatrix {
    let dims = f.ground().dims();
    let mut pm = ProfileMatrix::new(dims.clone());
    for (set, mult) in f.entries() {
        pm.bump(set.profile(&dims), mult)
            .expect("profiles of valid sets are in the box");
    }
    pm
}

/// If the profile vector of a set determines its multiplicity (sets outside
/// the family counting as 0), returns the map profile → multiplicity on the
/// occupied profiles. A profile is homogeneous only when all its
/// `∏ C(m_j, v_j)` sets appear, with one common multiplicity.
pub fn is_homogeneous(f: &SetFamily) -> Option<BTreeMap<ProfileVector, u64>> {
    let dims = f.ground().dims();
    let m = f.ground().part_sizes().to_vec();
    let mut seen: BTreeMap<ProfileVector, (u64, u64, u64)> = BTreeMap::new();
    for (set, mult) in f.entries() {
        let v = set.profile(&dims);
        let slot = seen.entry(v).or_insert((u64::MAX, 0, 0));
        slot.0 = slot.0.min(mult);
        slot.1 = slot.1.max(mult);
        slot.2 += 1;
    }
    let mut r = BTreeMap::new();
    for (v, (min_mult, max_mult, distinct)) in seen {
        if min_mult != max_mult {
            return None;
        }
        let class_size: BigUint = v
            .coords()
            .iter()
            .zip(m.iter())
            .map(|(&vj, &mj)| binomial(mj, vj))
            .product();
        if class_size != BigUint::from(distinct) {
            return None;
        }
        r.insert(v, min_mult);
    }
    Some(r)
}

/// The homogeneous family realizing a multiset over the box: every set with
/// profile `v` appears with multiplicity `#[v, I]`.
pub fn realize_homogeneous(i: &MultiTransversal, ground: &GroundSet) -> Result<SetFamily> {
    if *i.dims() != ground.dims() {
        return Err(Error::ShapeMismatch(
            "multiset box does not match the ground set".into(),
        ));
    }
    let mut family = SetFamily::new(ground.clone());
    for (v, mult) in i.entries() {
        let choices: Vec<Vec<Vec<usize>>> = v
            .coords()
            .iter()
            .enumerate()
            .map(|(j, &vj)| (0..ground.part_size(j)).combinations(vj).collect())
            .collect();
        for parts in cartesian(&choices) {
            family.add(PartedSet::new(parts, ground)?, mult);
        }
    }
    Ok(family)
}

/// One side-by-side BLYM comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlymLine {
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

/// The BLYM sum `Σ_v p_v / ∏_j C(m_j, v_j)` of a family.
pub fn blym_sum(f: &SetFamily) -> Rational {
    let m = f.ground().part_sizes().to_vec();
    let pm = profile_matrix(f);
    let mut lhs = Rational::zero();
    for (v, count) in pm.counts() {
        let denom: BigUint = v
            .coords()
            .iter()
            .zip(m.iter())
            .map(|(&vj, &mj)| binomial(mj, vj))
            .product();
        lhs += Rational::new(BigInt::from(count), BigInt::from(denom));
    }
    lhs
}

/// BLYM inequalities per k-subset: the sum `Σ_v p_v/∏C(m_j,v_j)` against
/// `L_P · ∏_{j∉P} n_j`. For a family satisfying the Sperner condition the
/// left side never exceeds the right.
pub fn blym_report(f: &SetFamily, p: &ParamSet) -> BTreeMap<Vec<usize>, BlymLine> {
    let lhs = blym_sum(f);
    let mut out = BTreeMap::new();
    for (subset, _) in p.bounds() {
        let rhs = Rational::from_integer(BigInt::from(p.size_bound(subset)));
        let equal = lhs == rhs;
        out.insert(
            subset.clone(),
            BlymLine {
                lhs: lhs.clone(),
                rhs,
                equal,
            },
        );
    }
    out
}

/// For a one-part family: is there no multichain of length `l + 1`, i.e. do
/// the members on every maximal chain have total multiplicity at most `l`?
pub fn multichain_free(f: &SetFamily, l: u64) -> Result<bool> {
    if f.ground().parts() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "multichains are defined for one part, family has {}",
            f.ground().parts()
        )));
    }
    let m = f.ground().part_size(0);
    for order in (0..m).permutations(m) {
        let mut total = 0u64;
        for t in 0..=m {
            let mut prefix: Vec<usize> = order[..t].to_vec();
            prefix.sort_unstable();
            let set = PartedSet::new(vec![prefix], f.ground())?;
            total += f.multiplicity(&set);
        }
        if total > l {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Trace of the family on part `i`: the simple family `{F ∩ X_i}`.
pub fn trace(f: &SetFamily, i: usize) -> BTreeSet<Vec<usize>> {
    f.support().map(|set| set.part(i).to_vec()).collect()
}

/// Per part: is the trace a union of complete levels of `2^{X_i}`?
/// Each occupied level is tested for completeness.
pub fn trace_full_levels(f: &SetFamily) -> Vec<bool> {
    (0..f.ground().parts())
        .map(|i| {
            let tr = trace(f, i);
            let mi = f.ground().part_size(i);
            let mut per_level: BTreeMap<usize, u64> = BTreeMap::new();
            for s in &tr {
                *per_level.entry(s.len()).or_insert(0) += 1;
            }
            per_level
                .iter()
                .all(|(&t, &count)| BigUint::from(count) == binomial(mi, t))
        })
        .collect()
}

/// Restriction of the family to the parts in `keep`: members whose
/// intersection with every other part equals the prescribed set, with those
/// parts removed. The restriction inherits the Sperner condition for the
/// k-subsets inside `keep`.
pub fn restrict(
    f: &SetFamily,
    keep: &[usize],
    fixed: &BTreeMap<usize, Vec<usize>>,
) -> Result<(SetFamily, GroundSet)> {
    let m = f.ground().parts();
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "restriction must keep at least one part".into(),
        ));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&i| i >= m) {
        return Err(Error::InvalidParameter(
            "kept parts must be strictly increasing indices of the ground set".into(),
        ));
    }
    let outside: Vec<usize> = (0..m).filter(|i| !keep.contains(i)).collect();
    for &i in &outside {
        let set = fixed
            .get(&i)
            .ok_or_else(|| Error::InvalidParameter(format!("no fixed set for part {i}")))?;
        if let Some(&bad) = set.iter().find(|&&x| x >= f.ground().part_size(i)) {
            return Err(Error::CoordOutOfRange {
                part: i,
                value: bad,
                limit: f.ground().part_size(i),
            });
        }
    }
    if fixed.keys().any(|i| keep.contains(i)) {
        return Err(Error::InvalidParameter(
            "fixed sets given for a kept part".into(),
        ));
    }

    let sub_ground = GroundSet::new(keep.iter().map(|&i| f.ground().part_size(i)).collect())?;
    let mut out = SetFamily::new(sub_ground.clone());
    for (set, mult) in f.entries() {
        let matches = outside.iter().all(|&i| {
            let mut want = fixed[&i].clone();
            want.sort_unstable();
            set.part(i) == want.as_slice()
        });
        if matches {
            let parts: Vec<Vec<usize>> = keep.iter().map(|&i| set.part(i).to_vec()).collect();
            out.add(PartedSet::new(parts, &sub_ground)?, mult);
        }
    }
    Ok((out, sub_ground))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowDirection {
    Lower,
    Upper,
}

/// Shadow of a simple family sitting inside one level of `2^{[n]}`: all sets
/// one level below obtained by deleting an element (lower), or one level
/// above obtained by inserting one (upper).
pub fn shadow(
    level_family: &BTreeSet<Vec<usize>>,
    n: usize,
    direction: ShadowDirection,
) -> Result<BTreeSet<Vec<usize>>> {
    let mut size: Option<usize> = None;
    for set in level_family {
        if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&x| x >= n) {
            return Err(Error::InvalidParameter(format!(
                "set {set:?} is not a sorted subset of 0..{n}"
            )));
        }
        match size {
            None => size = Some(set.len()),
            Some(t) if t != set.len() => {
                return Err(Error::InvalidParameter(
                    "shadow input must lie inside a single level".into(),
                ))
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    for set in level_family {
        match direction {
            ShadowDirection::Lower => {
                for drop in 0..set.len() {
                    let mut smaller = set.clone();
                    smaller.remove(drop);
                    out.insert(smaller);
                }
            }
            ShadowDirection::Upper => {
                for x in 0..n {
                    if !set.contains(&x) {
                        let mut larger = set.clone();
                        larger.push(x);
                        larger.sort_unstable();
                        out.insert(larger);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Block construction of a non-homogeneous M-dimensional M-part Sperner
/// family attaining the BLYM bound with equality.
///
/// The r-sets of the last part are split into `s ≥ 2` non-empty blocks
/// `B_1,…,B_s`; for each other part a list of `s` distinct levels is chosen;
/// the family is `⊎_ℓ (∏_{j<M} C(X_j, levels[j][ℓ])) × B_ℓ`.
pub fn block_construction(
    ground: &GroundSet,
    r: usize,
    blocks: &[Vec<Vec<usize>>],
    levels: &[Vec<usize>],
) -> Result<SetFamily> {
    let m_count = ground.parts();
    if m_count < 2 {
        return Err(Error::InvalidParameter(
            "block construction needs at least two parts".into(),
        ));
    }
    let last = m_count - 1;
    let m_last = ground.part_size(last);
    if r == 0 || r >= m_last {
        return Err(Error::InvalidParameter(format!(
            "level r={r} must lie in 1..={}",
            m_last.saturating_sub(1)
        )));
    }
    let s = blocks.len();
    let class_size = binomial(m_last, r);
    let min_n = (0..last).map(|j| ground.part_size(j) + 1).min().unwrap();
    if s < 2 || BigUint::from(s) > class_size || s > min_n {
        return Err(Error::InvalidParameter(format!(
            "block count {s} must lie in 2..=min(n_j, C(m_M, r))"
        )));
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for block in blocks {
        if block.is_empty() {
            return Err(Error::InvalidParameter("empty block".into()));
        }
        for set in block {
            let mut sorted = set.clone();
            sorted.sort_unstable();
            if sorted.len() != r
                || sorted.windows(2).any(|w| w[0] == w[1])
                || sorted.iter().any(|&x| x >= m_last)
            {
                return Err(Error::InvalidParameter(format!(
                    "block member {set:?} is not an r-subset of the last part"
                )));
            }
            if !seen.insert(sorted) {
                return Err(Error::InvalidParameter(format!(
                    "block member {set:?} appears twice"
                )));
            }
        }
    }
    if BigUint::from(seen.len()) != class_size {
        return Err(Error::InvalidParameter(format!(
            "blocks cover {} of the {} r-subsets",
            seen.len(),
            class_size
        )));
    }
    if levels.len() != m_count - 1 {
        return Err(Error::InvalidParameter(format!(
            "need level choices for {} parts, got {}",
            m_count - 1,
            levels.len()
        )));
    }
    for (j, choice) in levels.iter().enumerate() {
        let nj = ground.part_size(j) + 1;
        if choice.len() != s
            || choice.iter().any(|&lv| lv >= nj)
            || choice.iter().collect::<BTreeSet<_>>().len() != s
        {
            return Err(Error::InvalidParameter(format!(
                "part {j} needs {s} distinct levels below {nj}"
            )));
        }
    }

    let mut family = SetFamily::new(ground.clone());
    for (ell, block) in blocks.iter().enumerate() {
        let choices: Vec<Vec<Vec<usize>>> = (0..last)
            .map(|j| {
                (0..ground.part_size(j))
                    .combinations(levels[j][ell])
                    .collect()
            })
            .collect();
        for front in cartesian(&choices) {
            for tail in block {
                let mut parts = front.clone();
                parts.push(tail.clone());
                family.add(PartedSet::new(parts, ground)?, 1);
            }
        }
    }
    Ok(family)
}
