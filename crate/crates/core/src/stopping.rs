//! Stopping sets: exhaustive search for small matrices, the closed-form
//! characterization for (l, r, L) base matrices and their column
//! permutations, span, and the burst-length bound intervals.

use std::collections::HashSet;
use std::fmt;

use crate::construct::CodeParams;
use crate::error::{domain, Error, Result};
use crate::gf2::BinaryMatrix;
use crate::permute::Permutation;
use crate::Rate;

/// Largest column count handled by exhaustive search unless the caller
/// raises it.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;

/// Hard ceiling for exhaustive search (subsets are held in a `u64`).
pub const MAX_EXHAUSTIVE_LIMIT: usize = 64;

/// A non-empty set of column indices (1-based, ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StoppingSet {
    indices: Vec<usize>,
}

impl StoppingSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        if indices.first().is_none_or(|&i| i == 0) {
            return domain("stopping set indices must be non-empty and 1-based");
        }
        Ok(StoppingSet { indices })
    }

    fn from_mask(mask: u64) -> Self {
        StoppingSet {
            indices: bits(mask).map(|c| c + 1).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of columns in the set.
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    /// `1 + max - min` over the indices.
    pub fn length(&self) -> usize {
        1 + self.indices[self.indices.len() - 1] - self.indices[0]
    }
}

/// `members;length`, members space-separated.
impl fmt::Display for StoppingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{};{}", members.join(" "), self.length())
    }
}

/// Block `T_i`: the `k` consecutive columns `(i-1)k+1 ..= ik` of `B(l,r,L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockIndex {
    pub i: usize,
    pub k: usize,
}

impl BlockIndex {
    pub fn members(&self) -> std::ops::RangeInclusive<usize> {
        (self.i - 1) * self.k + 1..=self.i * self.k
    }

    /// The block containing column `col` (1-based).
    pub fn of_column(col: usize, k: usize) -> Self {
        BlockIndex {
            i: (col - 1) / k + 1,
            k,
        }
    }
}

/// Open interval `(lower, upper)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundInterval<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: PartialOrd + Copy + fmt::Debug> BoundInterval<T> {
    pub fn new(lower: T, upper: T) -> Self {
        assert!(lower < upper, "empty interval ({lower:?}, {upper:?})");
        BoundInterval { lower, upper }
    }

    /// Strict membership.
    pub fn contains(&self, x: T) -> bool {
        self.lower < x && x < self.upper
    }
}

impl<T: fmt::Display> fmt::Display for BoundInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// True iff the columns `s` (1-based) leave no row of weight exactly one.
/// The empty set qualifies vacuously.
pub fn is_stopping_set(m: &BinaryMatrix, s: &[usize]) -> Result<bool> {
    if let Some(&bad) = s.iter().find(|&&j| j == 0 || j > m.cols()) {
        return domain(format!("column {bad} outside [1, {}]", m.cols()));
    }
    Ok((0..m.rows()).all(|r| s.iter().filter(|&&j| m.at(r, j - 1) == 1).count() != 1))
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            b
        })
    })
}

fn row_masks(m: &BinaryMatrix) -> Vec<u64> {
    (0..m.rows())
        .map(|r| (0..m.cols()).fold(0u64, |acc, c| acc | (u64::from(m.at(r, c)) << c)))
        .filter(|&mask| mask != 0)
        .collect()
}

fn check_limit(m: &BinaryMatrix, limit: usize) -> Result<()> {
    let limit = limit.min(MAX_EXHAUSTIVE_LIMIT);
    if m.cols() > limit {
        return Err(Error::Capacity {
            cols: m.cols(),
            limit,
        });
    }
    Ok(())
}

/// All irreducible stopping sets, with the default column limit.
pub fn enumerate_irreducible(m: &BinaryMatrix) -> Result<Vec<StoppingSet>> {
    enumerate_irreducible_with_limit(m, DEFAULT_EXHAUSTIVE_LIMIT)
}

/// All non-empty stopping sets with no non-empty proper subset that is also
/// a stopping set, sorted.
///
/// Depth-first growth from each smallest member `c`: while some row has
/// weight one inside the current set, one of that row's other columns
/// (above `c`) must join. Every irreducible set is reached this way, so
/// filtering the stopping sets found down to the inclusion-minimal ones
/// yields exactly the irreducible family.
pub fn enumerate_irreducible_with_limit(
    m: &BinaryMatrix,
    limit: usize,
) -> Result<Vec<StoppingSet>> {
    check_limit(m, limit)?;
    let rows = row_masks(m);
    let n = m.cols();
    let mut found: HashSet<u64> = HashSet::new();
    let mut visited: HashSet<u64> = HashSet::new();
    for c in 0..n {
        let allowed = if c + 1 == 64 { 0 } else { !0u64 << (c + 1) };
        let mut stack = vec![1u64 << c];
        while let Some(set) = stack.pop() {
            if !visited.insert(set) {
                continue;
            }
            // weight-one row with the fewest ways to repair it
            let mut best: Option<u64> = None;
            for &row in &rows {
                if (row & set).count_ones() == 1 {
                    let choices = row & !set & allowed;
                    if best.is_none_or(|b| choices.count_ones() < b.count_ones()) {
                        best = Some(choices);
                    }
                }
            }
            match best {
                None => {
                    found.insert(set);
                }
                Some(choices) => stack.extend(bits(choices).map(|b| set | (1 << b))),
            }
        }
    }

    let mut candidates: Vec<u64> = found.into_iter().collect();
    candidates.sort_by_key(|s| (s.count_ones(), *s));
    let mut minimal: Vec<u64> = Vec::new();
    for s in candidates {
        if !minimal.iter().any(|&t| t & s == t) {
            minimal.push(s);
        }
    }
    let mut sets: Vec<StoppingSet> = minimal.into_iter().map(StoppingSet::from_mask).collect();
    sets.sort();
    Ok(sets)
}

/// Irreducible stopping sets of `B(l, r, L)` in closed form: every pair of
/// distinct columns from the same block. With `permutation`, each pair is
/// carried to its positions in the column-permuted matrix.
pub fn irreducible_sc_characterization(
    params: &CodeParams,
    permutation: Option<&Permutation>,
) -> Result<Vec<StoppingSet>> {
    let k = params.k();
    if let Some(p) = permutation {
        if p.size() != params.base_cols() {
            return domain(format!(
                "permutation of size {} for a base matrix with {} columns",
                p.size(),
                params.base_cols()
            ));
        }
    }
    let place = |j: usize| permutation.map_or(j, |p| p.inverse(j));
    let mut sets = Vec::with_capacity(params.sections() * k * (k.saturating_sub(1)) / 2);
    for i in 1..=params.sections() {
        let block = BlockIndex { i, k };
        for a in block.members() {
            for b in a + 1..=block.i * k {
                sets.push(StoppingSet::new([place(a), place(b)])?);
            }
        }
    }
    sets.sort();
    Ok(sets)
}

/// Minimum length over a family of stopping sets, or `cols + 1` when the
/// family is empty.
fn min_length(sets: &[StoppingSet], cols: usize) -> usize {
    sets.iter().map(StoppingSet::length).min().unwrap_or(cols + 1)
}

/// Span via the irreducible sets found by exhaustive search.
pub fn span_exhaustive(m: &BinaryMatrix) -> Result<usize> {
    Ok(min_length(&enumerate_irreducible(m)?, m.cols()))
}

/// Span as the minimum length over every non-empty stopping set, by
/// enumerating all column subsets. Exponential; for cross-checks only.
pub fn span_all_subsets(m: &BinaryMatrix, limit: usize) -> Result<usize> {
    check_limit(m, limit)?;
    let rows = row_masks(m);
    let n = m.cols();
    let mut best = n + 1;
    for set in 1u64..(1u64 << n) {
        let length = 64 - set.leading_zeros() as usize - set.trailing_zeros() as usize;
        if length < best && rows.iter().all(|&row| (row & set).count_ones() != 1) {
            best = length;
        }
    }
    Ok(best)
}

/// Span from the closed-form characterization.
pub fn span_characterized(params: &CodeParams, permutation: Option<&Permutation>) -> Result<usize> {
    Ok(min_length(
        &irreducible_sc_characterization(params, permutation)?,
        params.base_cols(),
    ))
}

/// A matrix recognized as a column permutation of some `B(l, r, L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScStructure {
    pub params: CodeParams,
    /// `apply_columns(B(l,r,L), permutation)` reproduces the matrix.
    pub permutation: Permutation,
}

/// Recognizes column permutations of `B(l, r, L)`: every column is a run of
/// `l` consecutive ones, and each of the `L = rows - l + 1` possible run
/// starts occurs in exactly `k` columns.
pub fn recognize_sc_base(m: &BinaryMatrix) -> Option<ScStructure> {
    let mut starts = Vec::with_capacity(m.cols());
    let mut weight = None;
    for c in 0..m.cols() {
        let col = m.column0(c);
        let first = col.iter().position(|&v| v == 1)?;
        let w = col.iter().filter(|&&v| v == 1).count();
        if col[first..first + w].iter().any(|&v| v == 0) || *weight.get_or_insert(w) != w {
            return None;
        }
        starts.push(first);
    }
    let l = weight?;
    let sections = m.rows() + 1 - l;
    if m.cols() % sections != 0 {
        return None;
    }
    let k = m.cols() / sections;
    let mut next_in_block = vec![0usize; sections];
    let mut images = Vec::with_capacity(m.cols());
    for &s in &starts {
        if s >= sections || next_in_block[s] == k {
            return None;
        }
        images.push(s * k + next_in_block[s] + 1);
        next_in_block[s] += 1;
    }
    Some(ScStructure {
        params: CodeParams::base(l, k * l, sections).ok()?,
        permutation: Permutation::from_images(&images).ok()?,
    })
}

/// Span of `m`: closed form when `m` is a permuted `B(l, r, L)`, otherwise
/// exhaustive search (subject to the default column limit).
pub fn span_of(m: &BinaryMatrix) -> Result<usize> {
    match recognize_sc_base(m) {
        Some(sc) => span_characterized(&sc.params, Some(&sc.permutation)),
        None => span_exhaustive(m),
    }
}

/// Interval `((w - 1) M, (w + 1) M)` that holds the maximal correctable
/// burst length of any lift by `M` of a base matrix with burst length `w`.
pub fn sridharan_interval(wmax_base: usize, lift_factor: usize) -> BoundInterval<i64> {
    let w = wmax_base as i64;
    let m = lift_factor as i64;
    BoundInterval::new((w - 1) * m, (w + 1) * m)
}

/// Interval on the maximal correctable burst ratio of lifted codes:
/// `(0, 2/(kL))` for the plain coupled code and
/// `((L-1)/(kL), (L+1)/(kL))` after the band splitting permutation.
pub fn lambda_interval(params: &CodeParams, permuted: bool) -> BoundInterval<Rate> {
    let sections = params.sections() as i64;
    let kl = params.k() as i64 * sections;
    if permuted {
        BoundInterval::new(Rate::new(sections - 1, kl), Rate::new(sections + 1, kl))
    } else {
        BoundInterval::new(Rate::from_integer(0), Rate::new(2, kl))
    }
}
