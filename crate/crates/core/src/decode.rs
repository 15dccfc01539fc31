//! Erasure-BP (peeling) decoding and decoder-driven measurement of the
//! maximal correctable burst length.

use std::borrow::Cow;

use crate::error::{domain, Result};
use crate::gf2::{BinaryMatrix, SparseParityCheck};
use crate::Rate;

/// Anything the peeling decoder can run on.
pub trait ParityCheck {
    fn as_sparse(&self) -> Cow<'_, SparseParityCheck>;
}

impl ParityCheck for SparseParityCheck {
    fn as_sparse(&self) -> Cow<'_, SparseParityCheck> {
        Cow::Borrowed(self)
    }
}

impl ParityCheck for BinaryMatrix {
    fn as_sparse(&self) -> Cow<'_, SparseParityCheck> {
        Cow::Owned(self.to_sparse())
    }
}

/// A set of erased column indices (1-based, sorted, distinct).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    indices: Vec<usize>,
}

impl ErasurePattern {
    /// Validates every index against `[1, n]`; duplicates are merged.
    pub fn new(indices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return domain(format!("erasure index {bad} outside [1, {n}]"));
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(ErasurePattern { indices })
    }

    /// The burst `{start, ..., start + w - 1}` inside `[1, n]`.
    pub fn burst(start: usize, w: usize, n: usize) -> Result<Self> {
        check_burst(start, w, n)?;
        Ok(ErasurePattern {
            indices: (start..start + w).collect(),
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

fn check_burst(start: usize, w: usize, n: usize) -> Result<()> {
    if start == 0 || start + w > n + 1 {
        return domain(format!(
            "burst of length {w} at {start} does not fit in [1, {n}]"
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub success: bool,
    /// Erasures left unresolved, 1-based and ascending. This is the largest
    /// stopping set contained in the erasure pattern.
    pub residual: Vec<usize>,
    /// Number of peeling rounds that resolved at least one erasure.
    pub iterations: usize,
}

/// Reusable peeling decoder bound to one matrix.
///
/// Scratch state is cleared after every call, so a single instance can
/// decode many patterns without reallocating.
pub struct Peeler<'a> {
    h: &'a SparseParityCheck,
    erased: Vec<bool>,
    count: Vec<u32>,
    // xor of erased column indices in each row; equals the lone erased
    // column whenever the count is one
    xor: Vec<usize>,
    touched: Vec<usize>,
    frontier: Vec<usize>,
    next: Vec<usize>,
}

impl<'a> Peeler<'a> {
    pub fn new(h: &'a SparseParityCheck) -> Self {
        Peeler {
            h,
            erased: vec![false; h.cols()],
            count: vec![0; h.rows()],
            xor: vec![0; h.rows()],
            touched: Vec::new(),
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Peels the 0-based erasures and returns the number left unresolved and
    /// the round count. Leaves `erased` set for the unresolved columns.
    fn run(&mut self, erasures: impl Iterator<Item = usize>) -> (usize, usize) {
        let mut remaining = 0;
        for c in erasures {
            self.erased[c] = true;
            remaining += 1;
            for &r in self.h.col_adj(c) {
                if self.count[r] == 0 {
                    self.touched.push(r);
                }
                self.count[r] += 1;
                self.xor[r] ^= c;
            }
        }
        self.frontier.clear();
        self.frontier
            .extend(self.touched.iter().copied().filter(|&r| self.count[r] == 1));

        let mut rounds = 0;
        while !self.frontier.is_empty() && remaining > 0 {
            self.next.clear();
            let mut progressed = false;
            for i in 0..self.frontier.len() {
                let r = self.frontier[i];
                if self.count[r] != 1 {
                    continue;
                }
                let c = self.xor[r];
                self.erased[c] = false;
                remaining -= 1;
                progressed = true;
                for &r2 in self.h.col_adj(c) {
                    self.count[r2] -= 1;
                    self.xor[r2] ^= c;
                    if self.count[r2] == 1 {
                        self.next.push(r2);
                    }
                }
            }
            if progressed {
                rounds += 1;
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        (remaining, rounds)
    }

    fn reset(&mut self, erasures: impl Iterator<Item = usize>) {
        for c in erasures {
            self.erased[c] = false;
        }
        for &r in &self.touched {
            self.count[r] = 0;
            self.xor[r] = 0;
        }
        self.touched.clear();
    }

    pub fn decode(&mut self, e: &ErasurePattern) -> Result<DecodeResult> {
        if let Some(&bad) = e.indices().iter().find(|&&i| i == 0 || i > self.h.cols()) {
            return domain(format!("erasure index {bad} outside [1, {}]", self.h.cols()));
        }
        let zero_based = || e.indices().iter().map(|i| i - 1);
        let (remaining, iterations) = self.run(zero_based());
        let residual: Vec<usize> = zero_based()
            .filter(|&c| self.erased[c])
            .map(|c| c + 1)
            .collect();
        debug_assert_eq!(residual.len(), remaining);
        self.reset(zero_based());
        Ok(DecodeResult {
            success: residual.is_empty(),
            residual,
            iterations,
        })
    }

    /// Whether the 0-based window `[first, first + w)` is fully recoverable.
    fn window_recovers(&mut self, first: usize, w: usize) -> bool {
        let (remaining, _) = self.run(first..first + w);
        self.reset(first..first + w);
        remaining == 0
    }

    pub fn burst_correctable(&mut self, start: usize, w: usize) -> Result<bool> {
        check_burst(start, w, self.h.cols())?;
        Ok(self.window_recovers(start - 1, w))
    }
}

/// Erasure-BP decoding of `e` on `h`.
pub fn peel<H: ParityCheck + ?Sized>(h: &H, e: &ErasurePattern) -> Result<DecodeResult> {
    let h = h.as_sparse();
    Peeler::new(&h).decode(e)
}

/// Whether the burst of length `w` starting at column `start` is recovered.
pub fn burst_correctable<H: ParityCheck + ?Sized>(h: &H, start: usize, w: usize) -> Result<bool> {
    let h = h.as_sparse();
    Peeler::new(&h).burst_correctable(start, w)
}

/// Maximal correctable burst length of a matrix, with a failing witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BurstReport {
    pub n: usize,
    pub wmax: usize,
    /// Start of a burst of length `wmax + 1` that fails to decode (the
    /// leftmost such start). `None` when every burst is correctable.
    pub witness_start: Option<usize>,
}

impl BurstReport {
    /// `wmax / n`, exactly.
    pub fn lambda_max(&self) -> Rate {
        Rate::new(self.wmax as i64, self.n as i64)
    }

    pub fn lambda_max_f64(&self) -> f64 {
        self.wmax as f64 / self.n as f64
    }
}

/// Largest `w` such that every burst of length `w` placed inside the block
/// is corrected by erasure-BP.
///
/// Sweeps start positions left to right while shrinking the shortest
/// failing window found so far. If `[s, e]` fails then so does every window
/// containing it, so at each start only the window one shorter than the
/// current best needs to be tried. At most `2n` decodes.
pub fn compute_wmax<H: ParityCheck + ?Sized>(h: &H) -> BurstReport {
    let h = h.as_sparse();
    let n = h.cols();
    let mut peeler = Peeler::new(&h);
    // shortest failing window length seen so far; n + 1 means none
    let mut span = n + 1;
    let mut witness = None;
    let mut first = 0;
    while span > 1 && first + span - 1 <= n {
        if peeler.window_recovers(first, span - 1) {
            first += 1;
        } else {
            span -= 1;
            witness = Some(first + 1);
        }
    }
    BurstReport {
        n,
        wmax: span - 1,
        witness_start: witness,
    }
}

/// [`compute_wmax`] by bisection on the burst length, sweeping every start
/// position per probe.
pub fn compute_wmax_bisect<H: ParityCheck + ?Sized>(h: &H) -> BurstReport {
    let h = h.as_sparse();
    let n = h.cols();
    let mut peeler = Peeler::new(&h);
    let mut first_failure =
        |w: usize| (0..=n - w).find(|&first| !peeler.window_recovers(first, w));

    // invariant: every burst of length lo is correctable; some burst of
    // length hi fails, or hi == n + 1
    let (mut lo, mut hi) = (0, n + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if first_failure(mid).is_none() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let witness_start = (lo < n).then(|| first_failure(lo + 1).expect("hi fails") + 1);
    BurstReport {
        n,
        wmax: lo,
        witness_start,
    }
}
