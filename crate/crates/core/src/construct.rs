//! (l, r, L) spatially coupled base matrices, their design rate, and
//! lifting into full parity-check matrices.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, SparseParityCheck};
use crate::rng;
use crate::Rate;

/// Parameters of an (l, r, L) spatially coupled code lifted by `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    l: usize,
    r: usize,
    sections: usize,
    lift_factor: usize,
}

impl CodeParams {
    /// Validates `l >= 1`, `r >= l`, `l | r`, `L >= 1` and `M >= 1`.
    pub fn new(l: usize, r: usize, sections: usize, lift_factor: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::Parameter("column weight l must be at least 1".into()));
        }
        if r < l {
            return Err(Error::Parameter(format!("row weight r={r} is below l={l}")));
        }
        if r % l != 0 {
            return Err(Error::Parameter(format!("r={r} is not divisible by l={l}")));
        }
        if sections == 0 {
            return Err(Error::Parameter("section count L must be at least 1".into()));
        }
        if lift_factor == 0 {
            return Err(Error::Parameter("lift factor M must be at least 1".into()));
        }
        Ok(CodeParams {
            l,
            r,
            sections,
            lift_factor,
        })
    }

    /// Base-matrix parameters (`M = 1`).
    pub fn base(l: usize, r: usize, sections: usize) -> Result<Self> {
        Self::new(l, r, sections, 1)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of sections `L`.
    pub fn sections(&self) -> usize {
        self.sections
    }

    /// Lift factor `M`.
    pub fn lift_factor(&self) -> usize {
        self.lift_factor
    }

    /// `k = r / l`.
    pub fn k(&self) -> usize {
        self.r / self.l
    }

    /// Number of base-matrix rows, `L + l - 1`.
    pub fn base_rows(&self) -> usize {
        self.sections + self.l - 1
    }

    /// Number of base-matrix columns, `kL`.
    pub fn base_cols(&self) -> usize {
        self.k() * self.sections
    }

    /// Code length `n = kLM`.
    pub fn n(&self) -> usize {
        self.base_cols() * self.lift_factor
    }

    pub fn with_lift_factor(&self, lift_factor: usize) -> Result<Self> {
        Self::new(self.l, self.r, self.sections, lift_factor)
    }

    pub fn design_rate(&self) -> Rate {
        design_rate(self)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{}) M={}",
            self.l, self.r, self.sections, self.lift_factor
        )
    }
}

/// Design rate `1 - 1/k - (l-1)/(kL)`, exactly.
pub fn design_rate(params: &CodeParams) -> Rate {
    let k = params.k() as i64;
    let kl = k * params.sections() as i64;
    Ratio::from_integer(1) - Ratio::new(1, k) - Ratio::new(params.l() as i64 - 1, kl)
}

/// The base matrix `B(l, r, L)`.
///
/// Block `j` (columns `(j-1)k+1 ..= jk`) holds `k` identical columns with
/// ones in rows `j ..= j+l-1`.
pub fn build_base_matrix(l: usize, r: usize, sections: usize) -> Result<BinaryMatrix> {
    let params = CodeParams::base(l, r, sections)?;
    let k = params.k();
    let mut b = BinaryMatrix::zeros(params.base_rows(), params.base_cols())?;
    for block in 0..sections {
        for c in block * k..(block + 1) * k {
            for row in block..block + l {
                b.put(row, c, 1);
            }
        }
    }
    Ok(b)
}

/// How each one of the base matrix is expanded into an `M x M` permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiftStyle {
    /// Uniformly random permutation per entry.
    RandomPermutation,
    /// Cyclic shift by a uniformly random offset per entry.
    CirculantShift,
    /// The identity matrix for every entry.
    Identity,
}

impl LiftStyle {
    pub fn as_str(&self) -> &'static str {
        match self {
            LiftStyle::RandomPermutation => "random",
            LiftStyle::CirculantShift => "circulant",
            LiftStyle::Identity => "identity",
        }
    }
}

impl fmt::Display for LiftStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LiftStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" | "random-permutation" => Ok(LiftStyle::RandomPermutation),
            "circulant" | "circulant-shift" => Ok(LiftStyle::CirculantShift),
            "identity" => Ok(LiftStyle::Identity),
            other => Err(Error::Domain(format!("unknown lift style {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LiftSpec {
    pub lift_factor: usize,
    pub style: LiftStyle,
    pub seed: u64,
}

impl LiftSpec {
    pub fn new(lift_factor: usize, style: LiftStyle, seed: u64) -> Result<Self> {
        if lift_factor == 0 {
            return Err(Error::Parameter("lift factor M must be at least 1".into()));
        }
        Ok(LiftSpec {
            lift_factor,
            style,
            seed,
        })
    }

    pub fn random(lift_factor: usize, seed: u64) -> Result<Self> {
        Self::new(lift_factor, LiftStyle::RandomPermutation, seed)
    }
}

/// Replaces every one of `base` by an `M x M` permutation matrix and every
/// zero by the zero matrix.
///
/// Permutations are drawn from a generator seeded by `spec.seed`, one draw
/// per one-entry in row-major order.
pub fn lift(base: &BinaryMatrix, spec: &LiftSpec) -> SparseParityCheck {
    let m = spec.lift_factor;
    let mut prng = rng::seeded(spec.seed);
    let mut perm: Vec<usize> = (0..m).collect();
    let mut entries = Vec::with_capacity(base.row_weights().iter().sum::<usize>() * m);
    for r in 0..base.rows() {
        for c in 0..base.cols() {
            if base.at(r, c) == 0 {
                continue;
            }
            match spec.style {
                LiftStyle::RandomPermutation => {
                    perm.iter_mut().enumerate().for_each(|(i, p)| *p = i);
                    perm.shuffle(&mut prng);
                }
                LiftStyle::CirculantShift => {
                    let shift = prng.gen_range(0..m);
                    perm.iter_mut().enumerate().for_each(|(i, p)| *p = (i + shift) % m);
                }
                LiftStyle::Identity => {}
            }
            entries.extend(perm.iter().enumerate().map(|(a, &p)| (r * m + a, c * m + p)));
        }
    }
    SparseParityCheck::from_zero_based(base.rows() * m, base.cols() * m, entries)
        .expect("permutation blocks never repeat an entry")
}
