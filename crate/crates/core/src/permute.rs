//! Column permutations: band splitting permutations and uniformly random
//! permutations, and their action on matrices and index sets.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::gf2::{BinaryMatrix, SparseParityCheck};
use crate::rng;

/// A bijection `f` on `[1, n]`, stored with its inverse.
///
/// Applied to a matrix, column `j` of the result is column `f(j)` of the
/// input.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    /// Builds a permutation from its image list `(f(1), ..., f(n))`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut inverse = vec![usize::MAX; n];
        for (j, &image) in images.iter().enumerate() {
            if image == 0 || image > n {
                return domain(format!("image {image} outside [1, {n}]"));
            }
            if inverse[image - 1] != usize::MAX {
                return domain(format!("image {image} repeated"));
            }
            inverse[image - 1] = j;
        }
        Ok(Permutation {
            forward: images.iter().map(|i| i - 1).collect(),
            inverse,
        })
    }

    fn from_zero_based(forward: Vec<usize>) -> Self {
        let mut inverse = vec![0; forward.len()];
        for (j, &f) in forward.iter().enumerate() {
            inverse[f] = j;
        }
        Permutation { forward, inverse }
    }

    pub fn size(&self) -> usize {
        self.forward.len()
    }

    /// `f(j)`, 1-based.
    pub fn forward(&self, j: usize) -> usize {
        self.forward[j - 1] + 1
    }

    /// `f^{-1}(i)`, 1-based.
    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i - 1] + 1
    }

    /// The image list `(f(1), ..., f(n))`.
    pub fn images(&self) -> Vec<usize> {
        self.forward.iter().map(|f| f + 1).collect()
    }

    /// The inverse permutation `f^{-1}` as a permutation in its own right.
    pub fn inverted(&self) -> Permutation {
        Permutation {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(j, &f)| j == f)
    }

    #[inline]
    pub(crate) fn inverse0(&self, i: usize) -> usize {
        self.inverse[i]
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images())
    }
}

/// Single-line, space-separated image list.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, image) in self.forward.iter().enumerate() {
            if j > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", image + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("invalid permutation entry {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if images.is_empty() {
            return Err(Error::Parse {
                line: 1,
                msg: "empty permutation".into(),
            });
        }
        Self::from_images(&images)
    }
}

/// Rows `a_1, ..., a_k` of the `k x L` interleaver layout, where
/// `a_s = (s, s+k, ..., s+(L-1)k)`. Column `i` of the layout is block `T_i`.
pub fn bsp_layout(k: usize, sections: usize) -> Vec<Vec<usize>> {
    (1..=k)
        .map(|s| (0..sections).map(|t| s + t * k).collect())
        .collect()
}

/// The band splitting permutation `sigma_{k,L}`: a depth-`k` block
/// interleaver whose image list is `a_1, a_2, ..., a_k` concatenated.
pub fn bsp(k: usize, sections: usize) -> Result<Permutation> {
    if k == 0 || sections == 0 {
        return domain(format!("bsp needs k >= 1 and L >= 1, got k={k}, L={sections}"));
    }
    let images: Vec<usize> = bsp_layout(k, sections).into_iter().flatten().collect();
    Ok(Permutation::from_zero_based(
        images.into_iter().map(|i| i - 1).collect(),
    ))
}

/// Uniformly random permutation of `[1, n]` from a seeded generator.
pub fn random_permutation(n: usize, seed: u64) -> Result<Permutation> {
    if n == 0 {
        return domain("random permutation needs n >= 1");
    }
    Ok(random_permutation_with(n, &mut rng::seeded(seed)))
}

/// Fisher-Yates shuffle driven by `rng`.
pub fn random_permutation_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut forward: Vec<usize> = (0..n).collect();
    forward.shuffle(rng);
    Permutation::from_zero_based(forward)
}

fn check_size(cols: usize, p: &Permutation) -> Result<()> {
    if p.size() != cols {
        return domain(format!(
            "permutation of size {} applied to {cols} columns",
            p.size()
        ));
    }
    Ok(())
}

/// Column `j` of the result equals column `p.forward(j)` of `m`.
pub fn apply_columns(m: &BinaryMatrix, p: &Permutation) -> Result<BinaryMatrix> {
    check_size(m.cols(), p)?;
    m.submatrix_columns(&p.images())
}

/// [`apply_columns`] for sparse matrices.
pub fn apply_columns_sparse(h: &SparseParityCheck, p: &Permutation) -> Result<SparseParityCheck> {
    check_size(h.cols(), p)?;
    let entries = (0..h.cols())
        .flat_map(|c| h.col_adj(c).iter().map(move |&r| (r, p.inverse0(c))))
        .collect();
    SparseParityCheck::from_zero_based(h.rows(), h.cols(), entries)
}

/// Positions in the permuted matrix that hold the columns listed in `s`,
/// i.e. `{ f^{-1}(i) : i in s }`, sorted ascending.
pub fn map_index_set(s: &[usize], p: &Permutation) -> Result<Vec<usize>> {
    if let Some(&bad) = s.iter().find(|&&i| i == 0 || i > p.size()) {
        return domain(format!("index {bad} outside [1, {}]", p.size()));
    }
    let mut out: Vec<usize> = s.iter().map(|&i| p.inverse(i)).collect();
    out.sort_unstable();
    Ok(out)
}
