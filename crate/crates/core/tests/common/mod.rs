//! Brute-force oracles shared by the integration tests. They only use the
//! public matrix accessors, never the library's stopping-set or decoding
//! code.

#![allow(dead_code)]

use rand::Rng;
use sc_burst_lab::BinaryMatrix;

/// Row supports as bitmasks over the columns.
pub fn row_masks(m: &BinaryMatrix) -> Vec<u32> {
    assert!(m.cols() <= 24);
    (1..=m.rows())
        .map(|r| {
            (1..=m.cols()).fold(0u32, |acc, c| acc | (u32::from(m.get(r, c).unwrap()) << (c - 1)))
        })
        .collect()
}

/// `stop[s]` is true iff the column subset `s` has no row of weight one.
pub fn stopping_table(m: &BinaryMatrix) -> Vec<bool> {
    let rows = row_masks(m);
    (0u32..1 << m.cols())
        .map(|s| rows.iter().all(|&r| (r & s).count_ones() != 1))
        .collect()
}

/// `inside[e]` is true iff `e` contains a non-empty stopping set.
pub fn contains_stopping_set(stop: &[bool], cols: usize) -> Vec<bool> {
    let mut inside: Vec<bool> = stop.to_vec();
    inside[0] = false;
    for bit in 0..cols {
        for e in 0..inside.len() {
            if e & (1 << bit) != 0 && inside[e ^ (1 << bit)] {
                inside[e] = true;
            }
        }
    }
    inside
}

/// Minimum `1 + max - min` over non-empty stopping sets, `cols + 1` if none.
pub fn brute_span(m: &BinaryMatrix) -> usize {
    let stop = stopping_table(m);
    (1..stop.len())
        .filter(|&s| stop[s])
        .map(|s| 32 - (s as u32).leading_zeros() as usize - (s as u32).trailing_zeros() as usize)
        .min()
        .unwrap_or(m.cols() + 1)
}

/// Non-empty stopping sets no proper non-empty subset of which stops.
pub fn brute_irreducible(m: &BinaryMatrix) -> Vec<Vec<usize>> {
    let stop = stopping_table(m);
    let mut out = Vec::new();
    for s in 1..stop.len() {
        if !stop[s] {
            continue;
        }
        // walk the proper non-empty submasks
        let mut sub = (s - 1) & s;
        let mut minimal = true;
        while sub != 0 {
            if stop[sub] {
                minimal = false;
                break;
            }
            sub = (sub - 1) & s;
        }
        if minimal {
            out.push(mask_to_indices(s));
        }
    }
    out.sort();
    out
}

pub fn mask_to_indices(s: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|b| s & (1 << b) != 0)
        .map(|b| b + 1)
        .collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_rows: usize, max_cols: usize, density: f64) -> BinaryMatrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let data: Vec<Vec<u8>> = (0..rows)
        .map(|_| (0..cols).map(|_| u8::from(rng.gen_bool(density))).collect())
        .collect();
    BinaryMatrix::from_rows(&data).unwrap()
}

/// Textbook peeling: scan the checks in a random order and resolve any
/// check with exactly one erased neighbour, until nothing changes.
pub fn reference_peel<R: Rng>(m: &BinaryMatrix, erased: &[usize], rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut erased: Vec<bool> = (1..=m.cols()).map(|c| erased.contains(&c)).collect();
    let mut order: Vec<usize> = (1..=m.rows()).collect();
    loop {
        order.shuffle(rng);
        let mut changed = false;
        for &r in &order {
            let open: Vec<usize> = (1..=m.cols())
                .filter(|&c| erased[c - 1] && m.get(r, c).unwrap() == 1)
                .collect();
            if open.len() == 1 {
                erased[open[0] - 1] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (1..=m.cols()).filter(|&c| erased[c - 1]).collect()
}
