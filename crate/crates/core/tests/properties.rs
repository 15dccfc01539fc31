mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sc_burst_lab::decode::{compute_wmax_bisect, Peeler};
use sc_burst_lab::experiments::{self, ExperimentConfig, ExperimentId};
use sc_burst_lab::permute::apply_columns_sparse;
use sc_burst_lab::stopping::{
    self, enumerate_irreducible, is_stopping_set, span_all_subsets, span_exhaustive, StoppingSet,
};
use sc_burst_lab::*;

fn sc_params() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=4, 1usize..=4, 1usize..=12).prop_map(|(l, k, sections)| (l, k * l, sections))
}

proptest! {
    #[test]
    fn base_matrix_structure((l, r, sections) in sc_params()) {
        let b = build_base_matrix(l, r, sections).unwrap();
        let k = r / l;
        prop_assert_eq!((b.rows(), b.cols()), (sections + l - 1, k * sections));
        prop_assert!(b.col_weights().iter().all(|&w| w == l));
        let rw = b.row_weights();
        for (i, &w) in rw.iter().enumerate() {
            let row = i + 1;
            prop_assert!(w <= r);
            if row >= l && row <= sections {
                prop_assert_eq!(w, r);
            }
        }
        for a in 1..=b.cols() {
            for c in 1..=b.cols() {
                let same_block = (a - 1) / k == (c - 1) / k;
                prop_assert_eq!(b.column(a).unwrap() == b.column(c).unwrap(), same_block);
            }
        }
    }

    #[test]
    fn design_rate_identity((l, r, sections) in sc_params()) {
        let p = CodeParams::base(l, r, sections).unwrap();
        let kl = (p.k() * sections) as i64;
        prop_assert_eq!(design_rate(&p), Rate::from_integer(1) - Rate::new((sections + l - 1) as i64, kl));
    }

    #[test]
    fn lift_preserves_weights((l, r, sections) in sc_params(), m in 1usize..8, seed: u64, style in 0usize..3) {
        let style = [LiftStyle::RandomPermutation, LiftStyle::CirculantShift, LiftStyle::Identity][style];
        let b = build_base_matrix(l, r, sections).unwrap();
        let h = lift(&b, &LiftSpec::new(m, style, seed).unwrap());
        prop_assert_eq!((h.rows(), h.cols()), (b.rows() * m, b.cols() * m));
        prop_assert!(h.col_weights().iter().all(|&w| w == l));
        // each block row of H carries the base row weight
        let rw = h.row_weights();
        for (i, w) in b.row_weights().into_iter().enumerate() {
            prop_assert!(rw[i * m..(i + 1) * m].iter().all(|&x| x == w));
        }
    }

    #[test]
    fn bsp_separates_block_members(k in 1usize..6, sections in 1usize..30) {
        let p = bsp(k, sections).unwrap();
        for i in 0..sections {
            for a in i * k + 1..=(i + 1) * k {
                for b in a + 1..=(i + 1) * k {
                    let gap = p.inverse(a).abs_diff(p.inverse(b));
                    prop_assert!(gap >= sections);
                    if b == a + 1 {
                        prop_assert_eq!(gap, sections);
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_inverse_round_trip(n in 1usize..200, seed: u64) {
        let p = random_permutation(n, seed).unwrap();
        for j in 1..=n {
            prop_assert_eq!(p.inverse(p.forward(j)), j);
        }
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }

    #[test]
    fn apply_columns_keeps_rows_and_columns((l, r, sections) in sc_params(), seed: u64) {
        let b = build_base_matrix(l, r, sections).unwrap();
        let p = random_permutation(b.cols(), seed).unwrap();
        let pb = apply_columns(&b, &p).unwrap();
        prop_assert_eq!(pb.row_weights(), b.row_weights());
        let mut before: Vec<_> = (1..=b.cols()).map(|c| b.column(c).unwrap()).collect();
        let mut after: Vec<_> = (1..=b.cols()).map(|c| pb.column(c).unwrap()).collect();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn alist_round_trip((l, r, sections) in sc_params(), m in 1usize..6, seed: u64) {
        let h = lift(&build_base_matrix(l, r, sections).unwrap(), &LiftSpec::random(m, seed).unwrap());
        let mut buf = Vec::new();
        h.write_alist(&mut buf).unwrap();
        prop_assert_eq!(SparseParityCheck::read_alist(buf.as_slice()).unwrap(), h);
    }

    #[test]
    fn dense_sparse_lossless(rows in prop::collection::vec(prop::collection::vec(0u8..=1, 7), 1..6)) {
        let m = BinaryMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(m.to_sparse().to_dense(), m.clone());
        let cols = [3usize, 1, 7];
        let sub = m.submatrix_columns(&cols).unwrap();
        prop_assert_eq!((sub.rows(), sub.cols()), (m.rows(), 3));
    }
}

#[test]
fn random_permutations_are_uniform() {
    // 720 outcomes, 10^4 draws: every count within 5 binomial sigmas, and a
    // chi-square statistic far below its 5-sigma tail (719 dof)
    let draws = 10_000usize;
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for seed in 0..draws as u64 {
        *counts.entry(random_permutation(6, seed).unwrap().images()).or_default() += 1;
    }
    assert_eq!(counts.len(), 720);
    let p = 1.0 / 720.0;
    let mean = draws as f64 * p;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for &c in counts.values() {
        assert!((c as f64 - mean).abs() <= 5.0 * sigma, "count {c} vs mean {mean}");
    }
    let chi2: f64 = counts.values().map(|&c| (c as f64 - mean).powi(2) / mean).sum();
    let dof = 719.0;
    assert!(chi2 < dof + 5.0 * (2.0 * dof as f64).sqrt(), "chi2 = {chi2}");
}

#[test]
fn peeling_result_ignores_schedule() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let m = common::random_matrix(&mut rng, 8, 14, 0.35);
        let e: Vec<usize> = (1..=m.cols()).filter(|_| rng.gen_bool(0.5)).collect();
        let pattern = ErasurePattern::new(e.clone(), m.cols()).unwrap();
        let ours = peel(&m, &pattern).unwrap();
        for _ in 0..3 {
            assert_eq!(common::reference_peel(&m, &e, &mut rng), ours.residual);
        }
        assert_eq!(ours.success, ours.residual.is_empty());
        assert!(ours.residual.iter().all(|c| e.contains(c)));
        // the residual is itself a stopping set
        assert!(is_stopping_set(&m, &ours.residual).unwrap());
    }
}

#[test]
fn peeling_failure_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = build_base_matrix(3, 6, 10).unwrap();
    let h = lift(&b, &LiftSpec::random(5, 1).unwrap());
    let mut peeler = Peeler::new(&h);
    let mut checked = 0;
    while checked < 200 {
        let e: Vec<usize> = (1..=h.cols()).filter(|_| rng.gen_bool(0.4)).collect();
        let first = peeler.decode(&ErasurePattern::new(e.clone(), h.cols()).unwrap()).unwrap();
        if first.success {
            continue;
        }
        checked += 1;
        let mut bigger = e.clone();
        bigger.extend((1..=h.cols()).filter(|_| rng.gen_bool(0.2)));
        let second = peeler.decode(&ErasurePattern::new(bigger, h.cols()).unwrap()).unwrap();
        assert!(!second.success);
        assert!(first.residual.iter().all(|c| second.residual.contains(c)));
    }
}

#[test]
fn peeling_is_permutation_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = lift(&build_base_matrix(3, 6, 6).unwrap(), &LiftSpec::random(4, 2).unwrap());
    for seed in 0..50 {
        let p = random_permutation(h.cols(), seed).unwrap();
        let ph = apply_columns_sparse(&h, &p).unwrap();
        let e: Vec<usize> = (1..=h.cols()).filter(|_| rng.gen_bool(0.45)).collect();
        let moved = map_index_set(&e, &p).unwrap();
        let a = peel(&h, &ErasurePattern::new(e, h.cols()).unwrap()).unwrap();
        let b = peel(&ph, &ErasurePattern::new(moved, h.cols()).unwrap()).unwrap();
        assert_eq!(a.success, b.success);
        assert_eq!(map_index_set(&a.residual, &p).unwrap(), b.residual);
    }
}

#[test]
fn stopping_sets_transport_through_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (l, r, sections) in [(3, 6, 3), (2, 4, 4), (2, 6, 3)] {
        let b = build_base_matrix(l, r, sections).unwrap();
        let n = b.cols();
        for seed in 0..5 {
            let p = if seed == 0 {
                bsp(r / l, sections).unwrap()
            } else {
                random_permutation(n, seed).unwrap()
            };
            let pb = apply_columns(&b, &p).unwrap();
            for _ in 0..100 {
                let s: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
                let moved = map_index_set(&s, &p).unwrap();
                assert_eq!(is_stopping_set(&b, &s).unwrap(), is_stopping_set(&pb, &moved).unwrap());
            }
        }
    }
}

#[test]
fn irreducible_enumeration_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..150 {
        let m = common::random_matrix(&mut rng, 7, 12, 0.4);
        let ours: Vec<Vec<usize>> = enumerate_irreducible(&m)
            .unwrap()
            .into_iter()
            .map(|s| s.indices().to_vec())
            .collect();
        assert_eq!(ours, common::brute_irreducible(&m));
    }
}

#[test]
fn every_stopping_set_contains_an_irreducible_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..60 {
        let m = common::random_matrix(&mut rng, 6, 11, 0.4);
        let irreducible: Vec<StoppingSet> = enumerate_irreducible(&m).unwrap();
        let stop = common::stopping_table(&m);
        for s in 1..stop.len() {
            if stop[s] {
                let members = common::mask_to_indices(s);
                let outer = StoppingSet::new(members.clone()).unwrap().length();
                let inner = irreducible
                    .iter()
                    .find(|t| t.indices().iter().all(|i| members.contains(i)))
                    .expect("an irreducible subset");
                assert!(inner.length() <= outer);
            }
        }
    }
}

#[test]
fn span_over_all_sets_equals_span_over_irreducible_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let m = common::random_matrix(&mut rng, 6, 14, 0.35);
        let all = span_all_subsets(&m, 24).unwrap();
        assert_eq!(all, span_exhaustive(&m).unwrap());
        assert_eq!(all, common::brute_span(&m));
    }
}

#[test]
fn bisection_and_sweep_agree_on_lifted_codes() {
    for (sections, m, seed) in [(6, 5, 1), (8, 4, 2), (5, 9, 3), (10, 3, 4)] {
        let b = build_base_matrix(3, 6, sections).unwrap();
        let pb = apply_columns(&b, &bsp(2, sections).unwrap()).unwrap();
        for base in [&b, &pb] {
            let h = lift(base, &LiftSpec::random(m, seed).unwrap());
            assert_eq!(compute_wmax(&h), compute_wmax_bisect(&h));
        }
        let h = lift(&b, &LiftSpec::random(m, seed).unwrap());
        let shuffled = apply_columns_sparse(&h, &random_permutation(h.cols(), seed).unwrap()).unwrap();
        assert_eq!(compute_wmax(&shuffled), compute_wmax_bisect(&shuffled));
    }
}

#[test]
fn witness_burst_fails_and_shorter_bursts_pass() {
    let b = build_base_matrix(3, 6, 8).unwrap();
    let pb = apply_columns(&b, &bsp(2, 8).unwrap()).unwrap();
    let h = lift(&pb, &LiftSpec::random(4, 11).unwrap());
    let report = compute_wmax(&h);
    let start = report.witness_start.unwrap();
    assert!(!burst_correctable(&h, start, report.wmax + 1).unwrap());
    for s in 1..=h.cols() - report.wmax + 1 {
        assert!(burst_correctable(&h, s, report.wmax).unwrap());
    }
}

#[test]
fn permuted_lift_corrects_guaranteed_bursts() {
    // (L-1)M = 28 for L = 8, M = 4
    let b = build_base_matrix(3, 6, 8).unwrap();
    let pb = apply_columns(&b, &bsp(2, 8).unwrap()).unwrap();
    for seed in 0..20 {
        let h = lift(&pb, &LiftSpec::random(4, seed).unwrap());
        assert!(burst_correctable(&h, 1, 28).unwrap());
        let w = compute_wmax(&h).wmax;
        assert!(28 < w && w < 36, "seed {seed}: wmax {w}");
        let lambda = compute_wmax(&h).lambda_max();
        assert!(Rate::new(7, 16) < lambda && lambda < Rate::new(9, 16));
    }
}

#[test]
fn thresholds_fall_towards_the_coupled_limit() {
    let thetas: Vec<f64> = [8, 16, 32, 64, 128]
        .iter()
        .map(|&sections| de::threshold_default(&build_base_matrix(3, 6, sections).unwrap()).theta)
        .collect();
    for w in thetas.windows(2) {
        assert!(w[1] <= w[0] + 2.0 * de::DEFAULT_PRECISION, "{thetas:?}");
    }
    assert!(thetas.iter().all(|&t| t > 0.48), "{thetas:?}");
}

#[test]
fn characterization_span_matches_decoder_on_base_matrices() {
    for (l, r) in [(2, 4), (3, 6), (2, 6), (4, 8)] {
        for sections in 1..=20 {
            let params = CodeParams::base(l, r, sections).unwrap();
            let b = build_base_matrix(l, r, sections).unwrap();
            let sigma = bsp(params.k(), sections).unwrap();
            let pb = apply_columns(&b, &sigma).unwrap();
            assert_eq!(compute_wmax(&b).wmax + 1, stopping::span_characterized(&params, None).unwrap());
            assert_eq!(compute_wmax(&pb).wmax + 1, stopping::span_characterized(&params, Some(&sigma)).unwrap());
        }
    }
}

fn without_wall_time(csv: &str) -> String {
    csv.lines()
        .map(|line| line.rsplit_once(',').map_or(line, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn experiments_are_reproducible() {
    let configs = [
        ExperimentConfig {
            sections: vec![8],
            lift_factors: vec![10],
            samples: 6,
            ..ExperimentConfig::defaults(ExperimentId::Histogram)
        },
        ExperimentConfig {
            lift_factors: vec![5],
            samples: 3,
            ..ExperimentConfig::defaults(ExperimentId::VerifyBounds)
        },
        ExperimentConfig {
            sections: vec![2, 4, 8],
            lift_factors: vec![4],
            ..ExperimentConfig::defaults(ExperimentId::LambdaVsL)
        },
    ];
    for cfg in configs {
        let render = || {
            let mut buf = Vec::new();
            experiments::write_records(&experiments::run(&cfg).unwrap(), &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        assert_eq!(without_wall_time(&render()), without_wall_time(&render()));
        for record in experiments::run(&cfg).unwrap() {
            if let Some(lambda) = record.lambda_exact() {
                assert!(Rate::from_integer(0) <= lambda && lambda <= Rate::from_integer(1));
                assert_eq!(record.lambda_max, Some(experiments::render_rate(lambda)));
            }
        }
    }
}

#[test]
fn single_sample_histogram_is_deterministic() {
    let cfg = ExperimentConfig {
        sections: vec![6],
        lift_factors: vec![8],
        samples: 1,
        ..ExperimentConfig::defaults(ExperimentId::Histogram)
    };
    let a = experiments::run_histogram(&cfg).unwrap();
    let b = experiments::run_histogram(&cfg).unwrap();
    let random: Vec<_> = a.iter().filter(|r| r.variant == "random").collect();
    assert_eq!(random.len(), 1);
    assert_eq!(a.iter().map(|r| r.wmax).collect::<Vec<_>>(), b.iter().map(|r| r.wmax).collect::<Vec<_>>());
}
