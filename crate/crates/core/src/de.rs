//! Protograph density evolution on the binary erasure channel and BP
//! threshold search.
//!
//! Generic over the floating-point type; `f64` is what the experiments use.

use num_traits::Float;

use crate::gf2::BinaryMatrix;

/// Residual erasure probability below which DE counts as converged.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 100_000;
/// Half-width of the final bisection bracket.
pub const DEFAULT_PRECISION: f64 = 5e-4;

/// Erasure probability carried on every edge of the base graph, in both
/// directions. Edge `e` joins check `edge_row(e)` and variable `edge_col(e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeMessageState<T> {
    pub var_to_check: Vec<T>,
    pub check_to_var: Vec<T>,
}

impl<T: Float> EdgeMessageState<T> {
    pub fn max_var_to_check(&self) -> T {
        self.var_to_check.iter().fold(T::zero(), |a, &b| a.max(b))
    }
}

/// Outcome of running DE at a single channel erasure probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeOutcome<T> {
    pub converged: bool,
    pub iterations: usize,
    /// Largest posterior bit erasure probability when the run stopped.
    pub residual: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdResult<T> {
    /// Midpoint of the final bracket.
    pub theta: T,
    /// Iterations DE needed at the bracket's lower end.
    pub iterations_at_theta: usize,
    /// Half-width of the final bracket; the threshold lies within
    /// `theta ± precision`.
    pub precision: T,
}

/// The edge structure of a base matrix, prepared for density evolution.
#[derive(Clone, Debug)]
pub struct ProtographDe {
    edge_row: Vec<usize>,
    edge_col: Vec<usize>,
    row_edges: Vec<Vec<usize>>,
    col_edges: Vec<Vec<usize>>,
}

impl ProtographDe {
    pub fn new(base: &BinaryMatrix) -> Self {
        let mut de = ProtographDe {
            edge_row: Vec::new(),
            edge_col: Vec::new(),
            row_edges: vec![Vec::new(); base.rows()],
            col_edges: vec![Vec::new(); base.cols()],
        };
        for r in 0..base.rows() {
            for c in 0..base.cols() {
                if base.at(r, c) == 1 {
                    let e = de.edge_row.len();
                    de.edge_row.push(r);
                    de.edge_col.push(c);
                    de.row_edges[r].push(e);
                    de.col_edges[c].push(e);
                }
            }
        }
        de
    }

    pub fn edges(&self) -> usize {
        self.edge_row.len()
    }

    pub fn edge_row(&self, e: usize) -> usize {
        self.edge_row[e] + 1
    }

    pub fn edge_col(&self, e: usize) -> usize {
        self.edge_col[e] + 1
    }

    /// All variable-to-check messages start at the channel erasure
    /// probability.
    pub fn initial_state<T: Float>(&self, epsilon: T) -> EdgeMessageState<T> {
        EdgeMessageState {
            var_to_check: vec![epsilon; self.edges()],
            check_to_var: vec![T::zero(); self.edges()],
        }
    }

    /// One flooding iteration: check nodes, then variable nodes. Returns the
    /// largest change of any variable-to-check message.
    pub fn step<T: Float>(&self, state: &mut EdgeMessageState<T>, epsilon: T) -> T {
        let one = T::one();
        for edges in &self.row_edges {
            for &e in edges {
                let known = edges
                    .iter()
                    .filter(|&&o| o != e)
                    .fold(one, |acc, &o| acc * (one - state.var_to_check[o]));
                state.check_to_var[e] = one - known;
            }
        }
        let mut delta = T::zero();
        for edges in &self.col_edges {
            for &e in edges {
                let erased = edges
                    .iter()
                    .filter(|&&o| o != e)
                    .fold(epsilon, |acc, &o| acc * state.check_to_var[o]);
                delta = delta.max((erased - state.var_to_check[e]).abs());
                state.var_to_check[e] = erased;
            }
        }
        delta
    }

    /// Largest posterior erasure probability of any variable node,
    /// `epsilon` times the product of all incoming check messages.
    pub fn max_posterior<T: Float>(&self, state: &EdgeMessageState<T>, epsilon: T) -> T {
        self.col_edges
            .iter()
            .map(|edges| edges.iter().fold(epsilon, |acc, &e| acc * state.check_to_var[e]))
            .fold(T::zero(), T::max)
    }

    /// Iterates until every posterior bit erasure probability drops below
    /// `tol`, the messages stop moving, or `max_iters` is reached.
    pub fn run<T: Float>(&self, epsilon: T, max_iters: usize, tol: T) -> DeOutcome<T> {
        let mut state = self.initial_state(epsilon);
        // below this the messages sit on a nonzero fixed point
        let stall = T::epsilon() * T::from(16.0).expect("float constant");
        for iteration in 1..=max_iters {
            let delta = self.step(&mut state, epsilon);
            let residual = self.max_posterior(&state, epsilon);
            if residual < tol {
                return DeOutcome {
                    converged: true,
                    iterations: iteration,
                    residual,
                };
            }
            if delta <= stall {
                return DeOutcome {
                    converged: false,
                    iterations: iteration,
                    residual,
                };
            }
        }
        DeOutcome {
            converged: false,
            iterations: max_iters,
            residual: self.max_posterior(&state, epsilon),
        }
    }

    /// BP threshold by bisection on the channel erasure probability over
    /// `[0, 1]`.
    pub fn threshold<T: Float>(&self, precision: T, max_iters: usize, tol: T) -> ThresholdResult<T> {
        bisect(precision, |eps| self.run(eps, max_iters, tol))
    }
}

fn bisect<T: Float>(precision: T, mut run: impl FnMut(T) -> DeOutcome<T>) -> ThresholdResult<T> {
    assert!(precision > T::zero(), "precision must be positive");
    let two = T::one() + T::one();
    let top = run(T::one());
    if top.converged {
        return ThresholdResult {
            theta: T::one(),
            iterations_at_theta: top.iterations,
            precision,
        };
    }
    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut lo_iterations = run(lo).iterations;
    while (hi - lo) / two > precision {
        let mid = (lo + hi) / two;
        let outcome = run(mid);
        if outcome.converged {
            lo = mid;
            lo_iterations = outcome.iterations;
        } else {
            hi = mid;
        }
    }
    ThresholdResult {
        theta: (lo + hi) / two,
        iterations_at_theta: lo_iterations,
        precision: (hi - lo) / two,
    }
}

/// Runs DE on `base` at erasure probability `epsilon`.
pub fn de_iterate<T: Float>(base: &BinaryMatrix, epsilon: T, max_iters: usize, tol: T) -> DeOutcome<T> {
    ProtographDe::new(base).run(epsilon, max_iters, tol)
}

/// BP threshold of the protograph `base`.
pub fn threshold<T: Float>(base: &BinaryMatrix, precision: T, max_iters: usize, tol: T) -> ThresholdResult<T> {
    ProtographDe::new(base).threshold(precision, max_iters, tol)
}

/// [`threshold`] with the default tolerance, iteration cap and precision.
pub fn threshold_default(base: &BinaryMatrix) -> ThresholdResult<f64> {
    threshold(base, DEFAULT_PRECISION, DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE)
}

/// BP threshold of the uncoupled `(dv, dc)`-regular ensemble from the
/// scalar recursion `x <- eps * (1 - (1 - x)^(dc-1))^(dv-1)`.
pub fn regular_threshold<T: Float>(
    dv: usize,
    dc: usize,
    precision: T,
    max_iters: usize,
    tol: T,
) -> ThresholdResult<T> {
    let stall = T::epsilon() * T::from(16.0).expect("float constant");
    bisect(precision, |eps| {
        let mut x = eps;
        for iteration in 1..=max_iters {
            let next = eps * (T::one() - (T::one() - x).powi(dc as i32 - 1)).powi(dv as i32 - 1);
            let delta = (next - x).abs();
            x = next;
            if x < tol || delta <= stall {
                return DeOutcome {
                    converged: x < tol,
                    iterations: iteration,
                    residual: x,
                };
            }
        }
        DeOutcome {
            converged: false,
            iterations: max_iters,
            residual: x,
        }
    })
}
