//! Ground truth that does not go through the spectral machinery: powers of
//! the dense truncation and Monte Carlo paths.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{truncate, BlockOperator, StateIndex, ValidatedChain};
use crate::error::{Error, Result};

/// Paths per work unit. Each unit draws from its own ChaCha stream, so the
/// result does not depend on how rayon schedules the units.
pub const PATHS_PER_CHUNK: usize = 1 << 14;

pub const DEFAULT_PATHS: usize = 1_000_000;

/// Smallest truncation for which the `(i, j)` block of the `n`-th power is
/// exact: the chain moves at most one level per step.
pub fn exact_levels(i: usize, j: usize, n: usize) -> usize {
    i.max(j) + n + 1
}

/// `m^n` by repeated squaring.
pub fn matrix_power(m: &DMatrix<f64>, mut n: usize) -> DMatrix<f64> {
    let mut result = DMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Block `(i, j)` of the `n`-th power of the `levels`-level truncation.
pub fn power_block<O: BlockOperator + ?Sized>(
    op: &O,
    levels: usize,
    n: usize,
    i: usize,
    j: usize,
) -> Result<DMatrix<f64>> {
    for level in [i, j] {
        if level > levels {
            return Err(Error::LevelOutOfRange { level, levels });
        }
    }
    if levels < exact_levels(i, j, n) {
        log::warn!(
            "truncation at {levels} levels is below the exactness bound {} for block ({i}, {j}) of P^{n}",
            exact_levels(i, j, n)
        );
    }
    let t = truncate(op, levels)?;
    let p = matrix_power(&t.matrix, n);
    let k = t.n_phases;
    Ok(p.view((i * k, j * k), (k, k)).into_owned())
}

/// Row of `P^n` starting at `start`, over every state within `steps` levels
/// of it (levels `0..=start.level + steps`). Exact.
pub fn exact_row<O: BlockOperator + ?Sized>(op: &O, start: StateIndex, steps: usize) -> Result<DVector<f64>> {
    let n = op.n_phases();
    if start.phase >= n {
        return Err(Error::IndexMismatch);
    }
    let reach = start.level + steps;
    let t = truncate(op, reach + 1)?;
    let mut row = DVector::zeros(t.matrix.nrows()).transpose();
    row[start.flat(n)] = 1.0;
    for _ in 0..steps {
        row = &row * &t.matrix;
    }
    Ok(row.transpose().rows(0, (reach + 1) * n).into_owned())
}

/// Counts of the end states of simulated paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    pub n_legs: usize,
    pub start: StateIndex,
    pub steps: usize,
    pub paths: usize,
    pub seed: u64,
    /// Indexed by [`StateIndex::flat`] over levels `0..=start.level + steps`.
    pub counts: Vec<u64>,
}

impl EmpiricalDistribution {
    pub fn levels(&self) -> usize {
        self.start.level + self.steps
    }

    pub fn probability(&self, state: StateIndex) -> f64 {
        self.counts.get(state.flat(self.n_legs)).map_or(0.0, |&c| c as f64 / self.paths as f64)
    }

    pub fn probabilities(&self) -> DVector<f64> {
        DVector::from_iterator(self.counts.len(), self.counts.iter().map(|&c| c as f64 / self.paths as f64))
    }

    /// Nonzero counts with their states.
    pub fn iter(&self) -> impl Iterator<Item = (StateIndex, u64)> + '_ {
        let n = self.n_legs;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(f, &c)| (StateIndex::new(f / n, f % n), c))
    }
}

fn run_chunk(chain: &ValidatedChain, start: StateIndex, steps: usize, paths: usize, seed: u64, chunk: u64) -> Vec<u64> {
    let n = chain.n_legs;
    let mut counts = vec![0u64; (start.level + steps + 1) * n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    for _ in 0..paths {
        let mut s = start;
        for _ in 0..steps {
            s = chain.step(s, rng.random::<f64>());
        }
        counts[s.flat(n)] += 1;
    }
    counts
}

/// Simulate `paths` independent trajectories of `steps` steps each.
///
/// Reproducible for a fixed `seed`: chunk `k` always uses stream `k` of the
/// seeded generator, whatever the thread count.
pub fn simulate(
    chain: &ValidatedChain,
    start: StateIndex,
    steps: usize,
    paths: usize,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    if start.phase >= chain.n_legs {
        return Err(Error::IndexMismatch);
    }
    if paths == 0 {
        return Err(Error::InvalidSpec("at least one path is needed".into()));
    }
    let chunks = paths.div_ceil(PATHS_PER_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = PATHS_PER_CHUNK.min(paths - k * PATHS_PER_CHUNK);
            run_chunk(chain, start, steps, len, seed, k as u64)
        })
        .reduce(
            || vec![0u64; (start.level + steps + 1) * chain.n_legs],
            |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
                acc
            },
        );
    Ok(EmpiricalDistribution {
        n_legs: chain.n_legs,
        start,
        steps,
        paths,
        seed,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub max_deviation: f64,
    pub total_variation: f64,
    /// `(p_hat - p) / sqrt(p (1 - p) / paths)`; infinite when the exact
    /// probability is degenerate (0 or 1) and the empirical one differs.
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
}

impl Comparison {
    pub fn passes(&self, tv_tol: f64, z_tol: f64) -> bool {
        self.total_variation < tv_tol && self.max_abs_z < z_tol
    }
}

pub fn compare(emp: &EmpiricalDistribution, exact: &DVector<f64>) -> Result<Comparison> {
    if exact.len() != emp.counts.len() {
        return Err(Error::IndexMismatch);
    }
    let paths = emp.paths as f64;
    let mut max_deviation = 0.0f64;
    let mut tv = 0.0;
    let mut z_scores = Vec::with_capacity(exact.len());
    for (&count, &p) in emp.counts.iter().zip(exact.iter()) {
        let p_hat = count as f64 / paths;
        let dev = p_hat - p;
        max_deviation = max_deviation.max(dev.abs());
        tv += dev.abs();
        let var = p * (1.0 - p) / paths;
        z_scores.push(if var > 0.0 {
            dev / var.sqrt()
        } else if dev.abs() < 1e-15 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    let max_abs_z = z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    Ok(Comparison {
        max_deviation,
        total_variation: tv / 2.0,
        z_scores,
        max_abs_z,
    })
}
