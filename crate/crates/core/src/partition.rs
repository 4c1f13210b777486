//! Pressure straight from the definition: log partition sums over
//! admissible `n`-words.
//!
//! In the symbolic metric `d(x,y) = 2^(-min{k : x_k != y_k})`, any
//! `eps < 1` makes one representative per `n`-cylinder a maximal
//! `(n, eps)`-separated family, so the separated-set supremum collapses to
//! `Z_n = sum_w exp(sup_[w] S_n phi)` and the `eps`-limit is exact at
//! finite `eps`. For a depth-2 potential the supremum over a cylinder needs
//! one symbol past position `n - 1`; it is closed by maximizing the last
//! factor over admissible successors, which keeps `Z_n` a matrix product.
//! Everything accumulates in log space: `Z_n` would overflow doubles near
//! `n ~ 700` for positive potentials.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::sft::Potential;
use crate::spectral::SpectralError;

/// One definitional pressure sample: `log Z_n` and the running estimate
/// `log Z_n / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionSumResult {
    pub n: usize,
    pub log_sum: f64,
    pub estimate: f64,
}

struct LogRecurrence {
    n_symbols: usize,
    /// `log_w[i*n + j] = phi-weight of the step i -> j`, `-inf` off-graph.
    log_w: Vec<f64>,
    /// closing vector: the last summand's window maxed over continuations
    closing: Vec<f64>,
}

fn log_recurrence(potential: &Potential) -> Result<LogRecurrence, SpectralError> {
    let depth = potential.depth();
    if depth > 2 {
        return Err(SpectralError::DepthTooLarge { depth });
    }
    let system = potential.system();
    let n = system.alphabet_size();
    let mut log_w = vec![f64::NEG_INFINITY; n * n];
    let mut closing = vec![f64::NEG_INFINITY; n];
    for i in 0..n {
        for j in 0..n {
            if !system.is_edge(i, j) {
                continue;
            }
            let phi = if depth == 1 {
                potential.value(&[i]).expect("validated table")
            } else {
                potential.value(&[i, j]).expect("validated table")
            };
            log_w[i * n + j] = phi;
            closing[i] = closing[i].max(if depth == 1 {
                potential.value(&[i]).expect("validated table")
            } else {
                phi
            });
        }
    }
    Ok(LogRecurrence {
        n_symbols: n,
        log_w,
        closing,
    })
}

impl LogRecurrence {
    /// One backward step `L_i <- logsumexp_j (log_w[ij] + L_j)`.
    fn step(&self, level: &[f64], scratch: &mut Vec<f64>) -> Vec<f64> {
        let n = self.n_symbols;
        let mut next = vec![f64::NEG_INFINITY; n];
        for i in 0..n {
            scratch.clear();
            for j in 0..n {
                let w = self.log_w[i * n + j];
                if w != f64::NEG_INFINITY {
                    scratch.push(w + level[j]);
                }
            }
            next[i] = math::log_sum_exp(scratch);
        }
        next
    }
}

/// `log Z_n` for the separated-set partition sum, via `n - 1` weighted
/// matrix-vector products in log-sum-exp arithmetic.
pub fn partition_sum(potential: &Potential, n: usize) -> Result<PartitionSumResult, SpectralError> {
    assert!(n >= 1, "partition sums need n >= 1");
    let rec = log_recurrence(potential)?;
    let mut level = rec.closing.clone();
    let mut scratch = Vec::with_capacity(rec.n_symbols);
    for _ in 1..n {
        level = rec.step(&level, &mut scratch);
    }
    let log_sum = math::log_sum_exp(&level);
    Ok(PartitionSumResult {
        n,
        log_sum,
        estimate: log_sum / n as f64,
    })
}

/// The whole sequence `n = 1..=n_max` from a single forward recurrence.
pub fn pressure_estimate_sequence(
    potential: &Potential,
    n_max: usize,
) -> Result<Vec<PartitionSumResult>, SpectralError> {
    assert!(n_max >= 2, "need at least two estimates");
    let rec = log_recurrence(potential)?;
    let mut out = Vec::with_capacity(n_max);
    let mut level = rec.closing.clone();
    let mut scratch = Vec::with_capacity(rec.n_symbols);
    for n in 1..=n_max {
        if n > 1 {
            level = rec.step(&level, &mut scratch);
        }
        let log_sum = math::log_sum_exp(&level);
        out.push(PartitionSumResult {
            n,
            log_sum,
            estimate: log_sum / n as f64,
        });
    }
    Ok(out)
}

/// The constant in the `C/n` convergence contract: the largest
/// `n * |estimate(n) - spectral|` over the run. Bounded (no growth in n)
/// exactly when the definitional estimates track the spectral pressure.
pub fn convergence_constant(sequence: &[PartitionSumResult], spectral: f64) -> f64 {
    sequence
        .iter()
        .map(|r| r.n as f64 * math::abs(r.estimate - spectral))
        .fold(0.0, f64::max)
}
