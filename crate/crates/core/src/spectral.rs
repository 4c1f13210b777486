//! Transfer matrices, Perron eigendata, pressure, equilibrium Markov
//! measures, entropy, means, covariances, and the Green-Kubo asymptotic
//! variance.
//!
//! For a locally constant potential of depth <= 2 the Ruelle operator
//! restricts to an `N x N` nonnegative matrix. Its leading eigenvalue is
//! `exp(P(phi))`; the Gibbs/equilibrium measure is the stochasticization
//! `p_ij = M_ij h_j / (lambda h_i)`, `pi_i = nu_i h_i` of the eigendata.
//!
//! Overflow control: the matrix always stores `exp(phi - max phi)` and the
//! pressure is restored as `log lambda_raw + max phi`, which also makes the
//! translation identity `P(phi + c) = P(phi) + c` exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::sft::{Potential, SftError, SftSystem};

/// Rayleigh-quotient stopping tolerance (relative to the eigenvalue).
pub const DEFAULT_TOL: f64 = 1e-14;
/// Power-iteration budget.
pub const DEFAULT_MAX_ITER: usize = 1_000_000;
/// Componentwise eigen-residual target, relative to `lambda * v_i`.
const RESIDUAL_TOL: f64 = 1e-13;
/// Lag budget before covariance decay is declared broken.
const MAX_COV_LAGS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// Transfer matrices need depth <= 2; recode deeper potentials first.
    DepthTooLarge { depth: usize },
    /// Reducible or periodic input; decompose into components instead.
    NotPrimitive,
    /// Power iteration exhausted its budget.
    NoConvergence,
    /// Eigenvector with a nonpositive or non-finite component.
    DegenerateEigenvector,
    /// Observable depth incompatible with the operation.
    DepthMismatch { depth: usize },
    /// Measure/observable/system shapes do not line up.
    SystemMismatch,
    /// Transition probability positive where the adjacency forbids it.
    UnsupportedTransition { from: usize, to: usize },
    /// Covariances fail to decay below tolerance within the lag budget.
    NoDecay,
    /// Row of a stochastic matrix does not sum to one.
    InvalidStochasticRow { row: usize },
    /// Stationary distribution is not unique (reducible chain).
    NonUniqueStationary,
    /// Underlying symbolic error.
    Sft(SftError),
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::DepthTooLarge { depth } => {
                write!(f, "potential depth {depth} > 2; recode first")
            }
            SpectralError::NotPrimitive => write!(f, "system is not primitive"),
            SpectralError::NoConvergence => write!(f, "power iteration did not converge"),
            SpectralError::DegenerateEigenvector => {
                write!(f, "eigenvector has a nonpositive component")
            }
            SpectralError::DepthMismatch { depth } => {
                write!(f, "observable depth {depth} unsupported here")
            }
            SpectralError::SystemMismatch => write!(f, "measure and observable shapes differ"),
            SpectralError::UnsupportedTransition { from, to } => write!(
                f,
                "transition {} -> {} carries mass but is forbidden",
                from + 1,
                to + 1
            ),
            SpectralError::NoDecay => write!(f, "covariances do not decay below tolerance"),
            SpectralError::InvalidStochasticRow { row } => {
                write!(f, "row {} does not sum to one", row + 1)
            }
            SpectralError::NonUniqueStationary => {
                write!(f, "stationary distribution is not unique")
            }
            SpectralError::Sft(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SpectralError {}

impl From<SftError> for SpectralError {
    fn from(e: SftError) -> Self {
        SpectralError::Sft(e)
    }
}

/// The matrix restriction of the transfer operator, stored in shifted form
/// `exp(phi - log_shift)` with `log_shift = max phi`.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    system: SftSystem,
    entries: Vec<f64>,
    log_shift: f64,
}

/// Builds the transfer matrix of a depth <= 2 potential.
pub fn transfer_matrix(potential: &Potential) -> Result<TransferMatrix, SpectralError> {
    let depth = potential.depth();
    if depth > 2 {
        return Err(SpectralError::DepthTooLarge { depth });
    }
    let system = potential.system().clone();
    let n = system.alphabet_size();
    let shift = potential.max_value();
    let mut entries = vec![0.0; n * n];
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
            entries[i * n + j] = math::exp(phi - shift);
        }
    }
    Ok(TransferMatrix {
        system,
        entries,
        log_shift: shift,
    })
}

impl TransferMatrix {
    pub fn system(&self) -> &SftSystem {
        &self.system
    }

    pub fn size(&self) -> usize {
        self.system.alphabet_size()
    }

    pub fn log_shift(&self) -> f64 {
        self.log_shift
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size() + j]
    }
}

#[inline]
fn matvec(entries: &[f64], n: usize, transpose: bool, v: &[f64], out: &mut [f64]) {
    if transpose {
        for j in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += entries[i * n + j] * v[i];
            }
            out[j] = acc;
        }
    } else {
        for i in 0..n {
            let row = &entries[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for j in 0..n {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Power iteration from the all-ones vector until successive Rayleigh
/// quotients agree to `tol` (relative), followed by a few steps of
/// Rayleigh-shifted inverse iteration to drive the eigen-residual to its
/// floating-point floor. The polish matters for strongly contracted
/// matrices (tiny spectral gap), where plain power iteration stalls at a
/// residual floor of order `eps / gap`.
fn power_iterate(
    entries: &[f64],
    n: usize,
    transpose: bool,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<f64>), SpectralError> {
    let mut v = vec![1.0f64; n];
    let mut w = vec![0.0f64; n];
    let mut rho = f64::NAN;
    let mut rho_prev = f64::NAN;
    let mut rho_prev2 = f64::NAN;
    let mut converged = false;
    for _ in 0..max_iter {
        matvec(entries, n, transpose, &v, &mut w);
        rho = dot(&v, &w) / dot(&v, &v);
        if !rho.is_finite() || rho <= 0.0 {
            return Err(SpectralError::NoConvergence);
        }
        // the two-step comparison covers a negative subdominant eigenvalue,
        // where the Rayleigh sequence oscillates around its limit
        if math::abs(rho - rho_prev) <= tol * rho || math::abs(rho - rho_prev2) <= tol * rho {
            converged = true;
            break;
        }
        rho_prev2 = rho_prev;
        rho_prev = rho;
        let mut m = 0.0f64;
        for &x in w.iter() {
            if x > m {
                m = x;
            }
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(SpectralError::NoConvergence);
        }
        for i in 0..n {
            v[i] = w[i] / m;
        }
    }
    if !converged {
        return Err(SpectralError::NoConvergence);
    }
    Ok(polish(entries, n, transpose, rho, v))
}

fn residual_inf(
    entries: &[f64],
    n: usize,
    transpose: bool,
    rho: f64,
    v: &[f64],
    w: &mut [f64],
) -> f64 {
    matvec(entries, n, transpose, v, w);
    let mut res = 0.0f64;
    for i in 0..n {
        res = res.max(math::abs(w[i] - rho * v[i]));
    }
    res
}

/// Shifted inverse iteration `(A - rho I) x = v` with Rayleigh updates;
/// keeps the best (smallest-residual) positive iterate.
fn polish(entries: &[f64], n: usize, transpose: bool, rho0: f64, v0: Vec<f64>) -> (f64, Vec<f64>) {
    let mut w = vec![0.0f64; n];
    let mut rho = rho0;
    let mut v = v0;
    let mut res = residual_inf(entries, n, transpose, rho, &v, &mut w);
    let mut shift = rho;
    for _ in 0..4 {
        if res <= 0.01 * RESIDUAL_TOL * rho {
            break;
        }
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = if transpose {
                    entries[j * n + i]
                } else {
                    entries[i * n + j]
                };
            }
            a[i * n + i] -= shift;
        }
        let mut b = v.clone();
        let x = match math::solve_dense(&mut a, &mut b, n) {
            Some(x) => x,
            None => {
                // exactly singular shift: nudge and retry
                shift *= 1.0 + 1e-13;
                continue;
            }
        };
        let mut mi = 0usize;
        for i in 1..n {
            if math::abs(x[i]) > math::abs(x[mi]) {
                mi = i;
            }
        }
        let scale = x[mi];
        if scale == 0.0 || !scale.is_finite() {
            break;
        }
        let cand: Vec<f64> = x.iter().map(|&y| y / scale).collect();
        if cand.iter().any(|&y| !(y > 0.0) || !y.is_finite()) {
            break;
        }
        matvec(entries, n, transpose, &cand, &mut w);
        let rho_new = dot(&cand, &w) / dot(&cand, &cand);
        if !rho_new.is_finite() || rho_new <= 0.0 {
            break;
        }
        let mut res_new = 0.0f64;
        for i in 0..n {
            res_new = res_new.max(math::abs(w[i] - rho_new * cand[i]));
        }
        if res_new < res {
            v = cand;
            rho = rho_new;
            shift = rho_new;
            res = res_new;
        } else {
            break;
        }
    }
    (rho, v)
}

/// `|lambda_2| / lambda` by one deflated power round: project the Perron
/// direction out with the spectral projector `h (nu .)/(nu.h)` and track the
/// geometric mean growth rate of the deflated iterates. Only used for
/// covariance tail bounds, so a rough estimate suffices.
fn estimate_gap(entries: &[f64], n: usize, lambda_raw: f64, h: &[f64], nu: &[f64]) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let nh = dot(nu, h);
    let project = |v: &mut [f64]| {
        let c = dot(nu, v) / nh;
        for i in 0..n {
            v[i] -= c * h[i];
        }
    };
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * (1.0 + i as f64 / n as f64)
        })
        .collect();
    project(&mut v);
    let mut w = vec![0.0f64; n];
    let burn = 60usize;
    let span = 400usize;
    let mut acc = 0.0f64;
    let mut cnt = 0usize;
    for k in 0..burn + span {
        let norm_v = math::sqrt(dot(&v, &v));
        if norm_v < 1e-280 {
            return 0.0;
        }
        matvec(entries, n, false, &v, &mut w);
        project(&mut w);
        let norm_w = math::sqrt(dot(&w, &w));
        if norm_w < 1e-280 {
            return 0.0;
        }
        if k >= burn {
            acc += math::ln(norm_w / norm_v);
            cnt += 1;
        }
        for i in 0..n {
            v[i] = w[i] / norm_w;
        }
    }
    let second = math::exp(acc / cnt as f64);
    (second / lambda_raw).clamp(0.0, 1.0 - 1e-12)
}

/// Perron eigendata of a transfer matrix: leading eigenvalue, positive right
/// eigenvector `h` (max-normalized), positive left eigenvector `nu`
/// (normalized so `nu . h = 1`), and a deflated estimate of
/// `|lambda_2|/lambda`.
#[derive(Debug, Clone)]
pub struct SpectralTriple {
    lambda_raw: f64,
    log_shift: f64,
    h: Vec<f64>,
    nu: Vec<f64>,
    gap_estimate: f64,
}

impl SpectralTriple {
    /// Leading eigenvalue with the overflow shift undone.
    pub fn lambda(&self) -> f64 {
        self.lambda_raw * math::exp(self.log_shift)
    }

    /// `log lambda`, computed as `log lambda_raw + log_shift` so that the
    /// translation identity is exact.
    pub fn pressure(&self) -> f64 {
        math::ln(self.lambda_raw) + self.log_shift
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn gap_estimate(&self) -> f64 {
        self.gap_estimate
    }
}

/// Power iteration on `M` and `M^T` for the Perron triple of a primitive
/// transfer matrix.
pub fn leading_triple(
    matrix: &TransferMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<SpectralTriple, SpectralError> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iter > 0, "iteration budget must be positive");
    if !matrix.system.is_primitive() {
        return Err(SpectralError::NotPrimitive);
    }
    let n = matrix.size();
    let (lambda_raw, mut h) = power_iterate(&matrix.entries, n, false, tol, max_iter)?;
    let (_, mut nu) = power_iterate(&matrix.entries, n, true, tol, max_iter)?;
    // h is max-normalized by construction; rescale defensively anyway
    let hmax = h.iter().cloned().fold(0.0f64, f64::max);
    for x in h.iter_mut() {
        *x /= hmax;
    }
    let nh = dot(&nu, &h);
    for x in nu.iter_mut() {
        *x /= nh;
    }
    let gap_estimate = estimate_gap(&matrix.entries, n, lambda_raw, &h, &nu);
    Ok(SpectralTriple {
        lambda_raw,
        log_shift: matrix.log_shift,
        h,
        nu,
        gap_estimate,
    })
}

/// Topological pressure `P(phi) = log lambda`. Potentials of depth > 2 are
/// recoded to the higher-block presentation first.
pub fn pressure(potential: &Potential) -> Result<f64, SpectralError> {
    pressure_with(potential, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

pub fn pressure_with(
    potential: &Potential,
    tol: f64,
    max_iter: usize,
) -> Result<f64, SpectralError> {
    let recoded;
    let pot = if potential.depth() > 2 {
        recoded = potential.higher_block_recode().1;
        &recoded
    } else {
        potential
    };
    let matrix = transfer_matrix(pot)?;
    let triple = leading_triple(&matrix, tol, max_iter)?;
    Ok(triple.pressure())
}

/// A stationary Markov chain on the symbols: row-stochastic `p` supported on
/// the adjacency structure plus its stationary vector `pi`.
#[derive(Debug, Clone)]
pub struct MarkovMeasure {
    n: usize,
    p: Vec<f64>,
    pi: Vec<f64>,
}

impl MarkovMeasure {
    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    pub fn stationary(&self) -> &[f64] {
        &self.pi
    }

    pub fn transition_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.p[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Wraps an explicit transition matrix supported on the system's
    /// adjacency; the stationary vector comes from a direct linear solve.
    pub fn from_transition(
        system: &SftSystem,
        rows: &[Vec<f64>],
    ) -> Result<MarkovMeasure, SpectralError> {
        let n = system.alphabet_size();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(SpectralError::SystemMismatch);
        }
        let mut p = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            let mut sum = 0.0;
            for (j, &x) in row.iter().enumerate() {
                if !(x >= 0.0) || !x.is_finite() {
                    return Err(SpectralError::InvalidStochasticRow { row: i });
                }
                if x > 0.0 && !system.is_edge(i, j) {
                    return Err(SpectralError::UnsupportedTransition { from: i, to: j });
                }
                sum += x;
            }
            if math::abs(sum - 1.0) > 1e-9 {
                return Err(SpectralError::InvalidStochasticRow { row: i });
            }
            for (j, &x) in row.iter().enumerate() {
                p[i * n + j] = x / sum;
            }
        }
        let pi = stationary_of(&p, n).ok_or(SpectralError::NonUniqueStationary)?;
        Ok(MarkovMeasure { n, p, pi })
    }
}

/// Stationary vector of a row-stochastic matrix: solve `(P^T - I) pi = 0`
/// with the normalization row `sum pi = 1` replacing the last equation.
fn stationary_of(p: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = vec![0.0f64; n * n];
    let mut b = vec![0.0f64; n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = p[j * n + i] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        a[(n - 1) * n + j] = 1.0;
    }
    b[n - 1] = 1.0;
    let mut pi = math::solve_dense(&mut a, &mut b, n)?;
    let mut sum = 0.0;
    for x in pi.iter_mut() {
        if *x < 0.0 {
            if *x < -1e-10 {
                return None;
            }
            *x = 0.0;
        }
        sum += *x;
    }
    for x in pi.iter_mut() {
        *x /= sum;
    }
    // reject solves that are not actually stationary
    for j in 0..n {
        let mut acc = 0.0;
        for i in 0..n {
            acc += pi[i] * p[i * n + j];
        }
        if math::abs(acc - pi[j]) > 1e-11 {
            return None;
        }
    }
    Some(pi)
}

/// The equilibrium state `p_ij = M_ij h_j / (lambda h_i)`, `pi_i = nu_i h_i`.
/// Rows are renormalized so the stochasticity holds to machine precision.
pub fn equilibrium_measure(
    triple: &SpectralTriple,
    matrix: &TransferMatrix,
) -> Result<MarkovMeasure, SpectralError> {
    let n = matrix.size();
    if triple.h.len() != n || triple.nu.len() != n {
        return Err(SpectralError::SystemMismatch);
    }
    for i in 0..n {
        let ok = triple.h[i] > 0.0
            && triple.h[i].is_finite()
            && triple.nu[i] > 0.0
            && triple.nu[i].is_finite();
        if !ok {
            return Err(SpectralError::DegenerateEigenvector);
        }
    }
    let mut p = vec![0.0; n * n];
    for i in 0..n {
        let mut sum = 0.0;
        for j in 0..n {
            let x = matrix.entries[i * n + j] * triple.h[j] / (triple.lambda_raw * triple.h[i]);
            p[i * n + j] = x;
            sum += x;
        }
        for j in 0..n {
            p[i * n + j] /= sum;
        }
    }
    let mut pi: Vec<f64> = (0..n).map(|i| triple.nu[i] * triple.h[i]).collect();
    let total: f64 = pi.iter().sum();
    for x in pi.iter_mut() {
        *x /= total;
    }
    Ok(MarkovMeasure { n, p, pi })
}

/// Convenience: transfer matrix, Perron triple, and equilibrium measure of a
/// depth <= 2 potential in one call.
pub fn equilibrium(
    potential: &Potential,
) -> Result<(SpectralTriple, MarkovMeasure), SpectralError> {
    let matrix = transfer_matrix(potential)?;
    let triple = leading_triple(&matrix, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let measure = equilibrium_measure(&triple, &matrix)?;
    Ok((triple, measure))
}

/// Entropy rate `-sum_i pi_i p_ij log p_ij` in nats; vanishing transitions
/// contribute zero.
pub fn markov_entropy(measure: &MarkovMeasure) -> f64 {
    let n = measure.n;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let pij = measure.p[i * n + j];
            if pij > 0.0 {
                acc -= measure.pi[i] * pij * math::ln(pij);
            }
        }
    }
    acc
}

/// `int g d mu` for a depth <= 2 observable on the same symbols.
pub fn measure_mean(measure: &MarkovMeasure, observable: &Potential) -> Result<f64, SpectralError> {
    let n = measure.n;
    if observable.system().alphabet_size() != n {
        return Err(SpectralError::SystemMismatch);
    }
    match observable.depth() {
        1 => {
            let mut acc = 0.0;
            for i in 0..n {
                acc += measure.pi[i]
                    * observable
                        .value(&[i])
                        .ok_or(SpectralError::SystemMismatch)?;
            }
            Ok(acc)
        }
        2 => {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let pij = measure.p[i * n + j];
                    if pij > 0.0 {
                        let g = observable
                            .value(&[i, j])
                            .ok_or(SpectralError::SystemMismatch)?;
                        acc += measure.pi[i] * pij * g;
                    }
                }
            }
            Ok(acc)
        }
        depth => Err(SpectralError::DepthMismatch { depth }),
    }
}

/// `P(phi) - (h_mu + int phi d mu)`: the defect in the variational
/// principle, nonnegative up to roundoff and zero exactly at equilibrium.
pub fn variational_gap(
    potential: &Potential,
    measure: &MarkovMeasure,
) -> Result<f64, SpectralError> {
    let n = measure.n;
    let system = potential.system();
    if system.alphabet_size() != n {
        return Err(SpectralError::SystemMismatch);
    }
    for i in 0..n {
        for j in 0..n {
            if measure.p[i * n + j] > 0.0 && !system.is_edge(i, j) {
                return Err(SpectralError::UnsupportedTransition { from: i, to: j });
            }
        }
    }
    let p = pressure(potential)?;
    let h = markov_entropy(measure);
    let mean = measure_mean(measure, potential)?;
    Ok(p - (h + mean))
}

/// `Cov(g, g o shift^lag)` under the stationary chain, by `lag` iterated
/// vector products (no eigendecomposition).
pub fn autocovariance(
    measure: &MarkovMeasure,
    observable: &Potential,
    lag: usize,
) -> Result<f64, SpectralError> {
    let g = depth_one_values(measure, observable)?;
    let mean = dot(&measure.pi, &g);
    let mut w = g.clone();
    for _ in 0..lag {
        w = chain_step(measure, &w);
    }
    let mut acc = 0.0;
    for i in 0..measure.n {
        acc += measure.pi[i] * g[i] * w[i];
    }
    Ok(acc - mean * mean)
}

fn depth_one_values(
    measure: &MarkovMeasure,
    observable: &Potential,
) -> Result<Vec<f64>, SpectralError> {
    if observable.depth() != 1 {
        return Err(SpectralError::DepthMismatch {
            depth: observable.depth(),
        });
    }
    if observable.system().alphabet_size() != measure.n {
        return Err(SpectralError::SystemMismatch);
    }
    (0..measure.n)
        .map(|i| observable.value(&[i]).ok_or(SpectralError::SystemMismatch))
        .collect()
}

fn chain_step(measure: &MarkovMeasure, w: &[f64]) -> Vec<f64> {
    let n = measure.n;
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += measure.p[i * n + j] * w[j];
        }
        out[i] = acc;
    }
    out
}

/// First `max_lag + 1` autocovariances (lags 0..=max_lag) in one sweep.
pub fn covariance_sequence(
    measure: &MarkovMeasure,
    observable: &Potential,
    max_lag: usize,
) -> Result<Vec<f64>, SpectralError> {
    let g = depth_one_values(measure, observable)?;
    let mean = dot(&measure.pi, &g);
    let mut out = Vec::with_capacity(max_lag + 1);
    let mut w = g.clone();
    for lag in 0..=max_lag {
        if lag > 0 {
            w = chain_step(measure, &w);
        }
        let mut acc = 0.0;
        for i in 0..measure.n {
            acc += measure.pi[i] * g[i] * w[i];
        }
        out.push(acc - mean * mean);
    }
    Ok(out)
}

/// Green-Kubo sum `Var(g) + 2 sum_n Cov(g, g o shift^n)`, truncated at the
/// first lag whose geometric tail bound `|Cov| * gap / (1 - gap)` drops
/// below `tol`. Negative results within `-tol` are rounded up to zero.
pub fn asymptotic_variance(
    measure: &MarkovMeasure,
    observable: &Potential,
    gap_estimate: f64,
    tol: f64,
) -> Result<f64, SpectralError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let g = depth_one_values(measure, observable)?;
    let mean = dot(&measure.pi, &g);
    let mut var = 0.0;
    for i in 0..measure.n {
        var += measure.pi[i] * g[i] * g[i];
    }
    var -= mean * mean;
    let gap = gap_estimate.clamp(0.0, 1.0);
    let mut acc = var;
    let mut w = g.clone();
    for _ in 1..=MAX_COV_LAGS {
        w = chain_step(measure, &w);
        let mut cov = 0.0;
        for i in 0..measure.n {
            cov += measure.pi[i] * g[i] * w[i];
        }
        cov -= mean * mean;
        acc += 2.0 * cov;
        if gap < 1.0 && math::abs(cov) * gap / (1.0 - gap) < tol {
            return Ok(if acc < 0.0 && acc >= -tol { 0.0 } else { acc });
        }
    }
    Err(SpectralError::NoDecay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{full_shift, golden_mean, one_block_recode};

    const PHI: f64 = 1.618033988749895;
    const LOG_PHI: f64 = 0.4812118250596035;

    fn phi_t(t: f64) -> Potential {
        let sys = golden_mean();
        Potential::symbol_weights(&sys, &[t, 0.0]).unwrap()
    }

    fn lambda_closed_form(t: f64) -> f64 {
        let et = t.exp();
        (et + (et * et + 4.0 * et).sqrt()) / 2.0
    }

    #[test]
    fn transfer_matrix_at_t_zero_is_adjacency() {
        let m = transfer_matrix(&phi_t(0.0)).unwrap();
        assert_eq!(m.log_shift(), 0.0);
        assert_eq!(m.entry(0, 0), 1.0);
        assert_eq!(m.entry(0, 1), 1.0);
        assert_eq!(m.entry(1, 0), 1.0);
        assert_eq!(m.entry(1, 1), 0.0);
    }

    #[test]
    fn transfer_matrix_shifts_by_max_value() {
        let m = transfer_matrix(&phi_t(1.0)).unwrap();
        assert_eq!(m.log_shift(), 1.0);
        assert!((m.entry(0, 0) - 1.0).abs() < 1e-15);
        assert!((m.entry(1, 0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(m.entry(1, 1), 0.0);
    }

    #[test]
    fn full_shift_zero_potential_is_all_ones() {
        let sys = full_shift(2);
        let m = transfer_matrix(&Potential::zero(&sys)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.entry(i, j), 1.0);
            }
        }
    }

    #[test]
    fn depth_three_is_rejected() {
        let sys = golden_mean();
        let p3 = Potential::from_fn(&sys, 3, |_| 0.0).unwrap();
        assert!(matches!(
            transfer_matrix(&p3),
            Err(SpectralError::DepthTooLarge { depth: 3 })
        ));
    }

    #[test]
    fn golden_mean_leading_eigenvalue_is_golden_ratio() {
        let m = transfer_matrix(&phi_t(0.0)).unwrap();
        let t = leading_triple(&m, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!((t.lambda() - PHI).abs() < 1e-10);
        // A is symmetric here: left and right eigenvectors are parallel,
        // h = (1, 1/phi) after max-normalization, nu = (phi, 1)/sqrt(5)
        assert!((t.h()[0] - 1.0).abs() < 1e-12);
        assert!((t.h()[1] - 1.0 / PHI).abs() < 1e-10);
        assert!((t.nu()[0] - PHI / 5.0f64.sqrt()).abs() < 1e-10);
        assert!((t.nu()[1] - 1.0 / 5.0f64.sqrt()).abs() < 1e-10);
        // second eigenvalue of [[1,1],[1,0]] is -1/phi
        assert!((t.gap_estimate() - 1.0 / (PHI * PHI)).abs() < 1e-6);
    }

    #[test]
    fn eigen_residuals_meet_the_stated_bound() {
        for t in [0.0, 1.0, -2.0] {
            let m = transfer_matrix(&phi_t(t)).unwrap();
            let tr = leading_triple(&m, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            let n = m.size();
            let lambda = tr.lambda() / m.log_shift().exp();
            for i in 0..n {
                let mut right = 0.0;
                let mut left = 0.0;
                for j in 0..n {
                    right += m.entry(i, j) * tr.h()[j];
                    left += m.entry(j, i) * tr.nu()[j];
                }
                assert!((right - lambda * tr.h()[i]).abs() < 1e-12 * lambda);
                assert!((left - lambda * tr.nu()[i]).abs() < 1e-12 * lambda);
            }
        }
    }

    #[test]
    fn closed_form_eigenvalue_along_the_family() {
        for t in [-2.0, -1.0, 1.0, 2.0] {
            let m = transfer_matrix(&phi_t(t)).unwrap();
            let tr = leading_triple(&m, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            assert!(
                (tr.lambda() - lambda_closed_form(t)).abs() < 1e-10,
                "t = {t}"
            );
        }
    }

    #[test]
    fn periodic_matrix_is_rejected() {
        let sys = crate::sft::make_sft(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let m = transfer_matrix(&Potential::zero(&sys)).unwrap();
        assert!(matches!(
            leading_triple(&m, DEFAULT_TOL, DEFAULT_MAX_ITER),
            Err(SpectralError::NotPrimitive)
        ));
    }

    #[test]
    fn exhausted_iteration_budget_is_reported() {
        let m = transfer_matrix(&phi_t(0.3)).unwrap();
        assert!(matches!(
            leading_triple(&m, DEFAULT_TOL, 2),
            Err(SpectralError::NoConvergence)
        ));
    }

    #[test]
    fn pressure_examples() {
        assert!((pressure(&phi_t(0.0)).unwrap() - LOG_PHI).abs() < 1e-10);
        let sys = full_shift(2);
        let p = pressure(&Potential::zero(&sys)).unwrap();
        assert!((p - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn translation_identity_is_exact() {
        let base = phi_t(1.3);
        let p0 = pressure(&base).unwrap();
        for c in [0.5, -2.0, 1.0] {
            let shifted = base.add_constant(c);
            let p1 = pressure(&shifted).unwrap();
            assert!(
                ((p1 - (p0 + c)).abs()) < 1e-14,
                "c = {c}: {p1} vs {}",
                p0 + c
            );
        }
    }

    #[test]
    fn golden_equilibrium_at_t_zero_is_the_parry_measure() {
        let (_, mu) = equilibrium(&phi_t(0.0)).unwrap();
        let s5 = 5.0f64.sqrt();
        assert!((mu.transition(0, 0) - 1.0 / PHI).abs() < 1e-12);
        assert!((mu.transition(0, 1) - 1.0 / (PHI * PHI)).abs() < 1e-12);
        assert!((mu.transition(1, 0) - 1.0).abs() < 1e-12);
        assert_eq!(mu.transition(1, 1), 0.0);
        assert!((mu.stationary()[0] - (5.0 + s5) / 10.0).abs() < 1e-12);
        assert!((mu.stationary()[1] - (5.0 - s5) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn full_shift_equilibrium_is_uniform() {
        let sys = full_shift(2);
        let (_, mu) = equilibrium(&Potential::zero(&sys)).unwrap();
        for i in 0..2 {
            assert!((mu.stationary()[i] - 0.5).abs() < 1e-13);
            for j in 0..2 {
                assert!((mu.transition(i, j) - 0.5).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn equilibrium_rows_are_stochastic_along_the_family() {
        for t in [-3.0, -1.0, 0.37, 2.0, 5.0] {
            let (_, mu) = equilibrium(&phi_t(t)).unwrap();
            for i in 0..2 {
                let s: f64 = (0..2).map(|j| mu.transition(i, j)).sum();
                assert!((s - 1.0).abs() < 1e-12, "t = {t}");
            }
            let pi_p: Vec<f64> = (0..2)
                .map(|j| {
                    (0..2)
                        .map(|i| mu.stationary()[i] * mu.transition(i, j))
                        .sum()
                })
                .collect();
            for j in 0..2 {
                assert!((pi_p[j] - mu.stationary()[j]).abs() < 1e-12, "t = {t}");
            }
        }
    }

    #[test]
    fn entropy_of_the_mme_equals_log_phi() {
        let (_, mu) = equilibrium(&phi_t(0.0)).unwrap();
        assert!((markov_entropy(&mu) - LOG_PHI).abs() < 1e-10);
        let sys = full_shift(2);
        let (_, uniform) = equilibrium(&Potential::zero(&sys)).unwrap();
        assert!((markov_entropy(&uniform) - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_the_fair_coin_chain() {
        // p11 = p12 = 1/2, p21 = 1 on the golden mean graph:
        // pi = (2/3, 1/3), entropy = (2/3) log 2
        let sys = golden_mean();
        let mu = MarkovMeasure::from_transition(&sys, &[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!((mu.stationary()[0] - 2.0 / 3.0).abs() < 1e-12);
        let expected = 2.0 / 3.0 * core::f64::consts::LN_2;
        assert!((markov_entropy(&mu) - expected).abs() < 1e-12);
    }

    #[test]
    fn mean_of_the_cylinder_indicator() {
        let sys = golden_mean();
        let (_, mu) = equilibrium(&phi_t(0.0)).unwrap();
        let g = Potential::symbol_indicator(&sys, 0);
        let mean = measure_mean(&mu, &g).unwrap();
        assert!((mean - (5.0 + 5.0f64.sqrt()) / 10.0).abs() < 1e-9);
        let zero = Potential::zero(&sys);
        assert_eq!(measure_mean(&mu, &zero).unwrap(), 0.0);
        let one = Potential::constant(&sys, 1.0);
        assert!((measure_mean(&mu, &one).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn variational_gap_examples() {
        let sys = golden_mean();
        let zero = Potential::zero(&sys);
        let (_, eq) = equilibrium(&zero).unwrap();
        assert!(variational_gap(&zero, &eq).unwrap().abs() < 1e-10);

        let coin = MarkovMeasure::from_transition(&sys, &[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        let gap = variational_gap(&zero, &coin).unwrap();
        assert!((gap - 0.0191137) < 1e-6 && (0.0191137 - gap) < 1e-6);

        let full = full_shift(2);
        let zero_full = Potential::zero(&full);
        let uniform =
            MarkovMeasure::from_transition(&full, &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(variational_gap(&zero_full, &uniform).unwrap().abs() < 1e-12);
    }

    #[test]
    fn unsupported_transitions_are_rejected() {
        let sys = golden_mean();
        let bad = MarkovMeasure::from_transition(&sys, &[vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert!(matches!(
            bad,
            Err(SpectralError::UnsupportedTransition { from: 1, to: 1 })
        ));
    }

    #[test]
    fn autocovariance_of_the_indicator_under_the_mme() {
        let sys = golden_mean();
        let (_, mu) = equilibrium(&phi_t(0.0)).unwrap();
        let g = Potential::symbol_indicator(&sys, 0);
        // lag 0: pi_1 (1 - pi_1) = 1/5 exactly
        assert!((autocovariance(&mu, &g, 0).unwrap() - 0.2).abs() < 1e-10);
        // lag 1: 1/sqrt(5) - (0.3 + 0.1 sqrt 5)
        let lag1 = 1.0 / 5.0f64.sqrt() - (0.3 + 0.1 * 5.0f64.sqrt());
        assert!((autocovariance(&mu, &g, 1).unwrap() - lag1).abs() < 1e-9);
        // lag n: 0.2 (-1/phi^2)^n
        for n in 0..=10 {
            let expected = 0.2 * (-1.0 / (PHI * PHI)).powi(n as i32);
            assert!(
                (autocovariance(&mu, &g, n).unwrap() - expected).abs() < 1e-9,
                "lag {n}"
            );
        }
    }

    #[test]
    fn asymptotic_variance_of_the_indicator() {
        let (tr, mu) = equilibrium(&phi_t(0.0)).unwrap();
        let g = Potential::symbol_indicator(&mu_system(), 0);
        let v = asymptotic_variance(&mu, &g, tr.gap_estimate(), 1e-10).unwrap();
        let expected = 1.0 / (5.0 * 5.0f64.sqrt());
        assert!((v - expected).abs() < 1e-7, "{v} vs {expected}");
    }

    fn mu_system() -> SftSystem {
        golden_mean()
    }

    #[test]
    fn constant_observables_have_zero_variance() {
        let sys = golden_mean();
        let (tr, mu) = equilibrium(&phi_t(0.0)).unwrap();
        let c = Potential::constant(&sys, 3.25);
        let v = asymptotic_variance(&mu, &c, tr.gap_estimate(), 1e-10).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn coboundaries_have_vanishing_variance() {
        let sys = golden_mean();
        let u = Potential::symbol_weights(&sys, &[0.7, -0.4]).unwrap();
        let cob = Potential::coboundary(&u, 0.9).unwrap();
        let zero = Potential::zero(&sys);
        let (block_sys, recoded) = one_block_recode(&[&zero.extend_depth(2), &cob]).unwrap();
        assert_eq!(block_sys.alphabet_size(), 3);
        let (tr, mu) = equilibrium(&recoded[0]).unwrap();
        let v = asymptotic_variance(&mu, &recoded[1], tr.gap_estimate(), 1e-10).unwrap();
        assert!(v.abs() < 1e-8, "variance of a coboundary: {v}");
    }

    #[test]
    fn covariance_sequence_matches_pointwise_lags() {
        let (_, mu) = equilibrium(&phi_t(0.5)).unwrap();
        let g = Potential::symbol_indicator(&mu_system(), 0);
        let seq = covariance_sequence(&mu, &g, 6).unwrap();
        for (lag, &c) in seq.iter().enumerate() {
            assert!((c - autocovariance(&mu, &g, lag).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn non_decaying_covariances_are_reported() {
        // nearly periodic chain: second eigenvalue -(1 - 1e-7), so the
        // covariances of the indicator barely decay
        let sys = golden_mean();
        let eps = 1e-7;
        let mu =
            MarkovMeasure::from_transition(&sys, &[vec![eps, 1.0 - eps], vec![1.0, 0.0]]).unwrap();
        let g = Potential::symbol_indicator(&sys, 0);
        let gap = 1.0 - eps;
        assert!(matches!(
            asymptotic_variance(&mu, &g, gap, 1e-10),
            Err(SpectralError::NoDecay)
        ));
    }

    #[test]
    fn depth_mismatch_is_reported() {
        let sys = golden_mean();
        let (_, mu) = equilibrium(&phi_t(0.0)).unwrap();
        let d2 = Potential::from_fn(&sys, 2, |w| w[0] as f64).unwrap();
        assert!(matches!(
            autocovariance(&mu, &d2, 1),
            Err(SpectralError::DepthMismatch { depth: 2 })
        ));
        let d3 = Potential::from_fn(&sys, 3, |_| 0.0).unwrap();
        assert!(matches!(
            measure_mean(&mu, &d3),
            Err(SpectralError::DepthMismatch { depth: 3 })
        ));
    }
}
