//! Legendre-Fenchel machinery on sampled pressure curves: conjugates,
//! biconjugates, Fenchel-Young gaps, and subdifferential intervals.
//!
//! Curves are plain sampled data `(t_i, P_i)`. Conjugates are computed by
//! exhaustive grid maximization, robust at the grid sizes used here; the
//! slope grid spans the discrete chord slopes inflated by 1% so the
//! boundary behavior of the conjugate stays visible. Interpolation between
//! grid points is linear everywhere, which preserves convexity of sampled
//! convex data.

use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::sft::Potential;
use crate::spectral::{pressure, SpectralError};

/// Relative threshold above which a subdifferential interval counts as a
/// corner: `D+ - D- > threshold * (1 + |D+| + |D-|)`. Richardson
/// extrapolation leaves grid noise of order `(grid spacing)^2`, well below
/// this for genuine jumps.
pub const CORNER_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum DualityError {
    /// All chord slopes equal: an affine curve has a point conjugate.
    DegenerateRange,
    /// Query outside the sampled grid.
    OutOfRange,
    /// Subdifferential queries need two grid points on each side.
    TooCloseToBoundary,
    /// Grid not strictly increasing / lengths mismatched / non-finite data.
    BadGrid,
    /// Spectral failure while sampling, annotated with the failing t.
    SpectralAt { t: f64, source: SpectralError },
}

impl fmt::Display for DualityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualityError::DegenerateRange => write!(f, "curve is affine: degenerate slope range"),
            DualityError::OutOfRange => write!(f, "query point outside the sampled grid"),
            DualityError::TooCloseToBoundary => {
                write!(f, "need two grid points on each side of the query")
            }
            DualityError::BadGrid => write!(f, "grid must be strictly increasing and finite"),
            DualityError::SpectralAt { t, source } => {
                write!(f, "pressure evaluation failed at t = {t}: {source}")
            }
        }
    }
}

impl core::error::Error for DualityError {}

/// A sampled map `t -> P(phi_0 + t psi)` on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureCurve {
    t_grid: Vec<f64>,
    values: Vec<f64>,
}

impl PressureCurve {
    pub fn from_samples(t_grid: Vec<f64>, values: Vec<f64>) -> Result<Self, DualityError> {
        if t_grid.len() != values.len() || t_grid.len() < 2 {
            return Err(DualityError::BadGrid);
        }
        if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(DualityError::BadGrid);
        }
        if t_grid.iter().chain(values.iter()).any(|x| !x.is_finite()) {
            return Err(DualityError::BadGrid);
        }
        Ok(PressureCurve { t_grid, values })
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// Linear interpolation; errors outside the grid.
    pub fn value_at(&self, t: f64) -> Result<f64, DualityError> {
        interp(&self.t_grid, &self.values, t)
    }

    /// Slopes of consecutive chords, one per grid interval.
    pub fn chord_slopes(&self) -> Vec<f64> {
        self.t_grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0]))
            .collect()
    }

    /// Index of the grid point nearest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        let grid = &self.t_grid;
        let mut lo = 0usize;
        let mut hi = grid.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if grid[mid] < t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            0
        } else if lo >= grid.len() {
            grid.len() - 1
        } else if math::abs(grid[lo] - t) < math::abs(t - grid[lo - 1]) {
            lo
        } else {
            lo - 1
        }
    }
}

/// Samples `t -> P(base + t * direction)` on a uniform grid.
pub fn sample_curve(
    base: &Potential,
    direction: &Potential,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<PressureCurve, DualityError> {
    assert!(steps >= 3, "need at least 3 grid points");
    assert!(t_min < t_max, "empty parameter range");
    let mut t_grid = Vec::with_capacity(steps);
    let mut values = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64;
        let pot = base
            .add_scaled(t, direction)
            .map_err(|e| DualityError::SpectralAt {
                t,
                source: SpectralError::Sft(e),
            })?;
        let p = pressure(&pot).map_err(|source| DualityError::SpectralAt { t, source })?;
        t_grid.push(t);
        values.push(p);
    }
    PressureCurve::from_samples(t_grid, values)
}

/// The sampled Legendre transform `I(a) = sup_t (a t - P(t))`: the rate
/// function of the slope variable, and by duality the negative entropy of
/// the equilibrium state with that mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateCurve {
    a_grid: Vec<f64>,
    rate: Vec<f64>,
}

impl ConjugateCurve {
    pub fn from_samples(a_grid: Vec<f64>, rate: Vec<f64>) -> Result<Self, DualityError> {
        if a_grid.len() != rate.len() || a_grid.is_empty() {
            return Err(DualityError::BadGrid);
        }
        if a_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(DualityError::BadGrid);
        }
        if a_grid.iter().chain(rate.iter()).any(|x| !x.is_finite()) {
            return Err(DualityError::BadGrid);
        }
        Ok(ConjugateCurve { a_grid, rate })
    }

    pub fn a_grid(&self) -> &[f64] {
        &self.a_grid
    }

    pub fn rate(&self) -> &[f64] {
        &self.rate
    }

    pub fn rate_at(&self, a: f64) -> Result<f64, DualityError> {
        if self.a_grid.len() == 1 {
            return if a == self.a_grid[0] {
                Ok(self.rate[0])
            } else {
                Err(DualityError::OutOfRange)
            };
        }
        interp(&self.a_grid, &self.rate, a)
    }

    /// Slope (argument) of the minimal rate: the tangency slope of the
    /// conjugate pair at `t = 0`.
    pub fn argmin(&self) -> f64 {
        let mut best = 0usize;
        for (i, &r) in self.rate.iter().enumerate() {
            if r < self.rate[best] {
                best = i;
            }
        }
        self.a_grid[best]
    }
}

/// Conjugates a sampled curve on `a_steps` slope points spanning the chord
/// slopes, inflated by 1% about their midpoint.
pub fn legendre(curve: &PressureCurve, a_steps: usize) -> Result<ConjugateCurve, DualityError> {
    assert!(a_steps >= 1, "need at least one slope point");
    if curve.len() < 3 {
        return Err(DualityError::BadGrid);
    }
    let slopes = curve.chord_slopes();
    let mut smin = f64::INFINITY;
    let mut smax = f64::NEG_INFINITY;
    for &s in &slopes {
        smin = smin.min(s);
        smax = smax.max(s);
    }
    let scale = 1.0 + math::abs(smin).max(math::abs(smax));
    if smax - smin < 1e-12 * scale {
        return Err(DualityError::DegenerateRange);
    }
    let center = 0.5 * (smin + smax);
    let half = 0.5 * (smax - smin) * 1.01;
    let mut a_grid = Vec::with_capacity(a_steps);
    let mut rate = Vec::with_capacity(a_steps);
    for m in 0..a_steps {
        let a = if a_steps == 1 {
            center
        } else {
            center - half + 2.0 * half * m as f64 / (a_steps - 1) as f64
        };
        let mut best = f64::NEG_INFINITY;
        for (k, &t) in curve.t_grid.iter().enumerate() {
            let v = a * t - curve.values[k];
            if v > best {
                best = v;
            }
        }
        a_grid.push(a);
        rate.push(best);
    }
    ConjugateCurve::from_samples(a_grid, rate)
}

/// `P**(t) = sup_a (t a - I(a))` over the sampled slope grid. Dominated by
/// the original curve everywhere, and equal to it up to `O(spacing^2)` on
/// the interior for smooth convex input.
pub fn biconjugate(conj: &ConjugateCurve, t_grid: &[f64]) -> Vec<f64> {
    t_grid
        .iter()
        .map(|&t| {
            let mut best = f64::NEG_INFINITY;
            for (m, &a) in conj.a_grid.iter().enumerate() {
                let v = t * a - conj.rate[m];
                if v > best {
                    best = v;
                }
            }
            best
        })
        .collect()
}

/// `P(t) + I(a) - t a`, linearly interpolated on both grids. Nonnegative up
/// to roundoff, zero exactly on subdifferential pairs.
pub fn fenchel_young_gap(
    curve: &PressureCurve,
    conj: &ConjugateCurve,
    t: f64,
    a: f64,
) -> Result<f64, DualityError> {
    let p = curve.value_at(t)?;
    let i = conj.rate_at(a)?;
    Ok(p + i - t * a)
}

/// One-sided derivatives at a grid point: `[D-, D+]` bracketing the
/// subdifferential of the convex curve restricted to the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubdiffInterval {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
}

impl SubdiffInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_corner_at(&self, threshold: f64) -> bool {
        self.width() > threshold * (1.0 + math::abs(self.upper) + math::abs(self.lower))
    }

    pub fn is_corner(&self) -> bool {
        self.is_corner_at(CORNER_THRESHOLD)
    }
}

/// Richardson-extrapolated one-sided difference quotients at the grid point
/// nearest `t`. Steps `delta` and `delta/2` combine as `2 D(h) - D(2h)`,
/// killing the leading error term.
pub fn subdifferential_interval(
    curve: &PressureCurve,
    t: f64,
) -> Result<SubdiffInterval, DualityError> {
    let grid = &curve.t_grid;
    if t < grid[0] || t > grid[grid.len() - 1] {
        return Err(DualityError::OutOfRange);
    }
    let k = curve.nearest_index(t);
    subdifferential_at_index(curve, k)
}

pub(crate) fn subdifferential_at_index(
    curve: &PressureCurve,
    k: usize,
) -> Result<SubdiffInterval, DualityError> {
    let grid = &curve.t_grid;
    let vals = &curve.values;
    if k < 2 || k + 2 >= grid.len() {
        return Err(DualityError::TooCloseToBoundary);
    }
    let right_h = (vals[k + 1] - vals[k]) / (grid[k + 1] - grid[k]);
    let right_2h = (vals[k + 2] - vals[k]) / (grid[k + 2] - grid[k]);
    let left_h = (vals[k] - vals[k - 1]) / (grid[k] - grid[k - 1]);
    let left_2h = (vals[k] - vals[k - 2]) / (grid[k] - grid[k - 2]);
    Ok(SubdiffInterval {
        t: grid[k],
        lower: 2.0 * left_h - left_2h,
        upper: 2.0 * right_h - right_2h,
    })
}

fn interp(grid: &[f64], values: &[f64], x: f64) -> Result<f64, DualityError> {
    let n = grid.len();
    if n == 0 || x < grid[0] || x > grid[n - 1] {
        return Err(DualityError::OutOfRange);
    }
    let mut lo = 0usize;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if grid[mid] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if x == grid[lo] {
        return Ok(values[lo]);
    }
    let w = (x - grid[lo]) / (grid[hi] - grid[lo]);
    Ok(values[lo] + w * (values[hi] - values[lo]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{golden_mean, Potential};

    const LOG_PHI: f64 = 0.4812118250596035;
    const MEAN_AT_ZERO: f64 = 0.723606797749979; // (5 + sqrt 5)/10

    fn golden_family(t_min: f64, t_max: f64, steps: usize) -> PressureCurve {
        let sys = golden_mean();
        let base = Potential::zero(&sys);
        let g = Potential::symbol_indicator(&sys, 0);
        sample_curve(&base, &g, t_min, t_max, steps).unwrap()
    }

    fn closed_form_pressure(t: f64) -> f64 {
        let et = t.exp();
        ((et + (et * et + 4.0 * et).sqrt()) / 2.0).ln()
    }

    #[test]
    fn sampled_curve_hits_known_values() {
        let curve = golden_family(-5.0, 5.0, 201);
        let mid = curve.len() / 2;
        assert_eq!(curve.t_grid()[mid], 0.0);
        assert!((curve.values()[mid] - LOG_PHI).abs() < 1e-10);
        for (k, &t) in curve.t_grid().iter().enumerate() {
            assert!((curve.values()[k] - closed_form_pressure(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn deep_negative_t_matches_the_closed_form() {
        let curve = golden_family(-20.2, -19.8, 5);
        let k = curve.nearest_index(-20.0);
        assert!((curve.t_grid()[k] + 20.0).abs() < 1e-12);
        assert!((curve.values()[k] - closed_form_pressure(-20.0)).abs() < 1e-3);
    }

    #[test]
    fn zero_direction_gives_a_degenerate_conjugate() {
        let sys = golden_mean();
        let base = Potential::zero(&sys);
        let zero_dir = Potential::zero(&sys);
        let curve = sample_curve(&base, &zero_dir, -1.0, 1.0, 11).unwrap();
        for &v in curve.values() {
            assert!((v - LOG_PHI).abs() < 1e-12);
        }
        assert_eq!(legendre(&curve, 10), Err(DualityError::DegenerateRange));
    }

    #[test]
    fn sampled_curves_are_midpoint_convex() {
        let curve = golden_family(-6.0, 6.0, 241);
        let v = curve.values();
        for k in 1..curve.len() - 1 {
            assert!(v[k] <= 0.5 * (v[k - 1] + v[k + 1]) + 1e-10);
        }
    }

    #[test]
    fn conjugate_touches_minus_entropy_at_the_tangency_slope() {
        let curve = golden_family(-10.0, 10.0, 2001);
        let conj = legendre(&curve, 2001).unwrap();
        // slope grid point nearest the t = 0 mean
        let mut best = 0usize;
        for (i, &a) in conj.a_grid().iter().enumerate() {
            if (a - MEAN_AT_ZERO).abs() < (conj.a_grid()[best] - MEAN_AT_ZERO).abs() {
                best = i;
            }
        }
        assert!((conj.rate()[best] + LOG_PHI).abs() < 2e-3);
        // and the minimal rate sits at that slope
        assert!((conj.argmin() - MEAN_AT_ZERO).abs() < 2e-3);
    }

    #[test]
    fn conjugate_boundary_is_attained_at_the_endpoint() {
        let curve = golden_family(-4.0, 4.0, 101);
        let conj = legendre(&curve, 51).unwrap();
        let a_max = *conj.a_grid().last().unwrap();
        let n = curve.len() - 1;
        let expected = a_max * curve.t_grid()[n] - curve.values()[n];
        assert!((conj.rate().last().unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn conjugate_rate_is_discretely_convex() {
        let curve = golden_family(-8.0, 8.0, 801);
        let conj = legendre(&curve, 501).unwrap();
        let r = conj.rate();
        for k in 1..r.len() - 1 {
            assert!(r[k] <= 0.5 * (r[k - 1] + r[k + 1]) + 1e-10);
        }
    }

    #[test]
    fn affine_curves_are_rejected() {
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let v: Vec<f64> = t.iter().map(|x| 0.3 + 2.0 * x).collect();
        let curve = PressureCurve::from_samples(t, v).unwrap();
        assert_eq!(legendre(&curve, 5), Err(DualityError::DegenerateRange));
    }

    #[test]
    fn biconjugate_is_dominated_and_close() {
        let curve = golden_family(-8.0, 8.0, 1201);
        let conj = legendre(&curve, 1201).unwrap();
        let back = biconjugate(&conj, curve.t_grid());
        let n = curve.len();
        let mut max_interior = 0.0f64;
        for k in 0..n {
            let diff = back[k] - curve.values()[k];
            assert!(diff <= 1e-12, "biconjugate exceeds the curve at {k}");
            if k > n / 20 && k < n - n / 20 {
                max_interior = max_interior.max(-diff);
            }
        }
        assert!(max_interior < 1e-3, "interior deviation {max_interior}");
    }

    #[test]
    fn single_point_conjugate_gives_an_affine_biconjugate() {
        let conj = ConjugateCurve::from_samples(vec![0.7], vec![-0.4]).unwrap();
        let ts = [-1.0, 0.0, 2.0];
        let vals = biconjugate(&conj, &ts);
        for (&t, &v) in ts.iter().zip(vals.iter()) {
            assert!((v - (0.7 * t + 0.4)).abs() < 1e-15);
        }
    }

    #[test]
    fn fenchel_young_gap_behaves_at_and_away_from_tangency() {
        let curve = golden_family(-10.0, 10.0, 2001);
        let conj = legendre(&curve, 2001).unwrap();
        let tangent = fenchel_young_gap(&curve, &conj, 0.0, MEAN_AT_ZERO).unwrap();
        assert!(tangent.abs() < 2e-3);
        let off = fenchel_young_gap(&curve, &conj, 0.0, 0.9).unwrap();
        assert!(off > 0.01);
        // chord slope at an arbitrary interior point nearly closes the gap
        let k = 700;
        let slopes = curve.chord_slopes();
        let g = fenchel_young_gap(&curve, &conj, curve.t_grid()[k], slopes[k]).unwrap();
        assert!(g.abs() < 1e-4);
        assert!(fenchel_young_gap(&curve, &conj, 99.0, 0.7).is_err());
    }

    #[test]
    fn gap_is_nonnegative_over_the_whole_grid() {
        let curve = golden_family(-6.0, 6.0, 301);
        let conj = legendre(&curve, 301).unwrap();
        let mut min_gap = f64::INFINITY;
        for &t in curve.t_grid() {
            let p = curve.value_at(t).unwrap();
            for (m, &a) in conj.a_grid().iter().enumerate() {
                min_gap = min_gap.min(p + conj.rate()[m] - t * a);
            }
        }
        assert!(min_gap >= -1e-10, "min gap {min_gap}");
    }

    #[test]
    fn conjugation_reverses_order() {
        let curve_low = golden_family(-5.0, 5.0, 201);
        let lifted: Vec<f64> = curve_low.values().iter().map(|v| v + 0.3).collect();
        let curve_high = PressureCurve::from_samples(curve_low.t_grid().to_vec(), lifted).unwrap();
        let c_low = legendre(&curve_low, 101).unwrap();
        let c_high = legendre(&curve_high, 101).unwrap();
        // identical slope ranges, so the a-grids coincide
        for (m, (&a1, &a2)) in c_low.a_grid().iter().zip(c_high.a_grid()).enumerate() {
            assert!((a1 - a2).abs() < 1e-12);
            assert!(c_low.rate()[m] >= c_high.rate()[m] - 1e-12);
        }
    }

    #[test]
    fn smooth_point_has_a_narrow_subdifferential() {
        let curve = golden_family(-10.0, 10.0, 2001);
        let s = subdifferential_interval(&curve, 0.0).unwrap();
        assert!((s.lower - MEAN_AT_ZERO).abs() < 1e-4);
        assert!((s.upper - MEAN_AT_ZERO).abs() < 1e-4);
        assert!(s.width().abs() < 1e-4);
        assert!(!s.is_corner());
    }

    #[test]
    fn affine_curve_has_zero_width_subdifferential() {
        let t: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|x| 1.5 - 0.25 * x).collect();
        let curve = PressureCurve::from_samples(t, v).unwrap();
        let s = subdifferential_interval(&curve, 0.5).unwrap();
        assert!((s.lower + 0.25).abs() < 1e-12);
        assert!((s.upper + 0.25).abs() < 1e-12);
        assert!(s.width().abs() < 1e-12);
    }

    #[test]
    fn envelope_kink_shows_the_jump() {
        // max(log phi + t, log 2), sampled on a grid through the crossing:
        // slopes 0 and 1 on the two sides
        let t_star = core::f64::consts::LN_2 - LOG_PHI;
        let n: i32 = 200;
        let h = 0.005;
        let t: Vec<f64> = (-n..=n).map(|i| t_star + h * i as f64).collect();
        let v: Vec<f64> = t
            .iter()
            .map(|&x| (LOG_PHI + x).max(core::f64::consts::LN_2))
            .collect();
        let curve = PressureCurve::from_samples(t, v).unwrap();
        let s = subdifferential_interval(&curve, t_star).unwrap();
        assert!(s.is_corner());
        assert!(s.lower.abs() < 1e-10 && (s.upper - 1.0).abs() < 1e-10);
        assert!((s.width() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn subdifferential_monotonicity_along_the_family() {
        let curve = golden_family(-6.0, 6.0, 601);
        let mut prev_upper = f64::NEG_INFINITY;
        for k in (10..curve.len() - 10).step_by(25) {
            let s = subdifferential_at_index(&curve, k).unwrap();
            assert!(prev_upper <= s.lower + 1e-6);
            prev_upper = s.upper;
        }
    }

    #[test]
    fn boundary_queries_are_rejected() {
        let curve = golden_family(-1.0, 1.0, 11);
        assert_eq!(
            subdifferential_interval(&curve, -1.0),
            Err(DualityError::TooCloseToBoundary)
        );
        assert_eq!(
            subdifferential_interval(&curve, 5.0),
            Err(DualityError::OutOfRange)
        );
    }
}
