//! The `verify` command: runs the invariant suite on built-in fixtures and
//! prints one pass/fail line per property.

use thermopress_core::duality::{biconjugate, legendre, sample_curve};
use thermopress_core::partition::pressure_estimate_sequence;
use thermopress_core::phase::{disjoint_union, envelope_curve, selection_check};
use thermopress_core::sft::{full_shift, golden_mean, one_block_recode, Potential};
use thermopress_core::spectral::{
    asymptotic_variance, equilibrium, markov_entropy, measure_mean, pressure, MarkovMeasure,
};

const LOG_PHI: f64 = 0.4812118250596035;
const LN_2: f64 = std::f64::consts::LN_2;

struct Check {
    name: &'static str,
    detail: String,
    pass: bool,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, detail, pass }
}

fn closed_form_pressure(t: f64) -> f64 {
    let et = t.exp();
    ((et + (et * et + 4.0 * et).sqrt()) / 2.0).ln()
}

fn run_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let sys = golden_mean();
    let zero = Potential::zero(&sys);
    let g = Potential::symbol_indicator(&sys, 0);

    // entropy of the golden mean shift
    let p0 = pressure(&zero).unwrap();
    out.push(check(
        "entropy = log((1+sqrt5)/2)",
        (p0 - LOG_PHI).abs() < 1e-10,
        format!("error {:.2e}", (p0 - LOG_PHI).abs()),
    ));

    // closed-form eigenvalue along the family
    let mut worst = 0.0f64;
    for t in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let pot = zero.add_scaled(t, &g).unwrap();
        worst = worst.max((pressure(&pot).unwrap() - closed_form_pressure(t)).abs());
    }
    out.push(check(
        "characteristic-polynomial eigenvalue",
        worst < 1e-10,
        format!("max error {worst:.2e}"),
    ));

    // translation identity is exact
    let p_shift = pressure(&zero.add_constant(0.9)).unwrap();
    out.push(check(
        "translation P(phi + c) = P(phi) + c",
        (p_shift - (p0 + 0.9)).abs() < 1e-14,
        format!("error {:.2e}", (p_shift - (p0 + 0.9)).abs()),
    ));

    // equilibrium identity h + mean = P
    let mut worst = 0.0f64;
    for t in [-1.0, 0.0, 0.7, 2.0] {
        let pot = zero.add_scaled(t, &g).unwrap();
        let (triple, mu) = equilibrium(&pot).unwrap();
        let lhs = markov_entropy(&mu) + measure_mean(&mu, &pot).unwrap();
        worst = worst.max((lhs - triple.pressure()).abs());
    }
    out.push(check(
        "equilibrium identity h + <phi> = P",
        worst < 1e-10,
        format!("max defect {worst:.2e}"),
    ));

    // stationary vector of the Parry measure
    let (_, mme) = equilibrium(&zero).unwrap();
    let s5 = 5.0f64.sqrt();
    let pi_err = (mme.stationary()[0] - (5.0 + s5) / 10.0)
        .abs()
        .max((mme.stationary()[1] - (5.0 - s5) / 10.0).abs());
    out.push(check(
        "Parry stationary vector",
        pi_err < 1e-12,
        format!("error {pi_err:.2e}"),
    ));

    // Green-Kubo variance against the closed form and the curvature
    let (triple, mu) = equilibrium(&zero).unwrap();
    let var = asymptotic_variance(&mu, &g, triple.gap_estimate(), 1e-10).unwrap();
    let exact = 1.0 / (5.0 * s5);
    let p_at = |t: f64| pressure(&zero.add_scaled(t, &g).unwrap()).unwrap();
    let d2 = |s: f64| (p_at(s) - 2.0 * p0 + p_at(-s)) / (s * s);
    let curvature = (4.0 * d2(5e-4) - d2(1e-3)) / 3.0;
    out.push(check(
        "variance = 1/(5 sqrt 5)",
        (var - exact).abs() < 1e-7,
        format!("error {:.2e}", (var - exact).abs()),
    ));
    out.push(check(
        "variance matches pressure curvature",
        (var - curvature).abs() < 1e-5,
        format!("difference {:.2e}", (var - curvature).abs()),
    ));

    // definitional partition sums converge to the spectral value
    let seq = pressure_estimate_sequence(&g, 10_000).unwrap();
    let def_err = (seq.last().unwrap().estimate - pressure(&g).unwrap()).abs();
    out.push(check(
        "partition-sum estimate at n = 10^4",
        def_err < 1e-3,
        format!("error {def_err:.2e}"),
    ));

    // duality: Fenchel-Young positivity, biconjugate recovery, entropy
    let curve = sample_curve(&zero, &g, -10.0, 10.0, 501).unwrap();
    let conj = legendre(&curve, 501).unwrap();
    let mut min_gap = f64::INFINITY;
    for (k, &t) in curve.t_grid().iter().enumerate() {
        for (m, &a) in conj.a_grid().iter().enumerate() {
            min_gap = min_gap.min(curve.values()[k] + conj.rate()[m] - t * a);
        }
    }
    out.push(check(
        "Fenchel-Young gap nonnegative",
        min_gap >= -1e-10,
        format!("min gap {min_gap:.2e}"),
    ));
    let back = biconjugate(&conj, curve.t_grid());
    let n = curve.len();
    let mut dominated = true;
    let mut max_dev = 0.0f64;
    for k in 0..n {
        dominated &= back[k] <= curve.values()[k] + 1e-12;
        if k >= n / 20 && k + n / 20 < n {
            max_dev = max_dev.max((back[k] - curve.values()[k]).abs());
        }
    }
    out.push(check(
        "biconjugate dominated and close",
        dominated && max_dev < 2e-3,
        format!("interior deviation {max_dev:.2e} (grid-limited)"),
    ));
    let entropy_err = (-conj.rate_at(conj.argmin()).unwrap() - LOG_PHI).abs();
    out.push(check(
        "entropy recovered from the conjugate",
        entropy_err < 2e-3,
        format!("error {entropy_err:.2e}"),
    ));

    // coboundary degeneracy
    let u = Potential::symbol_weights(&sys, &[0.8, -0.3]).unwrap();
    let cob = Potential::coboundary(&u, 0.4).unwrap();
    let (_, recoded) = one_block_recode(&[&zero.extend_depth(2), &cob]).unwrap();
    let (tr2, mu2) = equilibrium(&recoded[0]).unwrap();
    let cob_var = asymptotic_variance(&mu2, &recoded[1], tr2.gap_estimate(), 1e-10).unwrap();
    out.push(check(
        "coboundary has zero variance",
        cob_var.abs() < 1e-8,
        format!("variance {cob_var:.2e}"),
    ));

    // Fibonacci word counts
    let ok_counts = sys.count_admissible_words(3).unwrap() == 5
        && sys.count_admissible_words(12).unwrap() == 377;
    out.push(check(
        "admissible word counts (Fibonacci)",
        ok_counts,
        String::from("c(3) = 5, c(12) = 377"),
    ));

    // variational gap: hand example and positivity
    let coin = MarkovMeasure::from_transition(&sys, &[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
    let gap = thermopress_core::spectral::variational_gap(&zero, &coin).unwrap();
    let expected_gap = LOG_PHI - 2.0 / 3.0 * LN_2;
    out.push(check(
        "variational gap of the fair-coin chain",
        (gap - expected_gap).abs() < 1e-12 && gap >= 0.0,
        format!("gap {gap:.7}"),
    ));

    // two-phase fixture: one corner at log(2/phi) with unit jump
    let union = disjoint_union(&sys, &full_shift(2));
    let base_u = Potential::zero(&union);
    let dir_u = Potential::symbol_weights(&union, &[1.0, 1.0, 0.0, 0.0]).unwrap();
    let env = envelope_curve(&base_u, &dir_u, -1.0, 1.0, 401).unwrap();
    let corners = env.corner_scan(1e-3).unwrap();
    let corner_ok = corners.len() == 1
        && (corners[0].t_star - (LN_2 - LOG_PHI)).abs() < 1e-6
        && (corners[0].jump - 1.0).abs() < 1e-3;
    out.push(check(
        "two-phase corner at log(2/phi)",
        corner_ok,
        match corners.first() {
            Some(c) => format!("t* = {:.7}, jump = {:.4}", c.t_star, c.jump),
            None => String::from("no corner found"),
        },
    ));

    // selection principle at the corner
    let selection_ok = corners.first().is_some_and(|c| {
        let base_star = base_u.add_scaled(c.t_star, &dir_u).unwrap();
        (1..=6).all(|k| {
            selection_check(&base_star, &dir_u, 10f64.powi(-k))
                .map(|w| w == vec![0])
                .unwrap_or(false)
        })
    });
    out.push(check(
        "selection principle picks the larger mean",
        selection_ok,
        String::from("golden component wins for t_small in 1e-1..1e-6"),
    ));

    out
}

/// Returns the number of failed checks.
pub fn run() -> usize {
    let checks = run_checks();
    let mut failed = 0;
    for c in &checks {
        let status = if c.pass { "ok  " } else { "FAIL" };
        println!("{status}  {:<42} {}", c.name, c.detail);
        if !c.pass {
            failed += 1;
        }
    }
    println!(
        "{} of {} properties verified",
        checks.len() - failed,
        checks.len()
    );
    failed
}
