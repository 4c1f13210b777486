//! Command implementations.

use std::path::Path;

use thermopress_core::duality::{biconjugate, legendre, subdifferential_interval, PressureCurve};
use thermopress_core::phase::{component_pressures, envelope_curve};
use thermopress_core::sft::{one_block_recode, Potential};
use thermopress_core::spectral::{
    asymptotic_variance, covariance_sequence, equilibrium, equilibrium_measure, leading_triple,
    markov_entropy, measure_mean, pressure, transfer_matrix, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

use crate::input::LoadedSystem;
use crate::report::{csv_two_column, emit, g17, h7, json_array, json_float_array, json_object};
use crate::CliError;

const LOG_PHI: f64 = 0.4812118250596035;

/// Resolves the base potential: a named one, or zero when unnamed.
fn base_potential(loaded: &LoadedSystem, name: Option<&str>) -> Result<Potential, CliError> {
    match name {
        Some(n) => Ok(loaded.potential(n)?.clone()),
        None => Ok(Potential::zero(&loaded.system)),
    }
}

pub fn info(loaded: &LoadedSystem) -> Result<(), CliError> {
    let sys = &loaded.system;
    let mut out = String::new();
    out.push_str(&format!("alphabet size     {}\n", sys.alphabet_size()));
    out.push_str(&format!("components (SCC)  {}\n", sys.scc_count()));
    out.push_str(&format!("primitive         {}\n", sys.is_primitive()));
    let zero = Potential::zero(sys);
    let reports = component_pressures(&zero, None)?;
    for r in &reports {
        let symbols: Vec<String> = r.symbols.iter().map(|s| (s + 1).to_string()).collect();
        out.push_str(&format!(
            "component {}      symbols {{{}}}, entropy {}\n",
            r.component_index,
            symbols.join(","),
            h7(r.pressure)
        ));
    }
    if !loaded.potentials.is_empty() {
        out.push_str("potentials        ");
        let names: Vec<String> = loaded
            .potentials
            .iter()
            .map(|(name, p)| format!("{name} (depth {})", p.depth()))
            .collect();
        out.push_str(&names.join(", "));
        out.push('\n');
    }
    emit(None, &out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Evaluates the curve; reducible systems go through the component
/// envelope, primitive ones through the plain family (optionally in
/// parallel, assembled in grid order either way).
#[allow(clippy::too_many_arguments)]
pub fn pressure_curve(
    loaded: &LoadedSystem,
    direction_name: &str,
    base_name: Option<&str>,
    t_min: f64,
    t_max: f64,
    steps: usize,
    jobs: usize,
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<(), CliError> {
    validate_range(t_min, t_max, steps)?;
    let base = base_potential(loaded, base_name)?;
    let direction = loaded.potential(direction_name)?;
    let rows = if loaded.system.is_primitive() {
        sample_family(&base, direction, t_min, t_max, steps, jobs)?
    } else {
        let env = envelope_curve(&base, direction, t_min, t_max, steps)?;
        env.curve()
            .t_grid()
            .iter()
            .zip(env.curve().values())
            .map(|(&t, &p)| (t, p))
            .collect()
    };
    let rendered = match format {
        OutputFormat::Csv => csv_two_column("t,pressure", &rows),
        OutputFormat::Json => {
            let (ts, ps): (Vec<f64>, Vec<f64>) = rows.iter().copied().unzip();
            json_object(&[
                ("t", json_float_array(&ts)),
                ("pressure", json_float_array(&ps)),
            ]) + "\n"
        }
    };
    emit(output, &rendered)
}

fn validate_range(t_min: f64, t_max: f64, steps: usize) -> Result<(), CliError> {
    if !(t_min < t_max) {
        return Err(CliError::Input(format!(
            "need t-min < t-max, got {t_min} and {t_max}"
        )));
    }
    if steps < 3 {
        return Err(CliError::Input(format!("need steps >= 3, got {steps}")));
    }
    Ok(())
}

fn sample_family(
    base: &Potential,
    direction: &Potential,
    t_min: f64,
    t_max: f64,
    steps: usize,
    jobs: usize,
) -> Result<Vec<(f64, f64)>, CliError> {
    let grid: Vec<f64> = (0..steps)
        .map(|i| t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let eval = |t: f64| -> Result<f64, CliError> {
        let pot = base
            .add_scaled(t, direction)
            .map_err(|e| CliError::Input(e.to_string()))?;
        pressure(&pot).map_err(|e| CliError::Numerical(format!("at t = {t}: {e}")))
    };
    if jobs <= 1 {
        return grid.iter().map(|&t| Ok((t, eval(t)?))).collect();
    }
    let workers = jobs.min(steps);
    let chunks: Vec<Vec<(usize, f64)>> = (0..workers)
        .map(|w| {
            grid.iter()
                .copied()
                .enumerate()
                .filter(|(i, _)| i % workers == w)
                .collect()
        })
        .collect();
    let mut values: Vec<Option<f64>> = vec![None; steps];
    std::thread::scope(|scope| -> Result<(), CliError> {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                scope.spawn(|| -> Result<Vec<(usize, f64)>, CliError> {
                    chunk.iter().map(|&(i, t)| Ok((i, eval(t)?))).collect()
                })
            })
            .collect();
        for handle in handles {
            let part = handle.join().expect("curve worker panicked")?;
            for (i, v) in part {
                values[i] = Some(v);
            }
        }
        Ok(())
    })?;
    Ok(grid
        .into_iter()
        .zip(values)
        .map(|(t, v)| (t, v.expect("all grid points evaluated")))
        .collect())
}

/// Conjugate, biconjugate recovery, and the Fenchel-Young summary.
#[allow(clippy::too_many_arguments)]
pub fn duality(
    loaded: &LoadedSystem,
    direction_name: &str,
    base_name: Option<&str>,
    t_min: f64,
    t_max: f64,
    steps: usize,
    a_steps: usize,
    subdiff_at: Option<f64>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    validate_range(t_min, t_max, steps)?;
    let base = base_potential(loaded, base_name)?;
    let direction = loaded.potential(direction_name)?;
    let rows = if loaded.system.is_primitive() {
        sample_family(&base, direction, t_min, t_max, steps, 1)?
    } else {
        let env = envelope_curve(&base, direction, t_min, t_max, steps)?;
        env.curve()
            .t_grid()
            .iter()
            .zip(env.curve().values())
            .map(|(&t, &p)| (t, p))
            .collect()
    };
    let (ts, ps): (Vec<f64>, Vec<f64>) = rows.iter().copied().unzip();
    let curve =
        PressureCurve::from_samples(ts, ps).map_err(|e| CliError::Numerical(e.to_string()))?;
    let conj = legendre(&curve, a_steps).map_err(|e| CliError::Numerical(e.to_string()))?;

    let mut min_gap = f64::INFINITY;
    for (k, &t) in curve.t_grid().iter().enumerate() {
        let p = curve.values()[k];
        for (m, &a) in conj.a_grid().iter().enumerate() {
            min_gap = min_gap.min(p + conj.rate()[m] - t * a);
        }
    }
    let back = biconjugate(&conj, curve.t_grid());
    let n = curve.len();
    let margin = n / 20;
    let mut max_dev_interior = 0.0f64;
    let mut max_dev = 0.0f64;
    for k in 0..n {
        let dev = (back[k] - curve.values()[k]).abs();
        max_dev = max_dev.max(dev);
        if k >= margin && k + margin < n {
            max_dev_interior = max_dev_interior.max(dev);
        }
    }
    let a_star = conj.argmin();
    let entropy_recovery = -conj
        .rate_at(a_star)
        .map_err(|e| CliError::Numerical(e.to_string()))?;

    let mut fields = vec![
        ("min_fenchel_young_gap", g17(min_gap)),
        ("max_biconjugate_deviation_interior", g17(max_dev_interior)),
        ("max_biconjugate_deviation", g17(max_dev)),
        ("tangency_slope", g17(a_star)),
        ("entropy_recovery", g17(entropy_recovery)),
    ];
    if let Some(t) = subdiff_at {
        let s = subdifferential_interval(&curve, t)
            .map_err(|e| CliError::Input(format!("--subdiff-at {t}: {e}")))?;
        fields.push((
            "subdifferential",
            json_object(&[
                ("t", g17(s.t)),
                ("lower", g17(s.lower)),
                ("upper", g17(s.upper)),
                ("corner", s.is_corner().to_string()),
            ]),
        ));
    }
    let summary = json_object(&fields) + "\n";
    if let Some(path) = output {
        // conjugate samples go to the file, the summary to stdout
        let mut csv = String::from("a,rate\n");
        for (m, &a) in conj.a_grid().iter().enumerate() {
            csv.push_str(&g17(a));
            csv.push(',');
            csv.push_str(&g17(conj.rate()[m]));
            csv.push('\n');
        }
        emit(Some(path), &csv)?;
    }
    emit(None, &summary)
}

/// Spectral data, equilibrium mean, Green-Kubo variance with its
/// finite-difference cross-check, and the covariance sequence.
#[allow(clippy::too_many_arguments)]
pub fn variance(
    loaded: &LoadedSystem,
    potential_name: &str,
    at: f64,
    direction_name: &str,
    tol: f64,
    lags: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Input(format!(
            "tolerance must be positive: {tol}"
        )));
    }
    let family = loaded.potential(potential_name)?;
    let direction = loaded.potential(direction_name)?;
    let zero = Potential::zero(&loaded.system);
    let phi = zero
        .add_scaled(at, family)
        .map_err(|e| CliError::Input(e.to_string()))?;

    // a depth >= 2 observable needs the one-block presentation
    let (phi_r, dir_r);
    if phi.depth().max(direction.depth()) > 1 {
        let depth = phi.depth().max(direction.depth()).max(2);
        let (_, mut recoded) =
            one_block_recode(&[&phi.extend_depth(depth), &direction.extend_depth(depth)])
                .map_err(|e| CliError::Input(e.to_string()))?;
        dir_r = recoded.pop().expect("two recoded potentials");
        phi_r = recoded.pop().expect("two recoded potentials");
    } else {
        phi_r = phi.clone();
        dir_r = direction.clone();
    }

    let matrix = transfer_matrix(&phi_r).map_err(|e| CliError::Numerical(e.to_string()))?;
    let triple = leading_triple(&matrix, DEFAULT_TOL, DEFAULT_MAX_ITER)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let measure =
        equilibrium_measure(&triple, &matrix).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mean = measure_mean(&measure, &dir_r).map_err(|e| CliError::Numerical(e.to_string()))?;
    let var = asymptotic_variance(&measure, &dir_r, triple.gap_estimate(), tol)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let covs = covariance_sequence(&measure, &dir_r, lags)
        .map_err(|e| CliError::Numerical(e.to_string()))?;

    // Richardson second difference of s -> P(phi + s * direction) at 0
    let p_at = |s: f64| -> Result<f64, CliError> {
        let pot = phi
            .add_scaled(s, direction)
            .map_err(|e| CliError::Input(e.to_string()))?;
        pressure(&pot).map_err(|e| CliError::Numerical(e.to_string()))
    };
    let h = 1e-3;
    let d2 = |s: f64| -> Result<f64, CliError> {
        Ok((p_at(s)? - 2.0 * p_at(0.0)? + p_at(-s)?) / (s * s))
    };
    let fd = (4.0 * d2(h / 2.0)? - d2(h)?) / 3.0;

    let p_rows: Vec<String> = measure
        .transition_rows()
        .iter()
        .map(|row| json_float_array(row))
        .collect();
    let json = json_object(&[
        ("lambda", g17(triple.lambda())),
        ("pressure", g17(triple.pressure())),
        ("gap", g17(triple.gap_estimate())),
        ("h", json_float_array(triple.h())),
        ("nu", json_float_array(triple.nu())),
        ("p", json_array(&p_rows)),
        ("pi", json_float_array(measure.stationary())),
        ("mean", g17(mean)),
        ("variance", g17(var)),
        ("fd_cross_check", g17(fd)),
        ("covariances", json_float_array(&covs)),
    ]) + "\n";
    emit(output, &json)
}

/// Corner report over the component envelope.
#[allow(clippy::too_many_arguments)]
pub fn phase_scan(
    loaded: &LoadedSystem,
    direction_name: &str,
    base_name: Option<&str>,
    t_min: f64,
    t_max: f64,
    steps: usize,
    threshold: f64,
    output: Option<&Path>,
) -> Result<(), CliError> {
    validate_range(t_min, t_max, steps)?;
    if !(threshold > 0.0) {
        return Err(CliError::Input(format!(
            "threshold must be positive: {threshold}"
        )));
    }
    let base = base_potential(loaded, base_name)?;
    let direction = loaded.potential(direction_name)?;
    let env = envelope_curve(&base, direction, t_min, t_max, steps)?;
    let corners = env.corner_scan(threshold)?;
    let items: Vec<String> = corners
        .iter()
        .map(|c| {
            json_object(&[
                ("t_star", g17(c.t_star)),
                ("jump", g17(c.jump)),
                ("left_phase", c.left_phase.to_string()),
                ("right_phase", c.right_phase.to_string()),
            ])
        })
        .collect();
    emit(output, &(json_array(&items) + "\n"))
}

/// Definitional pressure: partition-sum estimates for n = 1..=n_max with
/// the deviation from the spectral value per row.
pub fn partition(
    loaded: &LoadedSystem,
    potential_name: &str,
    n_max: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if n_max < 2 {
        return Err(CliError::Input(format!("need n-max >= 2, got {n_max}")));
    }
    let pot = loaded.potential(potential_name)?;
    let recoded;
    let pot = if pot.depth() > 2 {
        recoded = pot.higher_block_recode().1;
        &recoded
    } else {
        pot
    };
    let spectral = pressure(pot).map_err(|e| CliError::Numerical(e.to_string()))?;
    let seq = thermopress_core::partition::pressure_estimate_sequence(pot, n_max)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut csv = String::from("n,log_sum,estimate,abs_err_vs_spectral\n");
    for r in &seq {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            g17(r.log_sum),
            g17(r.estimate),
            g17((r.estimate - spectral).abs())
        ));
    }
    emit(output, &csv)
}

/// The golden-mean reference table: every constant the worked example
/// pins down, computed live.
pub fn summary() -> Result<(), CliError> {
    let sys = thermopress_core::sft::golden_mean();
    let zero = Potential::zero(&sys);
    let g = Potential::symbol_indicator(&sys, 0);
    let p0 = pressure(&zero).map_err(|e| CliError::Numerical(e.to_string()))?;
    let matrix = transfer_matrix(&zero).map_err(|e| CliError::Numerical(e.to_string()))?;
    let triple = leading_triple(&matrix, DEFAULT_TOL, DEFAULT_MAX_ITER)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let (_, mu) = equilibrium(&zero).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mean = measure_mean(&mu, &g).map_err(|e| CliError::Numerical(e.to_string()))?;
    let var = asymptotic_variance(&mu, &g, triple.gap_estimate(), 1e-10)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let entropy = markov_entropy(&mu);

    let p_at = |t: f64| -> Result<f64, CliError> {
        let pot = zero
            .add_scaled(t, &g)
            .map_err(|e| CliError::Input(e.to_string()))?;
        pressure(&pot).map_err(|e| CliError::Numerical(e.to_string()))
    };
    let slope = |at: f64| -> Result<f64, CliError> {
        let h = 1e-3;
        let d =
            |s: f64| -> Result<f64, CliError> { Ok((p_at(at + s)? - p_at(at - s)?) / (2.0 * s)) };
        Ok((4.0 * d(h / 2.0)? - d(h)?) / 3.0)
    };
    let slope_low = slope(-20.0)?;
    let slope_high = slope(20.0)?;

    let curve = thermopress_core::duality::sample_curve(&zero, &g, -5.0, 5.0, 501)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let corners = thermopress_core::phase::corner_scan(&curve, 1e-3);

    let golden_ratio = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut out = String::new();
    out.push_str("golden mean shift: computed reference constants\n");
    out.push_str(&format!(
        "  alphabet size N            {}\n",
        sys.alphabet_size()
    ));
    out.push_str(&format!("  topological entropy P(0)   {}\n", h7(p0)));
    out.push_str(&format!("  entropy of the MME         {}\n", h7(entropy)));
    out.push_str(&format!(
        "  leading eigenvalue l(0)    {}\n",
        h7(triple.lambda())
    ));
    out.push_str(&format!(
        "  mean P'(0; g)              {}  [equals l'(0)/l(0) = (5+sqrt5)/10; the flat 1/phi = {} sometimes quoted for this family is inconsistent with the eigenvalue formula]\n",
        h7(mean),
        h7(1.0 / golden_ratio)
    ));
    out.push_str(&format!("  variance P''(0; g)         {}\n", h7(var)));
    out.push_str(&format!(
        "  slope P'(t; g) near -20    {}  (-> 1/2 as t -> -inf)\n",
        h7(slope_low)
    ));
    out.push_str(&format!(
        "  slope P'(t; g) near +20    {}  (-> 1 as t -> +inf)\n",
        h7(slope_high)
    ));
    out.push_str(&format!(
        "  corners on [-5, 5]         {}  (real-analytic family)\n",
        corners.len()
    ));
    let flag = if (p0 - LOG_PHI).abs() < 1e-10 {
        "ok"
    } else {
        "MISMATCH"
    };
    out.push_str(&format!("  cross-check vs log(phi)    {flag}\n"));
    emit(None, &out)
}
