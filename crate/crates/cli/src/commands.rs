use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use sgfloquet::hill::{band_structure, delta_q, lame_band_edges, lame_params, verify_mq_zero};
use sgfloquet::monodromy::{
    conjugation_residual, g_p, g_q, hill_parameter, monodromy_p, monodromy_q,
};
use sgfloquet::stability::{
    classify_stability, find_unstable_eigenvalue, halton, imaginary_axis_spectrum,
    real_periodic_eigenvalue, spectrum_contours, Grid, Tolerances,
};
use sgfloquet::wave::{fundamental_period, WaveParams, WaveProfile};

use crate::config::{CommandKind, Format, RunConfig, DEFAULT_HILL_POINTS, DEFAULT_IMAG_POINTS};
use crate::error::CliError;
use crate::svg;

/// Output of one command. `extra` holds side files written next to `--out`.
pub struct Rendered {
    pub main: String,
    pub extra: Vec<(String, String)>,
}

impl Rendered {
    fn single(main: String) -> Self {
        Self {
            main,
            extra: Vec::new(),
        }
    }
}

pub fn run(config: &mut RunConfig) -> Result<Rendered, CliError> {
    let profile = WaveProfile::new(WaveParams::new(config.c, config.energy))?;
    match config.command {
        CommandKind::Classify => classify(config, &profile),
        CommandKind::Spectrum => spectrum(config, &profile),
        CommandKind::Bands => bands(config, &profile),
        CommandKind::Hill => hill(config, &profile),
        CommandKind::ImagSpectrum => imag_spectrum(config, &profile),
        CommandKind::Certify => certify(config, &profile),
        CommandKind::Selfcheck => selfcheck(config, &profile),
    }
}

fn tolerances(config: &RunConfig) -> Tolerances {
    Tolerances {
        ode_rtol: config.ode_rtol,
        gp_tol: config.root_tol,
        ..Tolerances::default()
    }
}

fn wave_summary(config: &RunConfig, profile: &WaveProfile) -> Value {
    let class = profile.class();
    json!({
        "c": config.c,
        "E": config.energy,
        "gamma": profile.gamma(),
        "class": class.label(),
        "speed_regime": class.speed_regime,
        "motion_type": class.motion_type,
        "T": profile.period(),
        "coefficient_period": profile.coefficient_period(),
        "modulus": profile.modulus().value(),
        "f0": profile.f0(),
        "v0": profile.v0(),
    })
}

/// The config echo, then the wave summary, then the fields of `body`.
fn document(config: &RunConfig, profile: &WaveProfile, body: Value) -> Result<String, CliError> {
    let mut doc = serde_json::Map::new();
    doc.insert("config".into(), to_value(config));
    for part in [wave_summary(config, profile), body] {
        if let Value::Object(map) = part {
            doc.extend(map);
        }
    }
    Ok(serde_json::to_string_pretty(&Value::Object(doc)).expect("document serializes") + "\n")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn classify(config: &RunConfig, profile: &WaveProfile) -> Result<Rendered, CliError> {
    let verdict = classify_stability(profile, &tolerances(config))?;
    // Flattened: `verdict` plus either `certificate` or `audit`.
    let body = to_value(&verdict);
    document(config, profile, body).map(Rendered::single)
}

fn certify(config: &RunConfig, profile: &WaveProfile) -> Result<Rendered, CliError> {
    let tol = tolerances(config);
    let certificate = find_unstable_eigenvalue(profile, &tol)?;
    let mut body = json!({ "certificate": certificate });
    if profile.class().is_subluminal() {
        let real = real_periodic_eigenvalue(profile, &tol)?;
        body["real_periodic_eigenvalue"] = to_value(&real);
    }
    document(config, profile, body).map(Rendered::single)
}

fn bands(config: &mut RunConfig, profile: &WaveProfile) -> Result<Rendered, CliError> {
    let structure = band_structure(profile, config.mu_min, config.ode_rtol)?;
    config.mu_min = Some(structure.window.0);
    config.mu_max = Some(structure.window.1);
    let lame = lame_band_edges(profile);
    // `edges` is increasing, the Lamé triple decreasing.
    let mut oracle: Vec<f64> = lame.to_vec();
    oracle.reverse();
    let deltas: Option<Vec<f64>> = (structure.edges.len() == oracle.len()).then(|| {
        structure
            .edges
            .iter()
            .zip(&oracle)
            .map(|(a, b)| a - b)
            .collect()
    });
    let body = json!({
        "bands": structure,
        "lame": {
            "edges": oracle,
            "deltas": deltas,
            "params_at_mu_star": lame_params(profile, structure.mu_star),
        },
    });
    document(config, profile, body).map(Rendered::single)
}

fn hill(config: &mut RunConfig, profile: &WaveProfile) -> Result<Rendered, CliError> {
    let lame = lame_band_edges(profile);
    let mu_min = config.mu_min.unwrap_or(lame[2] - 1.0);
    let mu_max = config.mu_max.unwrap_or(profile.gamma().abs() + 1.0);
    let n = config.n.unwrap_or(DEFAULT_HILL_POINTS);
    if !(mu_min < mu_max) || n < 2 {
        return Err(CliError::Usage(
            "hill needs mu-min < mu-max and n >= 2".into(),
        ));
    }
    config.mu_min = Some(mu_min);
    config.mu_max = Some(mu_max);
    config.n = Some(n);
    let rows = (0..n)
        .map(|i| {
            let mu = mu_min + (mu_max - mu_min) * i as f64 / (n - 1) as f64;
            delta_q(profile, mu, config.ode_rtol).map(|d| (mu, d))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match config.format {
        Format::Csv => {
            let mut s = String::from("mu,delta_q\n");
            for (mu, d) in rows {
                s.push_str(&format!("{mu:.16e},{d:.16e}\n"));
            }
            Ok(Rendered::single(s))
        }
        _ => {
            let (mu, delta): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
            document(config, profile, json!({ "mu": mu, "delta_q": delta })).map(Rendered::single)
        }
    }
}

fn imag_spectrum(config: &mut RunConfig, profile: &WaveProfile) -> Result<Rendered, CliError> {
    let n = config.n.unwrap_or(DEFAULT_IMAG_POINTS);
    config.n = Some(n);
    let spectrum = imaginary_axis_spectrum(profile, config.beta_max, n, config.ode_rtol)?;
    document(config, profile, json!({ "imaginary_axis": spectrum })).map(Rendered::single)
}

fn spectrum(config: &mut RunConfig, profile: &WaveProfile) -> Result<Rendered, CliError> {
    let [re_min, re_max, im_min, im_max] = config.bbox;
    let grid = Grid {
        re_min,
        re_max,
        im_min,
        im_max,
        nx: config.nx,
        ny: config.ny,
    };
    let contour = spectrum_contours(profile, grid, config.ode_rtol)?;
    let beta_max = im_min.abs().max(im_max.abs());
    let axis = if re_min <= 0.0 && re_max >= 0.0 && beta_max > 0.0 {
        let n = config.n.unwrap_or(DEFAULT_IMAG_POINTS);
        config.n = Some(n);
        Some(imaginary_axis_spectrum(
            profile,
            beta_max,
            n,
            config.ode_rtol,
        )?)
    } else {
        None
    };
    let intervals = axis
        .as_ref()
        .map(|a| a.beta_intervals.clone())
        .unwrap_or_default();
    match config.format {
        Format::Csv => {
            let mut grid_csv = String::from("re,im,gp\n");
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let g = contour.gp_samples[j][i];
                    grid_csv.push_str(&format!(
                        "{:.16e},{:.16e},{g:.16e}\n",
                        grid.re(i),
                        grid.im(j)
                    ));
                }
            }
            let mut lines_csv = String::from("polyline_id,re,im\n");
            for (id, line) in contour.polylines.iter().enumerate() {
                for p in line {
                    lines_csv.push_str(&format!("{id},{:.16e},{:.16e}\n", p.re, p.im));
                }
            }
            Ok(Rendered {
                main: grid_csv,
                extra: vec![("polylines".into(), lines_csv)],
            })
        }
        Format::Json => {
            let body = json!({
                "grid": grid,
                "failed_points": contour.failed_points,
                "symmetry_defect": contour.symmetry_defect(),
                "polylines": contour.polylines,
                "imaginary_axis": axis,
                "gp_samples": contour.gp_samples,
            });
            document(config, profile, body).map(Rendered::single)
        }
        Format::Svg => {
            let title = format!(
                "G_p = 0, c = {}, E = {} ({})",
                config.c,
                config.energy,
                profile.class()
            );
            Ok(Rendered::single(svg::render(
                &title,
                grid,
                &contour.polylines,
                &intervals,
            )))
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn new(name: &'static str, bound: f64, value: Result<f64, sgfloquet::Error>) -> Self {
        match value {
            Ok(residual) => Check {
                name,
                residual,
                bound,
                pass: residual <= bound,
                error: None,
            },
            Err(e) => Check {
                name,
                residual: f64::NAN,
                bound,
                pass: false,
                error: Some(e.to_string()),
            },
        }
    }
}

pub const SELFCHECK_SAMPLES: usize = 16;

/// Deterministic sample points in `[-2, 2]^2`.
fn sample_lambdas() -> Vec<Complex64> {
    (1..=SELFCHECK_SAMPLES)
        .map(|i| Complex64::new(4.0 * halton(i, 2) - 2.0, 4.0 * halton(i, 3) - 2.0))
        .collect()
}

fn max_over<F>(f: F) -> Result<f64, sgfloquet::Error>
where
    F: Fn(Complex64) -> Result<f64, sgfloquet::Error>,
{
    sample_lambdas()
        .into_iter()
        .try_fold(0.0_f64, |acc, l| Ok(acc.max(f(l)?)))
}

/// Identity suite: every residual is compared with its bound.
pub fn run_checks(profile: &WaveProfile, rtol: f64) -> Vec<Check> {
    let c = profile.c();
    let gamma = profile.gamma();
    let period = profile.period();
    let mut checks = vec![
        Check::new(
            "abel_p",
            1e-8,
            max_over(|l| Ok(monodromy_p(profile, l, rtol)?.abel_residual)),
        ),
        Check::new(
            "abel_q",
            1e-8,
            max_over(|l| Ok(monodromy_q(profile, hill_parameter(profile, l), rtol)?.abel_residual)),
        ),
        Check::new(
            "conjugation",
            1e-8,
            max_over(|l| conjugation_residual(profile, l, rtol)),
        ),
        Check::new(
            "indicator_shift",
            1e-8,
            max_over(|l| {
                let shift = (c * gamma * l * period).re;
                Ok((g_p(profile, l, rtol)? - shift * shift - g_q(profile, l, rtol)?).abs())
            }),
        ),
        Check::new(
            "g_q_nonpositive",
            1e-12,
            max_over(|l| g_q(profile, l, rtol)),
        ),
        Check::new(
            "reflection_symmetry",
            1e-8,
            max_over(|l| {
                let g = g_p(profile, l, rtol)?;
                let conj = (g - g_p(profile, l.conj(), rtol)?).abs();
                let neg = (g - g_p(profile, -l, rtol)?).abs();
                Ok(conj.max(neg))
            }),
        ),
        Check::new(
            "periodic_multiplier_at_zero",
            10.0 * rtol,
            g_p(profile, Complex64::new(0.0, 0.0), rtol).map(f64::abs),
        ),
        Check::new(
            "mq_zero_form",
            1e-6,
            verify_mq_zero(profile, rtol).map(|r| r.residual),
        ),
        Check::new(
            "period_quadrature",
            1e-10,
            fundamental_period(profile.params()).map(|t| (t - period).abs() / period),
        ),
    ];
    let lame = lame_band_edges(profile);
    checks.push(Check::new(
        "lame_band_edges",
        1e-7,
        band_structure(profile, None, rtol).and_then(|b| {
            if b.edges.len() != 3 {
                return Err(sgfloquet::Error::Structure(format!(
                    "{} edges found",
                    b.edges.len()
                )));
            }
            Ok(b.edges
                .iter()
                .zip(lame.iter().rev())
                .map(|(a, e)| (a - e).abs())
                .fold(0.0, f64::max))
        }),
    ));
    checks
}

fn selfcheck(config: &RunConfig, profile: &WaveProfile) -> Result<Rendered, CliError> {
    let checks = run_checks(profile, config.ode_rtol);
    for check in &checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        match &check.error {
            Some(e) => eprintln!("{status} {:<28} error: {e}", check.name),
            None => eprintln!(
                "{status} {:<28} {:.3e} <= {:.1e}",
                check.name, check.residual, check.bound
            ),
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let main = document(config, profile, json!({ "checks": checks, "pass": pass }))?;
    if pass {
        Ok(Rendered::single(main))
    } else {
        Err(CliError::ChecksFailed(main))
    }
}
