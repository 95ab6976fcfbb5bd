use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::*;
use super::output::{config_hash, fmt_f64, read_rows, Csv};
use super::{counting_spectrum, meridian_spectrum, physical_point, reference_sweep, scaled_spectrum, ExperimentError, Frame, Solved};
use crate::asymptotics::{
    agmon_ratio, counting_asymptote, counting_coefficient, distance_fit, lambda_delta_expansion, leakage_abscissa,
    linear_fit, mu_two_term, staircase, AgmonRatio, AgmonWeight, AgmonWeightParams, ExpansionVariant, FeField, LinearFit,
};
use crate::eigensolve::{polish, Pencil};
use crate::geometry::{write_mesh, Shape};
use crate::potential1d::{solve_1d, verified_x1, Model1DProblem, PotentialTable, SECTION_WIDTH};
use crate::specfun::first_bessel_zero;

/// Files written by a run and a short human-readable summary.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
    /// Outcome of a verification run; None for the other experiments.
    pub passed: Option<bool>,
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub theta_deg: f64,
    pub values: Result<Vec<f64>, String>,
}

#[derive(Debug, Clone)]
pub struct SweepData {
    pub rows: Vec<SweepRow>,
    pub triangles: usize,
}

pub fn compute_sweep(cfg: &SweepThetaConfig) -> Result<SweepData, ExperimentError> {
    let thetas: Vec<f64> = cfg.theta_deg.iter().map(|d| d.to_radians()).collect();
    let (mesh, results) = reference_sweep(&thetas, cfg.k, cfg.reference_truncation, &cfg.disc)?;
    let rows = cfg
        .theta_deg
        .iter()
        .zip(results)
        .map(|(&theta_deg, r)| SweepRow { theta_deg, values: r.map(|e| e.values).map_err(|e| e.to_string()) })
        .collect();
    Ok(SweepData { rows, triangles: mesh.triangles.len() })
}

/// Largest decrease μ_n(θ_i) − μ_n(θ_{i+1}) between consecutive angles of
/// the sweep (angles sorted increasingly), over n = 1..=k.
pub fn worst_decrease(data: &SweepData, k: usize) -> f64 {
    let mut ok: Vec<(f64, &Vec<f64>)> =
        data.rows.iter().filter_map(|r| r.values.as_ref().ok().map(|v| (r.theta_deg, v))).collect();
    ok.sort_by(|a, b| a.0.total_cmp(&b.0));
    ok.windows(2)
        .flat_map(|w| (0..k.min(w[0].1.len()).min(w[1].1.len())).map(move |n| w[0].1[n] - w[1].1[n]))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn sweep_files(data: &SweepData, hash: &str) -> Result<(Csv, Csv), ExperimentError> {
    let mut mu = Csv::new("sweep_theta", hash, &["theta_deg", "n", "mu_n"]);
    mu.comment(&format!("reference frame mesh with {} triangles", data.triangles));
    mu.comment("theta_deg = 0 row: the small-aperture limit j0,1^2/pi^2");
    let j = first_bessel_zero();
    mu.row(&["0".into(), "1".into(), fmt_f64(j * j / (PI * PI))]);
    let mut two = Csv::new("sweep_theta", hash, &["theta", "n", "mu", "two_term_A", "two_term_B"]);
    two.comment("theta in degrees; two-term expansions j^2/pi^2 + beta2 theta^(2/3), A: (2j)^(2/3), B: (2j^2)^(2/3)");
    for row in &data.rows {
        match &row.values {
            Ok(values) => {
                for (n, &v) in values.iter().enumerate() {
                    mu.row(&[fmt_f64(row.theta_deg), (n + 1).to_string(), fmt_f64(v)]);
                    let t = row.theta_deg.to_radians();
                    two.row(&[
                        fmt_f64(row.theta_deg),
                        (n + 1).to_string(),
                        fmt_f64(v),
                        fmt_f64(mu_two_term(n + 1, t, ExpansionVariant::TheoremMain)?),
                        fmt_f64(mu_two_term(n + 1, t, ExpansionVariant::TheoremCone)?),
                    ]);
                }
            }
            Err(e) => {
                mu.comment(&format!("failed theta_deg={}: {e}", row.theta_deg));
                two.comment(&format!("failed theta_deg={}: {e}", row.theta_deg));
            }
        }
    }
    Ok((mu, two))
}

// ------------------------------------------------------------- counting

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountingData {
    pub theta: f64,
    /// Discrete transverse threshold the distances are measured from.
    pub threshold: f64,
    pub mu: Vec<f64>,
    /// E_j = threshold − μ_j.
    pub distances: Vec<f64>,
    pub fit: LinearFit,
    pub target: f64,
    pub dofs: usize,
}

impl CountingData {
    pub fn relative_slope_error(&self) -> f64 {
        (self.fit.slope - self.target).abs() / self.target
    }
}

pub fn compute_counting(cfg: &CountingConfig) -> Result<CountingData, ExperimentError> {
    let theta = cfg.theta_deg.to_radians();
    let c = counting_spectrum(theta, cfg.truncation, cfg.e_min, cfg.max_per_slice, &cfg.disc)?;
    let found = c.solved.result.values.len();
    if found < cfg.k {
        return Err(ExperimentError::Config(format!(
            "only {found} eigenvalues resolved below threshold - {:e}, {} requested",
            cfg.e_min, cfg.k
        )));
    }
    let mu: Vec<f64> = c.solved.result.values[..cfg.k].to_vec();
    let distances: Vec<f64> = mu.iter().map(|m| c.threshold - m).collect();
    let fit = distance_fit(&distances)?;
    Ok(CountingData {
        theta,
        threshold: c.threshold,
        mu,
        distances,
        fit,
        target: counting_coefficient(theta),
        dofs: c.solved.dofs(),
    })
}

pub fn counting_file(data: &CountingData, grid_points: usize, hash: &str) -> Result<Csv, ExperimentError> {
    let mut csv = Csv::new("counting", hash, &["log10E", "N", "asymptote"]);
    csv.comment(&format!(
        "theta_deg {} dofs {} threshold {} (E measured from it)",
        data.theta.to_degrees(),
        data.dofs,
        fmt_f64(data.threshold)
    ));
    let hi = (2.0 * data.distances[0]).min(0.999).log10();
    let lo = (0.5 * data.distances[data.distances.len() - 1]).log10();
    let grid: Vec<f64> =
        (0..grid_points).map(|i| 10f64.powf(hi + (lo - hi) * i as f64 / (grid_points - 1) as f64)).collect();
    // shift so that the threshold sits at 1 for the staircase convention
    let shifted: Vec<f64> = data.mu.iter().map(|m| m + 1.0 - data.threshold).collect();
    let counts = staircase(&shifted, &grid)?;
    for (e, n) in grid.iter().zip(counts) {
        csv.row(&[fmt_f64(e.log10()), n.to_string(), fmt_f64(counting_asymptote(data.theta, *e))]);
    }
    csv.comment(&format!(
        "slope {} target {} relative_error {} correlation {} points {}",
        fmt_f64(data.fit.slope),
        fmt_f64(data.target),
        fmt_f64(data.relative_slope_error()),
        fmt_f64(data.fit.correlation),
        data.fit.points
    ));
    let e: Vec<String> = data.distances.iter().map(|v| fmt_f64(*v)).collect();
    csv.comment(&format!("jumps E_j {}", e.join(" ")));
    Ok(csv)
}

// ------------------------------------------------------------ potential

pub fn potential_grid(cfg: &PotentialConfig) -> Vec<f64> {
    let x_min = cfg.x_min.max(-SECTION_WIDTH + 1e-9);
    let mut xs: Vec<f64> =
        (0..cfg.points).map(|i| x_min + (cfg.x_max - x_min) * i as f64 / (cfg.points - 1) as f64).collect();
    xs.extend((0..cfg.log_points).map(|i| 10f64.powf(cfg.log_min * (1.0 - i as f64 / cfg.log_points as f64))));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

pub fn potential_file(table: &PotentialTable, hash: &str) -> Csv {
    let mut csv = Csv::new("potential", hash, &["x", "v", "residual"]);
    for s in &table.samples {
        csv.row(&[fmt_f64(s.x), fmt_f64(s.v), fmt_f64(s.residual)]);
    }
    csv.comment(&format!("max_residual {}", fmt_f64(table.max_residual())));
    csv
}

// ---------------------------------------------------------------- modes

pub fn compute_modes(cfg: &ModesConfig) -> Result<Solved, ExperimentError> {
    meridian_spectrum(cfg.theta_deg.to_radians(), 0, cfg.k, cfg.truncation, Frame::Rotated, &cfg.disc)
}

pub fn mode_file_name(n: usize) -> String {
    format!("mode_{n}.csv")
}

/// Mesh file, one `x,y,psi` file per mode (x = z, y = r, one row per dof
/// in dof order) and a manifest of eigenvalues.
pub fn write_modes(solved: &Solved, dir: &Path, hash: &str) -> Result<Vec<PathBuf>, ExperimentError> {
    std::fs::create_dir_all(dir)?;
    let theta = solved.domain.theta;
    let mut files = Vec::new();
    let mesh_path = dir.join("mesh.txt");
    let mut buf = Vec::new();
    write_mesh(&solved.mesh, &mut buf)?;
    std::fs::write(&mesh_path, buf)?;
    files.push(mesh_path);
    let mut manifest = Csv::new("modes", hash, &["n", "mu", "residual", "file"]);
    manifest.comment(&format!("theta_deg {} dofs {} mesh mesh.txt (s, u frame)", theta.to_degrees(), solved.dofs()));
    let coords = &solved.assembled.dofs.coords;
    for i in 0..solved.result.values.len() {
        let v = solved.full_vector(i);
        let mut csv = Csv::new("modes", hash, &["x", "y", "psi"]);
        csv.comment(&format!("mode {} mu {}", i + 1, fmt_f64(solved.result.values[i])));
        for (p, psi) in coords.iter().zip(&v) {
            let [x, y] = physical_point(*p, theta);
            csv.row(&[fmt_f64(x), fmt_f64(y), fmt_f64(*psi)]);
        }
        let name = mode_file_name(i + 1);
        files.push(csv.write(dir, &name)?);
        manifest.row(&[
            (i + 1).to_string(),
            fmt_f64(solved.result.values[i]),
            fmt_f64(solved.result.residuals[i]),
            name,
        ]);
    }
    files.push(manifest.write(dir, "manifest.csv")?);
    Ok(files)
}

/// Reads the `psi` column of a mode file back into a dof vector.
pub fn read_mode(path: &Path) -> Result<Vec<f64>, ExperimentError> {
    let text = std::fs::read_to_string(path)?;
    read_rows(&text)
        .iter()
        .map(|r| {
            r.get(2)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| ExperimentError::Config(format!("malformed mode row in {}", path.display())))
        })
        .collect()
}

/// √(ψᵀMψ) of a full dof vector.
pub fn mass_norm(solved: &Solved, full: &[f64]) -> f64 {
    let x: Vec<f64> = solved.reduced.free.iter().map(|&i| full[i]).collect();
    solved.reduced.mass.inner(&x, &x).sqrt()
}

// -------------------------------------------------------- semiclassical

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemiclassicalRow {
    pub h: f64,
    pub lambda: Vec<f64>,
    pub lambda_triangle: Vec<f64>,
    pub expansion: Vec<f64>,
    /// Born–Oppenheimer eigenvalues ε_n(h).
    pub bo: Vec<f64>,
}

pub fn compute_semiclassical(cfg: &SemiclassicalConfig) -> Result<Vec<SemiclassicalRow>, ExperimentError> {
    cfg.h
        .par_iter()
        .map(|&h| {
            let disc = scaled_discretization(&cfg.disc, h);
            let guide = scaled_spectrum(h, Shape::ScaledGuide, cfg.k, cfg.truncation, &disc)?;
            let tri = scaled_spectrum(h, Shape::ScaledTriangle, cfg.k, cfg.truncation, &disc)?;
            let bo = solve_1d(&Model1DProblem::born_oppenheimer(h, cfg.bo_right, cfg.bo_grid_n), cfg.k)?;
            let expansion = (1..=cfg.k).map(|n| lambda_delta_expansion(n, h)).collect::<Result<Vec<_>, _>>()?;
            Ok(SemiclassicalRow {
                h,
                lambda: guide.result.values,
                lambda_triangle: tri.result.values,
                expansion,
                bo: bo.values,
            })
        })
        .collect()
}

pub fn semiclassical_file(rows: &[SemiclassicalRow], hash: &str) -> Csv {
    let mut csv = Csv::new("semiclassical", hash, &["h", "n", "lambda", "lambda_triangle", "expansion", "bo"]);
    for r in rows {
        for n in 0..r.lambda.len() {
            let opt = |v: Option<&f64>| v.map_or_else(|| "nan".to_string(), |x| fmt_f64(*x));
            csv.row(&[
                fmt_f64(r.h),
                (n + 1).to_string(),
                fmt_f64(r.lambda[n]),
                opt(r.lambda_triangle.get(n)),
                opt(r.expansion.get(n)),
                opt(r.bo.get(n)),
            ]);
        }
    }
    csv
}

// ---------------------------------------------------------------- agmon

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgmonRow {
    pub h: f64,
    pub lambda1: f64,
    pub agmon: AgmonRatio,
    pub leakage: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgmonData {
    pub x1: f64,
    pub rows: Vec<AgmonRow>,
    /// Leakage abscissa against h√|ln h|.
    pub leakage_fit: Option<LinearFit>,
}

pub fn leakage_scale(h: f64) -> f64 {
    h * h.ln().abs().sqrt()
}

pub fn compute_agmon(cfg: &AgmonConfig) -> Result<AgmonData, ExperimentError> {
    let x1 = match cfg.x1 {
        Some(x) => x,
        None => verified_x1(cfg.x1_grid_points)?
            .ok_or_else(|| ExperimentError::Config("no grid point satisfies the logarithmic lower bound".into()))?,
    };
    let weight =
        AgmonWeight::new(AgmonWeightParams { eta0: cfg.eta0, eta1: cfg.eta1, eta2: cfg.eta2, x1 })?;
    let rows = cfg
        .h
        .par_iter()
        .map(|&h| -> Result<AgmonRow, ExperimentError> {
            let disc = scaled_discretization(&cfg.disc, h);
            let s = scaled_spectrum(h, Shape::ScaledGuide, 1, cfg.truncation, &disc)?;
            let pencil = Pencil::new(&s.reduced.stiffness, &s.reduced.mass)?;
            let (_, x) = polish(&pencil, s.result.values[0], &s.result.vectors[0], 3)?;
            let v = s.reduced.extend(&x);
            let field = FeField { mesh: &s.mesh, dofs: &s.assembled.dofs, values: &v };
            Ok(AgmonRow {
                h,
                lambda1: s.result.values[0],
                agmon: agmon_ratio(&field, h, &weight)?,
                leakage: leakage_abscissa(&field, cfg.leakage_level)?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| leakage_scale(r.h)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.leakage).collect();
    let leakage_fit = linear_fit(&xs, &ys).ok();
    Ok(AgmonData { x1, rows, leakage_fit })
}

pub fn agmon_files(data: &AgmonData, hash: &str) -> (Csv, Csv) {
    let mut ratio = Csv::new("agmon", hash, &["h", "agmon_ratio", "clamped"]);
    ratio.comment(&format!("x1 {}", fmt_f64(data.x1)));
    let mut leak = Csv::new("agmon", hash, &["h", "h_sqrt_abs_ln_h", "leakage_abscissa"]);
    for r in &data.rows {
        ratio.row(&[fmt_f64(r.h), fmt_f64(r.agmon.ratio), r.agmon.clamped.to_string()]);
        leak.row(&[fmt_f64(r.h), fmt_f64(leakage_scale(r.h)), fmt_f64(r.leakage)]);
    }
    if let Some(f) = &data.leakage_fit {
        leak.comment(&format!("slope {} correlation {}", fmt_f64(f.slope), fmt_f64(f.correlation)));
    }
    (ratio, leak)
}

// -------------------------------------------------------------- driver

/// Runs `experiment` (after validating `config`) and writes its files to
/// `out`.
pub fn run_experiment(config: &ExperimentConfig, out: &Path) -> Result<RunOutput, ExperimentError> {
    config.validate()?;
    let experiment = config.experiment.ok_or_else(|| ExperimentError::Config("no experiment selected".into()))?;
    let hash = config_hash(config)?;
    let mut output = RunOutput::default();
    match experiment {
        Experiment::SweepTheta => {
            let data = compute_sweep(&config.sweep_theta)?;
            let (mu, two) = sweep_files(&data, &hash)?;
            output.files.push(mu.write(out, "sweep_theta.csv")?);
            output.files.push(two.write(out, "two_term.csv")?);
            let failed: Vec<String> =
                data.rows.iter().filter_map(|r| r.values.as_ref().err().map(|e| format!("{}°: {e}", r.theta_deg))).collect();
            for f in &failed {
                eprintln!("sweep_theta: failed at {f}");
            }
            output.summary = format!(
                "{} angles solved, {} failed; largest decrease {:.3e}",
                data.rows.len() - failed.len(),
                failed.len(),
                worst_decrease(&data, config.sweep_theta.k)
            );
        }
        Experiment::Counting => {
            let data = compute_counting(&config.counting)?;
            output.files.push(counting_file(&data, config.counting.grid_points, &hash)?.write(out, "counting.csv")?);
            output.summary = format!(
                "slope {:.6} vs cot(theta)/(4 pi) = {:.6} (relative error {:.3})",
                data.fit.slope,
                data.target,
                data.relative_slope_error()
            );
        }
        Experiment::Potential => {
            let table = PotentialTable::build(&potential_grid(&config.potential))?;
            output.files.push(potential_file(&table, &hash).write(out, "potential.csv")?);
            output.summary = format!("{} samples, max residual {:.3e}", table.samples.len(), table.max_residual());
        }
        Experiment::Modes => {
            let solved = compute_modes(&config.modes)?;
            output.files = write_modes(&solved, out, &hash)?;
            output.summary = format!("{} modes on {} dofs", solved.result.values.len(), solved.dofs());
        }
        Experiment::Semiclassical => {
            let rows = compute_semiclassical(&config.semiclassical)?;
            output.files.push(semiclassical_file(&rows, &hash).write(out, "semiclassical.csv")?);
            output.summary = format!("{} values of h", rows.len());
        }
        Experiment::Agmon => {
            let data = compute_agmon(&config.agmon)?;
            let (ratio, leak) = agmon_files(&data, &hash);
            output.files.push(ratio.write(out, "agmon.csv")?);
            output.files.push(leak.write(out, "leakage.csv")?);
            output.summary = format!(
                "x1 {:.4}, leakage correlation {:.4}",
                data.x1,
                data.leakage_fit.map_or(f64::NAN, |f| f.correlation)
            );
        }
        Experiment::Verify => {
            let report = super::run_verify(&config.verify)?;
            let path = out.join("verify.json");
            std::fs::create_dir_all(out)?;
            let text = serde_json::to_string_pretty(&report).map_err(|e| ExperimentError::Config(e.to_string()))?;
            std::fs::write(&path, text + "\n")?;
            output.files.push(path);
            output.summary = report.summary_lines().join("\n");
            output.passed = Some(report.passed);
        }
    }
    Ok(output)
}

/// [`run_experiment`] on a pool of `workers` threads (all cores when None).
pub fn run_with_workers(config: &ExperimentConfig, out: &Path, workers: Option<usize>) -> Result<RunOutput, ExperimentError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers.or(config.workers) {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| ExperimentError::Config(e.to_string()))?;
    pool.install(|| run_experiment(config, out))
}
