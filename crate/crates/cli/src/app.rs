//! Command dispatch: argument parsing, input loading, report formatting and
//! exit-code mapping.
//!
//! Exit codes: 0 success, 1 usage or configuration problem, 2 geometric
//! failure on a required point (horizon, behind camera, degenerate data),
//! 3 I/O failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use groundcov_core::calibstats::{
    coverage_histogram, reprojection_error_grid, summarize, CalibStatsError, GridSpec,
};
use groundcov_core::catalog::builtin_preset;
use groundcov_core::footprint::{
    box_to_footprint, footprint_uncertainty, Box3D, FootprintError, PointReport,
};
use groundcov_core::geometry::{image_to_ground, ray_scalars, ground_to_image};
use groundcov_core::propagation::{
    error_budget, monte_carlo_covariance, propagate_preset, Confidence, PropagationError,
};
use groundcov_core::sensitivity::{jacobian_check, JacobianCheck, PARAM_NAMES};
use groundcov_core::trajectory::{
    evaluate_trajectory, generate_left_turn, Camera, ReportKind, TrajectoryError,
};
use groundcov_core::{
    CameraErrorPreset, GeometryError, GroundCovariance, GroundPoint, ImagePoint, ParamVector,
};

use crate::config::{load_scenario, ConfigError, Scenario};
use crate::preset_file::{load_preset, PresetFileError};
use crate::records::{ellipse_csv_string, read_corners, write_grid_csv, RecordError};
use crate::svg::{emit_svg, SvgError, ViewBox};

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    PresetFile(#[from] PresetFileError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Footprint(#[from] FootprintError),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
    #[error(transparent)]
    CalibStats(#[from] CalibStatsError),
    #[error(transparent)]
    Records(#[from] RecordError),
    #[error(transparent)]
    Svg(#[from] SvgError),
    #[error("cannot read {path}: {source}")]
    ReadFile { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    WriteFile { path: String, source: std::io::Error },
}

fn geometry_exit(err: &GeometryError) -> i32 {
    match err {
        GeometryError::HorizonRay { .. } | GeometryError::BehindCamera { .. } => 2,
        // Invalid pose/intrinsics values are configuration mistakes.
        GeometryError::InvalidPose(_) | GeometryError::InvalidIntrinsics(_) => 1,
    }
}

fn propagation_exit(err: &PropagationError) -> i32 {
    match err {
        PropagationError::NegativeSigma { .. } => 1,
        PropagationError::Geometry(g) => geometry_exit(g),
        PropagationError::NotPsd { .. } | PropagationError::DegenerateSamples { .. } => 2,
    }
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Svg(_) => 1,
            AppError::Config(e) => match e {
                ConfigError::Read { .. } => 3,
                ConfigError::Preset { source, .. } => preset_file_exit(source),
                _ => 1,
            },
            AppError::PresetFile(e) => preset_file_exit(e),
            AppError::Geometry(e) => geometry_exit(e),
            AppError::Propagation(e) => propagation_exit(e),
            AppError::Footprint(e) => match e {
                FootprintError::Corner { source, .. } => propagation_exit(source),
                FootprintError::Center { source } => propagation_exit(source),
            },
            AppError::Trajectory(e) => match e {
                TrajectoryError::Propagation(source) => propagation_exit(source),
                _ => 1,
            },
            AppError::CalibStats(e) => match e {
                CalibStatsError::DegenerateHull { .. } => 2,
                CalibStatsError::InvalidGrid(_) => 1,
            },
            AppError::Records(e) => match e {
                RecordError::Csv(inner) if inner.is_io_error() => 3,
                _ => 1,
            },
            AppError::ReadFile { .. } | AppError::WriteFile { .. } => 3,
        }
    }
}

fn preset_file_exit(err: &PresetFileError) -> i32 {
    match err {
        PresetFileError::Read { .. } | PresetFileError::Write { .. } => 3,
        _ => 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConfidenceArg {
    #[value(name = "one_sigma")]
    OneSigma,
    P90,
    P95,
    P99,
}

impl From<ConfidenceArg> for Confidence {
    fn from(arg: ConfidenceArg) -> Confidence {
        match arg {
            ConfidenceArg::OneSigma => Confidence::OneSigma,
            ConfidenceArg::P90 => Confidence::P90,
            ConfidenceArg::P95 => Confidence::P95,
            ConfidenceArg::P99 => Confidence::P99,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Center,
    Corners,
}

#[derive(Debug, Parser)]
#[command(
    name = "groundcov",
    version,
    about = "Ground-plane projection and uncertainty toolkit for fixed roadside cameras"
)]
pub struct Cli {
    /// Scenario file with cameras, presets, trajectory and view.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Camera name from the scenario (default: the first one).
    #[arg(long, global = true, value_name = "NAME")]
    pub camera: Option<String>,
    /// Error preset: builtin name or preset file path.
    #[arg(long, global = true, value_name = "NAME|FILE")]
    pub preset: Option<String>,
    /// Ellipse confidence level.
    #[arg(long, global = true, value_enum, default_value = "one_sigma")]
    pub confidence: ConfidenceArg,
    /// Random seed for Monte Carlo draws.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output path (or basename for commands that write several files).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a pixel onto the ground plane.
    Project {
        #[arg(allow_negative_numbers = true)]
        c: f64,
        #[arg(allow_negative_numbers = true)]
        r: f64,
    },
    /// Project a ground point back into the image.
    Unproject {
        #[arg(allow_negative_numbers = true)]
        x: f64,
        #[arg(allow_negative_numbers = true)]
        y: f64,
    },
    /// Print the analytic Jacobian at a pixel next to its finite-difference
    /// estimate.
    Jacobian {
        #[arg(allow_negative_numbers = true)]
        c: f64,
        #[arg(allow_negative_numbers = true)]
        r: f64,
    },
    /// Propagate a preset's uncertainty to the ground point of a pixel.
    Propagate {
        #[arg(allow_negative_numbers = true)]
        c: f64,
        #[arg(allow_negative_numbers = true)]
        r: f64,
    },
    /// Uncertainty report for the ground footprint of a 3D box.
    Footprint {
        #[arg(allow_negative_numbers = true)]
        x: f64,
        #[arg(allow_negative_numbers = true)]
        y: f64,
        #[arg(long)]
        length: f64,
        #[arg(long)]
        width: f64,
        #[arg(long)]
        height: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        yaw_deg: f64,
    },
    /// Evaluate the configured manoeuvre and write CSV + SVG.
    Trajectory {
        #[arg(long, value_enum, default_value = "center")]
        report: ReportArg,
    },
    /// Grid statistics over a checkerboard correspondence file.
    CalibStats {
        file: PathBuf,
        #[arg(long)]
        image_width: u32,
        #[arg(long)]
        image_height: u32,
        #[arg(long, default_value_t = 5)]
        cell_size: u32,
    },
    /// Compare analytic propagation against Monte Carlo at a pixel.
    McValidate {
        #[arg(allow_negative_numbers = true)]
        c: f64,
        #[arg(allow_negative_numbers = true)]
        r: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

/// Parses arguments and runs; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            // Help goes to stdout, errors to stderr; clap picks the stream.
            let _ = err.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

/// Runs one command and returns its stdout text.
pub fn run(cli: &Cli) -> Result<String, AppError> {
    let report = match &cli.command {
        Command::Project { c, r } => cmd_project(cli, *c, *r)?,
        Command::Unproject { x, y } => cmd_unproject(cli, *x, *y)?,
        Command::Jacobian { c, r } => cmd_jacobian(cli, *c, *r)?,
        Command::Propagate { c, r } => cmd_propagate(cli, *c, *r)?,
        Command::Footprint { x, y, length, width, height, yaw_deg } => {
            cmd_footprint(cli, *x, *y, *length, *width, *height, *yaw_deg)?
        }
        Command::Trajectory { report } => cmd_trajectory(cli, *report)?,
        Command::CalibStats { file, image_width, image_height, cell_size } => {
            cmd_calib_stats(cli, file, *image_width, *image_height, *cell_size)?
        }
        Command::McValidate { c, r, samples } => cmd_mc_validate(cli, *c, *r, *samples)?,
    };
    if let Some(out) = &cli.out {
        if writes_report_file(&cli.command) {
            write_text(out, &report)?;
        }
    }
    Ok(report)
}

/// Commands whose `--out` means "also save the printed report". The file
/// writers (trajectory, calib-stats) treat `--out` as a basename instead.
fn writes_report_file(command: &Command) -> bool {
    !matches!(command, Command::Trajectory { .. } | Command::CalibStats { .. })
}

fn scenario(cli: &Cli) -> Result<Scenario, AppError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| AppError::Usage("this command needs --config <file>".into()))?;
    Ok(load_scenario(path)?)
}

fn camera<'s>(cli: &Cli, scenario: &'s Scenario) -> Result<&'s Camera, AppError> {
    Ok(scenario.camera(cli.camera.as_deref())?)
}

/// `--preset` wins over the scenario's preset list; builtin names win over
/// files.
fn preset(cli: &Cli, scenario: &Scenario) -> Result<CameraErrorPreset, AppError> {
    if let Some(name) = &cli.preset {
        if let Some(preset) = builtin_preset(name) {
            return Ok(preset);
        }
        return Ok(load_preset(Path::new(name))?);
    }
    scenario
        .presets
        .first()
        .cloned()
        .ok_or_else(|| AppError::Usage("no preset: pass --preset or list one in the config".into()))
}

fn check_pixel(camera: &Camera, c: f64, r: f64) -> Result<ImagePoint, AppError> {
    let intr = &camera.intrinsics;
    if !c.is_finite() || !r.is_finite() || c.abs() > intr.half_width || r.abs() > intr.half_height
    {
        return Err(AppError::Usage(format!(
            "pixel ({c}, {r}) outside the sensor (|c| <= {}, |r| <= {})",
            intr.half_width, intr.half_height
        )));
    }
    Ok(ImagePoint { c, r })
}

fn write_text(path: &Path, text: &str) -> Result<(), AppError> {
    fs::write(path, text)
        .map_err(|source| AppError::WriteFile { path: path.display().to_string(), source })
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{suffix}", base.display()))
}

fn cmd_project(cli: &Cli, c: f64, r: f64) -> Result<String, AppError> {
    let scenario = scenario(cli)?;
    let camera = camera(cli, &scenario)?;
    let pixel = check_pixel(camera, c, r)?;
    let ground = image_to_ground(&camera.pose, &camera.intrinsics, pixel)?;
    let scalars = ray_scalars(&camera.pose, &camera.intrinsics, pixel)?;
    let mut out = String::new();
    writeln!(out, "camera: {}", camera.name).unwrap();
    writeln!(out, "pixel: c={c:.3} r={r:.3}").unwrap();
    writeln!(out, "ground: X={:.6} m  Y={:.6} m", ground.x, ground.y).unwrap();
    writeln!(out, "slant distance: {:.6} m", scalars.d).unwrap();
    Ok(out)
}

fn cmd_unproject(cli: &Cli, x: f64, y: f64) -> Result<String, AppError> {
    let scenario = scenario(cli)?;
    let camera = camera(cli, &scenario)?;
    let pixel = ground_to_image(&camera.pose, &camera.intrinsics, GroundPoint { x, y })?;
    let within = pixel.c.abs() <= camera.intrinsics.half_width
        && pixel.r.abs() <= camera.intrinsics.half_height;
    let mut out = String::new();
    writeln!(out, "camera: {}", camera.name).unwrap();
    writeln!(out, "ground: X={x:.3} m  Y={y:.3} m").unwrap();
    writeln!(out, "pixel: c={:.6} r={:.6}", pixel.c, pixel.r).unwrap();
    writeln!(out, "within sensor: {within}").unwrap();
    Ok(out)
}

fn format_jacobian_table(check: &JacobianCheck) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<9} {:>15} {:>15} {:>15} {:>15} {:>11}",
        "param", "dX/dp", "dY/dp", "dX/dp (FD)", "dY/dp (FD)", "max rel"
    )
    .unwrap();
    for (i, name) in PARAM_NAMES.iter().enumerate() {
        let rel = check.relative_error[(0, i)].max(check.relative_error[(1, i)]);
        writeln!(
            out,
            "{:<9} {:>15.6e} {:>15.6e} {:>15.6e} {:>15.6e} {:>11.3e}",
            name,
            check.analytic[(0, i)],
            check.analytic[(1, i)],
            check.finite_difference[(0, i)],
            check.finite_difference[(1, i)],
            rel,
        )
        .unwrap();
    }
    out
}

fn cmd_jacobian(cli: &Cli, c: f64, r: f64) -> Result<String, AppError> {
    let scenario = scenario(cli)?;
    let camera = camera(cli, &scenario)?;
    let pixel = check_pixel(camera, c, r)?;
    let par = ParamVector::from_parts(&camera.pose, &camera.intrinsics, pixel);
    let check = jacobian_check(&par, 1e-6)?;
    let mut out = String::new();
    writeln!(out, "camera: {}  pixel: c={c:.3} r={r:.3}", camera.name).unwrap();
    out.push_str(&format_jacobian_table(&check));
    writeln!(out, "max relative error: {:.3e}", check.max_relative_error).unwrap();
    if check.passed() {
        writeln!(out, "analytic and finite differences agree at 1e-6").unwrap();
    } else {
        writeln!(out, "flagged entries: {:?}", check.flagged).unwrap();
    }
    Ok(out)
}

fn format_covariance(gc: &GroundCovariance) -> String {
    let mut out = String::new();
    writeln!(out, "Var(X)   = {:.9e} m^2", gc[(0, 0)]).unwrap();
    writeln!(out, "Var(Y)   = {:.9e} m^2", gc[(1, 1)]).unwrap();
    writeln!(out, "Cov(X,Y) = {:.9e} m^2", gc[(0, 1)]).unwrap();
    writeln!(out, "sigma(X) = {:.6} m", gc[(0, 0)].max(0.0).sqrt()).unwrap();
    writeln!(out, "sigma(Y) = {:.6} m", gc[(1, 1)].max(0.0).sqrt()).unwrap();
    out
}

fn format_point_report(report: &PointReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "ground: X={:.6} m  Y={:.6} m  (pixel c={:.3} r={:.3})",
        report.ground.x, report.ground.y, report.pixel.c, report.pixel.r
    )
    .unwrap();
    out.push_str(&format_covariance(&report.covariance));
    let e = &report.ellipse;
    writeln!(
        out,
        "ellipse: semi-major {:.6} m, semi-minor {:.6} m, orientation {:.3} deg",
        e.semi_major,
        e.semi_minor,
        e.orientation.to_degrees()
    )
    .unwrap();
    out
}

fn cmd_propagate(cli: &Cli, c: f64, r: f64) -> Result<String, AppError> {
    let scenario = scenario(cli)?;
    let camera = camera(cli, &scenario)?;
    let preset = preset(cli, &scenario)?;
    let pixel = check_pixel(camera, c, r)?;
    let confidence: Confidence = cli.confidence.into();

    let ground = image_to_ground(&camera.pose, &camera.intrinsics, pixel)?;
    let par = ParamVector::from_parts(&camera.pose, &camera.intrinsics, pixel);
    let gc = propagate_preset(&par, &preset)?;
    let ellipse = groundcov_core::propagation::ellipse_from_covariance(ground, &gc, confidence)?;
    let budget = error_budget(&par, &preset)?;

    let mut out = String::new();
    writeln!(out, "camera: {}  preset: {}", camera.name, preset.name).unwrap();
    writeln!(out, "pixel: c={c:.3} r={r:.3}").unwrap();
    writeln!(out, "ground: X={:.6} m  Y={:.6} m", ground.x, ground.y).unwrap();
    out.push_str(&format_covariance(&gc));
    writeln!(
        out,
        "ellipse ({:?}): semi-major {:.6} m, semi-minor {:.6} m, orientation {:.3} deg",
        cli.confidence,
        ellipse.semi_major,
        ellipse.semi_minor,
        ellipse.orientation.to_degrees()
    )
    .unwrap();

    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<14} {:<9} {:>15} {:>15}",
        "source", "param", "Var(X) m^2", "Var(Y) m^2"
    )
    .unwrap();
    for row in &budget {
        writeln!(
            out,
            "{:<14} {:<9} {:>15.6e} {:>15.6e}",
            row.source, PARAM_NAMES[row.param], row.var_x, row.var_y
        )
        .unwrap();
    }
    let (sx, sy) = budget.iter().fold((0.0, 0.0), |(x, y), row| (x + row.var_x, y + row.var_y));
    writeln!(out, "{:<14} {:<9} {:>15.6e} {:>15.6e}", "total", "", sx, sy).unwrap();
    Ok(out)
}

fn cmd_footprint(
    cli: &Cli,
    x: f64,
    y: f64,
    length: f64,
    width: f64,
    height: f64,
    yaw_deg: f64,
) -> Result<String, AppError> {
    let scenario = scenario(cli)?;
    let camera = camera(cli, &scenario)?;
    let preset = preset(cli, &scenario)?;
    if !(length > 0.0 && width > 0.0 && height > 0.0) {
        return Err(AppError::Usage("box extents must be positive".into()));
    }
    let quad = box_to_footprint(&Box3D {
        x,
        y,
        length,
        width,
        height,
        yaw: yaw_deg.to_radians(),
    });
    let report =
        footprint_uncertainty(&camera.pose, &camera.intrinsics, &preset, &quad, cli.confidence.into())?;

    let mut out = String::new();
    writeln!(out, "camera: {}  preset: {}", camera.name, preset.name).unwrap();
    let labels = ["front-left", "rear-left", "rear-right", "front-right"];
    for (i, corner) in report.corners.iter().enumerate() {
        writeln!(out, "corner {i} ({})", labels[i]).unwrap();
        out.push_str(&format_point_report(corner));
    }
    writeln!(out, "center").unwrap();
    out.push_str(&format_point_report(&report.center));
    writeln!(
        out,
        "largest uncertainty: corner {} (1-sigma semi-major {:.6} m)",
        report.largest.0, report.largest.1
    )
    .unwrap();
    Ok(out)
}

fn cmd_trajectory(cli: &Cli, report: ReportArg) -> Result<String, AppError> {
    let scenario = scenario(cli)?;
    let spec = scenario
        .trajectory
        .ok_or_else(|| AppError::Usage("config has no trajectory block".into()))?;
    let view_doc = scenario
        .view
        .ok_or_else(|| AppError::Usage("config has no view block".into()))?;
    let view = ViewBox::new(
        view_doc.min_x_m,
        view_doc.min_y_m,
        view_doc.max_x_m,
        view_doc.max_y_m,
        view_doc.scale_px_per_m,
    )?;
    let presets = match &cli.preset {
        Some(_) => vec![preset(cli, &scenario)?],
        None => scenario.presets.clone(),
    };

    let kind = match report {
        ReportArg::Center => ReportKind::Center,
        ReportArg::Corners => ReportKind::Corners,
    };
    let samples = generate_left_turn(&spec)?;
    let records = evaluate_trajectory(
        &samples,
        spec.vehicle,
        &scenario.cameras,
        &presets,
        kind,
        cli.confidence.into(),
    )?;

    let base = cli.out.clone().unwrap_or_else(|| PathBuf::from("trajectory"));
    let csv_path = with_suffix(&base, ".csv");
    let svg_path = with_suffix(&base, ".svg");
    write_text(&csv_path, &ellipse_csv_string(&records)?)?;
    write_text(&svg_path, &emit_svg(&records, &samples, &scenario.cameras, &view)?)?;

    let visible = records.iter().filter(|r| r.visible).count();
    let mut out = String::new();
    writeln!(out, "samples: {}  records: {}  visible: {visible}", samples.len(), records.len())
        .unwrap();
    writeln!(out, "wrote {}", csv_path.display()).unwrap();
    writeln!(out, "wrote {}", svg_path.display()).unwrap();
    Ok(out)
}

fn cmd_calib_stats(
    cli: &Cli,
    file: &Path,
    image_width: u32,
    image_height: u32,
    cell_size: u32,
) -> Result<String, AppError> {
    let text = fs::read_to_string(file)
        .map_err(|source| AppError::ReadFile { path: file.display().to_string(), source })?;
    let corners = read_corners(text.as_bytes())?;
    let spec = GridSpec::new(image_width, image_height, cell_size)?;

    let coverage = coverage_histogram(&corners, spec)?;
    let reproj = reprojection_error_grid(&corners, spec);
    let coverage_summary = summarize(&coverage);
    let reproj_summary = summarize(&reproj);

    let base = cli.out.clone().unwrap_or_else(|| PathBuf::from("calib"));
    let coverage_path = with_suffix(&base, ".coverage.csv");
    let reproj_path = with_suffix(&base, ".reproj.csv");
    let mut buffer = Vec::new();
    write_grid_csv(&coverage, &mut buffer)?;
    write_text(&coverage_path, std::str::from_utf8(&buffer).unwrap())?;
    buffer.clear();
    write_grid_csv(&reproj, &mut buffer)?;
    write_text(&reproj_path, std::str::from_utf8(&buffer).unwrap())?;

    let mut boards: Vec<u32> = corners.iter().map(|c| c.board_id).collect();
    boards.sort_unstable();
    boards.dedup();

    let mut out = String::new();
    writeln!(
        out,
        "corners: {}  boards: {}  out of bounds: {}",
        corners.len(),
        boards.len(),
        reproj.out_of_bounds
    )
    .unwrap();
    writeln!(
        out,
        "coverage: {:.1}% of cells empty, corner-region coverage {:.1}%",
        100.0 * coverage_summary.empty_fraction,
        100.0 * coverage_summary.corner_coverage
    )
    .unwrap();
    match (reproj_summary.max_mean_error, reproj_summary.global_mean_error) {
        (Some(max), Some(mean)) => {
            writeln!(out, "reprojection error: max cell mean {max:.6} px, global mean {mean:.6} px")
                .unwrap();
        }
        _ => writeln!(out, "reprojection error: no observations").unwrap(),
    }
    writeln!(out, "wrote {}", coverage_path.display()).unwrap();
    writeln!(out, "wrote {}", reproj_path.display()).unwrap();
    Ok(out)
}

fn cmd_mc_validate(cli: &Cli, c: f64, r: f64, samples: u64) -> Result<String, AppError> {
    let scenario = scenario(cli)?;
    let camera = camera(cli, &scenario)?;
    let preset = preset(cli, &scenario)?;
    let pixel = check_pixel(camera, c, r)?;
    if samples < 2 {
        return Err(AppError::Usage("--samples must be at least 2".into()));
    }

    let par = ParamVector::from_parts(&camera.pose, &camera.intrinsics, pixel);
    let scalars = ray_scalars(&camera.pose, &camera.intrinsics, pixel)?;
    let cov = groundcov_core::propagation::build_param_covariance(&preset, scalars.d)?;
    let analytic = groundcov_core::propagation::propagate_covariance(&par, &cov)?;
    let mc = monte_carlo_covariance(&par, &cov, samples, cli.seed)?;
    let exact = image_to_ground(&camera.pose, &camera.intrinsics, pixel)?;

    let trace = analytic[(0, 0)] + analytic[(1, 1)];
    let mut out = String::new();
    writeln!(out, "camera: {}  preset: {}  pixel: c={c:.3} r={r:.3}", camera.name, preset.name)
        .unwrap();
    writeln!(out, "samples: {samples}  seed: {}", cli.seed).unwrap();
    writeln!(out, "accepted: {}  rejected: {}", mc.accepted, mc.rejected).unwrap();
    writeln!(
        out,
        "mean shift: dX={:.9e} m  dY={:.9e} m",
        mc.mean.x - exact.x,
        mc.mean.y - exact.y
    )
    .unwrap();
    writeln!(out, "{:<10} {:>16} {:>16} {:>13} {:>11}", "entry", "analytic", "monte carlo", "diff", "diff/trace")
        .unwrap();
    let names = ["Var(X)", "Cov(X,Y)", "Var(Y)"];
    let pairs = [(0, 0), (0, 1), (1, 1)];
    for (name, (i, j)) in names.iter().zip(pairs) {
        let a = analytic[(i, j)];
        let m = mc.covariance[(i, j)];
        writeln!(
            out,
            "{:<10} {:>16.9e} {:>16.9e} {:>13.3e} {:>11.3e}",
            name,
            a,
            m,
            m - a,
            (m - a).abs() / trace
        )
        .unwrap();
    }
    Ok(out)
}
