//! Exit codes and report surface of the `groundcov` binary.
//!
//! Contract: 0 success, 1 usage or configuration error, 2 geometric
//! impossibility on a required point, 3 file I/O failure.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_groundcov")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// One camera 6 m up, pitched 20 degrees down the +X axis. The horizon
/// crosses the sensor at row -364, so both sides of it are reachable.
const CONFIG: &str = r#"{
  "config_version": 1,
  "cameras": [
    {
      "name": "cam",
      "pose": { "x_m": 0.0, "y_m": 0.0, "height_m": 6.0, "pan_deg": 0.0, "pitch_deg": 20.0 },
      "intrinsics": { "focal_px": 1000.0, "half_width_px": 960.0, "half_height_px": 600.0 }
    }
  ],
  "presets": ["Basler1"]
}"#;

struct Setup {
    dir: tempfile::TempDir,
    config: PathBuf,
}

fn setup() -> Setup {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("scene.json");
    fs::write(&config, CONFIG).unwrap();
    Setup { dir, config }
}

fn run(setup: &Setup, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(setup.dir.path())
        .arg("--config")
        .arg(&setup.config)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = Command::new(bin()).arg(flag).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{flag}");
    }
    // Bare invocation shows help rather than failing.
    let out = Command::new(bin()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = Command::new(bin()).args(["--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_config_is_a_usage_error() {
    let out = Command::new(bin()).args(["project", "0", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--config"));
}

#[test]
fn unreadable_config_exits_three() {
    let out = Command::new(bin())
        .args(["--config", "/nonexistent/scene.json", "project", "0", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_config_exits_one() {
    let s = setup();
    fs::write(&s.config, "{ not json").unwrap();
    let out = run(&s, &["project", "0", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wrong_config_version_exits_one() {
    let s = setup();
    fs::write(&s.config, CONFIG.replace("\"config_version\": 1", "\"config_version\": 9"))
        .unwrap();
    let out = run(&s, &["project", "0", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("version"));
}

#[test]
fn project_reports_the_ground_point() {
    let s = setup();
    let out = run(&s, &["project", "0", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    // h / tan(20 deg) = 16.4849 m down the boresight.
    assert!(text.contains("ground: X=16.484865 m  Y=0.000000 m"), "{text}");
    assert!(text.contains("slant distance:"));
}

#[test]
fn pixel_outside_the_sensor_is_a_usage_error() {
    let s = setup();
    for (c, r) in [("2000", "0"), ("0", "700")] {
        let out = run(&s, &["project", c, r]);
        assert_eq!(out.status.code(), Some(1));
        assert!(stderr(&out).contains("sensor"), "{}", stderr(&out));
    }
}

#[test]
fn pixel_at_or_above_the_horizon_exits_two() {
    let s = setup();
    // Row -364 is inside the sensor but past the horizon row -tan(20 deg) * f.
    let out = run(&s, &["project", "0", "-364"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("horizon"));
}

#[test]
fn ground_point_behind_the_camera_exits_two() {
    let s = setup();
    let out = run(&s, &["unproject", "-30", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("behind"));
}

#[test]
fn unproject_flags_points_outside_the_sensor() {
    let s = setup();
    // Far off to the side: projectable, but lands off-sensor.
    let out = run(&s, &["unproject", "10", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("within sensor: false"));

    let out = run(&s, &["unproject", "16", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("within sensor: true"));
}

#[test]
fn unknown_camera_exits_one() {
    let s = setup();
    let out = run(&s, &["--camera", "nope", "project", "0", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nope"));
}

#[test]
fn missing_preset_file_exits_three() {
    let s = setup();
    let out = run(&s, &["--preset", "NoSuchPreset", "propagate", "0", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn preset_file_with_bad_units_exits_one() {
    let s = setup();
    let path = s.dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{ "preset_version": 1, "name": "Bad", "units": { "angle": "grad", "length": "m", "pixel": "px" },
            "sigma_f": 0.1, "sigma_c": 0.1, "sigma_r": 0.1, "sigma_x0": 0.1, "sigma_y0": 0.1,
            "sigma_h": 0.1, "sigma_alpha": 0.1, "sigma_theta": 0.1 }"#,
    )
    .unwrap();
    let out = run(&s, &["--preset", path.to_str().unwrap(), "propagate", "0", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("grad"));
}

#[test]
fn preset_file_on_disk_is_honoured() {
    let s = setup();
    let path = s.dir.path().join("tenx.json");
    fs::write(
        &path,
        r#"{ "preset_version": 1, "name": "TenX", "units": { "angle": "mdeg", "length": "m", "pixel": "px" },
            "sigma_f": 2.768, "sigma_c": 1.713, "sigma_r": 1.314, "sigma_x0": 1.061, "sigma_y0": 0.861,
            "sigma_h": 1.936, "sigma_alpha": 1.524, "sigma_theta": 1.480,
            "sigma_imaging": 1.0, "sigma_resolution": 0.1 }"#,
    )
    .unwrap();
    let base = run(&s, &["propagate", "100", "50"]);
    let tenx = run(&s, &["--preset", path.to_str().unwrap(), "propagate", "100", "50"]);
    assert_eq!(tenx.status.code(), Some(0), "{}", stderr(&tenx));
    assert!(stdout(&tenx).contains("preset: TenX"));
    let sigma = |out: &Output| -> f64 {
        stdout(out)
            .lines()
            .find_map(|l| l.strip_prefix("sigma(X) = ")?.strip_suffix(" m")?.parse().ok())
            .unwrap()
    };
    // Every sigma is scaled by ten, so the propagated sigma is too. The
    // reports round to six decimals, which bounds the recovered ratio.
    let ratio = sigma(&tenx) / sigma(&base);
    assert!((ratio - 10.0).abs() < 1e-3, "ratio {ratio}");
}

#[test]
fn propagate_mirrors_the_report_into_the_out_file() {
    let s = setup();
    let out = run(&s, &["--out", "report.txt", "propagate", "100", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let written = fs::read_to_string(s.dir.path().join("report.txt")).unwrap();
    assert_eq!(written, stdout(&out));
    assert!(written.contains("Var(X)"));
    assert!(written.contains("total"));
}

#[test]
fn jacobian_reports_agreement() {
    let s = setup();
    let out = run(&s, &["jacobian", "100", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("analytic and finite differences agree at 1e-6"));
}

#[test]
fn footprint_names_the_worst_corner() {
    let s = setup();
    let out = run(&s, &[
        "footprint", "12", "3", "--length", "4.5", "--width", "1.8", "--height", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("largest uncertainty: corner"));
}

#[test]
fn footprint_behind_the_camera_exits_two() {
    let s = setup();
    let out = run(&s, &[
        "footprint", "-30", "0", "--length", "4.5", "--width", "1.8", "--height", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn footprint_rejects_non_positive_extents() {
    let s = setup();
    let out = run(&s, &[
        "footprint", "12", "3", "--length", "0", "--width", "1.8", "--height", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn trajectory_without_a_trajectory_block_is_a_usage_error() {
    let s = setup();
    let out = run(&s, &["trajectory"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("trajectory"));
}

#[test]
fn trajectory_writes_csv_and_svg() {
    let s = setup();
    let config = fixture("intersection.json").canonicalize().unwrap();
    let out = Command::new(bin())
        .current_dir(s.dir.path())
        .args(["--config", config.to_str().unwrap(), "trajectory", "--out", "turn"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("samples: 20"), "{text}");
    assert!(text.contains("wrote turn.csv"));
    assert!(text.contains("wrote turn.svg"));
    let csv = fs::read_to_string(s.dir.path().join("turn.csv")).unwrap();
    assert!(csv.starts_with("s,camera,preset,point,visible,"));
    let svg = fs::read_to_string(s.dir.path().join("turn.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn calib_stats_writes_both_grids() {
    let s = setup();
    let corners = fixture("sample_corners.csv").canonicalize().unwrap();
    let out = run(&s, &[
        "calib-stats", corners.to_str().unwrap(),
        "--image-width", "1920", "--image-height", "1200",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("corners: 20"), "{text}");
    assert!(text.contains("boards: 4"));
    for name in ["calib.coverage.csv", "calib.reproj.csv"] {
        let grid = fs::read_to_string(s.dir.path().join(name)).unwrap();
        assert!(grid.starts_with("cell_row,cell_col,count,mean_error"), "{name}");
    }
}

#[test]
fn calib_stats_missing_file_exits_three() {
    let s = setup();
    let out = run(&s, &[
        "calib-stats", "/nonexistent/corners.csv",
        "--image-width", "1920", "--image-height", "1200",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn calib_stats_malformed_file_exits_one() {
    let s = setup();
    let path = s.dir.path().join("bad.csv");
    fs::write(&path, "board_id,detected_u\n1,2\n").unwrap();
    let out = run(&s, &[
        "calib-stats", path.to_str().unwrap(),
        "--image-width", "1920", "--image-height", "1200",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mc_validate_needs_at_least_two_samples() {
    let s = setup();
    let out = run(&s, &["mc-validate", "100", "50", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mc_validate_compares_against_the_analytic_covariance() {
    let s = setup();
    let out = run(&s, &["mc-validate", "100", "50", "--samples", "5000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("accepted: 5000"));
    assert!(text.contains("Var(X)"));
    assert!(text.contains("diff/trace"));
}
