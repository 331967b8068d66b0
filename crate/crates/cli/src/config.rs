//! Scenario configuration: cameras, presets, trajectory and plot window in
//! one JSON document. Angles are degrees here and radians everywhere else;
//! lengths are metres, pixel quantities pixels.
//!
//! ```json
//! {
//!   "config_version": 1,
//!   "cameras": [
//!     {
//!       "name": "cam1",
//!       "pose": { "x_m": -20.0, "y_m": 10.0, "height_m": 8.0,
//!                 "pan_deg": -26.6, "pitch_deg": 19.7 },
//!       "intrinsics": { "focal_px": 1400.0,
//!                       "half_width_px": 960.0, "half_height_px": 600.0 }
//!     }
//!   ],
//!   "presets": ["Basler1", "my_preset.json"],
//!   "trajectory": {
//!     "entry_x_m": 20.0, "entry_y_m": -3.5, "entry_heading_deg": 180.0,
//!     "straight_in_m": 12.0, "turn_radius_m": 8.0, "turn_sweep_deg": 90.0,
//!     "straight_out_m": 12.0, "spacing_m": 2.0,
//!     "vehicle": { "length_m": 4.5, "width_m": 1.8, "height_m": 1.5 }
//!   },
//!   "view": { "min_x_m": -25.0, "min_y_m": -30.0, "max_x_m": 25.0,
//!             "max_y_m": 15.0, "scale_px_per_m": 10.0 }
//! }
//! ```
//!
//! Preset entries name either a builtin (checked first) or a preset file,
//! resolved relative to the configuration file's directory.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use groundcov_core::catalog::builtin_preset;
use groundcov_core::trajectory::{Camera, TrajectorySpec, VehicleSize};
use groundcov_core::{CameraErrorPreset, CameraIntrinsics, CameraPose, GeometryError};
use serde::Deserialize;
use thiserror::Error;

use crate::preset_file::{load_preset, PresetFileError};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported config_version {0} (expected {CONFIG_VERSION})")]
    Version(u32),
    #[error("camera {name}: {source}")]
    Camera { name: String, source: GeometryError },
    #[error("no camera named {0:?} in config")]
    UnknownCamera(String),
    #[error("config has no cameras")]
    NoCameras,
    #[error("preset {name}: {source}")]
    Preset { name: String, source: PresetFileError },
    #[error("duplicate camera name {0:?}")]
    DuplicateCamera(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseDoc {
    x_m: f64,
    y_m: f64,
    height_m: f64,
    pan_deg: f64,
    pitch_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntrinsicsDoc {
    focal_px: f64,
    half_width_px: f64,
    half_height_px: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CameraDoc {
    name: String,
    pose: PoseDoc,
    intrinsics: IntrinsicsDoc,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct VehicleDoc {
    length_m: f64,
    width_m: f64,
    height_m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryDoc {
    entry_x_m: f64,
    entry_y_m: f64,
    entry_heading_deg: f64,
    straight_in_m: f64,
    turn_radius_m: f64,
    #[serde(default = "default_sweep_deg")]
    turn_sweep_deg: f64,
    straight_out_m: f64,
    spacing_m: f64,
    vehicle: VehicleDoc,
}

fn default_sweep_deg() -> f64 {
    90.0
}

/// Plot window in world metres plus the raster scale.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewDoc {
    pub min_x_m: f64,
    pub min_y_m: f64,
    pub max_x_m: f64,
    pub max_y_m: f64,
    pub scale_px_per_m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    config_version: u32,
    cameras: Vec<CameraDoc>,
    #[serde(default)]
    presets: Vec<String>,
    trajectory: Option<TrajectoryDoc>,
    view: Option<ViewDoc>,
}

/// A parsed scenario: validated cameras, resolved presets, and the optional
/// trajectory/view blocks.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub cameras: Vec<Camera>,
    pub presets: Vec<CameraErrorPreset>,
    pub trajectory: Option<TrajectorySpec>,
    pub view: Option<ViewDoc>,
}

impl Scenario {
    /// The named camera, or the first one when `name` is `None`.
    pub fn camera(&self, name: Option<&str>) -> Result<&Camera, ConfigError> {
        match name {
            Some(n) => self
                .cameras
                .iter()
                .find(|c| c.name == n)
                .ok_or_else(|| ConfigError::UnknownCamera(n.to_string())),
            None => self.cameras.first().ok_or(ConfigError::NoCameras),
        }
    }
}

fn build_camera(doc: &CameraDoc) -> Result<Camera, ConfigError> {
    let wrap = |source| ConfigError::Camera { name: doc.name.clone(), source };
    let pose = CameraPose::new(
        doc.pose.x_m,
        doc.pose.y_m,
        doc.pose.height_m,
        doc.pose.pan_deg * PI / 180.0,
        doc.pose.pitch_deg * PI / 180.0,
    )
    .map_err(wrap)?;
    let intrinsics = CameraIntrinsics::new(
        doc.intrinsics.focal_px,
        doc.intrinsics.half_width_px,
        doc.intrinsics.half_height_px,
    )
    .map_err(wrap)?;
    Ok(Camera { name: doc.name.clone(), pose, intrinsics })
}

/// Resolves a preset reference: builtin name first, then a file path
/// relative to `base_dir`.
pub fn resolve_preset(name: &str, base_dir: &Path) -> Result<CameraErrorPreset, ConfigError> {
    if let Some(preset) = builtin_preset(name) {
        return Ok(preset);
    }
    let path = base_dir.join(name);
    load_preset(&path).map_err(|source| ConfigError::Preset { name: name.to_string(), source })
}

pub fn parse_scenario(text: &str, base_dir: &Path) -> Result<Scenario, ConfigError> {
    let doc: ConfigDoc = serde_json::from_str(text)?;
    if doc.config_version != CONFIG_VERSION {
        return Err(ConfigError::Version(doc.config_version));
    }

    let mut cameras = Vec::with_capacity(doc.cameras.len());
    for camera_doc in &doc.cameras {
        if cameras.iter().any(|c: &Camera| c.name == camera_doc.name) {
            return Err(ConfigError::DuplicateCamera(camera_doc.name.clone()));
        }
        cameras.push(build_camera(camera_doc)?);
    }

    let presets = doc
        .presets
        .iter()
        .map(|name| resolve_preset(name, base_dir))
        .collect::<Result<Vec<_>, _>>()?;

    let trajectory = doc.trajectory.map(|t| TrajectorySpec {
        entry_x: t.entry_x_m,
        entry_y: t.entry_y_m,
        entry_heading: t.entry_heading_deg * PI / 180.0,
        straight_in: t.straight_in_m,
        turn_radius: t.turn_radius_m,
        turn_sweep: t.turn_sweep_deg * PI / 180.0,
        straight_out: t.straight_out_m,
        spacing: t.spacing_m,
        vehicle: VehicleSize {
            length: t.vehicle.length_m,
            width: t.vehicle.width_m,
            height: t.vehicle.height_m,
        },
    });

    Ok(Scenario { cameras, presets, trajectory, view: doc.view })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
    let base_dir = path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    parse_scenario(&text, &base_dir)
}
