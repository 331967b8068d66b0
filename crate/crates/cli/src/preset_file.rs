//! Preset files: JSON documents holding one camera error preset together
//! with a units block, so table values can be pasted in their native units.
//!
//! ```json
//! {
//!   "preset_version": 1,
//!   "name": "Basler1",
//!   "units": { "angle": "mdeg", "length": "m", "pixel": "px" },
//!   "sigma_f": 0.2768, "sigma_c": 0.1713, "sigma_r": 0.1314,
//!   "sigma_x0": 0.1061, "sigma_y0": 0.0861, "sigma_h": 0.1936,
//!   "sigma_alpha": 0.1524, "sigma_theta": 0.148,
//!   "sigma_imaging": 0.1, "sigma_resolution": 0.01,
//!   "ground_sigma0": 0.0, "ground_slope": 0.0,
//!   "distortion_sigmas": { "k1": 5e-4, "k2": 1.9e-3, "p1": 3e-5, "p2": 5e-5, "k3": 2e-4 }
//! }
//! ```
//!
//! `sigma_imaging` (0.1 px), `sigma_resolution` (0.01 px), the ground-plane
//! fields (0) and the distortion block (all zero) may be omitted. Angles
//! convert to radians on load; everything else must already be metres or
//! pixels.

use std::fs;
use std::path::Path;

use groundcov_core::catalog::{DistortionSigmas, SIGMA_IMAGING, SIGMA_RESOLUTION};
use groundcov_core::CameraErrorPreset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PRESET_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PresetFileError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed preset file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported preset_version {0} (expected {PRESET_VERSION})")]
    Version(u32),
    #[error("unknown {kind} unit {unit:?}")]
    Unit { kind: &'static str, unit: String },
    #[error("negative sigma in field {0}")]
    NegativeSigma(&'static str),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Units {
    angle: String,
    length: String,
    pixel: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields, default)]
struct DistortionBlock {
    k1: f64,
    k2: f64,
    p1: f64,
    p2: f64,
    k3: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetDoc {
    preset_version: u32,
    name: String,
    units: Units,
    sigma_f: f64,
    sigma_c: f64,
    sigma_r: f64,
    sigma_x0: f64,
    sigma_y0: f64,
    sigma_h: f64,
    sigma_alpha: f64,
    sigma_theta: f64,
    #[serde(default = "default_imaging")]
    sigma_imaging: f64,
    #[serde(default = "default_resolution")]
    sigma_resolution: f64,
    #[serde(default)]
    ground_sigma0: f64,
    #[serde(default)]
    ground_slope: f64,
    #[serde(default)]
    distortion_sigmas: DistortionBlock,
}

fn default_imaging() -> f64 {
    SIGMA_IMAGING
}

fn default_resolution() -> f64 {
    SIGMA_RESOLUTION
}

fn angle_to_rad(unit: &str) -> Result<f64, PresetFileError> {
    match unit {
        "rad" => Ok(1.0),
        "deg" => Ok(std::f64::consts::PI / 180.0),
        "mdeg" => Ok(std::f64::consts::PI / 180.0 / 1000.0),
        other => Err(PresetFileError::Unit { kind: "angle", unit: other.to_string() }),
    }
}

fn require_unit(kind: &'static str, unit: &str, expected: &str) -> Result<(), PresetFileError> {
    if unit == expected {
        Ok(())
    } else {
        Err(PresetFileError::Unit { kind, unit: unit.to_string() })
    }
}

impl PresetDoc {
    fn into_preset(self) -> Result<CameraErrorPreset, PresetFileError> {
        if self.preset_version != PRESET_VERSION {
            return Err(PresetFileError::Version(self.preset_version));
        }
        let to_rad = angle_to_rad(&self.units.angle)?;
        require_unit("length", &self.units.length, "m")?;
        require_unit("pixel", &self.units.pixel, "px")?;

        let preset = CameraErrorPreset {
            name: self.name,
            sigma_f: self.sigma_f,
            sigma_c: self.sigma_c,
            sigma_r: self.sigma_r,
            sigma_x0: self.sigma_x0,
            sigma_y0: self.sigma_y0,
            sigma_h: self.sigma_h,
            sigma_alpha: self.sigma_alpha * to_rad,
            sigma_theta: self.sigma_theta * to_rad,
            sigma_imaging: self.sigma_imaging,
            sigma_resolution: self.sigma_resolution,
            ground_sigma0: self.ground_sigma0,
            ground_slope: self.ground_slope,
            distortion: DistortionSigmas {
                k1: self.distortion_sigmas.k1,
                k2: self.distortion_sigmas.k2,
                p1: self.distortion_sigmas.p1,
                p2: self.distortion_sigmas.p2,
                k3: self.distortion_sigmas.k3,
            },
        };
        check_non_negative(&preset)?;
        Ok(preset)
    }

    fn from_preset(preset: &CameraErrorPreset) -> Self {
        PresetDoc {
            preset_version: PRESET_VERSION,
            name: preset.name.clone(),
            units: Units {
                angle: "rad".to_string(),
                length: "m".to_string(),
                pixel: "px".to_string(),
            },
            sigma_f: preset.sigma_f,
            sigma_c: preset.sigma_c,
            sigma_r: preset.sigma_r,
            sigma_x0: preset.sigma_x0,
            sigma_y0: preset.sigma_y0,
            sigma_h: preset.sigma_h,
            sigma_alpha: preset.sigma_alpha,
            sigma_theta: preset.sigma_theta,
            sigma_imaging: preset.sigma_imaging,
            sigma_resolution: preset.sigma_resolution,
            ground_sigma0: preset.ground_sigma0,
            ground_slope: preset.ground_slope,
            distortion_sigmas: DistortionBlock {
                k1: preset.distortion.k1,
                k2: preset.distortion.k2,
                p1: preset.distortion.p1,
                p2: preset.distortion.p2,
                k3: preset.distortion.k3,
            },
        }
    }
}

fn check_non_negative(p: &CameraErrorPreset) -> Result<(), PresetFileError> {
    let fields = [
        ("sigma_f", p.sigma_f),
        ("sigma_c", p.sigma_c),
        ("sigma_r", p.sigma_r),
        ("sigma_x0", p.sigma_x0),
        ("sigma_y0", p.sigma_y0),
        ("sigma_h", p.sigma_h),
        ("sigma_alpha", p.sigma_alpha),
        ("sigma_theta", p.sigma_theta),
        ("sigma_imaging", p.sigma_imaging),
        ("sigma_resolution", p.sigma_resolution),
        ("ground_sigma0", p.ground_sigma0),
        ("ground_slope", p.ground_slope),
    ];
    for (name, value) in fields {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(PresetFileError::NegativeSigma(name));
        }
    }
    Ok(())
}

pub fn parse_preset(text: &str) -> Result<CameraErrorPreset, PresetFileError> {
    let doc: PresetDoc = serde_json::from_str(text)?;
    doc.into_preset()
}

pub fn load_preset(path: &Path) -> Result<CameraErrorPreset, PresetFileError> {
    let text = fs::read_to_string(path)
        .map_err(|source| PresetFileError::Read { path: path.display().to_string(), source })?;
    parse_preset(&text)
}

/// Serializes with angles in radians; parsing the result reproduces the
/// preset exactly (shortest round-trip decimal form).
pub fn preset_to_string(preset: &CameraErrorPreset) -> String {
    let mut out = serde_json::to_string_pretty(&PresetDoc::from_preset(preset))
        .expect("preset serialization cannot fail");
    out.push('\n');
    out
}

pub fn save_preset(preset: &CameraErrorPreset, path: &Path) -> Result<(), PresetFileError> {
    fs::write(path, preset_to_string(preset))
        .map_err(|source| PresetFileError::Write { path: path.display().to_string(), source })
}
