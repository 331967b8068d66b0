//! Synthetic vehicle trajectories and per-sample uncertainty records.
//!
//! The reference manoeuvre is a left turn through an intersection: a
//! straight approach, a constant-radius arc, and a straight exit, sampled at
//! fixed arc-length steps. Each sample places the vehicle box on the path
//! (yaw = path tangent); every configured camera and error preset then
//! yields one uncertainty record per sample, either for the footprint
//! centre or for each of the four footprint corners.

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::catalog::CameraErrorPreset;
use crate::footprint::{box_to_footprint, ground_point_report, Box3D, FootprintQuad};
use crate::geometry::{CameraIntrinsics, CameraPose, GeometryError, GroundPoint};
use crate::propagation::{Confidence, PropagationError};

#[cfg(not(feature = "std"))]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("invalid trajectory: {0}")]
    InvalidSpec(&'static str),
    #[error("no cameras configured")]
    NoCameras,
    #[error("no error presets configured")]
    NoPresets,
    /// Non-geometric propagation failure (bad preset or covariance);
    /// geometric failures mark the record not-visible instead.
    #[error(transparent)]
    Propagation(PropagationError),
}

/// Vehicle box dimensions (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleSize {
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

/// Left-turn manoeuvre: straight approach, constant-radius arc through
/// `turn_sweep` (counter-clockwise), straight exit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySpec {
    pub entry_x: f64,
    pub entry_y: f64,
    /// Initial heading from +X, radians.
    pub entry_heading: f64,
    /// Approach length (m), >= 0.
    pub straight_in: f64,
    /// Arc radius (m), > 0 whenever `turn_sweep` > 0.
    pub turn_radius: f64,
    /// Arc angle (rad), >= 0; the heading increases by this much.
    pub turn_sweep: f64,
    /// Exit length (m), >= 0.
    pub straight_out: f64,
    /// Arc-length step between samples (m), > 0.
    pub spacing: f64,
    pub vehicle: VehicleSize,
}

impl TrajectorySpec {
    pub fn total_length(&self) -> f64 {
        self.straight_in + self.turn_radius * self.turn_sweep + self.straight_out
    }

    fn validate(&self) -> Result<(), TrajectoryError> {
        if !(self.spacing > 0.0) {
            return Err(TrajectoryError::InvalidSpec("spacing must be positive"));
        }
        if self.straight_in < 0.0 || self.straight_out < 0.0 {
            return Err(TrajectoryError::InvalidSpec("segment lengths must be non-negative"));
        }
        if self.turn_sweep < 0.0 {
            return Err(TrajectoryError::InvalidSpec("sweep must be non-negative"));
        }
        if self.turn_sweep > 0.0 && !(self.turn_radius > 0.0) {
            return Err(TrajectoryError::InvalidSpec("turn radius must be positive"));
        }
        if !(self.vehicle.length > 0.0 && self.vehicle.width > 0.0 && self.vehicle.height > 0.0) {
            return Err(TrajectoryError::InvalidSpec("vehicle extents must be positive"));
        }
        Ok(())
    }

    /// Pose at arc length `s` along the path; the three segments join with
    /// continuous position and heading.
    fn pose_at(&self, s: f64) -> TrajectorySample {
        let (sin0, cos0) = self.entry_heading.sin_cos();
        let arc_len = self.turn_radius * self.turn_sweep;
        if s <= self.straight_in {
            return TrajectorySample {
                s,
                x: self.entry_x + cos0 * s,
                y: self.entry_y + sin0 * s,
                heading: self.entry_heading,
            };
        }
        // Arc: centre sits one radius to the left of the approach end.
        let ax = self.entry_x + cos0 * self.straight_in;
        let ay = self.entry_y + sin0 * self.straight_in;
        let cx = ax - sin0 * self.turn_radius;
        let cy = ay + cos0 * self.turn_radius;
        if s <= self.straight_in + arc_len {
            let phi = (s - self.straight_in) / self.turn_radius;
            let (sp, cp) = phi.sin_cos();
            // Radius vector from centre to vehicle, rotated by phi.
            let rx = ax - cx;
            let ry = ay - cy;
            return TrajectorySample {
                s,
                x: cx + cp * rx - sp * ry,
                y: cy + sp * rx + cp * ry,
                heading: self.entry_heading + phi,
            };
        }
        let exit_heading = self.entry_heading + self.turn_sweep;
        let (sin1, cos1) = exit_heading.sin_cos();
        let (sw_s, sw_c) = self.turn_sweep.sin_cos();
        let ex = cx + sw_c * (ax - cx) - sw_s * (ay - cy);
        let ey = cy + sw_s * (ax - cx) + sw_c * (ay - cy);
        let t = s - self.straight_in - arc_len;
        TrajectorySample { s, x: ex + cos1 * t, y: ey + sin1 * t, heading: exit_heading }
    }
}

/// One point along the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    /// Arc length from the entry point (m).
    pub s: f64,
    pub x: f64,
    pub y: f64,
    /// Path tangent from +X, radians.
    pub heading: f64,
}

impl TrajectorySample {
    /// Vehicle box centred on this sample.
    pub fn vehicle_box(&self, vehicle: VehicleSize) -> Box3D {
        Box3D {
            x: self.x,
            y: self.y,
            length: vehicle.length,
            width: vehicle.width,
            height: vehicle.height,
            yaw: self.heading,
        }
    }
}

/// Samples the manoeuvre at multiples of `spacing`, plus the endpoint (the
/// last step may be shorter). A zero-length path yields the entry pose.
pub fn generate_left_turn(spec: &TrajectorySpec) -> Result<Vec<TrajectorySample>, TrajectoryError> {
    spec.validate()?;
    let total = spec.total_length();
    let mut samples = Vec::new();
    let mut k = 0u64;
    loop {
        let s = k as f64 * spec.spacing;
        if s >= total {
            break;
        }
        samples.push(spec.pose_at(s));
        k += 1;
    }
    samples.push(spec.pose_at(total));
    Ok(samples)
}

/// A named, calibrated camera taking part in a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub name: String,
    pub pose: CameraPose,
    pub intrinsics: CameraIntrinsics,
}

/// Which footprint points a scenario reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    /// One record per (sample, camera, preset) at the footprint centre.
    Center,
    /// Four records, one per footprint corner.
    Corners,
}

/// Point a record refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLabel {
    Center,
    /// Footprint corner index, 0..4 counter-clockwise from front-left.
    Corner(usize),
}

impl core::fmt::Display for PointLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PointLabel::Center => write!(f, "center"),
            PointLabel::Corner(i) => write!(f, "corner{i}"),
        }
    }
}

/// Ellipse numbers of a visible record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseData {
    pub x: f64,
    pub y: f64,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Major-axis direction, radians in [0, pi).
    pub orientation: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
}

/// Uncertainty of one footprint point seen by one camera under one preset.
///
/// `data` is `None` exactly when the point is not visible (behind the
/// camera or above the horizon).
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseRecord {
    /// Arc length of the sample (m).
    pub s: f64,
    pub camera: String,
    pub preset: String,
    pub label: PointLabel,
    pub visible: bool,
    pub data: Option<EllipseData>,
}

fn record_for(
    camera: &Camera,
    preset: &CameraErrorPreset,
    sample: &TrajectorySample,
    label: PointLabel,
    ground: GroundPoint,
    confidence: Confidence,
) -> Result<EllipseRecord, TrajectoryError> {
    match ground_point_report(&camera.pose, &camera.intrinsics, preset, ground, confidence) {
        Ok(report) => Ok(EllipseRecord {
            s: sample.s,
            camera: camera.name.clone(),
            preset: preset.name.clone(),
            label,
            visible: true,
            data: Some(EllipseData {
                x: ground.x,
                y: ground.y,
                semi_major: report.ellipse.semi_major,
                semi_minor: report.ellipse.semi_minor,
                orientation: report.ellipse.orientation,
                var_x: report.covariance[(0, 0)],
                var_y: report.covariance[(1, 1)],
                cov_xy: report.covariance[(0, 1)],
            }),
        }),
        Err(PropagationError::Geometry(
            GeometryError::BehindCamera { .. } | GeometryError::HorizonRay { .. },
        )) => Ok(EllipseRecord {
            s: sample.s,
            camera: camera.name.clone(),
            preset: preset.name.clone(),
            label,
            visible: false,
            data: None,
        }),
        Err(e) => Err(TrajectoryError::Propagation(e)),
    }
}

fn quad_centroid(quad: &FootprintQuad) -> GroundPoint {
    GroundPoint {
        x: quad.corners.iter().map(|p| p.x).sum::<f64>() / 4.0,
        y: quad.corners.iter().map(|p| p.y).sum::<f64>() / 4.0,
    }
}

/// Evaluates every (sample, camera, preset) combination in that order.
/// Invisible points yield flagged records, never errors.
pub fn evaluate_trajectory(
    samples: &[TrajectorySample],
    vehicle: VehicleSize,
    cameras: &[Camera],
    presets: &[CameraErrorPreset],
    kind: ReportKind,
    confidence: Confidence,
) -> Result<Vec<EllipseRecord>, TrajectoryError> {
    if cameras.is_empty() {
        return Err(TrajectoryError::NoCameras);
    }
    if presets.is_empty() {
        return Err(TrajectoryError::NoPresets);
    }
    let mut records = Vec::new();
    for sample in samples {
        let quad = box_to_footprint(&sample.vehicle_box(vehicle));
        for camera in cameras {
            for preset in presets {
                match kind {
                    ReportKind::Center => {
                        records.push(record_for(
                            camera,
                            preset,
                            sample,
                            PointLabel::Center,
                            quad_centroid(&quad),
                            confidence,
                        )?);
                    }
                    ReportKind::Corners => {
                        for (i, &corner) in quad.corners.iter().enumerate() {
                            records.push(record_for(
                                camera,
                                preset,
                                sample,
                                PointLabel::Corner(i),
                                corner,
                                confidence,
                            )?);
                        }
                    }
                }
            }
        }
    }
    Ok(records)
}
