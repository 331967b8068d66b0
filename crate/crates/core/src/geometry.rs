//! Pinhole projection between image pixels and a flat ground plane.
//!
//! Frames and conventions:
//!
//! * **Camera frame**: origin at the focal point, x along the boresight,
//!   y to the right in the image (columns increase), z down in the image
//!   (rows increase). A pixel at column offset `c` and row offset `r` from
//!   the image centre corresponds to the ray direction `(f, c, r)` where
//!   `f` is the focal length in pixels.
//! * **Earth frame**: origin at the focal point, Z pointing straight down.
//!   The ground is the plane `Z = +h`, with `h` the mounting height. X and Y
//!   are fixed horizontal axes; the camera pan `alpha` is measured from X.
//! * The camera is pitched down by `theta` from horizontal, `0 < theta <=
//!   pi/2` (`pi/2` is nadir), then panned by `alpha` about the vertical.
//!
//! A pixel maps to ground by intersecting its ray with the ground plane;
//! a ground point maps back by rotating into the camera frame and dividing
//! by the boresight component. Rays at or above the horizon have no ground
//! intersection and are reported as [`GeometryError::HorizonRay`].

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Guard below which the ray-plane denominator `sin(theta)*f + cos(theta)*r`
/// (in pixels) is treated as at-horizon. Also used as the lower bound on the
/// boresight component (in metres) when projecting ground points back into
/// the image.
pub const HORIZON_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// The pixel ray is parallel to or pointing above the ground plane.
    #[error("ray at or above horizon (denominator {denom:.3e} px)")]
    HorizonRay { denom: f64 },
    /// The ground point lies at or behind the image plane.
    #[error("ground point behind camera (boresight component {x_cam:.3e} m)")]
    BehindCamera { x_cam: f64 },
    #[error("invalid camera pose: {0}")]
    InvalidPose(&'static str),
    #[error("invalid camera intrinsics: {0}")]
    InvalidIntrinsics(&'static str),
}

/// Fixed mounting of a camera above the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPose {
    /// Ground X of the focal point (m).
    pub x0: f64,
    /// Ground Y of the focal point (m).
    pub y0: f64,
    /// Height of the focal point above the ground plane (m), > 0.
    pub h: f64,
    /// Pan about the vertical, radians in [-pi, pi).
    pub alpha: f64,
    /// Pitch down from horizontal, radians in (0, pi/2].
    pub theta: f64,
}

impl CameraPose {
    /// Validates height and pitch; wraps the pan into `[-pi, pi)`.
    pub fn new(x0: f64, y0: f64, h: f64, alpha: f64, theta: f64) -> Result<Self, GeometryError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(GeometryError::InvalidPose("height must be positive"));
        }
        if !alpha.is_finite() {
            return Err(GeometryError::InvalidPose("pan must be finite"));
        }
        if !(theta > 0.0 && theta <= core::f64::consts::FRAC_PI_2) {
            return Err(GeometryError::InvalidPose("pitch must lie in (0, pi/2]"));
        }
        Ok(Self { x0, y0, h, alpha: wrap_angle(alpha), theta })
    }
}

/// Pinhole intrinsics; all quantities in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    /// Focal length (px), > 0.
    pub f: f64,
    /// Half the sensor width (px); columns span `[-half_width, half_width]`.
    pub half_width: f64,
    /// Half the sensor height (px); rows span `[-half_height, half_height]`.
    pub half_height: f64,
}

impl CameraIntrinsics {
    pub fn new(f: f64, half_width: f64, half_height: f64) -> Result<Self, GeometryError> {
        if !(f > 0.0) || !f.is_finite() {
            return Err(GeometryError::InvalidIntrinsics("focal length must be positive"));
        }
        if !(half_width > 0.0) || !(half_height > 0.0) {
            return Err(GeometryError::InvalidIntrinsics("sensor half-extents must be positive"));
        }
        Ok(Self { f, half_width, half_height })
    }
}

/// Pixel offsets from the image centre: `c` columns right, `r` rows down.
///
/// Sensor bounds are a property of the source imagery, not of the projection
/// math; they are checked where pixels enter the system, not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagePoint {
    pub c: f64,
    pub r: f64,
}

/// Point on the ground plane, earth-frame metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPoint {
    pub x: f64,
    pub y: f64,
}

/// Scalars of the ray-ground intersection for one pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayScalars {
    /// Length of the camera-frame ray vector `(f, c, r)` (px).
    pub l: f64,
    /// `sin(theta)*f + cos(theta)*r` (px); vanishes at the horizon.
    pub denom: f64,
    /// Slant distance from the focal point to the ground intersection (m).
    pub d: f64,
}

/// Rotation taking camera-frame vectors to the earth frame: pitch down by
/// `theta`, then pan by `alpha`.
pub fn rotation_c_to_e(pose: &CameraPose) -> Matrix3<f64> {
    let (sa, ca) = pose.alpha.sin_cos();
    let (st, ct) = pose.theta.sin_cos();
    Matrix3::new(
        ct * ca, -sa, -st * ca, //
        ct * sa, ca, -st * sa, //
        st, 0.0, ct,
    )
}

/// Ray length, horizon denominator and slant distance for one pixel.
pub fn ray_scalars(
    pose: &CameraPose,
    intr: &CameraIntrinsics,
    p: ImagePoint,
) -> Result<RayScalars, GeometryError> {
    raw_ray_scalars(pose.h, pose.theta, intr.f, p.c, p.r)
}

/// Projects a pixel onto the ground plane.
pub fn image_to_ground(
    pose: &CameraPose,
    intr: &CameraIntrinsics,
    p: ImagePoint,
) -> Result<GroundPoint, GeometryError> {
    ground_from_raw(pose.x0, pose.y0, pose.h, pose.alpha, pose.theta, intr.f, p.c, p.r)
}

/// Projects a ground point into the image. The result may fall outside the
/// sensor extent; callers that care check bounds themselves.
pub fn ground_to_image(
    pose: &CameraPose,
    intr: &CameraIntrinsics,
    g: GroundPoint,
) -> Result<ImagePoint, GeometryError> {
    let t = rotation_c_to_e(pose);
    let v = Vector3::new(g.x - pose.x0, g.y - pose.y0, pose.h);
    let p_cam = t.transpose() * v;
    let x_cam = p_cam.x;
    if x_cam <= HORIZON_EPS {
        return Err(GeometryError::BehindCamera { x_cam });
    }
    Ok(ImagePoint { c: intr.f * p_cam.y / x_cam, r: intr.f * p_cam.z / x_cam })
}

pub(crate) fn raw_ray_scalars(
    h: f64,
    theta: f64,
    f: f64,
    c: f64,
    r: f64,
) -> Result<RayScalars, GeometryError> {
    let l = (f * f + c * c + r * r).sqrt();
    let denom = theta.sin() * f + theta.cos() * r;
    if denom <= HORIZON_EPS {
        return Err(GeometryError::HorizonRay { denom });
    }
    Ok(RayScalars { l, denom, d: h * l / denom })
}

/// Closed-form ground intersection from bare parameter values.
///
/// Shared by the public projection and by the perturbation paths (finite
/// differences, Monte Carlo), which must evaluate parameter values that a
/// validated [`CameraPose`] would reject, e.g. `theta` nudged past nadir.
pub(crate) fn ground_from_raw(
    x0: f64,
    y0: f64,
    h: f64,
    alpha: f64,
    theta: f64,
    f: f64,
    c: f64,
    r: f64,
) -> Result<GroundPoint, GeometryError> {
    let scalars = raw_ray_scalars(h, theta, f, c, r)?;
    let (sa, ca) = alpha.sin_cos();
    let (st, ct) = theta.sin_cos();
    // D/L = h/denom, so ground offsets are the rotated ray scaled by h/denom.
    let scale = h / scalars.denom;
    let x = (ct * ca * f - sa * c - st * ca * r) * scale + x0;
    let y = (ct * sa * f + ca * c - st * sa * r) * scale + y0;
    Ok(GroundPoint { x, y })
}

fn wrap_angle(a: f64) -> f64 {
    use core::f64::consts::PI;
    let mut w = (a + PI) % (2.0 * PI);
    if w < 0.0 {
        w += 2.0 * PI;
    }
    w - PI
}
