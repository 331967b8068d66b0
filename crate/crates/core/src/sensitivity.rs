//! Sensitivity of the ground intersection to the calibrated parameters.
//!
//! All derivatives are taken with respect to the eight error-bearing
//! parameters in the fixed order
//!
//! ```text
//! [x0, y0, h, alpha, theta, f, c, r]
//! ```
//!
//! (camera ground position, mounting height, pan, pitch, focal length,
//! pixel column, pixel row). Jacobians are 2x8: row 0 is dX/dp, row 1 is
//! dY/dp. The X and Y offsets are linear in `(x0, y0)`, so those two columns
//! are the identity by construction and are never differentiated.

use alloc::vec::Vec;
use nalgebra::SMatrix;

use crate::geometry::{
    ground_from_raw, CameraIntrinsics, CameraPose, GeometryError, GroundPoint, ImagePoint,
    HORIZON_EPS,
};

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// 2x8 matrix of ground-coordinate partials, columns in [`ParamVector`] order.
pub type Jacobian = SMatrix<f64, 2, 8>;

/// Number of error-bearing parameters.
pub const PARAM_COUNT: usize = 8;

/// Parameter names in vector order, for reports and budget rows.
pub const PARAM_NAMES: [&str; PARAM_COUNT] = ["x0", "y0", "h", "alpha", "theta", "f", "c", "r"];

/// Indices into [`ParamVector`] order.
pub mod idx {
    pub const X0: usize = 0;
    pub const Y0: usize = 1;
    pub const H: usize = 2;
    pub const ALPHA: usize = 3;
    pub const THETA: usize = 4;
    pub const F: usize = 5;
    pub const C: usize = 6;
    pub const R: usize = 7;
}

/// The eight error-bearing parameters of one pixel observation.
///
/// Unlike [`CameraPose`], a `ParamVector` is deliberately unvalidated: the
/// finite-difference and Monte Carlo paths evaluate perturbed copies whose
/// pitch may cross nadir or whose pan may leave `[-pi, pi)`. The projection
/// itself is well defined there; only the horizon guard applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamVector {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub alpha: f64,
    pub theta: f64,
    pub f: f64,
    pub c: f64,
    pub r: f64,
}

impl ParamVector {
    pub fn from_parts(pose: &CameraPose, intr: &CameraIntrinsics, p: ImagePoint) -> Self {
        Self {
            x0: pose.x0,
            y0: pose.y0,
            h: pose.h,
            alpha: pose.alpha,
            theta: pose.theta,
            f: intr.f,
            c: p.c,
            r: p.r,
        }
    }

    pub fn values(&self) -> [f64; PARAM_COUNT] {
        [self.x0, self.y0, self.h, self.alpha, self.theta, self.f, self.c, self.r]
    }

    pub fn from_values(v: [f64; PARAM_COUNT]) -> Self {
        Self { x0: v[0], y0: v[1], h: v[2], alpha: v[3], theta: v[4], f: v[5], c: v[6], r: v[7] }
    }

    /// Copy with parameter `i` replaced.
    pub fn with(&self, i: usize, value: f64) -> Self {
        let mut v = self.values();
        v[i] = value;
        Self::from_values(v)
    }

    /// Ground intersection for these parameter values.
    pub fn ground_point(&self) -> Result<GroundPoint, GeometryError> {
        ground_from_raw(self.x0, self.y0, self.h, self.alpha, self.theta, self.f, self.c, self.r)
    }
}

/// Closed-form Jacobian of the ground intersection.
pub fn analytic_jacobian(par: &ParamVector) -> Result<Jacobian, GeometryError> {
    let (sa, ca) = par.alpha.sin_cos();
    let (st, ct) = par.theta.sin_cos();
    let (f, c, r, h) = (par.f, par.c, par.r, par.h);
    let denom = st * f + ct * r;
    if denom <= HORIZON_EPS {
        return Err(GeometryError::HorizonRay { denom });
    }
    let k = h / denom;
    // Ground offsets are X - x0 = nx*k, Y - y0 = ny*k.
    let nx = ct * ca * f - sa * c - st * ca * r;
    let ny = ct * sa * f + ca * c - st * sa * r;
    let d_denom = ct * f - st * r;

    let mut j = Jacobian::zeros();
    j[(0, idx::X0)] = 1.0;
    j[(1, idx::Y0)] = 1.0;
    j[(0, idx::H)] = nx / denom;
    j[(1, idx::H)] = ny / denom;
    j[(0, idx::ALPHA)] = -ny * k;
    j[(1, idx::ALPHA)] = nx * k;
    j[(0, idx::THETA)] = (-st * ca * f - ct * ca * r) * k - nx * d_denom * k / denom;
    j[(1, idx::THETA)] = (-st * sa * f - ct * sa * r) * k - ny * d_denom * k / denom;
    j[(0, idx::F)] = ct * ca * k - nx * st * k / denom;
    j[(1, idx::F)] = ct * sa * k - ny * st * k / denom;
    j[(0, idx::C)] = -sa * k;
    j[(1, idx::C)] = ca * k;
    j[(0, idx::R)] = -st * ca * k - nx * ct * k / denom;
    j[(1, idx::R)] = -st * sa * k - ny * ct * k / denom;
    Ok(j)
}

/// Per-parameter step sizes for central differences. Entries for `x0` and
/// `y0` are ignored (those columns are identity by construction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps(pub [f64; PARAM_COUNT]);

impl FdSteps {
    /// Default policy: `max(1e-6, 1e-6 * |value|)` for lengths and pixels,
    /// a fixed `1e-7` rad for the two angles.
    pub fn for_params(par: &ParamVector) -> Self {
        let mut s = [0.0; PARAM_COUNT];
        for (i, v) in par.values().iter().enumerate() {
            s[i] = match i {
                idx::ALPHA | idx::THETA => 1e-7,
                _ => (1e-6 * v.abs()).max(1e-6),
            };
        }
        Self(s)
    }
}

/// Central-difference Jacobian; the independent check on
/// [`analytic_jacobian`].
///
/// Fails with [`GeometryError::HorizonRay`] if any perturbed evaluation
/// crosses the horizon, so callers should keep `par` away from grazing
/// geometry by more than the step sizes.
pub fn finite_difference_jacobian(
    par: &ParamVector,
    steps: &FdSteps,
) -> Result<Jacobian, GeometryError> {
    let mut j = Jacobian::zeros();
    j[(0, idx::X0)] = 1.0;
    j[(1, idx::Y0)] = 1.0;
    let v = par.values();
    for i in idx::H..PARAM_COUNT {
        let d = steps.0[i];
        let plus = par.with(i, v[i] + d).ground_point()?;
        let minus = par.with(i, v[i] - d).ground_point()?;
        j[(0, i)] = (plus.x - minus.x) / (2.0 * d);
        j[(1, i)] = (plus.y - minus.y) / (2.0 * d);
    }
    Ok(j)
}

/// Entry-by-entry comparison of the analytic and finite-difference
/// Jacobians.
#[derive(Debug, Clone)]
pub struct JacobianCheck {
    pub analytic: Jacobian,
    pub finite_difference: Jacobian,
    /// `|a - fd| / max(|a|, |fd|, 1e-12)` per entry.
    pub relative_error: SMatrix<f64, 2, 8>,
    /// `(row, column)` of every entry whose relative error exceeds the
    /// tolerance.
    pub flagged: Vec<(usize, usize)>,
    pub max_relative_error: f64,
}

impl JacobianCheck {
    pub fn passed(&self) -> bool {
        self.flagged.is_empty()
    }
}

/// Runs both Jacobians with default steps and flags disagreements above
/// `tol` (relative).
pub fn jacobian_check(par: &ParamVector, tol: f64) -> Result<JacobianCheck, GeometryError> {
    let analytic = analytic_jacobian(par)?;
    let fd = finite_difference_jacobian(par, &FdSteps::for_params(par))?;
    Ok(compare_jacobians(analytic, fd, tol))
}

pub(crate) fn compare_jacobians(analytic: Jacobian, fd: Jacobian, tol: f64) -> JacobianCheck {
    let mut rel = SMatrix::<f64, 2, 8>::zeros();
    let mut flagged = Vec::new();
    let mut max_rel = 0.0f64;
    for row in 0..2 {
        for col in 0..PARAM_COUNT {
            let a = analytic[(row, col)];
            let b = fd[(row, col)];
            let e = (a - b).abs() / a.abs().max(b.abs()).max(1e-12);
            rel[(row, col)] = e;
            max_rel = max_rel.max(e);
            if e > tol {
                flagged.push((row, col));
            }
        }
    }
    JacobianCheck { analytic, finite_difference: fd, relative_error: rel, flagged, max_relative_error: max_rel }
}
