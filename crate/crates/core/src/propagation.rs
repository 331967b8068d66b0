//! First-order propagation of parameter covariance to the ground plane.
//!
//! Given the Jacobian `J` of the ground intersection with respect to the
//! eight parameters, a parameter covariance `C` maps to the 2x2 ground
//! covariance `J * C * J^T`. The module also assembles `C` from a
//! [`CameraErrorPreset`], splits the propagated variance into per-source
//! budget rows, cross-validates the linearisation by Monte Carlo, and
//! reduces a ground covariance to a confidence ellipse.

use alloc::vec::Vec;
use nalgebra::{Matrix2, SMatrix, SVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::catalog::CameraErrorPreset;
use crate::geometry::{raw_ray_scalars, GeometryError, GroundPoint};
use crate::sensitivity::{analytic_jacobian, idx, ParamVector, PARAM_COUNT};

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// 8x8 symmetric PSD covariance of the parameters, in [`ParamVector`] order.
pub type ParamCovariance = SMatrix<f64, 8, 8>;

/// 2x2 covariance of the ground coordinates (m^2).
pub type GroundCovariance = Matrix2<f64>;

/// Eigenvalues below `-RELATIVE_PSD_TOL * lambda_max` fail the PSD check;
/// anything between that and zero is treated as roundoff and clamped.
const RELATIVE_PSD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagationError {
    #[error("negative sigma in preset field {field}")]
    NegativeSigma { field: &'static str },
    #[error("covariance is not positive semidefinite (min eigenvalue {lambda_min:.3e})")]
    NotPsd { lambda_min: f64 },
    #[error("{rejected} of {total} Monte Carlo draws crossed the horizon")]
    DegenerateSamples { rejected: u64, total: u64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Diagonal parameter covariance for one pixel observation.
///
/// Pixel variances combine the intrinsic principal-point sigma with the
/// imaging and resolution noise; the height variance combines the surveyed
/// mount height with the ground-plane flatness term, evaluated at the
/// unperturbed slant distance `slant_distance` of the pixel being queried.
pub fn build_param_covariance(
    preset: &CameraErrorPreset,
    slant_distance: f64,
) -> Result<ParamCovariance, PropagationError> {
    let checks = [
        ("sigma_f", preset.sigma_f),
        ("sigma_c", preset.sigma_c),
        ("sigma_r", preset.sigma_r),
        ("sigma_x0", preset.sigma_x0),
        ("sigma_y0", preset.sigma_y0),
        ("sigma_h", preset.sigma_h),
        ("sigma_alpha", preset.sigma_alpha),
        ("sigma_theta", preset.sigma_theta),
        ("sigma_imaging", preset.sigma_imaging),
        ("sigma_resolution", preset.sigma_resolution),
        ("ground_sigma0", preset.ground_sigma0),
        ("ground_slope", preset.ground_slope),
    ];
    for (field, value) in checks {
        if value < 0.0 {
            return Err(PropagationError::NegativeSigma { field });
        }
    }
    let sigma_ground = preset.ground_sigma0 + preset.ground_slope * slant_distance;
    let pixel_noise = preset.sigma_imaging * preset.sigma_imaging
        + preset.sigma_resolution * preset.sigma_resolution;

    let mut cov = ParamCovariance::zeros();
    cov[(idx::X0, idx::X0)] = preset.sigma_x0 * preset.sigma_x0;
    cov[(idx::Y0, idx::Y0)] = preset.sigma_y0 * preset.sigma_y0;
    cov[(idx::H, idx::H)] = preset.sigma_h * preset.sigma_h + sigma_ground * sigma_ground;
    cov[(idx::ALPHA, idx::ALPHA)] = preset.sigma_alpha * preset.sigma_alpha;
    cov[(idx::THETA, idx::THETA)] = preset.sigma_theta * preset.sigma_theta;
    cov[(idx::F, idx::F)] = preset.sigma_f * preset.sigma_f;
    cov[(idx::C, idx::C)] = preset.sigma_c * preset.sigma_c + pixel_noise;
    cov[(idx::R, idx::R)] = preset.sigma_r * preset.sigma_r + pixel_noise;
    Ok(cov)
}

/// First-order ground covariance `J * cov * J^T` at the given parameters.
pub fn propagate_covariance(
    par: &ParamVector,
    cov: &ParamCovariance,
) -> Result<GroundCovariance, PropagationError> {
    let j = analytic_jacobian(par)?;
    Ok(j * cov * j.transpose())
}

/// Assembles the preset covariance at `par`'s slant distance and propagates
/// it. The everyday entry point for "pixel + preset -> ground covariance".
pub fn propagate_preset(
    par: &ParamVector,
    preset: &CameraErrorPreset,
) -> Result<GroundCovariance, PropagationError> {
    let scalars = raw_ray_scalars(par.h, par.theta, par.f, par.c, par.r)?;
    let cov = build_param_covariance(preset, scalars.d)?;
    propagate_covariance(par, &cov)
}

/// One error source's contribution to the propagated ground variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudgetRow {
    /// Source group: "extrinsic", "intrinsic", "ground_plane", "imaging" or
    /// "resolution".
    pub source: &'static str,
    /// Index of the affected parameter in [`ParamVector`] order.
    pub param: usize,
    /// Contribution to Var(X), `(dX/dp)^2 * sigma^2` (m^2).
    pub var_x: f64,
    /// Contribution to Var(Y) (m^2).
    pub var_y: f64,
}

/// Per-source variance budget at `par`. Rows sum to the diagonal of
/// [`propagate_preset`] because the source variances add per parameter.
pub fn error_budget(
    par: &ParamVector,
    preset: &CameraErrorPreset,
) -> Result<Vec<ErrorBudgetRow>, PropagationError> {
    // Surface negative sigmas and horizon geometry exactly like the
    // propagation path does.
    let scalars = raw_ray_scalars(par.h, par.theta, par.f, par.c, par.r)?;
    build_param_covariance(preset, scalars.d)?;
    let j = analytic_jacobian(par)?;
    let sigma_ground = preset.ground_sigma0 + preset.ground_slope * scalars.d;

    let sources: [(&'static str, usize, f64); 13] = [
        ("extrinsic", idx::X0, preset.sigma_x0),
        ("extrinsic", idx::Y0, preset.sigma_y0),
        ("extrinsic", idx::H, preset.sigma_h),
        ("extrinsic", idx::ALPHA, preset.sigma_alpha),
        ("extrinsic", idx::THETA, preset.sigma_theta),
        ("intrinsic", idx::F, preset.sigma_f),
        ("intrinsic", idx::C, preset.sigma_c),
        ("intrinsic", idx::R, preset.sigma_r),
        ("ground_plane", idx::H, sigma_ground),
        ("imaging", idx::C, preset.sigma_imaging),
        ("imaging", idx::R, preset.sigma_imaging),
        ("resolution", idx::C, preset.sigma_resolution),
        ("resolution", idx::R, preset.sigma_resolution),
    ];
    Ok(sources
        .iter()
        .map(|&(source, param, sigma)| {
            let var = sigma * sigma;
            ErrorBudgetRow {
                source,
                param,
                var_x: j[(0, param)] * j[(0, param)] * var,
                var_y: j[(1, param)] * j[(1, param)] * var,
            }
        })
        .collect())
}

/// Outcome of a Monte Carlo cross-check of the linearised propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct McCovariance {
    /// Sample mean of the accepted ground points.
    pub mean: GroundPoint,
    /// Unbiased sample covariance of the accepted ground points.
    pub covariance: GroundCovariance,
    pub accepted: u64,
    /// Draws whose perturbed ray crossed the horizon.
    pub rejected: u64,
}

impl McCovariance {
    pub fn rejection_fraction(&self) -> f64 {
        self.rejected as f64 / (self.accepted + self.rejected) as f64
    }
}

/// Draws `n` parameter vectors from `N(par, cov)` and returns the sample
/// statistics of their exact (non-linearised) ground intersections.
///
/// Draw `i` comes from its own counter-based RNG stream, so results are
/// bit-reproducible for a given `(seed, n)` no matter how the loop is
/// scheduled. Draws that cross the horizon are rejected and counted;
/// more than 1% of them is reported as [`PropagationError::DegenerateSamples`].
pub fn monte_carlo_covariance(
    par: &ParamVector,
    cov: &ParamCovariance,
    n: u64,
    seed: u64,
) -> Result<McCovariance, PropagationError> {
    assert!(n >= 2, "need at least two draws for a sample covariance");
    let root = psd_square_root(cov)?;
    let mean = SVector::<f64, 8>::from_column_slice(&par.values());
    let base = ChaCha8Rng::seed_from_u64(seed);

    let mut accepted = 0u64;
    let mut rejected = 0u64;
    let mut mean_x = 0.0f64;
    let mut mean_y = 0.0f64;
    let mut m2x = 0.0f64;
    let mut m2y = 0.0f64;
    let mut cxy = 0.0f64;

    for i in 0..n {
        let mut rng = base.clone();
        rng.set_stream(i);
        let mut z = SVector::<f64, 8>::zeros();
        for k in 0..PARAM_COUNT {
            z[k] = rng.sample(StandardNormal);
        }
        let sample = mean + root * z;
        let drawn = ParamVector::from_values(sample.into());
        match drawn.ground_point() {
            Ok(g) => {
                // Welford update, numerically stable over millions of draws.
                accepted += 1;
                let w = accepted as f64;
                let dx = g.x - mean_x;
                let dy = g.y - mean_y;
                mean_x += dx / w;
                mean_y += dy / w;
                let dx2 = g.x - mean_x;
                let dy2 = g.y - mean_y;
                m2x += dx * dx2;
                m2y += dy * dy2;
                cxy += dx * dy2;
            }
            Err(GeometryError::HorizonRay { .. }) => rejected += 1,
            Err(e) => return Err(e.into()),
        }
    }

    if rejected * 100 > n {
        return Err(PropagationError::DegenerateSamples { rejected, total: n });
    }
    let denom = (accepted - 1) as f64;
    Ok(McCovariance {
        mean: GroundPoint { x: mean_x, y: mean_y },
        covariance: GroundCovariance::new(m2x / denom, cxy / denom, cxy / denom, m2y / denom),
        accepted,
        rejected,
    })
}

/// Symmetric square root of a PSD matrix via eigendecomposition; tolerates
/// singular inputs (zero variances), unlike a Cholesky factor.
fn psd_square_root(cov: &ParamCovariance) -> Result<SMatrix<f64, 8, 8>, PropagationError> {
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l));
    let mut scaled = eig.eigenvalues;
    for l in scaled.iter_mut() {
        if *l < -RELATIVE_PSD_TOL * lambda_max {
            return Err(PropagationError::NotPsd { lambda_min: *l });
        }
        *l = l.max(0.0).sqrt();
    }
    Ok(eig.eigenvectors * SMatrix::<f64, 8, 8>::from_diagonal(&scaled))
}

/// Confidence level of an uncertainty ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Confidence {
    /// Semi-axes are one standard deviation (~39% mass in 2D).
    OneSigma,
    P90,
    P95,
    P99,
}

impl Confidence {
    /// Axis scale factor: `sqrt(-2 ln(1 - p))` for the two-dof Gaussian,
    /// 1 for the one-sigma ellipse.
    pub fn scale(self) -> f64 {
        match self {
            Confidence::OneSigma => 1.0,
            Confidence::P90 => quantile_scale(0.90),
            Confidence::P95 => quantile_scale(0.95),
            Confidence::P99 => quantile_scale(0.99),
        }
    }
}

fn quantile_scale(p: f64) -> f64 {
    (-2.0 * (1.0 - p).ln()).sqrt()
}

/// Confidence ellipse of a 2x2 ground covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyEllipse {
    pub center: GroundPoint,
    /// Semi-major axis (m).
    pub semi_major: f64,
    /// Semi-minor axis (m).
    pub semi_minor: f64,
    /// Major-axis direction from +X, radians in [0, pi); 0 for isotropic
    /// covariances by convention.
    pub orientation: f64,
    pub confidence: Confidence,
}

impl UncertaintyEllipse {
    /// Axis scale factor applied to the sigma lengths.
    pub fn k(&self) -> f64 {
        self.confidence.scale()
    }
}

/// Closed-form eigendecomposition of the 2x2 covariance, scaled to the
/// requested confidence.
pub fn ellipse_from_covariance(
    center: GroundPoint,
    gc: &GroundCovariance,
    confidence: Confidence,
) -> Result<UncertaintyEllipse, PropagationError> {
    let a = gc[(0, 0)];
    let c = gc[(1, 1)];
    let b = 0.5 * (gc[(0, 1)] + gc[(1, 0)]);
    let mean = 0.5 * (a + c);
    let half_gap = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let l1 = mean + half_gap;
    let l2 = mean - half_gap;
    if l2 < -RELATIVE_PSD_TOL * l1.max(0.0) {
        return Err(PropagationError::NotPsd { lambda_min: l2 });
    }
    // atan2(0, 0) = 0 keeps the isotropic convention; otherwise this is the
    // major-axis angle, folded into [0, pi).
    let mut orientation = 0.5 * (2.0 * b).atan2(a - c);
    if orientation < 0.0 {
        orientation += core::f64::consts::PI;
    }
    if orientation >= core::f64::consts::PI {
        orientation -= core::f64::consts::PI;
    }
    let k = confidence.scale();
    Ok(UncertaintyEllipse {
        center,
        semi_major: k * l1.max(0.0).sqrt(),
        semi_minor: k * l2.max(0.0).sqrt(),
        orientation,
        confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_preset, CameraErrorPreset, DistortionSigmas};
    use alloc::string::String;
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const ORIGIN: GroundPoint = GroundPoint { x: 0.0, y: 0.0 };

    fn zero_preset() -> CameraErrorPreset {
        CameraErrorPreset {
            name: String::from("zero"),
            sigma_f: 0.0,
            sigma_c: 0.0,
            sigma_r: 0.0,
            sigma_x0: 0.0,
            sigma_y0: 0.0,
            sigma_h: 0.0,
            sigma_alpha: 0.0,
            sigma_theta: 0.0,
            sigma_imaging: 0.0,
            sigma_resolution: 0.0,
            ground_sigma0: 0.0,
            ground_slope: 0.0,
            distortion: DistortionSigmas::default(),
        }
    }

    fn oblique() -> ParamVector {
        ParamVector {
            x0: 0.0,
            y0: 0.0,
            h: 6.0,
            alpha: 20f64.to_radians(),
            theta: 30f64.to_radians(),
            f: 1200.0,
            c: 150.0,
            r: 80.0,
        }
    }

    #[test]
    fn zero_preset_builds_zero_covariance() {
        let cov = build_param_covariance(&zero_preset(), 25.0).unwrap();
        assert_eq!(cov, ParamCovariance::zeros());
    }

    #[test]
    fn imaging_noise_lands_on_both_pixel_axes() {
        let mut p = zero_preset();
        p.sigma_imaging = 0.1;
        let cov = build_param_covariance(&p, 0.0).unwrap();
        assert_relative_eq!(cov[(idx::C, idx::C)], 0.01);
        assert_relative_eq!(cov[(idx::R, idx::R)], 0.01);
        assert_eq!(cov[(idx::F, idx::F)], 0.0);
    }

    #[test]
    fn basler1_diagonal() {
        let p = builtin_preset("Basler1").unwrap();
        let cov = build_param_covariance(&p, 30.0).unwrap();
        assert_relative_eq!(cov[(idx::F, idx::F)], 0.2768 * 0.2768);
        assert_relative_eq!(cov[(idx::H, idx::H)], 0.1936 * 0.1936);
        assert_relative_eq!(cov[(idx::C, idx::C)], 0.1713 * 0.1713 + 0.01 + 0.0001);
        // Off-diagonal stays empty: sources are independent.
        assert_eq!(cov[(idx::F, idx::C)], 0.0);
    }

    #[test]
    fn ground_plane_term_grows_with_distance() {
        let mut p = zero_preset();
        p.ground_sigma0 = 0.05;
        p.ground_slope = 0.01;
        let cov = build_param_covariance(&p, 20.0).unwrap();
        let sigma = 0.05 + 0.01 * 20.0;
        assert_relative_eq!(cov[(idx::H, idx::H)], sigma * sigma);
    }

    #[test]
    fn negative_sigma_is_reported_by_field() {
        let mut p = zero_preset();
        p.sigma_r = -0.2;
        let err = build_param_covariance(&p, 0.0).unwrap_err();
        assert_eq!(err, PropagationError::NegativeSigma { field: "sigma_r" });
    }

    #[test]
    fn scaled_preset_scales_variances_quadratically() {
        let p = builtin_preset("BW-Bullet1").unwrap();
        let cov = build_param_covariance(&p, 12.0).unwrap();
        let scaled = build_param_covariance(&p.scaled(0.1), 12.0).unwrap();
        for i in 0..PARAM_COUNT {
            assert_relative_eq!(scaled[(i, i)], 0.01 * cov[(i, i)], max_relative = 1e-14);
        }
    }

    #[test]
    fn zero_covariance_propagates_to_zero() {
        let gc = propagate_covariance(&oblique(), &ParamCovariance::zeros()).unwrap();
        assert_eq!(gc, GroundCovariance::zeros());
    }

    #[test]
    fn position_only_covariance_passes_through() {
        let mut cov = ParamCovariance::zeros();
        cov[(idx::X0, idx::X0)] = 0.04;
        cov[(idx::Y0, idx::Y0)] = 0.04;
        let gc = propagate_covariance(&oblique(), &cov).unwrap();
        assert_relative_eq!(gc, GroundCovariance::new(0.04, 0.0, 0.0, 0.04), epsilon = 1e-15);
    }

    #[test]
    fn budget_rows_sum_to_propagated_diagonal() {
        let par = oblique();
        for preset in crate::catalog::builtin_presets() {
            let rows = error_budget(&par, &preset).unwrap();
            assert_eq!(rows.len(), 13);
            let sum_x: f64 = rows.iter().map(|r| r.var_x).sum();
            let sum_y: f64 = rows.iter().map(|r| r.var_y).sum();
            let gc = propagate_preset(&par, &preset).unwrap();
            assert_relative_eq!(sum_x, gc[(0, 0)], max_relative = 1e-12);
            assert_relative_eq!(sum_y, gc[(1, 1)], max_relative = 1e-12);
        }
    }

    #[test]
    fn budget_isolates_single_source() {
        let mut p = zero_preset();
        p.sigma_x0 = 0.1;
        let rows = error_budget(&oblique(), &p).unwrap();
        for row in &rows {
            if row.source == "extrinsic" && row.param == idx::X0 {
                assert_relative_eq!(row.var_x, 0.01);
                assert_eq!(row.var_y, 0.0);
            } else {
                assert_eq!((row.var_x, row.var_y), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn mc_with_zero_covariance_reproduces_the_exact_point() {
        let par = oblique();
        let mc = monte_carlo_covariance(&par, &ParamCovariance::zeros(), 100, 7).unwrap();
        let g = par.ground_point().unwrap();
        assert_eq!(mc.covariance, GroundCovariance::zeros());
        assert_relative_eq!(mc.mean.x, g.x);
        assert_relative_eq!(mc.mean.y, g.y);
        assert_eq!(mc.accepted, 100);
        assert_eq!(mc.rejected, 0);
    }

    #[test]
    fn mc_recovers_position_only_covariance() {
        let mut cov = ParamCovariance::zeros();
        cov[(idx::X0, idx::X0)] = 0.25;
        let mc = monte_carlo_covariance(&oblique(), &cov, 200_000, 42).unwrap();
        // Projection is exactly linear in x0, so only sampling noise remains.
        assert_relative_eq!(mc.covariance[(0, 0)], 0.25, max_relative = 0.01);
        assert!(mc.covariance[(1, 1)].abs() < 1e-6);
    }

    #[test]
    fn mc_is_reproducible_and_seed_sensitive() {
        let cov = build_param_covariance(&builtin_preset("Basler1").unwrap(), 13.86).unwrap();
        let a = monte_carlo_covariance(&oblique(), &cov, 5_000, 9).unwrap();
        let b = monte_carlo_covariance(&oblique(), &cov, 5_000, 9).unwrap();
        let c = monte_carlo_covariance(&oblique(), &cov, 5_000, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.covariance, c.covariance);
    }

    #[test]
    fn grazing_geometry_rejects_too_many_draws() {
        // Pitch within a whisker of the horizon plus a large pitch sigma:
        // about half the draws look up.
        let par = ParamVector {
            x0: 0.0,
            y0: 0.0,
            h: 6.0,
            alpha: 0.0,
            theta: 1e-8,
            f: 1200.0,
            c: 0.0,
            r: 0.0,
        };
        let mut cov = ParamCovariance::zeros();
        cov[(idx::THETA, idx::THETA)] = 1e-6;
        let err = monte_carlo_covariance(&par, &cov, 1_000, 3).unwrap_err();
        assert!(matches!(err, PropagationError::DegenerateSamples { .. }));
    }

    #[test]
    fn non_psd_covariance_is_rejected() {
        let mut cov = ParamCovariance::zeros();
        cov[(idx::H, idx::H)] = -1.0;
        assert!(matches!(
            monte_carlo_covariance(&oblique(), &cov, 10, 0),
            Err(PropagationError::NotPsd { .. })
        ));
    }

    #[test]
    fn isotropic_covariance_gives_circle_with_zero_orientation() {
        let gc = GroundCovariance::new(0.09, 0.0, 0.0, 0.09);
        let e = ellipse_from_covariance(ORIGIN, &gc, Confidence::OneSigma).unwrap();
        assert_relative_eq!(e.semi_major, 0.3);
        assert_relative_eq!(e.semi_minor, 0.3);
        assert_eq!(e.orientation, 0.0);
    }

    #[test]
    fn axis_aligned_covariance_resolves_axes() {
        let gc = GroundCovariance::new(4.0, 0.0, 0.0, 1.0);
        let e = ellipse_from_covariance(ORIGIN, &gc, Confidence::OneSigma).unwrap();
        assert_relative_eq!(e.semi_major, 2.0);
        assert_relative_eq!(e.semi_minor, 1.0);
        assert_eq!(e.orientation, 0.0);

        let swapped = GroundCovariance::new(1.0, 0.0, 0.0, 4.0);
        let e = ellipse_from_covariance(ORIGIN, &swapped, Confidence::OneSigma).unwrap();
        assert_relative_eq!(e.orientation, FRAC_PI_2);
    }

    #[test]
    fn correlated_covariance_tilts_the_ellipse() {
        let gc = GroundCovariance::new(1.0, 0.5, 0.5, 1.0);
        let e = ellipse_from_covariance(ORIGIN, &gc, Confidence::OneSigma).unwrap();
        assert_relative_eq!(e.orientation, FRAC_PI_4);
        assert_relative_eq!(e.semi_major, 1.5f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(e.semi_minor, 0.5f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn confidence_scales_axes_by_the_two_dof_quantile() {
        let gc = GroundCovariance::new(1.0, 0.0, 0.0, 1.0);
        let e95 = ellipse_from_covariance(ORIGIN, &gc, Confidence::P95).unwrap();
        assert_relative_eq!(e95.semi_major, (-2.0 * 0.05f64.ln()).sqrt());
        assert_relative_eq!(e95.semi_major, 2.4477, max_relative = 1e-4);
        let e90 = ellipse_from_covariance(ORIGIN, &gc, Confidence::P90).unwrap();
        let e99 = ellipse_from_covariance(ORIGIN, &gc, Confidence::P99).unwrap();
        assert!(e90.semi_major < e95.semi_major && e95.semi_major < e99.semi_major);
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let gc = GroundCovariance::new(1.0, 0.0, 0.0, -1.0);
        assert!(matches!(
            ellipse_from_covariance(ORIGIN, &gc, Confidence::OneSigma),
            Err(PropagationError::NotPsd { .. })
        ));
    }
}
