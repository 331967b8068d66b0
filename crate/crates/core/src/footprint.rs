//! Ground footprints of tracked boxes and their per-corner uncertainty.
//!
//! Detections arrive as oriented 3D boxes sitting on the ground plane. Only
//! the bottom rectangle matters for ground-plane accuracy: each of its four
//! corners is projected into the image, and the calibration uncertainty is
//! propagated back to ground at that corner's own pixel. Reports single out
//! the corner with the largest 1-sigma uncertainty and the footprint centre.

use thiserror::Error;

use crate::catalog::CameraErrorPreset;
use crate::geometry::{ground_to_image, CameraIntrinsics, CameraPose, GroundPoint, ImagePoint};
use crate::propagation::{
    ellipse_from_covariance, propagate_preset, Confidence, GroundCovariance, PropagationError,
    UncertaintyEllipse,
};
use crate::sensitivity::ParamVector;

#[cfg(not(feature = "std"))]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FootprintError {
    #[error("footprint corner {index}: {source}")]
    Corner { index: usize, source: PropagationError },
    #[error("footprint centre: {source}")]
    Center { source: PropagationError },
}

/// Oriented box resting on the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3D {
    /// Ground X of the box centre (m).
    pub x: f64,
    /// Ground Y of the box centre (m).
    pub y: f64,
    /// Extent along the heading (m), > 0.
    pub length: f64,
    /// Extent across the heading (m), > 0.
    pub width: f64,
    /// Vertical extent (m), > 0; unused by the ground footprint.
    pub height: f64,
    /// Heading from +X, radians.
    pub yaw: f64,
}

/// Bottom rectangle of a box: counter-clockwise corners starting at
/// front-left (front = +heading, left = +90 degrees from heading).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootprintQuad {
    pub corners: [GroundPoint; 4],
}

/// Ground-plane corners of the box bottom.
pub fn box_to_footprint(b: &Box3D) -> FootprintQuad {
    let (s, c) = b.yaw.sin_cos();
    let hl = 0.5 * b.length;
    let hw = 0.5 * b.width;
    // Body frame: x forward, y left. Front-left, rear-left, rear-right,
    // front-right is counter-clockwise.
    let body = [(hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)];
    FootprintQuad {
        corners: body.map(|(bx, by)| GroundPoint {
            x: b.x + c * bx - s * by,
            y: b.y + s * bx + c * by,
        }),
    }
}

/// Projection and propagated uncertainty at one ground point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointReport {
    pub ground: GroundPoint,
    pub pixel: ImagePoint,
    pub covariance: GroundCovariance,
    pub ellipse: UncertaintyEllipse,
}

/// Uncertainty of a footprint: all four corners, the worst corner, and the
/// centre.
#[derive(Debug, Clone, PartialEq)]
pub struct FootprintReport {
    pub corners: [PointReport; 4],
    /// Index of the corner with the largest 1-sigma semi-major axis (lowest
    /// index wins ties) and that axis in metres.
    pub largest: (usize, f64),
    pub center: PointReport,
}

/// Projects a ground point and propagates the preset uncertainty at its
/// pixel. Building block for the footprint and trajectory reports.
pub fn ground_point_report(
    pose: &CameraPose,
    intr: &CameraIntrinsics,
    preset: &CameraErrorPreset,
    ground: GroundPoint,
    confidence: Confidence,
) -> Result<PointReport, PropagationError> {
    let pixel = ground_to_image(pose, intr, ground)?;
    let par = ParamVector::from_parts(pose, intr, pixel);
    let covariance = propagate_preset(&par, preset)?;
    let ellipse = ellipse_from_covariance(ground, &covariance, confidence)?;
    Ok(PointReport { ground, pixel, covariance, ellipse })
}

/// Propagates the preset uncertainty at each footprint corner and at the
/// centre. Corners must be in front of the camera and below the horizon;
/// failures carry the offending corner index.
pub fn footprint_uncertainty(
    pose: &CameraPose,
    intr: &CameraIntrinsics,
    preset: &CameraErrorPreset,
    quad: &FootprintQuad,
    confidence: Confidence,
) -> Result<FootprintReport, FootprintError> {
    let mut corners = [None, None, None, None];
    for (index, &corner) in quad.corners.iter().enumerate() {
        let report = ground_point_report(pose, intr, preset, corner, confidence)
            .map_err(|source| FootprintError::Corner { index, source })?;
        corners[index] = Some(report);
    }
    let corners = corners.map(|c| c.unwrap());
    let center = center_report(pose, intr, preset, quad, confidence)?;
    let largest = largest_point(&corners);
    Ok(FootprintReport { corners, largest, center })
}

/// Worst corner of an existing report, recomputed from the stored
/// covariances: `(corner index, 1-sigma semi-major axis)`.
pub fn largest_point_report(report: &FootprintReport) -> (usize, f64) {
    largest_point(&report.corners)
}

fn largest_point(corners: &[PointReport; 4]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, corner) in corners.iter().enumerate() {
        // 1-sigma axis straight from the covariance so the selection does
        // not depend on the requested display confidence.
        let one_sigma =
            ellipse_from_covariance(corner.ground, &corner.covariance, Confidence::OneSigma)
                .expect("corner covariance was already validated")
                .semi_major;
        if one_sigma > best.1 {
            best = (i, one_sigma);
        }
    }
    best
}

/// Uncertainty at the footprint centre (corner centroid), propagated at the
/// centroid's own image projection.
pub fn center_report(
    pose: &CameraPose,
    intr: &CameraIntrinsics,
    preset: &CameraErrorPreset,
    quad: &FootprintQuad,
    confidence: Confidence,
) -> Result<PointReport, FootprintError> {
    let centroid = GroundPoint {
        x: quad.corners.iter().map(|p| p.x).sum::<f64>() / 4.0,
        y: quad.corners.iter().map(|p| p.y).sum::<f64>() / 4.0,
    };
    ground_point_report(pose, intr, preset, centroid, confidence)
        .map_err(|source| FootprintError::Center { source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_preset, CameraErrorPreset, DistortionSigmas};
    use alloc::string::String;
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn unit_box() -> Box3D {
        Box3D { x: 0.0, y: 0.0, length: 1.0, width: 1.0, height: 1.0, yaw: 0.0 }
    }

    fn translation_preset(s: f64) -> CameraErrorPreset {
        CameraErrorPreset {
            name: String::from("translation"),
            sigma_f: 0.0,
            sigma_c: 0.0,
            sigma_r: 0.0,
            sigma_x0: s,
            sigma_y0: s,
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

    #[test]
    fn unit_box_corners_counter_clockwise_from_front_left() {
        let quad = box_to_footprint(&unit_box());
        let expect = [(0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5), (0.5, -0.5)];
        for (corner, (x, y)) in quad.corners.iter().zip(expect) {
            assert_relative_eq!(corner.x, x);
            assert_relative_eq!(corner.y, y);
        }
    }

    #[test]
    fn quarter_turn_permutes_the_square_corners() {
        let mut b = unit_box();
        b.yaw = FRAC_PI_2;
        let quad = box_to_footprint(&b);
        // Same four points as the unrotated square, shifted one slot.
        let unrotated = box_to_footprint(&unit_box());
        for i in 0..4 {
            let rotated = quad.corners[i];
            let expect = unrotated.corners[(i + 1) % 4];
            assert_relative_eq!(rotated.x, expect.x, epsilon = 1e-15);
            assert_relative_eq!(rotated.y, expect.y, epsilon = 1e-15);
        }
    }

    #[test]
    fn oriented_box_matches_plain_rotation() {
        let b = Box3D { x: 10.0, y: 3.0, length: 4.5, width: 1.8, height: 1.5, yaw: 30f64.to_radians() };
        let quad = box_to_footprint(&b);
        let (s, c) = b.yaw.sin_cos();
        let body = [(2.25, 0.9), (-2.25, 0.9), (-2.25, -0.9), (2.25, -0.9)];
        for (corner, (bx, by)) in quad.corners.iter().zip(body) {
            assert_relative_eq!(corner.x, 10.0 + c * bx - s * by, epsilon = 1e-12);
            assert_relative_eq!(corner.y, 3.0 + s * bx + c * by, epsilon = 1e-12);
        }
    }

    #[test]
    fn footprint_area_equals_box_area() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let b = Box3D {
                x: rng.gen_range(-50.0..50.0),
                y: rng.gen_range(-50.0..50.0),
                length: rng.gen_range(0.5..10.0),
                width: rng.gen_range(0.5..5.0),
                height: 1.0,
                yaw: rng.gen_range(-3.2..3.2),
            };
            let q = box_to_footprint(&b).corners;
            let mut shoelace = 0.0;
            for i in 0..4 {
                let j = (i + 1) % 4;
                shoelace += q[i].x * q[j].y - q[j].x * q[i].y;
            }
            assert_relative_eq!(0.5 * shoelace, b.length * b.width, max_relative = 1e-10);
        }
    }

    fn oblique_camera() -> (CameraPose, CameraIntrinsics) {
        (
            CameraPose::new(0.0, 0.0, 8.0, 0.0, 25f64.to_radians()).unwrap(),
            CameraIntrinsics::new(1400.0, 960.0, 600.0).unwrap(),
        )
    }

    #[test]
    fn translation_preset_gives_identical_isotropic_corners() {
        let (pose, intr) = oblique_camera();
        let b = Box3D { x: 20.0, y: 2.0, length: 4.0, width: 2.0, height: 1.5, yaw: 0.3 };
        let report = footprint_uncertainty(
            &pose,
            &intr,
            &translation_preset(0.2),
            &box_to_footprint(&b),
            Confidence::OneSigma,
        )
        .unwrap();
        for corner in &report.corners {
            assert_relative_eq!(corner.covariance, GroundCovariance::new(0.04, 0.0, 0.0, 0.04), epsilon = 1e-15);
            assert_relative_eq!(corner.ellipse.semi_major, 0.2, max_relative = 1e-12);
        }
        // All corners tie; the lowest index wins.
        assert_eq!(report.largest.0, 0);
        assert_relative_eq!(report.largest.1, 0.2, max_relative = 1e-12);
        assert_relative_eq!(report.center.ellipse.semi_major, 0.2, max_relative = 1e-12);
    }

    #[test]
    fn mirrored_corners_mirror_their_covariance_at_zero_pan() {
        let (pose, intr) = oblique_camera();
        // Box symmetric about the boresight ground line y = 0.
        let b = Box3D { x: 22.0, y: 0.0, length: 4.0, width: 2.0, height: 1.5, yaw: 0.0 };
        let report = footprint_uncertainty(
            &pose,
            &intr,
            &builtin_preset("Basler1").unwrap(),
            &box_to_footprint(&b),
            Confidence::OneSigma,
        )
        .unwrap();
        // Front-left (0) mirrors front-right (3); rear-left (1) mirrors
        // rear-right (2).
        for (a, b) in [(0usize, 3usize), (1, 2)] {
            let ca = report.corners[a].covariance;
            let cb = report.corners[b].covariance;
            assert_relative_eq!(ca[(0, 0)], cb[(0, 0)], max_relative = 1e-10);
            assert_relative_eq!(ca[(1, 1)], cb[(1, 1)], max_relative = 1e-10);
            assert_relative_eq!(ca[(0, 1)], -cb[(0, 1)], max_relative = 1e-10);
        }
    }

    #[test]
    fn distance_sensitive_sources_make_the_far_corner_worst() {
        let (pose, intr) = oblique_camera();
        let mut preset = translation_preset(0.0);
        preset.sigma_f = 0.3;
        preset.sigma_theta = 1e-4;
        preset.sigma_h = 0.2;
        // Thin box along the boresight ground line: rear corners near,
        // front corners far.
        let b = Box3D { x: 25.0, y: 0.0, length: 6.0, width: 0.01, height: 1.5, yaw: 0.0 };
        let report = footprint_uncertainty(
            &pose,
            &intr,
            &preset,
            &box_to_footprint(&b),
            Confidence::OneSigma,
        )
        .unwrap();
        let far = report.corners[0].covariance[(0, 0)];
        let near = report.corners[1].covariance[(0, 0)];
        assert!(far > near, "far {far} vs near {near}");
        assert!(report.largest.0 == 0 || report.largest.0 == 3);
    }

    #[test]
    fn center_matches_direct_propagation_at_centroid() {
        let (pose, intr) = oblique_camera();
        let preset = builtin_preset("BW-Cube1").unwrap();
        let b = Box3D { x: 18.0, y: -3.0, length: 4.5, width: 1.8, height: 1.5, yaw: 1.1 };
        let quad = box_to_footprint(&b);
        let report = footprint_uncertainty(&pose, &intr, &preset, &quad, Confidence::P95).unwrap();

        let pixel = ground_to_image(&pose, &intr, GroundPoint { x: 18.0, y: -3.0 }).unwrap();
        let par = ParamVector::from_parts(&pose, &intr, pixel);
        let direct = propagate_preset(&par, &preset).unwrap();
        assert_relative_eq!(report.center.covariance, direct, epsilon = 1e-15);
        assert_eq!(report.center.ellipse.confidence, Confidence::P95);
    }

    #[test]
    fn corner_behind_camera_is_reported_with_its_index() {
        let pose = CameraPose::new(0.0, 0.0, 8.0, 0.0, FRAC_PI_4).unwrap();
        let intr = CameraIntrinsics::new(1400.0, 960.0, 600.0).unwrap();
        // Rear corners beyond -h*tan(theta) behind the mast map to a
        // non-positive boresight component.
        let b = Box3D { x: 2.0, y: 0.0, length: 30.0, width: 1.0, height: 1.0, yaw: 0.0 };
        let err = footprint_uncertainty(
            &pose,
            &intr,
            &builtin_preset("Basler1").unwrap(),
            &box_to_footprint(&b),
            Confidence::OneSigma,
        )
        .unwrap_err();
        match err {
            FootprintError::Corner { index, .. } => assert!(index == 1 || index == 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
