//! Calibration error presets for the supported camera installations.
//!
//! Each preset bundles the one-sigma uncertainties of a deployed camera's
//! calibration: intrinsic (focal length, principal point) and extrinsic
//! (mount position, height, pan, pitch) terms from the calibration reports,
//! plus per-observation pixel noise (imaging, resolution) and an optional
//! distance-dependent ground-plane term. Lens distortion sigmas are carried
//! for reference but take no part in covariance propagation; the projection
//! model assumes distortion-corrected pixels.
//!
//! Units: pixels for `sigma_f`, `sigma_c`, `sigma_r`, `sigma_imaging`,
//! `sigma_resolution`; metres for `sigma_x0`, `sigma_y0`, `sigma_h`,
//! `ground_sigma0`; radians for `sigma_alpha`, `sigma_theta`;
//! `ground_slope` is metres of sigma per metre of slant distance.

use alloc::string::String;
use alloc::vec::Vec;

/// One-sigma uncertainties of the distortion coefficients, stored for
/// reference only.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DistortionSigmas {
    pub k1: f64,
    pub k2: f64,
    pub p1: f64,
    pub p2: f64,
    pub k3: f64,
}

/// One-sigma calibration uncertainties of a camera installation.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraErrorPreset {
    pub name: String,
    pub sigma_f: f64,
    pub sigma_c: f64,
    pub sigma_r: f64,
    pub sigma_x0: f64,
    pub sigma_y0: f64,
    pub sigma_h: f64,
    pub sigma_alpha: f64,
    pub sigma_theta: f64,
    /// Pixel noise of target extraction in the live imagery.
    pub sigma_imaging: f64,
    /// Pixel quantisation noise of the detector.
    pub sigma_resolution: f64,
    /// Ground-plane flatness sigma at zero distance.
    pub ground_sigma0: f64,
    /// Growth of the ground-plane sigma per metre of slant distance.
    pub ground_slope: f64,
    pub distortion: DistortionSigmas,
}

impl CameraErrorPreset {
    /// Copy with every sigma multiplied by `factor` (>= 0); variances scale
    /// by `factor^2` exactly.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor >= 0.0, "scale factor must be non-negative");
        Self {
            name: self.name.clone(),
            sigma_f: self.sigma_f * factor,
            sigma_c: self.sigma_c * factor,
            sigma_r: self.sigma_r * factor,
            sigma_x0: self.sigma_x0 * factor,
            sigma_y0: self.sigma_y0 * factor,
            sigma_h: self.sigma_h * factor,
            sigma_alpha: self.sigma_alpha * factor,
            sigma_theta: self.sigma_theta * factor,
            sigma_imaging: self.sigma_imaging * factor,
            sigma_resolution: self.sigma_resolution * factor,
            ground_sigma0: self.ground_sigma0 * factor,
            ground_slope: self.ground_slope * factor,
            distortion: DistortionSigmas {
                k1: self.distortion.k1 * factor,
                k2: self.distortion.k2 * factor,
                p1: self.distortion.p1 * factor,
                p2: self.distortion.p2 * factor,
                k3: self.distortion.k3 * factor,
            },
        }
    }
}

/// Radians per millidegree, the unit of the surveyed pan/pitch sigmas.
pub const MDEG: f64 = core::f64::consts::PI / 180.0 / 1000.0;

/// Imaging sigma common to all installations (px).
pub const SIGMA_IMAGING: f64 = 0.1;
/// Resolution sigma common to all installations (px).
pub const SIGMA_RESOLUTION: f64 = 0.01;

#[rustfmt::skip]
fn table() -> [(&'static str, [f64; 3], [f64; 5], [f64; 5]); 6] {
    // name, [sigma_f, sigma_c, sigma_r] px,
    //       [k1, k2, p1, p2, k3],
    //       [sigma_x0, sigma_y0, sigma_h] m + [sigma_alpha, sigma_theta] mdeg
    [
        ("Basler1",    [0.2768, 0.1713, 0.1314], [5e-4,   0.0019, 3e-5, 5e-5, 2e-4], [0.1061, 0.0861, 0.1936, 0.1524, 0.1480]),
        ("Basler2",    [0.2085, 0.1486, 0.1465], [4e-4,   0.0011, 2e-5, 3e-5, 9e-4], [0.1106, 0.1077, 0.2483, 0.1488, 0.1354]),
        ("BW-Cube1",   [0.4411, 0.3031, 0.2437], [4e-4,   5e-4,   7e-5, 8e-5, 5e-4], [0.4912, 0.1910, 0.8484, 0.8032, 0.7049]),
        ("BW-Cube2",   [0.9546, 0.3075, 0.3656], [1e-4,   1e-4,   1e-5, 3e-5, 3e-4], [0.1396, 0.1103, 0.1876, 0.3311, 0.2784]),
        ("BW-Bullet1", [0.5996, 0.4115, 0.3405], [1e-3,   0.0014, 6e-5, 1e-5, 9e-4], [0.0802, 0.0632, 0.1744, 0.3543, 0.2558]),
        ("BW-Bullet2", [0.4645, 0.416,  0.299],  [1e-4,   4e-5,   5e-5, 7e-5, 1e-4], [0.0658, 0.0588, 0.1546, 0.3123, 0.2239]),
    ]
}

/// The six shipped installation presets.
pub fn builtin_presets() -> Vec<CameraErrorPreset> {
    table()
        .iter()
        .map(|(name, intr, dist, extr)| CameraErrorPreset {
            name: String::from(*name),
            sigma_f: intr[0],
            sigma_c: intr[1],
            sigma_r: intr[2],
            sigma_x0: extr[0],
            sigma_y0: extr[1],
            sigma_h: extr[2],
            sigma_alpha: extr[3] * MDEG,
            sigma_theta: extr[4] * MDEG,
            sigma_imaging: SIGMA_IMAGING,
            sigma_resolution: SIGMA_RESOLUTION,
            ground_sigma0: 0.0,
            ground_slope: 0.0,
            distortion: DistortionSigmas {
                k1: dist[0],
                k2: dist[1],
                p1: dist[2],
                p2: dist[3],
                k3: dist[4],
            },
        })
        .collect()
}

/// Looks up a shipped preset by exact name.
pub fn builtin_preset(name: &str) -> Option<CameraErrorPreset> {
    builtin_presets().into_iter().find(|p| p.name == name)
}
