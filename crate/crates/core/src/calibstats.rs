//! Image-space statistics of checkerboard calibration data.
//!
//! Two diagnostics over a pixel grid (5 px cells by default): how well the
//! checkerboard placements cover the image (convex hull of each board,
//! counted per cell), and how the reprojection error distributes spatially
//! (mean error of the corners detected in each cell). Poor corner coverage
//! and asymmetric error patches are the usual culprits behind bad intrinsic
//! calibrations.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Cross products within this tolerance of zero (px^2) count as "on" a hull
/// edge.
const HULL_EDGE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibStatsError {
    /// Board has fewer than three corners or all of them are collinear, so
    /// it spans no area.
    #[error("board {board}: corners span no area")]
    DegenerateHull { board: u32 },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
}

/// One checkerboard corner: where it was detected and where the fitted
/// model reprojects it. Coordinates are absolute pixels, origin top-left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerObservation {
    pub board_id: u32,
    pub detected_u: f64,
    pub detected_v: f64,
    pub reprojected_u: f64,
    pub reprojected_v: f64,
}

impl CornerObservation {
    pub fn error(&self) -> f64 {
        let du = self.detected_u - self.reprojected_u;
        let dv = self.detected_v - self.reprojected_v;
        (du * du + dv * dv).sqrt()
    }
}

/// Gridding of the image plane into square cells. The last row/column may
/// be partial; cell centres are nominal (centre of the full square) either
/// way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub image_width: u32,
    pub image_height: u32,
    pub cell_size: u32,
}

/// Default cell edge (px).
pub const DEFAULT_CELL_SIZE: u32 = 5;

impl GridSpec {
    pub fn new(image_width: u32, image_height: u32, cell_size: u32) -> Result<Self, CalibStatsError> {
        if image_width == 0 || image_height == 0 {
            return Err(CalibStatsError::InvalidGrid("image extent must be positive"));
        }
        if cell_size == 0 {
            return Err(CalibStatsError::InvalidGrid("cell size must be positive"));
        }
        Ok(Self { image_width, image_height, cell_size })
    }

    pub fn rows(&self) -> usize {
        self.image_height.div_ceil(self.cell_size) as usize
    }

    pub fn cols(&self) -> usize {
        self.image_width.div_ceil(self.cell_size) as usize
    }

    /// Cell containing a pixel; cells are half-open `[k*s, (k+1)*s)`.
    /// `None` when the pixel lies outside `[0, width) x [0, height)`.
    pub fn cell_of(&self, u: f64, v: f64) -> Option<(usize, usize)> {
        if !(u >= 0.0 && v >= 0.0 && u < self.image_width as f64 && v < self.image_height as f64) {
            return None;
        }
        let s = self.cell_size as f64;
        Some(((v / s) as usize, (u / s) as usize))
    }

    /// Nominal centre of a cell; may fall outside the image for a partial
    /// last row/column.
    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        let s = self.cell_size as f64;
        ((col as f64 + 0.5) * s, (row as f64 + 0.5) * s)
    }
}

/// Per-cell counts, with per-cell mean reprojection errors when the grid
/// was built from errors (the coverage histogram has none).
#[derive(Debug, Clone, PartialEq)]
pub struct GridStats {
    pub spec: GridSpec,
    counts: Vec<u32>,
    error_sums: Option<Vec<f64>>,
    /// Observations outside the image, skipped but accounted for.
    pub out_of_bounds: u32,
}

impl GridStats {
    fn empty(spec: GridSpec, with_errors: bool) -> Self {
        let cells = spec.rows() * spec.cols();
        Self {
            spec,
            counts: vec![0; cells],
            error_sums: with_errors.then(|| vec![0.0; cells]),
            out_of_bounds: 0,
        }
    }

    fn index(&self, row: usize, col: usize) -> usize {
        assert!(row < self.spec.rows() && col < self.spec.cols());
        row * self.spec.cols() + col
    }

    pub fn count(&self, row: usize, col: usize) -> u32 {
        self.counts[self.index(row, col)]
    }

    /// Mean reprojection error of a cell; `None` for empty cells and for
    /// coverage grids.
    pub fn mean_error(&self, row: usize, col: usize) -> Option<f64> {
        let i = self.index(row, col);
        match &self.error_sums {
            Some(sums) if self.counts[i] > 0 => Some(sums[i] / self.counts[i] as f64),
            _ => None,
        }
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Count-weighted mean error over all cells; `None` for coverage grids
    /// and fully empty grids.
    pub fn global_mean_error(&self) -> Option<f64> {
        let sums = self.error_sums.as_ref()?;
        let total = self.total_count();
        (total > 0).then(|| sums.iter().sum::<f64>() / total as f64)
    }
}

/// How many boards' hulls cover each cell (a board touches a cell when the
/// cell's nominal centre is inside or on the board's convex hull).
pub fn coverage_histogram(
    observations: &[CornerObservation],
    spec: GridSpec,
) -> Result<GridStats, CalibStatsError> {
    let mut boards: BTreeMap<u32, Vec<(f64, f64)>> = BTreeMap::new();
    for obs in observations {
        boards.entry(obs.board_id).or_default().push((obs.detected_u, obs.detected_v));
    }

    let mut stats = GridStats::empty(spec, false);
    for (board, points) in boards {
        let hull = convex_hull(&points);
        if hull.len() < 3 {
            return Err(CalibStatsError::DegenerateHull { board });
        }
        // Only cells whose centre can be in the hull's bounding box need
        // testing.
        let s = spec.cell_size as f64;
        let (min_u, max_u, min_v, max_v) = hull.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(u, v)| (a.min(u), b.max(u), c.min(v), d.max(v)),
        );
        let col_lo = (((min_u / s) - 1.0).floor().max(0.0)) as usize;
        let row_lo = (((min_v / s) - 1.0).floor().max(0.0)) as usize;
        let col_hi = (((max_u / s) + 1.0).ceil() as usize).min(spec.cols());
        let row_hi = (((max_v / s) + 1.0).ceil() as usize).min(spec.rows());
        for row in row_lo..row_hi {
            for col in col_lo..col_hi {
                if point_in_hull(&hull, spec.cell_center(row, col)) {
                    let i = stats.index(row, col);
                    stats.counts[i] += 1;
                }
            }
        }
    }
    Ok(stats)
}

/// Count and mean reprojection error of the corners detected in each cell.
/// Corners detected outside the image are skipped and counted in
/// `out_of_bounds`.
pub fn reprojection_error_grid(observations: &[CornerObservation], spec: GridSpec) -> GridStats {
    let mut stats = GridStats::empty(spec, true);
    for obs in observations {
        match spec.cell_of(obs.detected_u, obs.detected_v) {
            Some((row, col)) => {
                let i = stats.index(row, col);
                stats.counts[i] += 1;
                stats.error_sums.as_mut().unwrap()[i] += obs.error();
            }
            None => stats.out_of_bounds += 1,
        }
    }
    stats
}

/// Headline numbers of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSummary {
    /// Largest per-cell mean error; `None` for coverage grids or when every
    /// cell is empty.
    pub max_mean_error: Option<f64>,
    /// Count-weighted mean error over the whole grid.
    pub global_mean_error: Option<f64>,
    /// Fraction of cells with no observations.
    pub empty_fraction: f64,
    /// Fraction of covered cells within the four quarter-size corner
    /// regions of the image; low values flag the corner blind spots that
    /// hurt distortion estimates most.
    pub corner_coverage: f64,
}

pub fn summarize(stats: &GridStats) -> GridSummary {
    let rows = stats.spec.rows();
    let cols = stats.spec.cols();
    let mut max_mean: Option<f64> = None;
    let mut empty = 0usize;
    for row in 0..rows {
        for col in 0..cols {
            if stats.count(row, col) == 0 {
                empty += 1;
            }
            if let Some(mean) = stats.mean_error(row, col) {
                max_mean = Some(max_mean.map_or(mean, |m: f64| m.max(mean)));
            }
        }
    }

    // Corner regions: a quarter of the rows times a quarter of the columns
    // at each of the four image corners.
    let qr = (rows / 4).max(1).min(rows);
    let qc = (cols / 4).max(1).min(cols);
    let mut corner_cells = 0usize;
    let mut corner_covered = 0usize;
    for row in 0..rows {
        let row_edge = row < qr || row >= rows - qr;
        if !row_edge {
            continue;
        }
        for col in 0..cols {
            if col < qc || col >= cols - qc {
                corner_cells += 1;
                if stats.count(row, col) > 0 {
                    corner_covered += 1;
                }
            }
        }
    }

    GridSummary {
        max_mean_error: max_mean,
        global_mean_error: stats.global_mean_error(),
        empty_fraction: empty as f64 / (rows * cols) as f64,
        corner_coverage: if corner_cells == 0 {
            0.0
        } else {
            corner_covered as f64 / corner_cells as f64
        },
    }
}

/// Monotone-chain convex hull, counter-clockwise, collinear points dropped.
fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("pixel coordinates must not be NaN"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Inside-or-on test against a counter-clockwise hull.
fn point_in_hull(hull: &[(f64, f64)], p: (f64, f64)) -> bool {
    hull.iter().zip(hull.iter().cycle().skip(1)).all(|(&a, &b)| {
        (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= -HULL_EDGE_EPS
    })
}
