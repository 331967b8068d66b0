//! Plot rendering: the sampled path, camera positions, and one ellipse per
//! visible record, as a standalone SVG document.
//!
//! World axes are metres with Y up; the view maps them to pixels with the Y
//! axis flipped, so a counter-clockwise world angle becomes a negative SVG
//! rotation. All numbers are printed with three decimals, which keeps the
//! output byte-stable for identical inputs.

use std::fmt::Write;

use groundcov_core::trajectory::{Camera, EllipseRecord, TrajectorySample};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("degenerate view rectangle: {0}")]
    DegenerateView(&'static str),
}

/// World window and raster scale of the plot.
#[derive(Debug, Clone, Copy)]
pub struct ViewBox {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
    /// Pixels per metre.
    scale: f64,
}

impl ViewBox {
    pub fn new(
        min_x: f64,
        min_y: f64,
        max_x: f64,
        max_y: f64,
        scale: f64,
    ) -> Result<Self, SvgError> {
        let all_finite =
            [min_x, min_y, max_x, max_y, scale].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(SvgError::DegenerateView("non-finite bound"));
        }
        if !(max_x > min_x) || !(max_y > min_y) {
            return Err(SvgError::DegenerateView("empty extent"));
        }
        if !(scale > 0.0) {
            return Err(SvgError::DegenerateView("scale must be positive"));
        }
        Ok(ViewBox { min_x, min_y, max_x, max_y, scale })
    }

    pub fn width_px(&self) -> f64 {
        (self.max_x - self.min_x) * self.scale
    }

    pub fn height_px(&self) -> f64 {
        (self.max_y - self.min_y) * self.scale
    }

    /// World point to SVG pixels (Y flipped).
    fn project(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.min_x) * self.scale, (self.max_y - y) * self.scale)
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn preset_color<'a>(order: &mut Vec<&'a str>, preset: &'a str) -> &'static str {
    let index = match order.iter().position(|&p| p == preset) {
        Some(i) => i,
        None => {
            order.push(preset);
            order.len() - 1
        }
    };
    PALETTE[index % PALETTE.len()]
}

/// Renders records over the sampled path. Every visible record contributes
/// exactly one `<ellipse>`; invisible records are skipped.
pub fn emit_svg(
    records: &[EllipseRecord],
    samples: &[TrajectorySample],
    cameras: &[Camera],
    view: &ViewBox,
) -> Result<String, SvgError> {
    let width = view.width_px();
    let height = view.height_px();
    let mut out = String::new();

    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.3}\" height=\"{height:.3}\" \
         viewBox=\"0 0 {width:.3} {height:.3}\">"
    )
    .unwrap();
    writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{width:.3}\" height=\"{height:.3}\" \
         fill=\"white\" stroke=\"#444\"/>"
    )
    .unwrap();

    if !samples.is_empty() {
        let mut points = String::new();
        for sample in samples {
            let (sx, sy) = view.project(sample.x, sample.y);
            write!(points, "{sx:.3},{sy:.3} ").unwrap();
        }
        writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\" \
             stroke-dasharray=\"6 3\"/>",
            points.trim_end()
        )
        .unwrap();
    }

    let mut preset_order: Vec<&str> = Vec::new();
    for record in records {
        let Some(data) = record.data.as_ref() else { continue };
        let color = preset_color(&mut preset_order, &record.preset);
        let (cx, cy) = view.project(data.x, data.y);
        let rx = data.semi_major * view.scale;
        let ry = data.semi_minor * view.scale;
        // Y flip turns the counter-clockwise world angle into a clockwise
        // screen angle.
        let rotation = -data.orientation.to_degrees();
        writeln!(
            out,
            "<ellipse cx=\"{cx:.3}\" cy=\"{cy:.3}\" rx=\"{rx:.3}\" ry=\"{ry:.3}\" \
             transform=\"rotate({rotation:.3} {cx:.3} {cy:.3})\" \
             fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" stroke-opacity=\"0.8\"/>"
        )
        .unwrap();
    }

    for camera in cameras {
        let (cx, cy) = view.project(camera.pose.x0, camera.pose.y0);
        writeln!(
            out,
            "<circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"5\" fill=\"#222\"/>"
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" \
             font-family=\"sans-serif\" fill=\"#222\">{}</text>",
            cx + 8.0,
            cy + 4.0,
            camera.name
        )
        .unwrap();
    }

    // Legend: one line per preset, in order of first appearance.
    for (index, preset) in preset_order.iter().enumerate() {
        let y = 18.0 + 16.0 * index as f64;
        writeln!(
            out,
            "<text x=\"10\" y=\"{y:.3}\" font-size=\"12\" font-family=\"sans-serif\" \
             fill=\"{}\">{preset}</text>",
            PALETTE[index % PALETTE.len()]
        )
        .unwrap();
    }

    out.push_str("</svg>\n");
    Ok(out)
}
