//! Delimited-text input and output: trajectory ellipse records, calibration
//! correspondence files, and grid dumps. Floats are written in shortest
//! round-trip form, so reading an emitted file reproduces the values bit for
//! bit.

use std::io;

use groundcov_core::calibstats::{CornerObservation, GridStats};
use groundcov_core::trajectory::{EllipseData, EllipseRecord, PointLabel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("record {index}: {reason}")]
    Malformed { index: usize, reason: String },
}

#[derive(Debug, Serialize, Deserialize)]
struct EllipseRow {
    s: f64,
    camera: String,
    preset: String,
    point: String,
    visible: bool,
    x: Option<f64>,
    y: Option<f64>,
    semi_major: Option<f64>,
    semi_minor: Option<f64>,
    orientation: Option<f64>,
    var_x: Option<f64>,
    var_y: Option<f64>,
    cov_xy: Option<f64>,
}

impl From<&EllipseRecord> for EllipseRow {
    fn from(record: &EllipseRecord) -> Self {
        let d = record.data.as_ref();
        EllipseRow {
            s: record.s,
            camera: record.camera.clone(),
            preset: record.preset.clone(),
            point: record.label.to_string(),
            visible: record.visible,
            x: d.map(|d| d.x),
            y: d.map(|d| d.y),
            semi_major: d.map(|d| d.semi_major),
            semi_minor: d.map(|d| d.semi_minor),
            orientation: d.map(|d| d.orientation),
            var_x: d.map(|d| d.var_x),
            var_y: d.map(|d| d.var_y),
            cov_xy: d.map(|d| d.cov_xy),
        }
    }
}

fn parse_label(text: &str) -> Option<PointLabel> {
    if text == "center" {
        return Some(PointLabel::Center);
    }
    let index: usize = text.strip_prefix("corner")?.parse().ok()?;
    (index < 4).then_some(PointLabel::Corner(index))
}

impl EllipseRow {
    fn into_record(self, index: usize) -> Result<EllipseRecord, RecordError> {
        let label = parse_label(&self.point).ok_or_else(|| RecordError::Malformed {
            index,
            reason: format!("unknown point label {:?}", self.point),
        })?;
        let fields =
            [self.x, self.y, self.semi_major, self.semi_minor, self.orientation, self.var_x,
             self.var_y, self.cov_xy];
        let data = if self.visible {
            if fields.iter().any(Option::is_none) {
                return Err(RecordError::Malformed {
                    index,
                    reason: "visible record with empty ellipse fields".into(),
                });
            }
            Some(EllipseData {
                x: self.x.unwrap(),
                y: self.y.unwrap(),
                semi_major: self.semi_major.unwrap(),
                semi_minor: self.semi_minor.unwrap(),
                orientation: self.orientation.unwrap(),
                var_x: self.var_x.unwrap(),
                var_y: self.var_y.unwrap(),
                cov_xy: self.cov_xy.unwrap(),
            })
        } else {
            if fields.iter().any(Option::is_some) {
                return Err(RecordError::Malformed {
                    index,
                    reason: "invisible record with ellipse fields".into(),
                });
            }
            None
        };
        Ok(EllipseRecord {
            s: self.s,
            camera: self.camera,
            preset: self.preset,
            label,
            visible: self.visible,
            data,
        })
    }
}

const ELLIPSE_HEADER: [&str; 13] = [
    "s", "camera", "preset", "point", "visible", "x", "y", "semi_major", "semi_minor",
    "orientation", "var_x", "var_y", "cov_xy",
];

pub fn write_ellipse_csv<W: io::Write>(
    records: &[EllipseRecord],
    writer: W,
) -> Result<(), RecordError> {
    // Explicit header so empty inputs still produce one.
    let mut csv_writer = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    csv_writer.write_record(ELLIPSE_HEADER)?;
    for record in records {
        csv_writer.serialize(EllipseRow::from(record))?;
    }
    csv_writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn ellipse_csv_string(records: &[EllipseRecord]) -> Result<String, RecordError> {
    let mut buffer = Vec::new();
    write_ellipse_csv(records, &mut buffer)?;
    Ok(String::from_utf8(buffer).expect("CSV output is UTF-8"))
}

pub fn read_ellipse_csv<R: io::Read>(reader: R) -> Result<Vec<EllipseRecord>, RecordError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut records = Vec::new();
    for (index, row) in csv_reader.deserialize::<EllipseRow>().enumerate() {
        records.push(row?.into_record(index)?);
    }
    Ok(records)
}

/// Correspondence file: header `board_id,detected_u,detected_v,
/// reprojected_u,reprojected_v`, one corner per line.
#[derive(Debug, Deserialize)]
struct CornerRow {
    board_id: u32,
    detected_u: f64,
    detected_v: f64,
    reprojected_u: f64,
    reprojected_v: f64,
}

pub fn read_corners<R: io::Read>(reader: R) -> Result<Vec<CornerObservation>, RecordError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut corners = Vec::new();
    for (index, row) in csv_reader.deserialize::<CornerRow>().enumerate() {
        let row: CornerRow = row?;
        let finite = [row.detected_u, row.detected_v, row.reprojected_u, row.reprojected_v]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(RecordError::Malformed {
                index,
                reason: "non-finite pixel coordinate".into(),
            });
        }
        corners.push(CornerObservation {
            board_id: row.board_id,
            detected_u: row.detected_u,
            detected_v: row.detected_v,
            reprojected_u: row.reprojected_u,
            reprojected_v: row.reprojected_v,
        });
    }
    Ok(corners)
}

#[derive(Debug, Serialize)]
struct GridRow {
    cell_row: usize,
    cell_col: usize,
    count: u32,
    mean_error: Option<f64>,
}

/// Dumps a grid row-major as `cell_row,cell_col,count,mean_error`; the
/// error column is empty for coverage grids and empty cells.
pub fn write_grid_csv<W: io::Write>(stats: &GridStats, writer: W) -> Result<(), RecordError> {
    let mut csv_writer = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    csv_writer.write_record(["cell_row", "cell_col", "count", "mean_error"])?;
    for row in 0..stats.spec.rows() {
        for col in 0..stats.spec.cols() {
            csv_writer.serialize(GridRow {
                cell_row: row,
                cell_col: col,
                count: stats.count(row, col),
                mean_error: stats.mean_error(row, col),
            })?;
        }
    }
    csv_writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use groundcov_core::calibstats::{reprojection_error_grid, GridSpec};

    fn sample_records() -> Vec<EllipseRecord> {
        vec![
            EllipseRecord {
                s: 0.0,
                camera: "cam1".into(),
                preset: "Basler1".into(),
                label: PointLabel::Center,
                visible: true,
                data: Some(EllipseData {
                    x: 1.25,
                    y: -3.5,
                    semi_major: 0.123456789012345,
                    semi_minor: 0.04,
                    orientation: 1.333333333333333,
                    var_x: 0.01,
                    var_y: 0.002,
                    cov_xy: -0.0005,
                }),
            },
            EllipseRecord {
                s: 2.0,
                camera: "cam1".into(),
                preset: "Basler1".into(),
                label: PointLabel::Corner(3),
                visible: false,
                data: None,
            },
        ]
    }

    #[test]
    fn ellipse_csv_round_trips_exactly() {
        let records = sample_records();
        let text = ellipse_csv_string(&records).unwrap();
        let back = read_ellipse_csv(text.as_bytes()).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn empty_input_yields_header_only() {
        let text = ellipse_csv_string(&[]).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("s,camera,preset,point,visible,"));
    }

    #[test]
    fn one_record_yields_two_lines() {
        let records = &sample_records()[..1];
        let text = ellipse_csv_string(records).unwrap();
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn invisible_rows_have_empty_tails() {
        let text = ellipse_csv_string(&sample_records()).unwrap();
        let last = text.lines().last().unwrap();
        assert_eq!(last, "2.0,cam1,Basler1,corner3,false,,,,,,,,");
    }

    #[test]
    fn inconsistent_visibility_is_rejected() {
        let text = "s,camera,preset,point,visible,x,y,semi_major,semi_minor,orientation,var_x,var_y,cov_xy\n\
                    0.0,cam1,p,center,true,,,,,,,,\n";
        assert!(matches!(
            read_ellipse_csv(text.as_bytes()),
            Err(RecordError::Malformed { index: 0, .. })
        ));
    }

    #[test]
    fn corner_file_round_trip() {
        let text = "board_id,detected_u,detected_v,reprojected_u,reprojected_v\n\
                    7,10.5,20.25,10.8,20.65\n\
                    7,40.0,20.0,39.7,19.6\n";
        let corners = read_corners(text.as_bytes()).unwrap();
        assert_eq!(corners.len(), 2);
        assert_eq!(corners[0].board_id, 7);
        assert_eq!(corners[1].detected_u, 40.0);
        assert!((corners[0].error() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn grid_csv_lists_every_cell() {
        let spec = GridSpec::new(10, 10, 5).unwrap();
        let corners = [CornerObservation {
            board_id: 0,
            detected_u: 1.0,
            detected_v: 1.0,
            reprojected_u: 4.0,
            reprojected_v: 5.0,
        }];
        let stats = reprojection_error_grid(&corners, spec);
        let mut buffer = Vec::new();
        write_grid_csv(&stats, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "cell_row,cell_col,count,mean_error");
        // 3-4-5 offset, exact in doubles.
        assert_eq!(lines[1], "0,0,1,5.0");
        assert_eq!(lines[2], "0,1,0,");
    }
}
