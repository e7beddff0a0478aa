use std::path::Path;

use crate::error::{Error, Result};
use crate::sphere::{PointSet, SpherePoint};

/// Largest accepted deviation of a row from unit norm before normalization.
pub const NORM_TOL: f64 = 1e-6;

/// Parses whitespace-separated coordinates, `d + 1` reals per point.
///
/// Rows within [`NORM_TOL`] of unit norm are normalized; rows further off are
/// rejected rather than silently projected onto the sphere. Blank lines and
/// `\r\n` line endings are accepted.
pub fn parse_design_file(text: &str, d: usize) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
    }
    let width = d + 1;
    let mut values = Vec::new();
    // line on which each value starts, for error messages
    let mut lines = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        for token in line.split_whitespace() {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("not a number: {token:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("non-finite coordinate {token:?}"),
                });
            }
            values.push(v);
            lines.push(lineno + 1);
        }
    }
    if values.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no points".into(),
        });
    }
    if values.len() % width != 0 {
        return Err(Error::Parse {
            line: *lines.last().unwrap(),
            message: format!(
                "{} coordinates is not a multiple of {width}",
                values.len()
            ),
        });
    }
    let mut points = Vec::with_capacity(values.len() / width);
    for (row, chunk) in values.chunks(width).enumerate() {
        let norm = chunk.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotUnitNorm {
                line: lines[row * width],
                norm,
            });
        }
        points.push(SpherePoint::normalized(chunk.to_vec())?);
    }
    PointSet::new(points)
}

/// Reads and parses a design file from disk.
pub fn read_design_file(path: &Path, d: usize) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    parse_design_file(&text, d)
}
