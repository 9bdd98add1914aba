//! CSV input and output.

use std::path::Path;

use tourpp::simdata::{minmax_scale, sphere_pca, standardize};
use tourpp::tour::{DataMatrix, Frame};

use crate::config::ScaleMode;
use crate::error::CliError;

/// Reads a numeric CSV with a header row, drops the named columns and scales.
pub fn load_csv(path: &Path, drop_columns: &[String], scale: ScaleMode) -> Result<DataMatrix<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(CliError::data)?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    for d in drop_columns {
        if !headers.contains(d) {
            return Err(CliError::Data(format!("unknown column `{d}` in {}", path.display())));
        }
    }
    let keep: Vec<usize> = (0..headers.len()).filter(|&j| !drop_columns.contains(&headers[j])).collect();
    let names: Vec<String> = keep.iter().map(|&j| headers[j].clone()).collect();
    let mut values = Vec::new();
    let mut n = 0;
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(CliError::data)?;
        if record.len() != headers.len() {
            return Err(CliError::Data(format!(
                "row {} has {} fields, the header has {}",
                row + 1,
                record.len(),
                headers.len()
            )));
        }
        for &j in &keep {
            let cell = record[j].trim();
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!("non-numeric cell `{cell}` at row {}, column `{}`", row + 1, headers[j]))
            })?;
            if !v.is_finite() {
                return Err(CliError::Data(format!("non-finite cell at row {}, column `{}`", row + 1, headers[j])));
            }
            values.push(v);
        }
        n += 1;
    }
    let x = DataMatrix::new(n, keep.len(), values, names).map_err(CliError::data)?;
    apply_scale(&x, scale)
}

pub fn apply_scale(x: &DataMatrix<f64>, scale: ScaleMode) -> Result<DataMatrix<f64>, CliError> {
    match scale {
        ScaleMode::None => Ok(x.clone()),
        ScaleMode::Standardize => standardize(x).map_err(CliError::data),
        ScaleMode::Minmax => minmax_scale(x).map_err(CliError::data),
        ScaleMode::Sphere(k) => sphere_pca(x, k).map_err(CliError::data),
    }
}

/// Header row of column names, then one row per observation with 17 significant digits.
pub fn data_csv(x: &DataMatrix<f64>) -> String {
    let mut out = x.names().join(",");
    out.push('\n');
    for i in 0..x.nrows() {
        let row: Vec<String> = x.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// A frames.csv: frames, anchor positions and stage labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FramesFile {
    pub frames: Vec<Frame<f64>>,
    pub anchors: Vec<usize>,
    pub stages: Vec<String>,
}

pub fn read_frames(path: &Path) -> Result<FramesFile, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    let headers = reader.headers().map_err(CliError::data)?.clone();
    if headers.len() < 7 || &headers[0] != "frame_id" || &headers[1] != "anchor" || &headers[2] != "stage" {
        return Err(CliError::Data(format!("{} is not a frames file", path.display())));
    }
    let p = (headers.len() - 3) / 2;
    let mut out = FramesFile {
        frames: Vec::new(),
        anchors: Vec::new(),
        stages: Vec::new(),
    };
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(CliError::data)?;
        let num = |k: usize| -> Result<f64, CliError> {
            rec[k]
                .trim()
                .parse()
                .map_err(|_| CliError::Data(format!("bad number at row {}, column {}", i + 1, &headers[k])))
        };
        let c1 = (0..p).map(|j| num(3 + 2 * j)).collect::<Result<Vec<_>, _>>()?;
        let c2 = (0..p).map(|j| num(4 + 2 * j)).collect::<Result<Vec<_>, _>>()?;
        out.frames.push(Frame::new(c1, c2).map_err(CliError::data)?);
        if rec[1].trim() == "1" {
            out.anchors.push(i);
        }
        out.stages.push(rec[2].to_string());
    }
    Ok(out)
}

/// One row of a traces.csv.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub frame_id: usize,
    pub index_name: String,
    pub value: f64,
}

pub fn read_traces(path: &Path) -> Result<Vec<TraceRow>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    let headers = reader.headers().map_err(CliError::data)?.clone();
    if headers.len() < 3 || &headers[0] != "frame_id" || &headers[1] != "index_name" || &headers[2] != "value" {
        return Err(CliError::Data(format!("{} is not a traces file", path.display())));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(CliError::data)?;
        let bad = || CliError::Data(format!("bad traces row {}", i + 1));
        rows.push(TraceRow {
            frame_id: rec[0].trim().parse().map_err(|_| bad())?,
            index_name: rec[1].to_string(),
            value: rec[2].trim().parse().map_err(|_| bad())?,
        });
    }
    Ok(rows)
}

/// `position,label`
pub fn markers_csv(markers: &[(usize, String)]) -> String {
    let mut out = String::from("position,label\n");
    for (pos, label) in markers {
        out.push_str(&format!("{pos},{label}\n"));
    }
    out
}

pub fn read_markers(path: &Path) -> Result<Vec<(usize, String)>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(CliError::data)?;
            let pos = rec[0].trim().parse().map_err(|_| CliError::Data("bad marker position".into()))?;
            Ok((pos, rec.get(1).unwrap_or("").to_string()))
        })
        .collect()
}
