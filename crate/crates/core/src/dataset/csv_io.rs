//! CSV ingestion and the panel export format.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dataset::lag::lag_rows;
use crate::dataset::{Dataset, PanelKey};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simulation::GamePanel;

/// Column names load_csv uses to attach panel keys, when present.
#[derive(Debug, Clone)]
pub struct PanelColumns {
    pub cohort: String,
    pub participant: String,
    pub round: String,
}

impl Default for PanelColumns {
    fn default() -> Self {
        PanelColumns {
            cohort: "cohort".into(),
            participant: "participant".into(),
            round: "round".into(),
        }
    }
}

/// Header of the panel export format, in column order.
pub const PANEL_EXPORT_HEADER: [&str; 8] = [
    "setting_pi",
    "cohort",
    "participant",
    "round",
    "is_human",
    "y",
    "y_lag",
    "cohort_mean_lag",
];

/// True when a CSV header matches the panel export format exactly.
pub fn is_panel_export_header(header: &[String]) -> bool {
    header.len() == PANEL_EXPORT_HEADER.len()
        && header.iter().zip(PANEL_EXPORT_HEADER).all(|(a, b)| a == b)
}

fn parse_err(path: &str, record: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        record,
        message: message.into(),
    }
}

fn field<'a>(
    record: &'a csv::StringRecord,
    idx: usize,
    path: &str,
    row: u64,
    name: &str,
) -> Result<&'a str> {
    record
        .get(idx)
        .ok_or_else(|| parse_err(path, row, format!("missing column {name:?}")))
}

fn parse_f64(raw: &str, path: &str, row: u64, name: &str) -> Result<f64> {
    let value: f64 = raw
        .trim()
        .parse()
        .map_err(|_| parse_err(path, row, format!("column {name:?}: {raw:?} is not numeric")))?;
    Ok(value)
}

fn parse_u32(raw: &str, path: &str, row: u64, name: &str) -> Result<u32> {
    raw.trim()
        .parse()
        .map_err(|_| parse_err(path, row, format!("column {name:?}: {raw:?} is not a non-negative integer")))
}

fn parse_label(raw: &str, path: &str, row: u64, name: &str) -> Result<u8> {
    let value = parse_f64(raw, path, row, name)?;
    if value == 0.0 {
        Ok(0)
    } else if value == 1.0 {
        Ok(1)
    } else {
        Err(parse_err(
            path,
            row,
            format!("column {name:?}: label {raw:?} is not 0 or 1"),
        ))
    }
}

/// Loads a dataset from a headered CSV file.
///
/// `label` names the 0/1 outcome column and `features` the numeric feature
/// columns, which also fixes the feature order of the result. When `panel`
/// is given, the named id columns are attached as [`PanelKey`]s.
pub fn load_csv<F: Real>(
    path: impl AsRef<Path>,
    label: &str,
    features: &[String],
    panel: Option<&PanelColumns>,
) -> Result<Dataset<F>> {
    let path_str = path.as_ref().display().to_string();
    let file = File::open(path.as_ref())
        .map_err(|e| Error::contract(format!("cannot open {path_str}: {e}")))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));

    let headers = reader
        .headers()
        .map_err(|e| parse_err(&path_str, 0, e.to_string()))?
        .clone();
    let header_index = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            parse_err(
                &path_str,
                0,
                format!("column {name:?} not found in header {:?}", headers),
            )
        })
    };

    let label_idx = header_index(label)?;
    let feature_idx: Vec<usize> = features
        .iter()
        .map(|name| header_index(name))
        .collect::<Result<_>>()?;
    let panel_idx = match panel {
        Some(cols) => Some((
            header_index(&cols.cohort)?,
            header_index(&cols.participant)?,
            header_index(&cols.round)?,
        )),
        None => None,
    };

    let mut flat = Vec::new();
    let mut labels = Vec::new();
    let mut keys = panel_idx.map(|_| Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(&path_str, i as u64 + 1, e.to_string()))?;
        let row = i as u64 + 1;
        labels.push(parse_label(
            field(&record, label_idx, &path_str, row, label)?,
            &path_str,
            row,
            label,
        )?);
        for (&idx, name) in feature_idx.iter().zip(features) {
            let value = parse_f64(field(&record, idx, &path_str, row, name)?, &path_str, row, name)?;
            let value = F::from_f64(value).ok_or_else(|| {
                parse_err(&path_str, row, format!("column {name:?}: {value} does not fit the scalar type"))
            })?;
            flat.push(value);
        }
        if let (Some(keys), Some((c, p, r))) = (keys.as_mut(), panel_idx) {
            let cols = panel.expect("panel columns present when indices are");
            keys.push(PanelKey {
                cohort: parse_u32(field(&record, c, &path_str, row, &cols.cohort)?, &path_str, row, &cols.cohort)?,
                participant: parse_u32(
                    field(&record, p, &path_str, row, &cols.participant)?,
                    &path_str,
                    row,
                    &cols.participant,
                )?,
                round: parse_u32(field(&record, r, &path_str, row, &cols.round)?, &path_str, row, &cols.round)?,
            });
        }
    }
    if labels.is_empty() {
        return Err(Error::contract(format!("{path_str} has no data rows")));
    }
    Dataset::new(features.to_vec(), flat, labels, keys)
}

/// Writes a simulated panel in the export format: one row per participant and
/// recorded round, with the lag features materialised. The warm-up round
/// supplies lags for the first recorded round and is not exported.
pub fn write_panel_csv<W: Write>(panel: &GamePanel, writer: W) -> Result<()> {
    let rows = lag_rows(panel)?;
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(PANEL_EXPORT_HEADER)
        .map_err(|e| Error::contract(format!("panel export failed: {e}")))?;
    for row in &rows {
        out.write_record([
            format!("{}", panel.pi()),
            row.cohort.to_string(),
            row.participant.to_string(),
            row.round.to_string(),
            u8::from(row.is_human).to_string(),
            row.y.to_string(),
            row.y_lag.to_string(),
            format!("{}", row.cohort_mean_lag()),
        ])
        .map_err(|e| Error::contract(format!("panel export failed: {e}")))?;
    }
    out.flush()?;
    Ok(())
}

/// [`write_panel_csv`] to a file path.
pub fn save_panel_csv(panel: &GamePanel, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    write_panel_csv(panel, BufWriter::new(file))
}

/// Reads a panel export back as a dataset with features
/// `round`, `own_lag`, `cohort_mean_lag` and panel keys attached.
pub fn read_panel_csv<F: Real, R: Read>(reader: R, origin: &str) -> Result<Dataset<F>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| parse_err(origin, 0, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if !is_panel_export_header(&headers) {
        return Err(parse_err(
            origin,
            0,
            format!("header {headers:?} is not the panel export header {PANEL_EXPORT_HEADER:?}"),
        ));
    }
    let mut flat = Vec::new();
    let mut labels = Vec::new();
    let mut keys = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| parse_err(origin, i as u64 + 1, e.to_string()))?;
        let row = i as u64 + 1;
        parse_f64(field(&record, 0, origin, row, "setting_pi")?, origin, row, "setting_pi")?;
        let cohort = parse_u32(field(&record, 1, origin, row, "cohort")?, origin, row, "cohort")?;
        let participant = parse_u32(
            field(&record, 2, origin, row, "participant")?,
            origin,
            row,
            "participant",
        )?;
        let round = parse_u32(field(&record, 3, origin, row, "round")?, origin, row, "round")?;
        parse_label(field(&record, 4, origin, row, "is_human")?, origin, row, "is_human")?;
        labels.push(parse_label(field(&record, 5, origin, row, "y")?, origin, row, "y")?);
        let y_lag = parse_label(field(&record, 6, origin, row, "y_lag")?, origin, row, "y_lag")?;
        let mean_lag = parse_f64(
            field(&record, 7, origin, row, "cohort_mean_lag")?,
            origin,
            row,
            "cohort_mean_lag",
        )?;
        flat.push(F::from_f64(round as f64).expect("round fits any Real"));
        flat.push(F::from_f64(y_lag as f64).expect("lag fits any Real"));
        flat.push(F::from_f64(mean_lag).ok_or_else(|| {
            parse_err(origin, row, format!("cohort_mean_lag {mean_lag} does not fit the scalar type"))
        })?);
        keys.push(PanelKey {
            cohort,
            participant,
            round,
        });
    }
    if labels.is_empty() {
        return Err(Error::contract(format!("{origin} has no data rows")));
    }
    Dataset::new(
        vec!["round".into(), "own_lag".into(), "cohort_mean_lag".into()],
        flat,
        labels,
        Some(keys),
    )
}

/// [`read_panel_csv`] from a file path.
pub fn load_panel_csv<F: Real>(path: impl AsRef<Path>) -> Result<Dataset<F>> {
    let origin = path.as_ref().display().to_string();
    let file = File::open(path.as_ref())
        .map_err(|e| Error::contract(format!("cannot open {origin}: {e}")))?;
    read_panel_csv(BufReader::new(file), &origin)
}
