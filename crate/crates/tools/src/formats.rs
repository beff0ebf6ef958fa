//! CSV and JSON layouts for matrices, states, traces, data series and the
//! small JSON inputs of the learning and scenario commands.
//!
//! Matrix CSV has a header row and a first column of concept ids, row =
//! source. Matrix JSON is `{"concepts": [...], "weights": [[...], ...]}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use fcm_core::hebbian::DocRanges;
use fcm_core::intervention::{Intervention, InterventionKind};
use fcm_core::rcga::LongitudinalData;
use fcm_core::sim::SimulationTrace;
use fcm_core::{StateVector, WeightMatrix};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::AtPath;
use crate::{Result, ToolError};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ToolError::io(path, e))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn parse_cell(path: &Path, row: usize, cell: &str) -> Result<f64> {
    cell.parse().map_err(|_| ToolError::schema(path, format!("row {row}: `{cell}` is not a number")))
}

fn csv_string(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDoc {
    concepts: Vec<String>,
    weights: Vec<Vec<f64>>,
}

pub fn matrix_to_csv(w: &WeightMatrix) -> String {
    let mut header = vec![String::new()];
    header.extend(w.concepts().iter().cloned());
    let rows = w.concepts().iter().zip(w.rows()).map(|(c, row)| {
        let mut r = vec![c.clone()];
        r.extend(row.iter().map(f64::to_string));
        r
    });
    csv_string(&header, rows)
}

pub fn matrix_to_json(w: &WeightMatrix) -> String {
    pretty(&MatrixDoc { concepts: w.concepts().to_vec(), weights: w.rows().map(<[f64]>::to_vec).collect() })
}

pub fn parse_matrix_csv(text: &str, path: &Path) -> Result<WeightMatrix> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| ToolError::schema(path, e.to_string()))?.clone();
    let concepts: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ToolError::schema(path, e.to_string()))?;
        let label = &record[0];
        if concepts.get(k).map(String::as_str) != Some(label) {
            return Err(ToolError::schema(path, format!("row {} is labelled `{label}`, expected the column order", k + 2)));
        }
        rows.push(record.iter().skip(1).map(|c| parse_cell(path, k + 2, c)).collect::<Result<Vec<f64>>>()?);
    }
    if rows.len() != concepts.len() {
        return Err(ToolError::schema(path, format!("{} rows for {} columns", rows.len(), concepts.len())));
    }
    WeightMatrix::from_rows(concepts, &rows).at(path)
}

pub fn read_matrix(path: &Path) -> Result<WeightMatrix> {
    let text = read(path)?;
    if is_json(path) {
        let doc: MatrixDoc = serde_json::from_str(&text).map_err(|e| ToolError::schema(path, e.to_string()))?;
        WeightMatrix::from_rows(doc.concepts, &doc.weights).at(path)
    } else {
        parse_matrix_csv(&text, path)
    }
}

/// Initial state: JSON `{"C1": 1.0, ...}` or CSV with a header of concept ids
/// and one row of values. Every concept of the map must be present.
pub fn read_state(path: &Path, concepts: &[String]) -> Result<StateVector> {
    let text = read(path)?;
    let values: Vec<(String, f64)> = if is_json(path) {
        let map: Map<String, Value> = serde_json::from_str(&text).map_err(|e| ToolError::schema(path, e.to_string()))?;
        map.into_iter()
            .map(|(k, v)| {
                let x = v.as_f64().ok_or_else(|| ToolError::schema(path, format!("`{k}` is not a number")))?;
                Ok((k, x))
            })
            .collect::<Result<_>>()?
    } else {
        let mut reader = csv_reader(&text);
        let header = reader.headers().map_err(|e| ToolError::schema(path, e.to_string()))?.clone();
        let record = reader
            .records()
            .next()
            .ok_or_else(|| ToolError::schema(path, "no value row"))?
            .map_err(|e| ToolError::schema(path, e.to_string()))?;
        header.iter().zip(record.iter()).map(|(h, c)| Ok((h.to_owned(), parse_cell(path, 2, c)?))).collect::<Result<_>>()?
    };
    StateVector::from_named(concepts, values.iter().map(|(k, v)| (k.as_str(), *v))).at(path)
}

/// `step,C1,...` with one row per state.
pub fn trace_to_csv(trace: &SimulationTrace) -> String {
    let mut header = vec!["step".to_string()];
    header.extend(trace.concepts.iter().cloned());
    let rows = trace.rows.iter().enumerate().map(|(t, row)| {
        let mut r = vec![t.to_string()];
        r.extend(row.values().iter().map(f64::to_string));
        r
    });
    csv_string(&header, rows)
}

pub fn trace_to_json(trace: &SimulationTrace) -> String {
    pretty(&json!({
        "concepts": trace.concepts,
        "rows": trace.rows,
        "converged_at": trace.converged_at,
        "thresh": trace.thresh,
        "message": trace.message(),
    }))
}

/// Longitudinal data: header of concept ids, one row per time step.
pub fn read_data(path: &Path) -> Result<LongitudinalData> {
    let text = read(path)?;
    let mut reader = csv_reader(&text);
    let header = reader.headers().map_err(|e| ToolError::schema(path, e.to_string()))?.clone();
    let concepts: Vec<String> = header.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ToolError::schema(path, e.to_string()))?;
        rows.push(record.iter().map(|c| parse_cell(path, k + 2, c)).collect::<Result<Vec<f64>>>()?);
    }
    LongitudinalData::new(concepts, rows).at(path)
}

pub fn data_to_csv(data: &LongitudinalData) -> String {
    csv_string(data.concepts(), data.rows().iter().map(|r| r.iter().map(f64::to_string).collect()))
}

/// `{"C1": [0.68, 0.74], ...}`
pub fn read_doc_ranges(path: &Path) -> Result<DocRanges> {
    let map: BTreeMap<String, (f64, f64)> =
        serde_json::from_str(&read(path)?).map_err(|e| ToolError::schema(path, e.to_string()))?;
    DocRanges::new(map).at(path)
}

/// `{"0": ["C1"], "1": ["C2", "C3"]}` (fired in ascending key order) or a
/// plain list of groups.
pub fn read_activation_pattern(path: &Path) -> Result<Vec<Vec<String>>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Pattern {
        Groups(Vec<Vec<String>>),
        Keyed(BTreeMap<String, Vec<String>>),
    }
    let pattern: Pattern = serde_json::from_str(&read(path)?).map_err(|e| ToolError::schema(path, e.to_string()))?;
    match pattern {
        Pattern::Groups(g) => Ok(g),
        Pattern::Keyed(map) => {
            let mut keyed = map
                .into_iter()
                .map(|(k, v)| {
                    let key: i64 = k.parse().map_err(|_| ToolError::schema(path, format!("group key `{k}` is not an integer")))?;
                    Ok((key, v))
                })
                .collect::<Result<Vec<_>>>()?;
            keyed.sort_by_key(|(k, _)| *k);
            Ok(keyed.into_iter().map(|(_, v)| v).collect())
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InterventionDoc {
    name: String,
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    weights: BTreeMap<String, f64>,
    #[serde(default)]
    effectiveness: Option<f64>,
    #[serde(default)]
    overrides: BTreeMap<String, f64>,
}

/// `[{"name": "i1", "weights": {"C1": -0.3}, "effectiveness": 1.0},
///   {"name": "s1", "kind": "single_shot", "overrides": {"C2": 0.9}}]`
///
/// `kind` defaults to `continuous` and `effectiveness` to 1.
pub fn read_interventions(path: &Path) -> Result<Vec<Intervention>> {
    let docs: Vec<InterventionDoc> =
        serde_json::from_str(&read(path)?).map_err(|e| ToolError::schema(path, e.to_string()))?;
    docs.into_iter()
        .map(|d| {
            let kind = match d.kind.as_deref().unwrap_or("continuous") {
                "continuous" => {
                    InterventionKind::Continuous { weights: d.weights, effectiveness: d.effectiveness.unwrap_or(1.0) }
                }
                "single_shot" => InterventionKind::SingleShot { overrides: d.overrides },
                other => return Err(ToolError::schema(path, format!("`{}`: unknown kind `{other}`", d.name))),
            };
            Ok(Intervention { name: d.name, kind })
        })
        .collect()
}

/// Named rows over the same concepts, e.g. equilibria or percent changes:
/// `scenario,C1,...`.
pub fn table_to_csv(first: &str, concepts: &[String], rows: &[(String, Vec<f64>)]) -> String {
    let mut header = vec![first.to_string()];
    header.extend(concepts.iter().cloned());
    csv_string(
        &header,
        rows.iter().map(|(name, values)| {
            let mut r = vec![name.clone()];
            r.extend(values.iter().map(f64::to_string));
            r
        }),
    )
}

/// `{"name": {"C1": v, ...}, ...}` in row order.
pub fn table_to_json(concepts: &[String], rows: &[(String, Vec<f64>)]) -> String {
    let mut doc = Map::new();
    for (name, values) in rows {
        let row: Map<String, Value> = concepts.iter().cloned().zip(values.iter().map(|&v| json!(v))).collect();
        doc.insert(name.clone(), Value::Object(row));
    }
    pretty(&Value::Object(doc))
}
