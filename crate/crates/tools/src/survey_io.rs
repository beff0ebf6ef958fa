//! Expert survey files.
//!
//! CSV: one row per (expert, edge), expert-major. The first column holds the
//! edge (`C1->C2`), the rest one endorsement per term:
//!
//! ```text
//! From->To;-VH;-H;-M;-L;-VL;NA;+VL;+L;+M;+H;+VH
//! C1->C2;0;0;0;0;0;0;0;0;0;1;0
//! ```
//!
//! An optional leading `Expert` column names the experts. Without it a new
//! expert starts whenever an edge repeats, and experts are named by ordinal.
//!
//! JSON: `{expert_id: [{"from": "C1", "to": "C2", "+H": 1, "no causality": 0}, ...]}`.

use std::fs;
use std::path::Path;

use fcm_core::fuzzy::LinguisticTermSet;
use fcm_core::survey::{is_no_causality, EdgeRating, Expert, ExpertSurvey, InconsistencyReport, NO_CAUSALITY};
use serde_json::{Map, Value};

use crate::error::AtPath;
use crate::{Result, ToolError};

#[derive(Debug, Clone)]
pub struct CsvLayout {
    pub delimiter: u8,
    pub concept_separator: String,
}

impl Default for CsvLayout {
    fn default() -> Self {
        Self { delimiter: b';', concept_separator: "->".into() }
    }
}

/// Canonical spelling of a term column, or `UnknownTerm`.
fn canonical_term(terms: &LinguisticTermSet, name: &str) -> fcm_core::Result<String> {
    if is_no_causality(name.trim()) {
        Ok(NO_CAUSALITY.into())
    } else {
        terms.resolve(name.trim()).map(str::to_owned)
    }
}

pub fn read_survey(path: &Path, terms: &LinguisticTermSet, layout: &CsvLayout) -> Result<ExpertSurvey> {
    let text = fs::read_to_string(path).map_err(|e| ToolError::io(path, e))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        parse_survey_json(&text, terms).map_err(|e| relocate(e, path))
    } else {
        parse_survey_csv(&text, terms, layout).map_err(|e| relocate(e, path))
    }
}

/// Errors from the string parsers carry an empty path; give them the real one.
fn relocate(err: ToolError, path: &Path) -> ToolError {
    match err {
        ToolError::Schema { message, .. } => ToolError::schema(path, message),
        ToolError::Model { source, .. } => ToolError::model(path, source),
        other => other,
    }
}

pub fn parse_survey_csv(text: &str, terms: &LinguisticTermSet, layout: &CsvLayout) -> Result<ExpertSurvey> {
    let here = Path::new("");
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(layout.delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| ToolError::schema(here, e.to_string()))?.clone();
    let has_expert = header.get(0).is_some_and(|h| h.eq_ignore_ascii_case("expert"));
    let first_term = if has_expert { 2 } else { 1 };
    if header.len() <= first_term {
        return Err(ToolError::schema(here, "header has no term columns"));
    }
    let columns: Vec<String> =
        header.iter().skip(first_term).map(|h| canonical_term(terms, h)).collect::<fcm_core::Result<_>>().at(here)?;

    let mut experts: Vec<Expert> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let row = line + 2;
        let record = record.map_err(|e| ToolError::schema(here, format!("row {row}: {e}")))?;
        let edge = &record[first_term - 1];
        let (source, target) = edge
            .split_once(layout.concept_separator.as_str())
            .map(|(s, t)| (s.trim(), t.trim()))
            .filter(|(s, t)| !s.is_empty() && !t.is_empty() && !t.contains(layout.concept_separator.as_str()))
            .ok_or_else(|| {
                ToolError::schema(
                    here,
                    format!("row {row}: edge `{edge}` is not `source{}target`", layout.concept_separator),
                )
            })?;

        let mut ratings = Vec::new();
        for (term, cell) in columns.iter().zip(record.iter().skip(first_term)) {
            let value: f64 = if cell.is_empty() {
                0.0
            } else {
                cell.parse().map_err(|_| ToolError::schema(here, format!("row {row}: `{cell}` is not a number")))?
            };
            if value != 0.0 {
                ratings.push(EdgeRating::new(source, target, term.as_str()).with_endorsement(value));
            }
        }

        let id = if has_expert { Some(record[0].to_string()) } else { None };
        let start_new = match (experts.last(), &id) {
            (None, _) => true,
            (Some(last), Some(id)) => last.id != *id,
            (Some(last), None) => last.ratings.iter().any(|r| r.source == source && r.target == target),
        };
        if start_new {
            let id = id.unwrap_or_else(|| experts.len().to_string());
            experts.push(Expert { id, ratings: Vec::new() });
        }
        let current = experts.last_mut().expect("just pushed");
        if ratings.is_empty() {
            // keep a marker so that an unrated row still closes the block
            current.ratings.push(EdgeRating::new(source, target, NO_CAUSALITY).with_endorsement(0.0));
        } else {
            current.ratings.extend(ratings);
        }
    }
    for e in &mut experts {
        e.ratings.retain(|r| r.endorsement > 0.0);
    }
    ExpertSurvey::new(experts).at(here)
}

pub fn parse_survey_json(text: &str, terms: &LinguisticTermSet) -> Result<ExpertSurvey> {
    let here = Path::new("");
    let doc: Value = serde_json::from_str(text).map_err(|e| ToolError::schema(here, e.to_string()))?;
    let Value::Object(map) = doc else {
        return Err(ToolError::schema(here, "expected an object mapping expert ids to rating lists"));
    };
    let mut experts = Vec::with_capacity(map.len());
    for (id, entries) in map {
        let Value::Array(entries) = entries else {
            return Err(ToolError::schema(here, format!("expert `{id}`: expected a list of ratings")));
        };
        let mut ratings = Vec::new();
        for (k, entry) in entries.iter().enumerate() {
            let bad = |msg: &str| ToolError::schema(here, format!("expert `{id}`, entry {k}: {msg}"));
            let Value::Object(fields) = entry else { return Err(bad("expected an object")) };
            let endpoint = |key: &str| fields.get(key).and_then(Value::as_str).ok_or_else(|| bad(&format!("missing `{key}`")));
            let (source, target) = (endpoint("from")?, endpoint("to")?);
            for (key, value) in fields.iter().filter(|(k, _)| *k != "from" && *k != "to") {
                let term = canonical_term(terms, key).at(here)?;
                let v = value.as_f64().ok_or_else(|| bad(&format!("`{key}` is not a number")))?;
                if v != 0.0 {
                    ratings.push(EdgeRating::new(source, target, term).with_endorsement(v));
                }
            }
        }
        experts.push(Expert { id, ratings });
    }
    ExpertSurvey::new(experts).at(here)
}

/// Canonical JSON form; consecutive ratings of the same edge share an entry.
pub fn survey_to_json(survey: &ExpertSurvey) -> Value {
    let mut doc = Map::new();
    for expert in survey.experts() {
        let mut entries: Vec<Map<String, Value>> = Vec::new();
        for r in &expert.ratings {
            let same_edge = entries.last().is_some_and(|e| e["from"] == r.source.as_str() && e["to"] == r.target.as_str());
            if !same_edge {
                let mut e = Map::new();
                e.insert("from".into(), r.source.clone().into());
                e.insert("to".into(), r.target.clone().into());
                entries.push(e);
            }
            entries.last_mut().expect("present").insert(r.term.clone(), r.endorsement.into());
        }
        doc.insert(expert.id.clone(), Value::Array(entries.into_iter().map(Value::Object).collect()));
    }
    Value::Object(doc)
}

pub fn write_survey_json(path: &Path, survey: &ExpertSurvey) -> Result<()> {
    let text = serde_json::to_string_pretty(&survey_to_json(survey)).expect("values serialise");
    fs::write(path, text).map_err(|e| ToolError::io(path, e))
}

/// `source,target,expert,term,valence`, one row per conflicting rating.
pub fn inconsistency_csv(report: &InconsistencyReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["source", "target", "expert", "term", "valence"]).expect("in-memory write");
    for entry in &report.entries {
        let sides = [("positive", &entry.experts_positive), ("negative", &entry.experts_negative)];
        for (valence, experts) in sides {
            for (expert, term) in experts {
                w.write_record([&entry.source, &entry.target, expert, term, valence]).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "From->To;-VH;-H;-M;-L;-VL;NA;+VL;+L;+M;+H;+VH";

    fn terms() -> LinguisticTermSet {
        LinguisticTermSet::standard()
    }

    #[test]
    fn csv_blocks_split_on_repeated_edge() {
        let text = format!(
            "{HEADER}\nC1->C2;0;0;0;0;0;0;0;0;0;1;0\nC2->C1;0;0;0;0;0;1;0;0;0;0;0\nC1->C2;0;0;0;0;0;0;0;0;1;0;0\n"
        );
        let s = parse_survey_csv(&text, &terms(), &CsvLayout::default()).unwrap();
        assert_eq!(s.experts().len(), 2);
        assert_eq!(s.experts()[0].id, "0");
        assert_eq!(s.experts()[0].ratings[0], EdgeRating::new("C1", "C2", "+H"));
        assert_eq!(s.experts()[0].ratings[1].term, NO_CAUSALITY);
        assert_eq!(s.experts()[1].ratings[0].term, "+M");
    }

    #[test]
    fn header_only_is_empty() {
        let s = parse_survey_csv(HEADER, &terms(), &CsvLayout::default()).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn expert_column_and_separators() {
        let text = "Expert,From=>To,+H,-H\nann,C1=>C2,1,0\nbob,C1=>C2,0,1\n";
        let layout = CsvLayout { delimiter: b',', concept_separator: "=>".into() };
        let s = parse_survey_csv(text, &terms(), &layout).unwrap();
        let ids: Vec<&str> = s.experts().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["ann", "bob"]);
    }

    #[test]
    fn unknown_term_column_rejected() {
        let text = "From->To;+H;+XX\nC1->C2;1;0\n";
        let err = parse_survey_csv(text, &terms(), &CsvLayout::default()).unwrap_err();
        assert!(matches!(err, ToolError::Model { source: fcm_core::FcmError::UnknownTerm(_), .. }), "{err}");
    }

    #[test]
    fn malformed_edge_rejected() {
        let text = format!("{HEADER}\nC1-C2;0;0;0;0;0;0;0;0;0;1;0\n");
        assert!(matches!(parse_survey_csv(&text, &terms(), &CsvLayout::default()), Err(ToolError::Schema { .. })));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"E1": [{"from": "C1", "to": "C2", "+h": 1, "NA": 0}, {"from": "C2", "to": "C1", "no causality": 1}],
                       "E0": [{"from": "C1", "to": "C2", "-M": 0.5}]}"#;
        let s = parse_survey_json(text, &terms()).unwrap();
        assert_eq!(s.experts()[0].id, "E1");
        assert_eq!(s.experts()[0].ratings[0].term, "+H");
        let again = parse_survey_json(&survey_to_json(&s).to_string(), &terms()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn inconsistency_rows() {
        let text = format!(
            "{HEADER}\nC1->C2;0;0;0;0;0;0;0;0;0;1;0\nC1->C2;0;1;0;0;0;0;0;0;0;0;0\n"
        );
        let s = parse_survey_csv(&text, &terms(), &CsvLayout::default()).unwrap();
        let out = inconsistency_csv(&fcm_core::survey::check_consistency(&s));
        assert_eq!(out, "source,target,expert,term,valence\nC1,C2,0,+H,positive\nC1,C2,1,-H,negative\n");
    }
}
