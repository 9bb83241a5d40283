//! CSV and JSON emission of feature-audit reports.

use std::io::Write;

use serde_json::{json, Value as Json};

use crate::audit::{verdict_for_score, ReportRow, LOW_MCC_CAVEAT};
use crate::error::{Error, Result};

pub const REPORT_COLUMNS: [&str; 8] = [
    "feature_set",
    "mcc_max_mean",
    "reliability",
    "winning_params",
    "folds_skipped",
    "verdict",
    "status",
    "notes",
];

fn status(row: &ReportRow) -> String {
    match &row.outcome {
        Ok(_) => "ok".to_string(),
        Err(Error::Inconclusive(_)) => "inconclusive".to_string(),
        Err(e) => format!("error: {e}"),
    }
}

pub fn write_report_csv<W: Write>(rows: &[ReportRow], threshold: f64, w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(REPORT_COLUMNS)?;
    for row in rows {
        let rec = match &row.outcome {
            Ok(r) => [
                row.feature_set.label.clone(),
                r.mcc_max_mean.to_string(),
                r.reliability.to_string(),
                r.winning_params.to_string(),
                r.folds_skipped.to_string(),
                verdict_for_score(r.mcc_max_mean, threshold).as_str().to_string(),
                status(row),
                LOW_MCC_CAVEAT.to_string(),
            ],
            Err(_) => [
                row.feature_set.label.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                status(row),
                LOW_MCC_CAVEAT.to_string(),
            ],
        };
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn report_json(rows: &[ReportRow], threshold: f64) -> Json {
    let rows: Vec<Json> = rows
        .iter()
        .map(|row| {
            let base = json!({
                "feature_set": row.feature_set.label,
                "features": row.feature_set.features,
                "status": status(row),
                "notes": LOW_MCC_CAVEAT,
            });
            let mut obj = base.as_object().cloned().expect("object");
            match &row.outcome {
                Ok(r) => {
                    obj.insert("mcc_max_mean".into(), json!(r.mcc_max_mean));
                    obj.insert("reliability".into(), json!(r.reliability));
                    obj.insert("winning_params".into(), json!(r.winning_params));
                    obj.insert("folds_skipped".into(), json!(r.folds_skipped));
                    obj.insert(
                        "verdict".into(),
                        json!(verdict_for_score(r.mcc_max_mean, threshold).as_str()),
                    );
                    obj.insert("n_selected".into(), json!(r.n_selected));
                    obj.insert("n_not_selected".into(), json!(r.n_not_selected));
                }
                Err(e) => {
                    obj.insert("mcc_max_mean".into(), Json::Null);
                    obj.insert("reliability".into(), Json::Null);
                    obj.insert("winning_params".into(), Json::Null);
                    obj.insert("folds_skipped".into(), Json::Null);
                    obj.insert("verdict".into(), Json::Null);
                    if let Error::Inconclusive(d) = e {
                        obj.insert("diagnostics".into(), json!(d));
                    }
                }
            }
            Json::Object(obj)
        })
        .collect();
    json!({
        "threshold": threshold,
        "notes": LOW_MCC_CAVEAT,
        "rows": rows,
    })
}

/// Per-model search trace of every successful row.
pub fn trace_json(rows: &[ReportRow]) -> Json {
    let sets: Vec<Json> = rows
        .iter()
        .filter_map(|row| {
            let r = row.outcome.as_ref().ok()?;
            Some(json!({
                "feature_set": row.feature_set.label,
                "winning_index": r.winning_index,
                "total_folds_skipped": r.total_folds_skipped,
                "fold_test_sizes": r.fold_tests.iter().map(Vec::len).collect::<Vec<_>>(),
                "models": r.per_model_trace,
            }))
        })
        .collect();
    json!({ "feature_sets": sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::{quantify_shift, AuditConfig, FeatureSet};
    use crate::dataset::{Encoded, Matrix};

    fn rows() -> Vec<ReportRow> {
        let enc = |v: &[f64]| Encoded::from_matrix(Matrix::column_vector(v), vec!["x".into()]).unwrap();
        let config = AuditConfig {
            n_models: 5,
            ..AuditConfig::default()
        };
        vec![
            ReportRow {
                feature_set: FeatureSet::new(vec!["x".into()], &["x", "y"]),
                outcome: quantify_shift(&enc(&[1.0; 30]), &enc(&[0.0; 30]), &config),
            },
            ReportRow {
                feature_set: FeatureSet::new(vec!["y".into()], &["x", "y"]),
                outcome: quantify_shift(&enc(&[1.0; 30]), &enc(&[1.0; 30]), &config),
            },
        ]
    }

    #[test]
    fn csv_has_fixed_columns_and_caveat() {
        let mut out = Vec::new();
        write_report_csv(&rows(), 0.2, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), REPORT_COLUMNS.join(","));
        let first = lines.next().unwrap();
        assert!(first.starts_with("x,1,0,max_leaves="));
        assert!(first.contains(",shifted,ok,"));
        assert!(lines.next().unwrap().contains(",inconclusive,"));
    }

    #[test]
    fn json_rows_carry_notes() {
        let j = report_json(&rows(), 0.2);
        assert_eq!(j["rows"][0]["verdict"], "shifted");
        assert_eq!(j["rows"][1]["status"], "inconclusive");
        assert_eq!(j["rows"][1]["notes"], LOW_MCC_CAVEAT);
        assert_eq!(j["rows"][1]["diagnostics"]["models_evaluated"], 5);
    }
}
