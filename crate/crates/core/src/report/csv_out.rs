use crate::impact::INDICATORS;
use crate::mode::{AssessmentResult, Contributions};
use crate::Scalar;

use super::{ComparisonRow, NormalizedMatrix};

fn render(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn num<T: Scalar>(v: T) -> String {
    format!("{:e}", v.to_f64_lossy())
}

/// One `total` row and one row per component for every mode and indicator.
pub fn results_csv<T: Scalar>(results: &[AssessmentResult<T>]) -> String {
    let mut rows = Vec::new();
    for r in results {
        let scenario = r.scenario.clone().unwrap_or_default();
        for k in INDICATORS {
            let unit = format!("{}/pkt", k.unit());
            rows.push(vec![
                r.mode_id.clone(),
                scenario.clone(),
                k.id().into(),
                "total".into(),
                num(r.total[k]),
                unit.clone(),
            ]);
            for (c, v) in r.components() {
                rows.push(vec![
                    r.mode_id.clone(),
                    scenario.clone(),
                    k.id().into(),
                    c.to_string(),
                    num(v[k]),
                    unit.clone(),
                ]);
            }
        }
    }
    render(&["mode", "scenario", "indicator", "component", "value", "unit"], rows)
}

pub fn matrix_csv<T: Scalar>(m: &NormalizedMatrix<T>) -> String {
    let mut rows = Vec::new();
    for (mode, row) in m.modes.iter().zip(&m.rows) {
        for k in INDICATORS {
            rows.push(vec![mode.clone(), k.id().into(), num(row[k])]);
        }
    }
    render(&["mode", "indicator", "normalized"], rows)
}

pub fn contributions_csv<T: Scalar>(c: &Contributions<T>) -> String {
    let mut rows = Vec::new();
    for (k, shares) in &c.shares {
        match shares {
            Some(list) => {
                for (comp, s) in list {
                    rows.push(vec![c.mode_id.clone(), k.id().into(), comp.to_string(), num(*s)]);
                }
            }
            None => rows.push(vec![c.mode_id.clone(), k.id().into(), String::new(), String::new()]),
        }
    }
    render(&["mode", "indicator", "component", "share"], rows)
}

pub fn comparison_csv<T: Scalar>(rows: &[ComparisonRow<T>], unit: &str) -> String {
    let out = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                (i + 1).to_string(),
                r.name.clone(),
                r.source.as_str().into(),
                r.bound.clone(),
                num(r.value),
                unit.to_string(),
            ]
        })
        .collect();
    render(&["rank", "mode", "source", "bound", "value", "unit"], out)
}
