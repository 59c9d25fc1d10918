//! Normalization, ranking, reference comparison and rendering of results.

mod csv_out;
mod svg;

use std::cmp::Ordering;

pub use csv_out::{comparison_csv, contributions_csv, matrix_csv, results_csv};
pub use svg::{radar_svg, sweep_svg, BarSeries};

use crate::dataset::ReferenceModeSet;
use crate::impact::{ImpactVector, Indicator, INDICATORS};
use crate::mode::AssessmentResult;
use crate::{Error, Result, Scalar};

/// Modes × indicators, each column divided by its maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix<T> {
    pub modes: Vec<String>,
    pub rows: Vec<ImpactVector<T>>,
}

impl<T: Scalar> NormalizedMatrix<T> {
    pub fn value(&self, mode: &str, k: Indicator) -> Option<T> {
        self.modes.iter().position(|m| m == mode).map(|i| self.rows[i][k])
    }

    pub fn column_max(&self, k: Indicator) -> Option<T> {
        self.rows.iter().map(|r| r[k]).reduce(|a, b| if b > a { b } else { a })
    }

    /// Normalizes the matrix again; a normalized matrix is returned
    /// unchanged.
    pub fn normalize(&self) -> Result<Self> {
        normalize_rows(self.modes.clone(), self.rows.clone())
    }
}

/// Divides each indicator column by its maximum.
pub fn normalize_rows<T: Scalar>(modes: Vec<String>, rows: Vec<ImpactVector<T>>) -> Result<NormalizedMatrix<T>> {
    if rows.is_empty() {
        return Err(Error::Domain("normalization needs at least one mode".into()));
    }
    let mut out = rows;
    for k in INDICATORS {
        let max = out
            .iter()
            .map(|r| r[k])
            .fold(T::neg_infinity(), |a, b| if b > a { b } else { a });
        if !(max > T::zero()) || !max.is_finite() {
            return Err(Error::Normalization {
                indicator: k.id().into(),
            });
        }
        for r in &mut out {
            r[k] = if r[k] == max { T::one() } else { r[k] / max };
        }
    }
    Ok(NormalizedMatrix { modes, rows: out })
}

pub fn normalize<T: Scalar>(results: &[AssessmentResult<T>]) -> Result<NormalizedMatrix<T>> {
    normalize_rows(
        results.iter().map(|r| r.mode_id.clone()).collect(),
        results.iter().map(|r| r.total).collect(),
    )
}

fn ascending<T: Scalar>(a: (&str, T), b: (&str, T)) -> Ordering {
    a.1.partial_cmp(&b.1)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.0.cmp(b.0))
}

/// Mode ids ascending by value; ties ordered by id.
pub fn rank_values<T: Scalar>(values: &[(String, T)]) -> Vec<String> {
    let mut v: Vec<&(String, T)> = values.iter().collect();
    v.sort_by(|a, b| ascending((&a.0, a.1), (&b.0, b.1)));
    v.into_iter().map(|(id, _)| id.clone()).collect()
}

pub fn rank<T: Scalar>(results: &[AssessmentResult<T>], k: Indicator) -> Vec<String> {
    let values: Vec<(String, T)> = results.iter().map(|r| (r.mode_id.clone(), r.total[k])).collect();
    rank_values(&values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Computed,
    Reference,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Computed => "computed",
            Source::Reference => "reference",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow<T> {
    pub name: String,
    /// Per pkt, in g CO2eq for GWP and in the indicator unit otherwise.
    pub value: T,
    pub source: Source,
    /// `eq`, `lt` or `approx` for references; `eq` for computed rows.
    pub bound: String,
}

/// Computed modes merged with the reference set, ascending. References
/// only carry GWP values and are merged for that indicator alone.
pub fn compare_reference<T: Scalar>(
    results: &[AssessmentResult<T>],
    refs: &ReferenceModeSet<T>,
    k: Indicator,
) -> Vec<ComparisonRow<T>> {
    let scale = if k == Indicator::Gwp100 {
        T::lit(1000.0)
    } else {
        T::one()
    };
    let mut rows: Vec<ComparisonRow<T>> = results
        .iter()
        .map(|r| ComparisonRow {
            name: r
                .scenario
                .as_ref()
                .map_or_else(|| r.mode_id.clone(), |s| format!("{} ({s})", r.mode_id)),
            value: r.total[k] * scale,
            source: Source::Computed,
            bound: "eq".into(),
        })
        .collect();
    if k == Indicator::Gwp100 {
        rows.extend(refs.entries.iter().map(|e| ComparisonRow {
            name: e.mode.clone(),
            value: e.gwp_g_per_pkt,
            source: Source::Reference,
            bound: e.bound.clone(),
        }));
    }
    rows.sort_by(|a, b| ascending((&a.name, a.value), (&b.name, b.value)));
    rows
}

/// Three significant digits: fixed notation between 0.01 and 10 000,
/// scientific outside.
pub fn sig3<T: Scalar>(v: T) -> String {
    let x = v.to_f64_lossy();
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if (0.01..10_000.0).contains(&a) {
        let digits = 2 - a.log10().floor() as i32;
        let decimals = digits.max(0) as usize;
        let p = 10f64.powi(digits);
        format!("{:.*}", decimals, (x * p).round() / p)
    } else {
        format!("{x:.2e}")
    }
}
