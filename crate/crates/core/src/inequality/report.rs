//! Signed-margin reports with exact term breakdowns.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Relative tolerance behind the `satisfied` flag.
pub const SATISFIED_REL_TOL: f64 = 1e-10;
/// Margins below this fraction of the scale are flagged as equality.
pub const EQUALITY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// lhs ≤ rhs, margin = rhs − lhs.
    Upper,
    /// lhs ≥ rhs, margin = lhs − rhs.
    Lower,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Terms {
    pub lhs: IndexMap<String, f64>,
    pub rhs: IndexMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spectrum: String,
    pub extrinsic: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub ineq_id: String,
    pub direction: Direction,
    pub params: IndexMap<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
    pub equality: bool,
    pub terms: Terms,
    pub provenance: Provenance,
    pub exploratory: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_reports: Vec<InequalityReport>,
}

impl InequalityReport {
    pub fn with_extrinsic(mut self, label: impl Into<String>) -> Self {
        let label = label.into();
        for s in &mut self.sub_reports {
            s.provenance.extrinsic = label.clone();
        }
        self.provenance.extrinsic = label;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// This report followed by its sub-reports, depth first.
    pub fn flatten(&self) -> Vec<&InequalityReport> {
        let mut out = vec![self];
        for s in &self.sub_reports {
            out.extend(s.flatten());
        }
        out
    }

    pub fn param_f64(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(Value::as_f64)
    }
}

/// Accumulates named terms; each side is the sum of its terms in insertion
/// order, so the breakdown recombines exactly.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    id: String,
    direction: Direction,
    params: IndexMap<String, Value>,
    terms: Terms,
    spectrum: String,
    extrinsic: String,
    exploratory: bool,
    notes: Vec<String>,
    sub_reports: Vec<InequalityReport>,
}

impl ReportBuilder {
    pub fn new(id: &str, direction: Direction) -> Self {
        Self {
            id: id.to_string(),
            direction,
            params: IndexMap::new(),
            terms: Terms::default(),
            spectrum: String::new(),
            extrinsic: "caller_constants".to_string(),
            exploratory: false,
            notes: Vec::new(),
            sub_reports: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn lhs(mut self, name: impl Into<String>, value: f64) -> Self {
        insert_term(&mut self.terms.lhs, name.into(), value);
        self
    }

    pub fn rhs(mut self, name: impl Into<String>, value: f64) -> Self {
        insert_term(&mut self.terms.rhs, name.into(), value);
        self
    }

    pub fn spectrum(mut self, label: impl Into<String>) -> Self {
        self.spectrum = label.into();
        self
    }

    pub fn extrinsic(mut self, label: impl Into<String>) -> Self {
        self.extrinsic = label.into();
        self
    }

    pub fn exploratory(mut self) -> Self {
        self.exploratory = true;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn sub_report(mut self, r: InequalityReport) -> Self {
        self.sub_reports.push(r);
        self
    }

    pub fn build(self) -> InequalityReport {
        let lhs = sum_in_order(&self.terms.lhs);
        let rhs = sum_in_order(&self.terms.rhs);
        let margin = match self.direction {
            Direction::Upper => rhs - lhs,
            Direction::Lower => lhs - rhs,
        };
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        InequalityReport {
            ineq_id: self.id,
            direction: self.direction,
            params: self.params,
            lhs,
            rhs,
            margin,
            satisfied: margin >= -SATISFIED_REL_TOL * scale,
            equality: margin.abs() <= EQUALITY_REL_TOL * scale,
            terms: self.terms,
            provenance: Provenance { spectrum: self.spectrum, extrinsic: self.extrinsic },
            exploratory: self.exploratory,
            notes: self.notes,
            sub_reports: self.sub_reports,
        }
    }
}

/// Repeated names get a numeric suffix so no term is overwritten.
fn insert_term(map: &mut IndexMap<String, f64>, name: String, value: f64) {
    if !map.contains_key(&name) {
        map.insert(name, value);
        return;
    }
    let mut i = 2;
    while map.contains_key(&format!("{name}#{i}")) {
        i += 1;
    }
    map.insert(format!("{name}#{i}"), value);
}

pub fn sum_in_order(terms: &IndexMap<String, f64>) -> f64 {
    terms.values().fold(0.0, |acc, v| acc + v)
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    ineq_id: &'a str,
    direction: &'a str,
    lhs: String,
    rhs: String,
    margin: String,
    satisfied: bool,
    equality: bool,
    exploratory: bool,
    spectrum: &'a str,
    extrinsic: &'a str,
    params: String,
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV row per report, sub-reports included.
pub fn reports_to_csv(reports: &[InequalityReport]) -> crate::error::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports.iter().flat_map(|r| r.flatten()) {
        let row = CsvRow {
            ineq_id: &r.ineq_id,
            direction: match r.direction {
                Direction::Upper => "upper",
                Direction::Lower => "lower",
            },
            lhs: fmt17(r.lhs),
            rhs: fmt17(r.rhs),
            margin: fmt17(r.margin),
            satisfied: r.satisfied,
            equality: r.equality,
            exploratory: r.exploratory,
            spectrum: &r.provenance.spectrum,
            extrinsic: &r.provenance.extrinsic,
            params: serde_json::to_string(&r.params).unwrap_or_default(),
        };
        w.serialize(row).map_err(|e| crate::error::Error::InvalidRequest(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::Error::InvalidRequest(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_and_flags() {
        let r = ReportBuilder::new("t", Direction::Upper).lhs("a", 1.0).rhs("b", 3.0).build();
        assert_eq!(r.margin, 2.0);
        assert!(r.satisfied && !r.equality);
        let r = ReportBuilder::new("t", Direction::Lower).lhs("a", 1.0).rhs("b", 3.0).build();
        assert_eq!(r.margin, -2.0);
        assert!(!r.satisfied);
        let r = ReportBuilder::new("t", Direction::Upper).lhs("a", 4.0).rhs("b", 4.0 + 1e-12).build();
        assert!(r.satisfied && r.equality);
        let r = ReportBuilder::new("t", Direction::Upper).lhs("a", 4.0 + 1e-11).rhs("b", 4.0).build();
        assert!(r.satisfied, "within absolute tolerance");
    }

    #[test]
    fn duplicate_term_names_are_kept() {
        let r = ReportBuilder::new("t", Direction::Upper).lhs("g", 1.0).lhs("g", 2.0).build();
        assert_eq!(r.terms.lhs.len(), 2);
        assert_eq!(r.lhs, 3.0);
    }

    #[test]
    fn csv_has_one_row_per_report() {
        let sub = ReportBuilder::new("s", Direction::Upper).lhs("a", 1.0).rhs("b", 1.0).build();
        let r = ReportBuilder::new("t", Direction::Upper)
            .param("j", 1)
            .lhs("a", 1.0)
            .rhs("b", 2.0)
            .sub_report(sub)
            .build();
        let csv = reports_to_csv(&[r]).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().contains("1.0000000000000000e0"));
    }
}
