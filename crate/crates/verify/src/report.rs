//! Check reports and their JSON and CSV forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use series::CoeffText;

use crate::VerifyError;

/// The identities the harness knows how to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    ReflexionUni,
    ReflexionMulti,
    ThomSebastiani,
    Commutation,
    PhiAuto,
    Lm23,
    ThreeFunction,
    OrderSplits,
}

impl CheckId {
    pub const ALL: [CheckId; 8] = [
        CheckId::ReflexionUni,
        CheckId::ReflexionMulti,
        CheckId::ThomSebastiani,
        CheckId::Commutation,
        CheckId::PhiAuto,
        CheckId::Lm23,
        CheckId::ThreeFunction,
        CheckId::OrderSplits,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::ReflexionUni => "reflexion-uni",
            CheckId::ReflexionMulti => "reflexion-multi",
            CheckId::ThomSebastiani => "thom-sebastiani",
            CheckId::Commutation => "commutation",
            CheckId::PhiAuto => "phi-auto",
            CheckId::Lm23 => "lm23",
            CheckId::ThreeFunction => "three-function",
            CheckId::OrderSplits => "order-splits",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| VerifyError::Invalid(format!("unknown check id '{s}'")))
    }
}

/// Where both sides of an identity are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    /// twisted point counts over `F_q`
    #[default]
    Count,
    /// normal forms of symbolic classes
    Symbolic,
}

/// One compared value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub exponent: Vec<u32>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// A closed form obtained along the way, with its integrability class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitNote {
    pub name: String,
    pub class: String,
    pub strands: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: CheckId,
    pub case: String,
    pub realization: Realization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub entries: Vec<Entry>,
    #[serde(default)]
    pub fits: Vec<FitNote>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckReport {
    pub fn new(id: CheckId, case: impl Into<String>, realization: Realization, q: Option<u64>) -> Self {
        Self {
            id,
            case: case.into(),
            realization,
            q,
            entries: Vec::new(),
            fits: Vec::new(),
            notes: Vec::new(),
            wall_ms: None,
        }
    }

    pub fn push<C: CoeffText>(&mut self, exponent: Vec<u32>, label: impl Into<String>, lhs: &C, rhs: &C) {
        self.entries.push(Entry {
            exponent,
            label: label.into(),
            lhs: lhs.to_text(),
            rhs: rhs.to_text(),
            equal: lhs == rhs,
        });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Every entry equal, and at least one entry.
    pub fn passed(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.equal)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.equal)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, VerifyError> {
        serde_json::from_str(s).map_err(|e| VerifyError::Invalid(format!("report json: {e}")))
    }

    /// One line: status, id, case and the failure count.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let failed = self.failures().count();
        format!("{status} {} [{}] {}/{} equal", self.id, self.case, self.entries.len() - failed, self.entries.len())
    }
}

pub fn reports_to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

pub fn reports_from_json(s: &str) -> Result<Vec<CheckReport>, VerifyError> {
    serde_json::from_str(s).map_err(|e| VerifyError::Invalid(format!("report json: {e}")))
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    id: &'a str,
    case: &'a str,
    realization: &'a str,
    q: String,
    entries: usize,
    failed: usize,
    status: &'a str,
}

/// One CSV row per report.
pub fn summary_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        let failed = r.failures().count();
        w.serialize(SummaryRow {
            id: r.id.as_str(),
            case: &r.case,
            realization: match r.realization {
                Realization::Count => "count",
                Realization::Symbolic => "symbolic",
            },
            q: r.q.map(|q| q.to_string()).unwrap_or_default(),
            entries: r.entries.len(),
            failed,
            status: if r.passed() { "pass" } else { "fail" },
        })
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

/// The entries of one report as CSV.
pub fn entries_csv(report: &CheckReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["exponent", "label", "lhs", "rhs", "equal"]).expect("in-memory csv");
    for e in &report.entries {
        let exp: Vec<String> = e.exponent.iter().map(|x| x.to_string()).collect();
        w.write_record([exp.join(" ").as_str(), &e.label, &e.lhs, &e.rhs, if e.equal { "true" } else { "false" }])
            .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}
