use std::str::FromStr;

use motclass::{Coeff, CountVal, SymbolicClass};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::closed::{ClosedSeries, GeomFactor, Strand, Support};
use crate::trunc::{BoundMode, TruncSeries};
use crate::SeriesError;

/// Text form of a coefficient, as used in series files.
pub trait CoeffText: Coeff {
    fn to_text(&self) -> String;
    /// Parse in the realization of `like` (same field for counts).
    fn from_text(s: &str, like: &Self) -> Result<Self, SeriesError>;
    /// The prime of a count realization.
    fn field_q(&self) -> Option<u64>;
}

impl CoeffText for SymbolicClass {
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn from_text(s: &str, _like: &Self) -> Result<Self, SeriesError> {
        SymbolicClass::from_str(s).map_err(|e| SeriesError::Parse(e.to_string()))
    }

    fn field_q(&self) -> Option<u64> {
        None
    }
}

impl CoeffText for CountVal {
    /// A constant prints as one rational, otherwise the twist vector.
    fn to_text(&self) -> String {
        match self.values() {
            [c] => c.to_string(),
            _ => self.to_string(),
        }
    }

    fn from_text(s: &str, like: &Self) -> Result<Self, SeriesError> {
        let s = s.trim();
        let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(s);
        let v: Result<Vec<BigRational>, _> = inner.split(',').map(|x| BigRational::from_str(x.trim())).collect();
        let v = v.map_err(|e| SeriesError::Parse(format!("count value '{s}': {e}")))?;
        Ok(CountVal::new(like.field(), v))
    }

    fn field_q(&self) -> Option<u64> {
        Some(self.q())
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct EntryDoc {
    exp: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct FactorDoc {
    m: i64,
    n: Vec<u32>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct SupportDoc {
    period: Vec<u32>,
    residue: Vec<u32>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct StrandDoc {
    coeff: String,
    b: Vec<u32>,
    factors: Vec<FactorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    support: Option<SupportDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
struct SeriesDoc {
    vars: Vec<String>,
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound_mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<EntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strands: Option<Vec<StrandDoc>>,
}

/// A series read from a file, in whichever form it was stored.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySeries<C> {
    Trunc(TruncSeries<C>),
    Closed(ClosedSeries<C>),
}

/// Header fields of a series file: the stored form and the prime, if any.
pub fn peek(s: &str) -> Result<(String, Option<u64>), SeriesError> {
    let d: SeriesDoc = serde_json::from_str(s).map_err(|e| SeriesError::Parse(e.to_string()))?;
    Ok((d.mode, d.q))
}

fn mode_name(m: BoundMode) -> &'static str {
    match m {
        BoundMode::Total => "total",
        BoundMode::Componentwise => "componentwise",
    }
}

fn to_string(d: &SeriesDoc) -> String {
    serde_json::to_string_pretty(d).expect("series documents always serialize")
}

pub fn trunc_to_json<C: CoeffText>(a: &TruncSeries<C>, like: &C) -> String {
    to_string(&SeriesDoc {
        vars: a.vars.clone(),
        mode: "trunc".into(),
        q: like.field_q(),
        degree_bound: Some(a.bound),
        bound_mode: Some(mode_name(a.mode).into()),
        entries: Some(a.iter().map(|(n, c)| EntryDoc { exp: n.clone(), coeff: c.to_text() }).collect()),
        strands: None,
    })
}

pub fn closed_to_json<C: CoeffText>(a: &ClosedSeries<C>, like: &C) -> String {
    let strands = a
        .strands
        .iter()
        .map(|s| StrandDoc {
            coeff: s.coeff.to_text(),
            b: s.b.clone(),
            factors: s.factors.iter().map(|f| FactorDoc { m: f.m, n: f.n.clone() }).collect(),
            support: s.support.as_ref().map(|p| SupportDoc { period: p.period.clone(), residue: p.residue.clone() }),
        })
        .collect();
    to_string(&SeriesDoc {
        vars: a.vars.clone(),
        mode: "closed".into(),
        q: like.field_q(),
        degree_bound: None,
        bound_mode: None,
        entries: None,
        strands: Some(strands),
    })
}

fn check_len(what: &str, v: &[u32], r: usize) -> Result<(), SeriesError> {
    if v.len() != r {
        return Err(SeriesError::Parse(format!("{what} has length {}, expected {r}", v.len())));
    }
    Ok(())
}

pub fn from_json<C: CoeffText>(s: &str, like: &C) -> Result<AnySeries<C>, SeriesError> {
    let d: SeriesDoc = serde_json::from_str(s).map_err(|e| SeriesError::Parse(e.to_string()))?;
    if let (Some(a), Some(b)) = (d.q, like.field_q()) {
        if a != b {
            return Err(SeriesError::Parse(format!("file is over q = {a}, expected q = {b}")));
        }
    }
    let r = d.vars.len();
    match d.mode.as_str() {
        "trunc" => {
            let mode = match d.bound_mode.as_deref().unwrap_or("total") {
                "total" => BoundMode::Total,
                "componentwise" => BoundMode::Componentwise,
                m => return Err(SeriesError::Parse(format!("unknown bound mode '{m}'"))),
            };
            let bound = d.degree_bound.ok_or_else(|| SeriesError::Parse("missing degree_bound".into()))?;
            let mut t = TruncSeries::with_mode(d.vars, bound, mode);
            for e in d.entries.unwrap_or_default() {
                check_len("exponent", &e.exp, r)?;
                if !t.in_bound(&e.exp) {
                    return Err(SeriesError::Parse(format!("exponent {:?} outside the degree bound", e.exp)));
                }
                t.add_at(e.exp, &C::from_text(&e.coeff, like)?);
            }
            Ok(AnySeries::Trunc(t))
        }
        "closed" => {
            let mut c = ClosedSeries::new(d.vars);
            for s in d.strands.unwrap_or_default() {
                check_len("strand exponent", &s.b, r)?;
                let mut fs = Vec::new();
                for f in s.factors {
                    check_len("factor exponent", &f.n, r)?;
                    if f.n.iter().all(|&k| k == 0) {
                        return Err(SeriesError::Parse("factor with zero exponent".into()));
                    }
                    fs.push(GeomFactor::new(f.m, f.n));
                }
                let mut st = Strand::new(C::from_text(&s.coeff, like)?, s.b, fs);
                if let Some(p) = s.support {
                    check_len("support period", &p.period, r)?;
                    check_len("support residue", &p.residue, r)?;
                    st = st.with_support(Support { period: p.period, residue: p.residue });
                }
                c.push(st);
            }
            Ok(AnySeries::Closed(c))
        }
        m => Err(SeriesError::Parse(format!("unknown series mode '{m}'"))),
    }
}

/// One row per stored coefficient: the exponents, then the coefficient text.
pub fn trunc_to_csv<C: CoeffText>(a: &TruncSeries<C>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = a.vars.clone();
    header.push("coeff".into());
    w.write_record(&header).expect("writing to memory");
    for (n, c) in a.iter() {
        let mut row: Vec<String> = n.iter().map(|k| k.to_string()).collect();
        row.push(c.to_text());
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}
