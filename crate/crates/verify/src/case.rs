//! Check cases: what to run, and the standard suite.

use std::time::Instant;

use boxast::PhiOptions;
use motclass::{parse_poly, Poly};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fits::default_q;
use crate::nearby::{
    check_commutation, check_commutation_counts, check_lm23, check_thom_sebastiani, check_thom_sebastiani_symbolic,
};
use crate::phi::{check_phi_roundtrip, check_phi_zeta};
use crate::reflexion::{check_order_splits, check_reflexion_multi, check_reflexion_uni, check_three_function};
use crate::report::{CheckId, CheckReport, Realization};
use crate::VerifyError;

/// Samples in the random `Phi` round trip.
pub const PHI_SAMPLES: usize = 50;

/// One identity on one family of inputs, over a list of fields.
///
/// `families` holds polynomial strings, one inner list per family. For
/// `commutation` the single family lists action orders instead, and for
/// `phi-auto` no families means the random round trip with `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCase {
    pub id: CheckId,
    #[serde(default)]
    pub families: Vec<Vec<String>>,
    /// empty: the default `q` of the inputs
    #[serde(default)]
    pub q: Vec<u64>,
    pub degree: u32,
    #[serde(default)]
    pub realization: Realization,
    #[serde(default)]
    pub seed: u64,
}

impl CheckCase {
    pub fn new(id: CheckId, families: &[&[&str]], q: &[u64], degree: u32) -> Self {
        Self {
            id,
            families: families.iter().map(|f| f.iter().map(|s| s.to_string()).collect()).collect(),
            q: q.to_vec(),
            degree,
            realization: Realization::Count,
            seed: 0,
        }
    }

    pub fn symbolic(mut self) -> Self {
        self.realization = Realization::Symbolic;
        self
    }

    fn polys(&self) -> Result<Vec<Vec<Poly>>, VerifyError> {
        self.families.iter().map(|f| f.iter().map(|s| Ok(parse_poly(s)?)).collect()).collect()
    }

    fn fields(&self, polys: &[Vec<Poly>]) -> Vec<u64> {
        if self.q.is_empty() {
            let all: Vec<Poly> = polys.iter().flatten().cloned().collect();
            vec![default_q(&all)]
        } else {
            self.q.clone()
        }
    }

    fn orders(&self) -> Result<Vec<u64>, VerifyError> {
        match self.families.first() {
            None => Ok(vec![1, 2, 3]),
            Some(f) => f
                .iter()
                .map(|s| s.trim().parse().map_err(|_| VerifyError::Invalid(format!("'{s}' is not an action order"))))
                .collect(),
        }
    }
}

fn functions<const N: usize>(id: CheckId, polys: &[Vec<Poly>]) -> Result<[Poly; N], VerifyError> {
    let flat: Vec<Poly> = polys.iter().flatten().cloned().collect();
    if polys.len() != N || polys.iter().any(|f| f.len() != 1) {
        return Err(VerifyError::Invalid(format!("{id} takes {N} single functions")));
    }
    Ok(flat.try_into().expect("length checked"))
}

fn run_one(case: &CheckCase, polys: &[Vec<Poly>], q: u64, budget: u64) -> Result<CheckReport, VerifyError> {
    let d = case.degree;
    match (case.id, case.realization) {
        (CheckId::ReflexionUni, Realization::Count) => {
            let [f, g] = functions(case.id, polys)?;
            check_reflexion_uni(&f, &g, q, d, budget)
        }
        (CheckId::OrderSplits, Realization::Count) => {
            let [f, g] = functions(case.id, polys)?;
            check_order_splits(&f, &g, q, d, budget)
        }
        (CheckId::ReflexionMulti, Realization::Count) => {
            check_reflexion_multi(polys, q, d, budget, PhiOptions::default())
        }
        (CheckId::ThreeFunction, Realization::Count) => {
            let [f, g, h] = functions(case.id, polys)?;
            check_three_function(&f, &g, &h, q, d, budget)
        }
        (CheckId::ThomSebastiani, Realization::Count) => {
            let [f, g] = functions(case.id, polys)?;
            check_thom_sebastiani(&f, &g, q, budget)
        }
        (CheckId::ThomSebastiani, Realization::Symbolic) => {
            let [f, g] = functions(case.id, polys)?;
            if f.to_string() != "x" || g.to_string() != "y" {
                return Err(VerifyError::Invalid("the symbolic Thom-Sebastiani check is for f = x, g = y".into()));
            }
            check_thom_sebastiani_symbolic(q, budget)
        }
        (CheckId::Commutation, Realization::Symbolic) => check_commutation(&case.orders()?),
        (CheckId::Commutation, Realization::Count) => check_commutation_counts(&case.orders()?, q, budget),
        (CheckId::PhiAuto, Realization::Count) if polys.is_empty() => {
            check_phi_roundtrip(PHI_SAMPLES, case.seed, q, d)
        }
        (CheckId::PhiAuto, Realization::Count) => {
            if polys.len() != 1 {
                return Err(VerifyError::Invalid("phi-auto takes one family".into()));
            }
            check_phi_zeta(&polys[0], q, d, budget)
        }
        (CheckId::Lm23, Realization::Count) => {
            let [f, g] = functions(case.id, polys)?;
            check_lm23(&f, &g, q, budget)
        }
        (id, Realization::Symbolic) => Err(VerifyError::Invalid(format!("{id} has no symbolic realization"))),
    }
}

/// One report per field of the case, in the order of `case.q`. With
/// `timing` each report records its wall-clock time.
pub fn run_case(case: &CheckCase, budget: u64, timing: bool) -> Result<Vec<CheckReport>, VerifyError> {
    let polys = if case.id == CheckId::Commutation { Vec::new() } else { case.polys()? };
    let fields = match (case.id, case.realization) {
        (CheckId::Commutation, Realization::Symbolic) => vec![0],
        (CheckId::Commutation, _) if case.q.is_empty() => vec![7],
        (CheckId::PhiAuto, _) if polys.is_empty() && case.q.is_empty() => vec![7],
        _ => case.fields(&polys),
    };
    fields
        .into_iter()
        .map(|q| {
            let t = Instant::now();
            let mut r = run_one(case, &polys, q, budget)?;
            if timing {
                r.wall_ms = Some(t.elapsed().as_millis() as u64);
            }
            Ok(r)
        })
        .collect()
}

/// Cases run concurrently; the reports come back in case order.
pub fn run_cases(cases: &[CheckCase], budget: u64, timing: bool) -> Vec<Result<Vec<CheckReport>, VerifyError>> {
    cases.par_iter().map(|c| run_case(c, budget, timing)).collect()
}

/// Monomial pairs the standard suite runs on.
pub const PAIRS: [(&str, &str); 4] = [("x", "y"), ("x^2", "y^2"), ("x^2", "y^3"), ("x^3", "y^3")];

/// The standard suite.
pub fn suite() -> Vec<CheckCase> {
    use CheckId::*;
    let mut out = Vec::new();
    for (f, g) in PAIRS {
        out.push(CheckCase::new(ReflexionUni, &[&[f], &[g]], &[7, 13], 6));
    }
    for (f, g) in PAIRS {
        out.push(CheckCase::new(OrderSplits, &[&[f], &[g]], &[7, 13], 6));
    }
    for (f, g) in PAIRS {
        out.push(CheckCase::new(ThomSebastiani, &[&[f], &[g]], &[7, 13], 0));
    }
    out.push(CheckCase::new(ThomSebastiani, &[&["x"], &["y"]], &[7], 0).symbolic());
    out.push(CheckCase::new(Commutation, &[&["1", "2", "3"]], &[], 0).symbolic());
    out.push(CheckCase::new(Commutation, &[&["1", "2", "3"]], &[7, 13], 0));
    out.push(CheckCase::new(PhiAuto, &[], &[7], 10));
    out.push(CheckCase::new(PhiAuto, &[&["x", "y"]], &[5], 8));
    out.push(CheckCase::new(PhiAuto, &[&["x^2", "y^3"]], &[13], 8));
    for (f, g) in [("x", "y"), ("x^2", "y^3")] {
        out.push(CheckCase::new(Lm23, &[&[f], &[g]], &[7, 13], 0));
    }
    out.push(CheckCase::new(ReflexionMulti, &[&["x"], &["y"]], &[5], 5));
    out.push(CheckCase::new(ReflexionMulti, &[&["x", "y"], &["z"]], &[5], 4));
    out.push(CheckCase::new(ThreeFunction, &[&["x"], &["y"], &["z"]], &[5], 4));
    out
}

pub fn cases_to_json(cases: &[CheckCase]) -> String {
    serde_json::to_string_pretty(cases).expect("cases serialize")
}

pub fn cases_from_json(s: &str) -> Result<Vec<CheckCase>, VerifyError> {
    serde_json::from_str(s).map_err(|e| VerifyError::Invalid(format!("case json: {e}")))
}
