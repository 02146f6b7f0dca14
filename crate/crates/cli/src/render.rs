//! Human-readable summaries.

use series::{ClosedSeries, CoeffText, TruncSeries};

fn monomial(vars: &[String], n: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(n)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    parts.join(" ")
}

fn l_power(m: i64) -> String {
    match m {
        0 => String::new(),
        1 => "L ".into(),
        _ => format!("L^{m} "),
    }
}

/// One line per strand: `c * T^b * prod x / (1 - x)`.
pub fn closed_text<C: CoeffText>(z: &ClosedSeries<C>) -> String {
    if z.strands.is_empty() {
        return "0\n".into();
    }
    let mut out = String::new();
    for s in &z.strands {
        let mut line = format!("[{}]", s.coeff.to_text());
        let b = monomial(&z.vars, &s.b);
        if !b.is_empty() {
            line.push_str(&format!(" {b}"));
        }
        for f in &s.factors {
            let x = format!("{}{}", l_power(f.m), monomial(&z.vars, &f.n));
            line.push_str(&format!(" * {x} / (1 - {x})"));
        }
        if let Some(p) = &s.support {
            line.push_str(&format!("  on n = {:?} mod {:?}", p.residue, p.period));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// The stored coefficients as an aligned table.
pub fn trunc_table<C: CoeffText>(t: &TruncSeries<C>) -> String {
    let mut out = format!("{}  coeff\n", t.vars.join(" "));
    for (n, c) in t.iter() {
        let e: Vec<String> = n.iter().map(|k| k.to_string()).collect();
        out.push_str(&format!("{}  {}\n", e.join(" "), c.to_text()));
    }
    out
}
