//! `motzeta`: local zeta functions of polynomials over finite fields, their
//! products and limits, and exact checks of the identities between them.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boxast::{boxast_multi, boxast_uni, from_seq, PhiOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use motclass::{parse_poly, CountVal, Fp, MotError, Poly, SymbolicClass, DEFAULT_BUDGET};
use series::serial::{closed_to_json, from_json, peek, trunc_to_csv, trunc_to_json, AnySeries, CoeffText};
use series::{BoundMode, ClosedSeries, SeriesCoeff, SeriesError, TruncSeries};
use thiserror::Error;
use verify::report::{entries_csv, reports_to_json, summary_csv};
use verify::{default_q, fit_zeta, CheckCase, CheckReport, VerifyError};
use zeta::{
    bind_closed, dl_eval, dl_trunc, multizeta_trunc, zeta_fit, zeta_trunc, BasePoint, ConeSpec, ResolutionData,
    ZetaError,
};

const GRAMMAR: &str = "\
Polynomials: variables [a-z][a-z0-9]*, integer literals, + - * ^ and
parentheses. ^ binds tightest and is right-associative; - is binary or
unary. Example: \"x^2 + y^3\", \"x*(x+1)\".

Series files are JSON with fields vars, mode (trunc | closed), q (absent
for symbolic coefficients), and either degree_bound, bound_mode and
entries [{exp, coeff}], or strands [{coeff, b, factors [{m, n}],
support}]. A count coefficient is a rational or a twist vector
[c_0, ..., c_{N-1}].

Exit status: 0 success, 1 usage or input error, 2 budget exceeded or no
limit, 3 a check failed.";

#[derive(Parser)]
#[command(name = "motzeta", version, about = "Motivic zeta functions at finite-field counts", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local zeta function Z_f(T) at the origin
    Zeta(ZetaArgs),
    /// Multiple zeta function of a family f, g, h at the origin
    Mzeta(FamilyArgs),
    /// The product zeta_f(T) ⊠∗ zeta_g(U) (⊠∗ zeta_h(V))
    Boxast(FamilyArgs),
    /// lim_{T -> infinity} of a series file, with all variables equal
    Limit(LimitArgs),
    /// Denef-Loeser formula for resolution data
    DlEval(DlArgs),
    /// Check the reflexion formula for f, g (or the three-function identity with h)
    Reflexion(FamilyArgs),
    /// Check the Thom-Sebastiani formula for f = x^a, g = y^b
    Thomseb(ThomsebArgs),
    /// Run check cases: the standard suite, or cases from a JSON file
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Trunc,
    Closed,
}

#[derive(Args)]
struct Output {
    /// where to write the artifact; without it the artifact goes to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// enumeration budget, in candidate points
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct ZetaArgs {
    #[arg(long)]
    f: String,
    /// prime field; default: smallest prime q with every term degree dividing q - 1
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 12)]
    degree: u32,
    #[arg(long, value_enum, default_value_t = Mode::Trunc)]
    mode: Mode,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    /// total degree bound; default 8 for mzeta, 6 otherwise
    #[arg(long)]
    degree: Option<u32>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct LimitArgs {
    /// series file
    #[arg(long = "in")]
    input: PathBuf,
    /// largest strand period tried when fitting a truncated series
    #[arg(long, default_value_t = 12)]
    period: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DlArgs {
    /// resolution data file
    #[arg(long = "in")]
    input: PathBuf,
    /// cone decomposition file
    #[arg(long)]
    cone: Option<PathBuf>,
    /// specialize to counts over F_q
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 8)]
    degree: u32,
    #[arg(long, value_enum, default_value_t = Mode::Closed)]
    mode: Mode,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ThomsebArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
    #[arg(long)]
    q: Option<u64>,
    /// symbolic classes instead of counts (f = x, g = y only)
    #[arg(long)]
    symbolic: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SuiteArgs {
    /// JSON list of check cases; default: the standard suite
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// record wall-clock times in the reports
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Failed(_) => 3,
        }
    }
}

impl From<MotError> for CliError {
    fn from(e: MotError) -> Self {
        match e {
            MotError::FieldTooLarge { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::NotLimitNormal(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            ZetaError::Mot(m) => m.into(),
            ZetaError::Series(s) => s.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Write the artifact to `--out` and the summary to stdout, or the artifact
/// to stdout and the summary to stderr.
fn emit(out: &Option<PathBuf>, artifact: &str, summary: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            fs::write(p, artifact).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            print!("{summary}");
        }
        None => {
            print!("{artifact}");
            if !artifact.ends_with('\n') {
                println!();
            }
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn poly(s: &str) -> Result<Poly, CliError> {
    Ok(parse_poly(s)?)
}

fn field_for(q: Option<u64>, polys: &[Poly]) -> Result<Fp, CliError> {
    Ok(Fp::new(q.unwrap_or_else(|| default_q(polys)))?)
}

fn trunc_artifact<C: CoeffText>(t: &TruncSeries<C>, like: &C, format: Format) -> String {
    match format {
        Format::Json => trunc_to_json(t, like),
        Format::Csv => trunc_to_csv(t),
    }
}

fn closed_artifact<C: CoeffText>(z: &ClosedSeries<C>, like: &C, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(closed_to_json(z, like)),
        Format::Csv => Err(CliError::Usage("csv output is for truncated series".into())),
    }
}

fn cmd_zeta(a: &ZetaArgs) -> Result<(), CliError> {
    let f = poly(&a.f)?;
    let fld = field_for(a.q, std::slice::from_ref(&f))?;
    let zero = CountVal::zero(fld);
    let budget = a.output.budget;
    let mut summary = format!("Z_f for f = {f} over F_{}\n", fld.p);
    match a.mode {
        Mode::Trunc => {
            let t = zeta_trunc(&f, &BasePoint::Origin, fld, a.degree, budget)?;
            summary.push_str(&render::trunc_table(&t));
            match fit_zeta(&f, fld, budget) {
                Ok(z) => summary.push_str(&format!(
                    "closed form ({}), fitted from {} orders:\n{}",
                    z.closed.classify(),
                    z.degree,
                    render::closed_text(&z.closed)
                )),
                Err(e) if e.is_budget() => return Err(e.into()),
                Err(e) => summary.push_str(&format!("no closed form: {e}\n")),
            }
            emit(&a.output.out, &trunc_artifact(&t, &zero, a.output.format), &summary)
        }
        Mode::Closed => {
            let z = fit_zeta(&f, fld, budget)?;
            summary.push_str(&format!(
                "fitted from {} orders ({}):\n{}",
                z.degree,
                z.closed.classify(),
                render::closed_text(&z.closed)
            ));
            emit(&a.output.out, &closed_artifact(&z.closed, &zero, a.output.format)?, &summary)
        }
    }
}

fn family(a: &FamilyArgs) -> Result<Vec<Poly>, CliError> {
    let mut out = vec![poly(&a.f)?];
    match (&a.g, &a.h) {
        (Some(g), h) => {
            out.push(poly(g)?);
            if let Some(h) = h {
                out.push(poly(h)?);
            }
        }
        (None, Some(_)) => return Err(CliError::Usage("--h needs --g".into())),
        (None, None) => {}
    }
    Ok(out)
}

fn cmd_mzeta(a: &FamilyArgs) -> Result<(), CliError> {
    let fam = family(a)?;
    let fld = field_for(a.q, &fam)?;
    let t = multizeta_trunc(&fam, fld, a.degree.unwrap_or(8), a.output.budget)?;
    let names: Vec<String> = fam.iter().map(|f| f.to_string()).collect();
    let summary = format!("zeta_f for f = ({}) over F_{}\n{}", names.join(", "), fld.p, render::trunc_table(&t));
    emit(&a.output.out, &trunc_artifact(&t, &CountVal::zero(fld), a.output.format), &summary)
}

fn cmd_boxast(a: &FamilyArgs) -> Result<(), CliError> {
    let fam = family(a)?;
    if fam.len() < 2 {
        return Err(CliError::Usage("boxast needs --f and --g".into()));
    }
    let fld = field_for(a.q, &fam)?;
    let degree = a.degree.unwrap_or(6);
    let fits = fam.iter().map(|f| fit_zeta(f, fld, a.output.budget)).collect::<Result<Vec<_>, _>>()?;
    let vars = ["T", "U", "V"];
    let prod = if fits.len() == 2 {
        boxast_uni(&fits[0].seq, &fits[1].seq, vars[0], vars[1])?
    } else {
        let mut acc = from_seq(&fits[0].seq, vars[0]);
        for (z, v) in fits[1..].iter().zip(&vars[1..]) {
            acc = boxast_multi(&acc, &from_seq(&z.seq, v), PhiOptions::default())?;
        }
        acc
    };
    let t = prod.expand(degree, BoundMode::Total);
    let names: Vec<String> = fam.iter().map(|f| f.to_string()).collect();
    let summary = format!("⊠∗ of the zeta functions of {} over F_{}\n{}", names.join(", "), fld.p, render::trunc_table(&t));
    emit(&a.output.out, &trunc_artifact(&t, &CountVal::zero(fld), a.output.format), &summary)
}

fn limit_of<C: CoeffText + SeriesCoeff>(doc: &str, like: &C, period: u32) -> Result<String, CliError> {
    let (lim, how) = match from_json(doc, like)? {
        AnySeries::Closed(z) => (z.diagonal_seq(like).lim()?, "closed form".to_string()),
        AnySeries::Trunc(t) => {
            let t = if t.nvars() == 1 { t } else { t.diagonal("T") };
            let z = zeta_fit(&t, like, period, 1)?;
            (z.to_seq(like)?.lim()?, format!("fitted from {} orders", t.bound))
        }
    };
    Ok(format!("{}\n", lim.to_text()) + &format!("# {how}; S = -lim = {}\n", lim.neg().to_text()))
}

fn cmd_limit(a: &LimitArgs) -> Result<(), CliError> {
    let doc = read(&a.input)?;
    let text = match peek(&doc)?.1 {
        Some(q) => limit_of(&doc, &CountVal::zero(Fp::new(q)?), a.period)?,
        None => limit_of(&doc, &SymbolicClass::zero(), a.period)?,
    };
    let (value, note) = text.split_once('\n').expect("two lines");
    emit(&a.out, &format!("{value}\n"), note)
}

fn cmd_dl_eval(a: &DlArgs) -> Result<(), CliError> {
    let res = ResolutionData::from_json(&read(&a.input)?)?;
    let cone = match &a.cone {
        Some(p) => Some(ConeSpec::from_json(&read(p)?)?),
        None => None,
    };
    let z = dl_eval(&res, cone.as_ref())?;
    let fmt = a.output.format;
    match a.q {
        None => {
            let like = SymbolicClass::zero();
            let summary = format!("Denef-Loeser formula:\n{}", render::closed_text(&z));
            let art = match a.mode {
                Mode::Closed => closed_artifact(&z, &like, fmt)?,
                Mode::Trunc => trunc_artifact(&dl_trunc(&res, cone.as_ref(), a.degree)?, &like, fmt),
            };
            emit(&a.output.out, &art, &summary)
        }
        Some(q) => {
            let fld = Fp::new(q)?;
            let like = CountVal::zero(fld);
            let c = bind_closed(&z, &res.binding()?, fld, a.output.budget)?;
            let summary = format!("Denef-Loeser formula over F_{q}:\n{}", render::closed_text(&c));
            let art = match a.mode {
                Mode::Closed => closed_artifact(&c, &like, fmt)?,
                Mode::Trunc => trunc_artifact(&c.expand(a.degree, BoundMode::Total), &like, fmt),
            };
            emit(&a.output.out, &art, &summary)
        }
    }
}

/// A single check writes its report, or its entries as CSV; a suite writes
/// the list of reports, or one CSV row per report.
fn report_artifact(reports: &[CheckReport], format: Format, suite: bool) -> String {
    match (format, reports, suite) {
        (Format::Json, [r], false) => r.to_json() + "\n",
        (Format::Csv, [r], false) => entries_csv(r),
        (Format::Json, _, _) => reports_to_json(reports) + "\n",
        (Format::Csv, _, _) => summary_csv(reports),
    }
}

fn finish(reports: &[CheckReport], out: &Output, suite: bool) -> Result<(), CliError> {
    let mut summary = String::new();
    for r in reports {
        summary.push_str(&r.summary());
        summary.push('\n');
        for e in r.failures() {
            summary.push_str(&format!("  {:?} {} lhs {} rhs {}\n", e.exponent, e.label, e.lhs, e.rhs));
        }
    }
    emit(&out.out, &report_artifact(reports, out.format, suite), &summary)?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} checks failed", reports.len())));
    }
    Ok(())
}

fn cmd_reflexion(a: &FamilyArgs) -> Result<(), CliError> {
    let fam = family(a)?;
    let fld = field_for(a.q, &fam)?;
    let d = a.degree.unwrap_or(6);
    let b = a.output.budget;
    let r = match fam.as_slice() {
        [f, g] => verify::reflexion::check_reflexion_uni(f, g, fld.p, d, b)?,
        [f, g, h] => verify::reflexion::check_three_function(f, g, h, fld.p, d, b)?,
        _ => return Err(CliError::Usage("reflexion needs --f and --g".into())),
    };
    finish(&[r], &a.output, false)
}

fn cmd_thomseb(a: &ThomsebArgs) -> Result<(), CliError> {
    let (f, g) = (poly(&a.f)?, poly(&a.g)?);
    let fld = field_for(a.q, &[f.clone(), g.clone()])?;
    let r = if a.symbolic {
        if f.to_string() != "x" || g.to_string() != "y" {
            return Err(CliError::Usage("--symbolic is for f = x, g = y".into()));
        }
        verify::nearby::check_thom_sebastiani_symbolic(fld.p, a.output.budget)?
    } else {
        verify::nearby::check_thom_sebastiani(&f, &g, fld.p, a.output.budget)?
    };
    finish(&[r], &a.output, false)
}

fn cmd_suite(a: &SuiteArgs) -> Result<(), CliError> {
    let cases: Vec<CheckCase> = match &a.input {
        Some(p) => serde_json_cases(&read(p)?)?,
        None => verify::suite(),
    };
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (c, r) in cases.iter().zip(verify::run_cases(&cases, a.output.budget, a.timing)) {
        match r {
            Ok(rs) => reports.extend(rs),
            Err(e) => errors.push((c.id, e)),
        }
    }
    for (id, e) in &errors {
        eprintln!("{id}: {e}");
    }
    finish(&reports, &a.output, true)?;
    match errors.iter().find(|(_, e)| e.is_budget()).or(errors.first()) {
        Some((_, e)) => Err(e.clone().into()),
        None => Ok(()),
    }
}

fn serde_json_cases(s: &str) -> Result<Vec<CheckCase>, CliError> {
    verify::case::cases_from_json(s).map_err(CliError::from)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.cmd {
        Command::Zeta(a) => cmd_zeta(a),
        Command::Mzeta(a) => cmd_mzeta(a),
        Command::Boxast(a) => cmd_boxast(a),
        Command::Limit(a) => cmd_limit(a),
        Command::DlEval(a) => cmd_dl_eval(a),
        Command::Reflexion(a) => cmd_reflexion(a),
        Command::Thomseb(a) => cmd_thomseb(a),
        Command::Suite(a) => cmd_suite(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
