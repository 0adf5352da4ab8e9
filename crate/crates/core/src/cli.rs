//! Command layer behind the `schlafli` binary.
//!
//! Every subcommand builds an [`OutputRecord`], which renders as a single JSON
//! document, CSV with a header row, or aligned text. Exit status is 0 on
//! success, 1 for usage errors, 2 for domain errors and 3 when a cross-check
//! fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Number, Value};

use crate::asymptotics::rogers_asymptotic;
use crate::bounds::{bounds_report, coxeter_bound, quantizer_bound, rogers_bound};
use crate::cheb::ChebyshevSeries;
use crate::identities::{identity_check_odd, TermPolicy};
use crate::oracle::oracle_f;
use crate::recurrence::QnSolution;
use crate::schlafli::SchlafliEvaluator;
use crate::{Error, LogScaledReal, Real, DEFAULT_ORDER};

/// Coefficient layout tag written into coefficient files: value is
/// `a₁/2 + Σ_{k≥2} a_k T_{k−1}(y)`.
pub const CONVENTION: &str = "Eq-2.6-halved-a1";

/// Relative accuracy reachable in binary64 whatever the series order.
pub const ACCURACY_CEILING: Real = 1e-11;

pub const PRECISION_NOTE: &str =
    "precision: binary64 arithmetic, relative accuracy ceiling about 1e-11 at any N";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "schlafli",
    version,
    about = "Schläfli function values, Chebyshev coefficients and packing bounds"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Group decimals in blocks of four (text output only).
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the output here instead of stdout.
    #[arg(long, value_name = "PATH", global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock time to the output.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regular companion q_n(x), normalized to q_n(n−1) = 1.
    Qn(QnArgs),
    /// Schläfli function f_n(x).
    #[command(name = "fn")]
    Fn(FnArgs),
    /// One row per n with the chosen columns.
    Table(TableArgs),
    /// Chebyshev coefficients of q_n.
    Coeffs(CoeffsArgs),
    /// Rogers, Coxeter and quantizer bounds.
    Bounds(BoundsArgs),
    /// Cross-checks against quadrature, identities and asymptotics.
    Xcheck(XcheckArgs),
}

#[derive(Debug, Args)]
pub struct QnArgs {
    #[arg(long = "n", required_unless_present = "from")]
    pub n: Option<u32>,
    /// Defaults to n.
    #[arg(long = "x")]
    pub x: Option<Real>,
    #[arg(long = "N", default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Evaluate a coefficient file from `coeffs --format json` instead of solving.
    #[arg(long, value_name = "PATH", conflicts_with = "n")]
    pub from: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FnArgs {
    #[arg(long = "n")]
    pub n: u32,
    /// Defaults to n.
    #[arg(long = "x")]
    pub x: Option<Real>,
    #[arg(long = "N", default_value_t = DEFAULT_ORDER)]
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Column {
    /// q_n(n)
    Q,
    /// q_n(n+1)
    QNext,
    /// log10 f_n(n)
    Log10F,
    Rogers,
    Coxeter,
    Quantizer,
}

impl Column {
    fn header(self) -> &'static str {
        match self {
            Column::Q => "q_n",
            Column::QNext => "q_n1",
            Column::Log10F => "log10_f_n",
            Column::Rogers => "rogers",
            Column::Coxeter => "coxeter",
            Column::Quantizer => "quantizer",
        }
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated dimensions.
    #[arg(long = "n", value_delimiter = ',', required = true, num_args = 1..)]
    pub ns: Vec<u32>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Column::Q, Column::QNext])]
    pub columns: Vec<Column>,
    #[arg(long = "N", default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Rogers bound without the unit-ball volume factor.
    #[arg(long)]
    pub no_vn_factor: bool,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long = "N", default_value_t = DEFAULT_ORDER)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Comma-separated dimensions.
    #[arg(long = "n", value_delimiter = ',', required = true, num_args = 1..)]
    pub ns: Vec<u32>,
    #[arg(long = "N", default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Rogers bound without the unit-ball volume factor.
    #[arg(long)]
    pub no_vn_factor: bool,
}

#[derive(Debug, Args)]
pub struct XcheckArgs {
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long = "N", default_value_t = DEFAULT_ORDER)]
    pub order: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => EXIT_DOMAIN,
            CliError::Io(_) | CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

/// One cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Null,
    Bool(bool),
    Int(i64),
    Real(Real),
    Log(LogScaledReal),
    Text(String),
}

impl From<Real> for Field {
    fn from(v: Real) -> Self {
        Field::Real(v)
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::Int(i64::from(v))
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<LogScaledReal> for Field {
    fn from(v: LogScaledReal) -> Self {
        Field::Log(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Qn,
    Fn,
    Table,
    Coeffs,
    Bounds,
    Xcheck,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Qn => "qn",
            Kind::Fn => "fn",
            Kind::Table => "table",
            Kind::Coeffs => "coeffs",
            Kind::Bounds => "bounds",
            Kind::Xcheck => "xcheck",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub kind: Kind,
    pub meta: Vec<(String, Field)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    /// Set for `coeffs`; its JSON form is the coefficient file itself.
    pub coefficients: Option<CoefficientFile>,
}

impl OutputRecord {
    fn new(kind: Kind, columns: &[&str]) -> Self {
        Self {
            kind,
            meta: Vec::new(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
            coefficients: None,
        }
    }

    fn meta(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.meta.push((key.to_owned(), value.into()));
        self
    }

    pub fn render(&self, format: Format, pretty: bool) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(pretty),
        }
    }

    pub fn to_json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("kind".into(), Value::String(self.kind.as_str().into()));
        if let Some(file) = &self.coefficients {
            if let Value::Object(fields) = serde_json::to_value(file).expect("serializable") {
                doc.extend(fields);
            }
            for (k, v) in &self.meta {
                doc.entry(k.clone()).or_insert_with(|| field_json(v));
            }
        } else {
            let meta: Map<String, Value> = self
                .meta
                .iter()
                .map(|(k, v)| (k.clone(), field_json(v)))
                .collect();
            doc.insert("meta".into(), Value::Object(meta));
            let rows = self
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.clone(), field_json(v)))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            doc.insert("rows".into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let is_log: Vec<bool> = (0..self.columns.len())
            .map(|i| {
                self.rows
                    .iter()
                    .any(|r| matches!(r.get(i), Some(Field::Log(_))))
            })
            .collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = Vec::new();
        for (c, &log) in self.columns.iter().zip(&is_log) {
            if log {
                header.push(format!("{c}_sign"));
                header.push(format!("{c}_log10"));
            } else {
                header.push(c.clone());
            }
        }
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            let mut cells = Vec::new();
            for (v, &log) in row.iter().zip(&is_log) {
                match (v, log) {
                    (Field::Log(l), _) => {
                        cells.push(l.sign.to_string());
                        cells.push(full_precision_text(l.log10_mag));
                    }
                    (_, true) => {
                        cells.push(String::new());
                        cells.push(String::new());
                    }
                    (v, false) => cells.push(field_csv(v)),
                }
            }
            w.write_record(&cells).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_text(&self, pretty: bool) -> String {
        let mut out = format!("{}\n", self.kind.as_str());
        for (k, v) in &self.meta {
            out.push_str(&format!("{k}: {}\n", field_text(v, pretty)));
        }
        if let Some(file) = &self.coefficients {
            out.push_str(&format!("err_estimate: {:e}\n", file.err_estimate));
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| field_text(v, pretty)).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([c.chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| {
            let parts: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect();
            format!("{}\n", parts.join("  ").trim_end())
        };
        out.push_str(&line(&self.columns));
        for r in &cells {
            out.push_str(&line(r));
        }
        out.push_str(PRECISION_NOTE);
        out.push('\n');
        out
    }
}

fn full_precision_text(v: Real) -> String {
    format!("{v:.16e}")
}

fn real_json(v: Real) -> Value {
    if v.is_finite() {
        Number::from_str(&full_precision_text(v)).map_or(Value::Null, Value::Number)
    } else {
        Value::Null
    }
}

fn field_json(v: &Field) -> Value {
    match v {
        Field::Null => Value::Null,
        Field::Bool(b) => Value::Bool(*b),
        Field::Int(i) => Value::from(*i),
        Field::Real(r) => real_json(*r),
        Field::Log(l) => {
            let mut m = Map::new();
            m.insert("sign".into(), Value::from(l.sign));
            m.insert("log10".into(), real_json(l.log10_mag));
            Value::Object(m)
        }
        Field::Text(s) => Value::String(s.clone()),
    }
}

fn field_csv(v: &Field) -> String {
    match v {
        Field::Null => String::new(),
        Field::Bool(b) => b.to_string(),
        Field::Int(i) => i.to_string(),
        Field::Real(r) => full_precision_text(*r),
        Field::Log(l) => l.to_string(),
        Field::Text(s) => s.clone(),
    }
}

fn field_text(v: &Field, pretty: bool) -> String {
    match v {
        Field::Null => "-".into(),
        Field::Real(r) if pretty => grouped(*r),
        Field::Real(r) if *r == 0.0 || (1e-4..1e6).contains(&r.abs()) => r.to_string(),
        Field::Real(r) => format!("{r:e}"),
        other => field_csv(other),
    }
}

/// Twelve decimals in blocks of four, `0.4632 5187 5064`; scientific outside
/// `[1e-4, 1e4)`.
pub fn grouped(v: Real) -> String {
    if !v.is_finite() || (v != 0.0 && !(1e-4..1e4).contains(&v.abs())) {
        return format!("{v:.11e}");
    }
    let s = format!("{v:.12}");
    let (int, frac) = s.split_once('.').expect("fixed notation");
    let blocks: Vec<&str> = frac
        .as_bytes()
        .chunks(4)
        .map(|c| std::str::from_utf8(c).expect("ascii digits"))
        .collect();
    format!("{int}.{}", blocks.join(" "))
}

fn serialize_real<S: Serializer>(v: &Real, s: S) -> Result<S::Ok, S::Error> {
    real_json(*v).serialize(s)
}

fn serialize_reals<S: Serializer>(v: &[Real], s: S) -> Result<S::Ok, S::Error> {
    v.iter()
        .map(|&r| real_json(r))
        .collect::<Vec<_>>()
        .serialize(s)
}

// Parsed from the literal digits with the standard library's correctly
// rounded conversion.
fn parse_number<E: serde::de::Error>(n: &Number) -> Result<Real, E> {
    n.to_string().parse().map_err(E::custom)
}

fn deserialize_real<'de, D: Deserializer<'de>>(d: D) -> Result<Real, D::Error> {
    parse_number(&Number::deserialize(d)?)
}

fn deserialize_reals<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Real>, D::Error> {
    Vec::<Number>::deserialize(d)?
        .iter()
        .map(parse_number)
        .collect()
}

/// Portable form of a `q_n` series; JSON round trips are bit-exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub n: u32,
    #[serde(rename = "N")]
    pub order: usize,
    #[serde(
        serialize_with = "serialize_reals",
        deserialize_with = "deserialize_reals"
    )]
    pub coeffs: Vec<Real>,
    #[serde(
        serialize_with = "serialize_real",
        deserialize_with = "deserialize_real"
    )]
    pub err_estimate: Real,
    pub convention: String,
}

impl CoefficientFile {
    pub fn from_solution(sol: &QnSolution) -> Self {
        Self {
            n: sol.n,
            order: sol.series.order(),
            coeffs: sol.series.coeffs().to_vec(),
            err_estimate: sol.err_estimate,
            convention: CONVENTION.to_owned(),
        }
    }

    pub fn to_solution(&self) -> crate::Result<QnSolution> {
        if self.convention != CONVENTION {
            return Err(Error::InvalidSeries(format!(
                "unknown coefficient convention {:?}",
                self.convention
            )));
        }
        if self.coeffs.len() != self.order {
            return Err(Error::Shape {
                left: self.order,
                right: self.coeffs.len(),
            });
        }
        if self.n < 4 {
            return Err(Error::Domain(format!(
                "coefficient files hold n >= 4, got {}",
                self.n
            )));
        }
        Ok(QnSolution {
            n: self.n,
            series: ChebyshevSeries::new(self.coeffs.clone())?,
            err_estimate: self.err_estimate,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidSeries(format!("coefficient file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Ok(Self::from_json(&std::fs::read_to_string(path)?)?)
    }
}

/// Result of a subcommand: the record plus how many checks failed.
pub struct Outcome {
    pub record: OutputRecord,
    pub failed_checks: usize,
}

impl From<OutputRecord> for Outcome {
    fn from(record: OutputRecord) -> Self {
        Self {
            record,
            failed_checks: 0,
        }
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Qn(a) => cmd_qn(a).map(Outcome::from),
        Command::Fn(a) => cmd_fn(a).map(Outcome::from),
        Command::Table(a) => cmd_table(a).map(Outcome::from),
        Command::Coeffs(a) => cmd_coeffs(a).map(Outcome::from),
        Command::Bounds(a) => cmd_bounds(a).map(Outcome::from),
        Command::Xcheck(a) => cmd_xcheck(a),
    }
}

pub fn cmd_qn(args: &QnArgs) -> Result<OutputRecord, CliError> {
    let (n, x, q, err, order) = if let Some(path) = &args.from {
        let file = CoefficientFile::read(path)?;
        let sol = file.to_solution()?;
        let x = args.x.unwrap_or(Real::from(sol.n));
        (sol.n, x, sol.eval(x)?, sol.err_estimate, file.order)
    } else {
        let n = args.n.expect("clap enforces --n without --from");
        let x = args.x.unwrap_or(Real::from(n));
        let mut ev = SchlafliEvaluator::new(args.order)?;
        let q = ev.q(n, x)?;
        let err = if n >= 4 {
            ev.solution(n)?.err_estimate
        } else {
            0.0
        };
        (n, x, q, err, args.order)
    };
    let mut rec = OutputRecord::new(Kind::Qn, &["n", "x", "q", "err_estimate"]).meta("N", order);
    rec.rows
        .push(vec![n.into(), x.into(), q.into(), err.into()]);
    Ok(rec)
}

pub fn cmd_fn(args: &FnArgs) -> Result<OutputRecord, CliError> {
    let x = args.x.unwrap_or(Real::from(args.n));
    let v = SchlafliEvaluator::new(args.order)?.f(args.n, x)?;
    let mut rec = OutputRecord::new(
        Kind::Fn,
        &[
            "n",
            "x",
            "f",
            "f_real",
            "abs_err_estimate",
            "rel_err_estimate",
        ],
    )
    .meta("N", args.order);
    rec.rows.push(vec![
        args.n.into(),
        x.into(),
        v.value.into(),
        v.to_real().into(),
        v.abs_err_estimate.into(),
        v.rel_err_estimate.into(),
    ]);
    Ok(rec)
}

fn table_row(
    n: u32,
    columns: &[Column],
    order: usize,
    include_vn: bool,
) -> crate::Result<Vec<Field>> {
    let mut ev = SchlafliEvaluator::new(order)?;
    let nf = Real::from(n);
    let mut row: Vec<Field> = vec![n.into()];
    for c in columns {
        row.push(match c {
            Column::Q => ev.q(n, nf)?.into(),
            Column::QNext => ev.q(n, nf + 1.0)?.into(),
            Column::Log10F => ev.f(n, nf)?.value.log10_mag.into(),
            Column::Rogers => rogers_bound(&mut ev, n, include_vn)?.into(),
            Column::Coxeter if n < 3 => Field::Null,
            Column::Coxeter => (coxeter_bound(&mut ev, n)?.value as usize).into(),
            Column::Quantizer => quantizer_bound(&mut ev, n)?.into(),
        });
    }
    if columns
        .iter()
        .any(|c| matches!(c, Column::Q | Column::QNext))
    {
        let err = if n >= 4 {
            ev.solution(n)?.err_estimate
        } else {
            0.0
        };
        row.push(err.into());
    }
    Ok(row)
}

pub fn cmd_table(args: &TableArgs) -> Result<OutputRecord, CliError> {
    if args.ns.is_empty() {
        return Err(CliError::Usage("table needs at least one n".into()));
    }
    let mut headers = vec!["n"];
    headers.extend(args.columns.iter().map(|c| c.header()));
    if args
        .columns
        .iter()
        .any(|c| matches!(c, Column::Q | Column::QNext))
    {
        headers.push("err_estimate");
    }
    let rows = args
        .ns
        .par_iter()
        .map(|&n| table_row(n, &args.columns, args.order, !args.no_vn_factor))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut rec = OutputRecord::new(Kind::Table, &headers)
        .meta("N", args.order)
        .meta("vn_factor", !args.no_vn_factor);
    rec.rows = rows;
    Ok(rec)
}

pub fn cmd_coeffs(args: &CoeffsArgs) -> Result<OutputRecord, CliError> {
    let mut ev = SchlafliEvaluator::new(args.order)?;
    let file = CoefficientFile::from_solution(ev.solution(args.n)?);
    let mut rec = OutputRecord::new(Kind::Coeffs, &["k", "a_k"])
        .meta("n", file.n)
        .meta("N", file.order)
        .meta("convention", file.convention.as_str());
    rec.rows = file
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &a)| vec![(i + 1).into(), a.into()])
        .collect();
    rec.coefficients = Some(file);
    Ok(rec)
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<OutputRecord, CliError> {
    let include_vn = !args.no_vn_factor;
    let rows = args
        .ns
        .par_iter()
        .map(|&n| -> crate::Result<Vec<Field>> {
            let r = bounds_report(&mut SchlafliEvaluator::new(args.order)?, n)?;
            let rogers = if include_vn {
                r.rogers_density
            } else {
                r.rogers_density_no_vn
            };
            let (value, ratio, ambiguous) = match r.coxeter {
                Some(c) => (
                    (c.value as usize).into(),
                    c.ratio.into(),
                    c.ambiguous.into(),
                ),
                None => (Field::Null, Field::Null, Field::Null),
            };
            Ok(vec![
                n.into(),
                rogers.into(),
                value,
                ratio,
                ambiguous,
                r.quantizer_msre.into(),
            ])
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut rec = OutputRecord::new(
        Kind::Bounds,
        &[
            "n",
            "rogers",
            "coxeter",
            "coxeter_ratio",
            "coxeter_ambiguous",
            "quantizer",
        ],
    )
    .meta("N", args.order)
    .meta("vn_factor", include_vn);
    rec.rows = rows;
    Ok(rec)
}

/// One named comparison in `xcheck`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub x: Option<Real>,
    pub value: Real,
    pub reference: Real,
    pub residual: Real,
    pub tolerance: Real,
}

impl Check {
    fn new(
        name: &'static str,
        x: Option<Real>,
        value: Real,
        reference: Real,
        tolerance: Real,
    ) -> Self {
        Self {
            name,
            x,
            value,
            reference,
            residual: (value - reference).abs(),
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Checks run by `xcheck` for dimension `n ≥ 4` at series order `order`.
///
/// Always: the normalization `q_n(n−1) = 1` and agreement with a solve at
/// twice the order, to ten times the error estimate plus the binary64
/// ceiling. Then, by `n`: quadrature reference values (`n ≤ 7`), the
/// odd parity identity (odd `n ≤ 11`) and the large-`n` expansion (`n ≥ 100`).
pub fn cross_checks(n: u32, order: usize) -> crate::Result<Vec<Check>> {
    if n < 4 {
        return Err(Error::Domain(format!("cross-checks need n >= 4, got {n}")));
    }
    let nf = Real::from(n);
    let mut ev = SchlafliEvaluator::new(order)?;
    let mut checks = Vec::new();

    let sol = ev.solution(n)?.clone();
    checks.push(Check::new(
        "normalization",
        Some(nf - 1.0),
        sol.eval(nf - 1.0)?,
        1.0,
        1e-9,
    ));

    let fine = SchlafliEvaluator::new(2 * order)?.solution(n)?.clone();
    let mut worst: Real = 0.0;
    let mut scale: Real = 0.0;
    for k in 1..=11 {
        let y = -1.0 + Real::from(k) / 6.0;
        let a = sol.eval_y(y)?;
        worst = worst.max((a - fine.eval_y(y)?).abs());
        scale = scale.max(a.abs());
    }
    let order_tol = 10.0 * sol.err_estimate + ACCURACY_CEILING * scale;
    checks.push(Check::new("order", None, worst, 0.0, order_tol));

    if n <= 7 {
        for x in [nf - 0.5, nf, nf + 0.5, nf + 1.0] {
            let reference = oracle_f(n, x)?;
            let v = ev.f(n, x)?;
            let tol = 10.0 * (reference.quad_err + v.abs_err_estimate + Real::EPSILON);
            checks.push(Check::new(
                "oracle",
                Some(x),
                v.to_real(),
                reference.value,
                tol,
            ));
        }
    }
    if n % 2 == 1 && n <= 11 {
        for k in 1..=5 {
            let x = nf - 1.0 + Real::from(k) / 6.0;
            let r = identity_check_odd(&mut ev, n, x, TermPolicy::Continued)?;
            checks.push(Check::new("identity", Some(x), r.lhs, r.rhs, 1e-8));
        }
    }
    if n >= 100 {
        let v = ev.f(n, nf)?;
        let asym = rogers_asymptotic(n, nf)?;
        let ratio = (v.value / asym.with_correction).to_real();
        checks.push(Check::new(
            "asymptotic",
            Some(nf),
            ratio,
            1.0,
            100.0 / (nf * nf),
        ));
    }
    Ok(checks)
}

pub fn cmd_xcheck(args: &XcheckArgs) -> Result<Outcome, CliError> {
    let checks = cross_checks(args.n, args.order)?;
    let mut rec = OutputRecord::new(
        Kind::Xcheck,
        &[
            "check",
            "x",
            "value",
            "reference",
            "residual",
            "tolerance",
            "pass",
        ],
    )
    .meta("n", args.n)
    .meta("N", args.order);
    rec.rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.into(),
                c.x.map_or(Field::Null, Field::Real),
                c.value.into(),
                c.reference.into(),
                c.residual.into(),
                c.tolerance.into(),
                c.passed().into(),
            ]
        })
        .collect();
    Ok(Outcome {
        record: rec,
        failed_checks: checks.iter().filter(|c| !c.passed()).count(),
    })
}

/// Parses `args`, runs the command and writes its output; returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let mut record = outcome.record;
    if cli.output.timing {
        record
            .meta
            .push(("elapsed_s".into(), start.elapsed().as_secs_f64().into()));
    }
    let text = record.render(cli.output.format, cli.output.pretty);
    let written = match &cli.output.out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if outcome.failed_checks > 0 {
        let _ = writeln!(stderr, "error: {} check(s) failed", outcome.failed_checks);
        return EXIT_CHECK_FAILED;
    }
    EXIT_OK
}
