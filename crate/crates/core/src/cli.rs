//! Command-line front end. Exit codes: 0 success/pass, 1 checked and false,
//! 2 usage or domain error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::birational::f_map;
use crate::curves::{check_q_m, on_curve_d, point_r, point_s, DPoint, EPoint, Params};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, int, is_square, parse_rational, Rational};
use crate::quadruples::{
    admissibility_check, construct_family_quadruple, construct_from_witness, m_from_tu,
    verify_quadruple, Certificate, Quadruple, Verdict,
};
use crate::search::{brute_force_quadruples, search_d_points, BruteForceBounds, HeightBound};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const PARTIAL_DISCLAIMER: &str = "partial unless the representatives cover E_m(Q)/2E_m(Q); \
     a negative verdict does not prove that no quadruple with this product exists";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "dquad",
    version,
    about = "Rational D(q)-quadruples with prescribed product"
)]
pub struct Cli {
    /// Output format: JSON lines or CSV
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a, b, c, d form a D(q)-quadruple
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], allow_hyphen_values = true)]
        entries: Vec<String>,
    },
    /// Quadruples from the (t, u) family with triple (S+R, 2S, 3S)
    Family {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Sample value of t (repeatable)
        #[arg(long, allow_hyphen_values = true)]
        t: Vec<String>,
        /// Integer range start for t (inclusive)
        #[arg(long, allow_hyphen_values = true, requires = "t_to")]
        t_from: Option<i64>,
        /// Integer range end for t (inclusive)
        #[arg(long, allow_hyphen_values = true, requires = "t_from")]
        t_to: Option<i64>,
    },
    /// Look for a D(q)-quadruple with product m over candidate coset representatives
    CheckM {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Height bound for the D_m point search
        #[arg(long, default_value_t = 50)]
        height: u64,
        /// JSON array of points: {"x","y"} on D_m or {"T","W"} / {"inf":true} on E_m
        #[arg(long)]
        points: Option<PathBuf>,
        /// Assert that the candidates cover E_m(Q)/2E_m(Q)
        #[arg(long)]
        complete: bool,
    },
    /// Stream points on D_m or brute-force quadruples
    Search {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long, default_value_t = 20)]
        height: u64,
        /// Search quadruples instead of points
        #[arg(long)]
        quadruples: bool,
        /// Integer entries up to this bound (denominator 1)
        #[arg(long)]
        int_bound: Option<u64>,
        #[arg(long)]
        num_bound: Option<u64>,
        #[arg(long)]
        den_bound: Option<u64>,
        /// Allow negative entries
        #[arg(long)]
        signed: bool,
    },
}

/// Parses arguments and runs; clap errors map to their own exit codes.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Verify { q, entries } => cmd_verify(cli.format, q, entries, out),
        Command::Family {
            q,
            u,
            t,
            t_from,
            t_to,
        } => cmd_family(cli.format, q, u, t, t_from.zip(*t_to), out),
        Command::CheckM {
            q,
            m,
            height,
            points,
            complete,
        } => cmd_check_m(cli.format, q, m, *height, points.as_deref(), *complete, out),
        Command::Search {
            q,
            m,
            height,
            quadruples,
            int_bound,
            num_bound,
            den_bound,
            signed,
        } => {
            let job = SearchJob {
                m: m.as_deref(),
                height: *height,
                quadruples: *quadruples,
                int_bound: *int_bound,
                num_bound: *num_bound,
                den_bound: *den_bound,
                signed: *signed,
            };
            cmd_search(cli.format, q, &job, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
            EXIT_USAGE
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidParams(format!("write failed: {e}"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(out: &mut dyn Write, fields: &[String]) -> Result<()> {
    let row: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    writeln!(out, "{}", row.join(",")).map_err(io)
}

fn json_line(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{v}").map_err(io)
}

fn fmt_opt(r: &Option<Rational>) -> String {
    r.as_ref().map(format_rational).unwrap_or_default()
}

fn write_certificate(format: Format, cert: &Certificate, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => json_line(
            out,
            &serde_json::to_value(cert).expect("certificate serializes"),
        ),
        Format::Csv => {
            csv_row(
                out,
                &[
                    "q", "a", "b", "c", "d", "t12", "t13", "t14", "t23", "t24", "t34", "pass",
                ]
                .map(String::from),
            )?;
            let mut row = vec![format_rational(&cert.q)];
            row.extend(cert.entries.iter().map(format_rational));
            row.extend(cert.roots.iter().map(fmt_opt));
            row.push(cert.pass.to_string());
            csv_row(out, &row)
        }
    }
}

pub fn cmd_verify(format: Format, q: &str, entries: &[String], out: &mut dyn Write) -> Result<i32> {
    let q = parse_rational(q)?;
    let parsed: Vec<Rational> = entries
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    let entries: [Rational; 4] = parsed
        .try_into()
        .map_err(|_| Error::InvalidParams("exactly four entries are required".into()))?;
    let cert = verify_quadruple(&q, &entries);
    write_certificate(format, &cert, out)?;
    Ok(if cert.pass { EXIT_OK } else { EXIT_FALSE })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SampleStatus {
    Verified,
    Degenerate,
    Failed,
    Invalid,
}

impl SampleStatus {
    fn as_str(self) -> &'static str {
        match self {
            SampleStatus::Verified => "verified",
            SampleStatus::Degenerate => "degenerate",
            SampleStatus::Failed => "failed",
            SampleStatus::Invalid => "invalid",
        }
    }
}

struct FamilySample {
    t: Rational,
    m: Option<Rational>,
    status: SampleStatus,
    quad: Option<Quadruple>,
    reason: Option<String>,
}

fn family_sample(q: &Rational, t: Rational, u: &Rational) -> FamilySample {
    let m = match m_from_tu(q, &t, u) {
        Ok((m, _, _)) => m,
        Err(e) => {
            return FamilySample {
                t,
                m: None,
                status: SampleStatus::Invalid,
                quad: None,
                reason: Some(e.to_string()),
            }
        }
    };
    match construct_family_quadruple(q, &t, u) {
        // re-verify before emitting
        Ok(quad) if quad.certificate().pass && quad.product() == m => FamilySample {
            t,
            m: Some(m),
            status: SampleStatus::Verified,
            quad: Some(quad),
            reason: None,
        },
        Ok(_) => FamilySample {
            t,
            m: Some(m),
            status: SampleStatus::Failed,
            quad: None,
            reason: Some("self-check failed".into()),
        },
        Err(e) => {
            let status = match e {
                Error::DegenerateTriple | Error::DegenerateQuadruple(_) => SampleStatus::Degenerate,
                _ => SampleStatus::Failed,
            };
            FamilySample {
                t,
                m: Some(m),
                status,
                quad: None,
                reason: Some(e.to_string()),
            }
        }
    }
}

pub fn cmd_family(
    format: Format,
    q: &str,
    u: &str,
    ts: &[String],
    range: Option<(i64, i64)>,
    out: &mut dyn Write,
) -> Result<i32> {
    let q = parse_rational(q)?;
    let u = parse_rational(u)?;
    let mut samples: Vec<Rational> = ts
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_>>()?;
    if let Some((lo, hi)) = range {
        if lo > hi {
            return Err(Error::InvalidParams("--t-from exceeds --t-to".into()));
        }
        samples.extend((lo..=hi).map(int));
    }
    if samples.is_empty() {
        return Err(Error::InvalidParams("give --t or --t-from/--t-to".into()));
    }
    let records: Vec<FamilySample> = samples
        .into_iter()
        .map(|t| family_sample(&q, t, &u))
        .collect();
    if format == Format::Csv {
        csv_row(
            out,
            &["q", "t", "u", "m", "status", "a", "b", "c", "d", "reason"].map(String::from),
        )?;
    }
    for rec in &records {
        let entries: Vec<String> = match &rec.quad {
            Some(quad) => quad.entries().iter().map(format_rational).collect(),
            None => vec![String::new(); 4],
        };
        match format {
            Format::Json => {
                let mut v = json!({
                    "q": format_rational(&q),
                    "t": format_rational(&rec.t),
                    "u": format_rational(&u),
                    "m": rec.m.as_ref().map(format_rational),
                    "status": rec.status.as_str(),
                    "verified": rec.status == SampleStatus::Verified,
                });
                if rec.quad.is_some() {
                    for (k, e) in ["a", "b", "c", "d"].iter().zip(&entries) {
                        v[*k] = json!(e);
                    }
                }
                if let Some(reason) = &rec.reason {
                    v["reason"] = json!(reason);
                }
                json_line(out, &v)?;
            }
            Format::Csv => {
                let mut row = vec![
                    format_rational(&q),
                    format_rational(&rec.t),
                    format_rational(&u),
                    fmt_opt(&rec.m),
                    rec.status.as_str().to_string(),
                ];
                row.extend(entries);
                row.push(rec.reason.clone().unwrap_or_default());
                csv_row(out, &row)?;
            }
        }
    }
    let verified = records
        .iter()
        .filter(|r| r.status == SampleStatus::Verified)
        .count();
    let all_invalid = records.iter().all(|r| r.status == SampleStatus::Invalid);
    Ok(if all_invalid {
        EXIT_USAGE
    } else if verified > 0 {
        EXIT_OK
    } else {
        EXIT_FALSE
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SuppliedPoint {
    D(DPoint),
    E(EPoint),
}

fn load_points(path: &Path) -> Result<(Vec<DPoint>, Vec<EPoint>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParams(format!("cannot read {}: {e}", path.display())))?;
    let items: Vec<SuppliedPoint> = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParams(format!("bad points file: {e}")))?;
    let mut d = Vec::new();
    let mut e = Vec::new();
    for item in items {
        match item {
            SuppliedPoint::D(p) => d.push(p),
            SuppliedPoint::E(p) => e.push(p),
        }
    }
    Ok((d, e))
}

/// Base point selection: prefer x² − q square (so R is a witness), then any
/// point with x·y ≠ 0.
fn choose_base(q: &Rational, points: &[DPoint]) -> Option<(DPoint, bool)> {
    let usable = |p: &&DPoint| !p.x.is_zero() && !p.y.is_zero();
    points
        .iter()
        .filter(usable)
        .find(|p| is_square(&(&p.x * &p.x - q)))
        .map(|p| (p.clone(), true))
        .or_else(|| points.iter().find(usable).map(|p| (p.clone(), false)))
}

const MAX_EXTRA_GENERATORS: usize = 10;

/// Candidate coset representatives: iS + jR (i < 2, j < 4) plus every subset
/// sum of the extra generators.
pub fn candidate_representatives(params: &Params, extra: &[EPoint]) -> Vec<EPoint> {
    let c = params.curve();
    let s = point_s(params);
    let r = point_r(params);
    let mut base = Vec::new();
    for i in 0..2 {
        for j in 0..4 {
            let p = c.add(&c.mul(i, &s), &c.mul(j, &r));
            if !base.contains(&p) {
                base.push(p);
            }
        }
    }
    let mut gens: Vec<EPoint> = Vec::new();
    for p in extra {
        if !p.is_infinity() && !base.contains(p) && !gens.contains(p) {
            gens.push(p.clone());
        }
    }
    gens.truncate(MAX_EXTRA_GENERATORS);
    let mut reps = base;
    for gen in &gens {
        let shifted: Vec<EPoint> = reps.iter().map(|p| c.add(p, gen)).collect();
        for p in shifted {
            if !reps.contains(&p) {
                reps.push(p);
            }
        }
    }
    reps
}

pub fn cmd_check_m(
    format: Format,
    q: &str,
    m: &str,
    height: u64,
    points: Option<&Path>,
    complete: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let q = parse_rational(q)?;
    let m = parse_rational(m)?;
    check_q_m(&q, &m)?;
    let bound = HeightBound::new(height)?;
    let (mut d_points, e_points) = match points {
        Some(path) => load_points(path)?,
        None => (Vec::new(), Vec::new()),
    };
    for p in &d_points {
        if (&p.x * &p.x - &q) * (&p.y * &p.y - &q) != m {
            return Err(Error::PointNotOnCurve);
        }
    }
    d_points.extend(search_d_points(&q, &m, bound)?);
    let (base, square_x) = choose_base(&q, &d_points).ok_or(Error::NoBasePoint)?;
    let params = Params::with_product(q.clone(), m.clone(), base.x.clone(), base.y.clone())?;
    for p in &e_points {
        if !params.curve().contains(p) {
            return Err(Error::PointNotOnCurve);
        }
    }
    let mut extra: Vec<EPoint> = e_points;
    for p in &d_points {
        if on_curve_d(&params, &p.x, &p.y) {
            extra.push(f_map(&params, p)?);
        }
    }
    let reps = candidate_representatives(&params, &extra);
    let verdict = admissibility_check(&params, &reps);

    let constructed = match &verdict.verdict {
        Verdict::Exists { witness, .. } => construct_from_witness(&params, witness).ok(),
        Verdict::NoneAmongSupplied => None,
    };
    let cert = constructed.as_ref().map(|(_, quad)| quad.certificate());
    let (status, witness, representative) = match &verdict.verdict {
        Verdict::Exists {
            witness,
            representative,
        } => (
            "exists",
            Some(witness.clone()),
            Some(representative.clone()),
        ),
        Verdict::NoneAmongSupplied => ("none_among_supplied", None, None),
    };
    let partial = !complete;
    match format {
        Format::Json => {
            let v = json!({
                "q": format_rational(&q),
                "m": format_rational(&m),
                "base_point": base,
                "base_point_square_x": square_x,
                "status": status,
                "witness": witness,
                "representative": representative,
                "coset_reps_checked": verdict.coset_reps_checked,
                "unresolved": verdict.unresolved.len(),
                "warnings": verdict.warnings,
                "partial": partial,
                "disclaimer": if partial { Some(PARTIAL_DISCLAIMER) } else { None },
                "triple": constructed.as_ref().map(|(t, _)| [&t.q1, &t.q2, &t.q3]),
                "quadruple": cert,
            });
            json_line(out, &v)?;
        }
        Format::Csv => {
            csv_row(
                out,
                &[
                    "q",
                    "m",
                    "x1",
                    "y1",
                    "status",
                    "coset_reps_checked",
                    "partial",
                    "a",
                    "b",
                    "c",
                    "d",
                ]
                .map(String::from),
            )?;
            let mut row = vec![
                format_rational(&q),
                format_rational(&m),
                format_rational(&base.x),
                format_rational(&base.y),
                status.to_string(),
                verdict.coset_reps_checked.to_string(),
                partial.to_string(),
            ];
            match &cert {
                Some(c) => row.extend(c.entries.iter().map(format_rational)),
                None => row.extend(vec![String::new(); 4]),
            }
            csv_row(out, &row)?;
        }
    }
    Ok(if verdict.exists() {
        EXIT_OK
    } else {
        EXIT_FALSE
    })
}

pub struct SearchJob<'a> {
    pub m: Option<&'a str>,
    pub height: u64,
    pub quadruples: bool,
    pub int_bound: Option<u64>,
    pub num_bound: Option<u64>,
    pub den_bound: Option<u64>,
    pub signed: bool,
}

pub fn cmd_search(
    format: Format,
    q: &str,
    job: &SearchJob<'_>,
    out: &mut dyn Write,
) -> Result<i32> {
    let q = parse_rational(q)?;
    if q.is_zero() {
        return Err(Error::InvalidParams("q must be nonzero".into()));
    }
    if job.quadruples {
        let (numerator, denominator) = match (job.int_bound, job.num_bound, job.den_bound) {
            (Some(n), None, None) => (n, 1),
            (None, Some(n), d) => (n, d.unwrap_or(1)),
            _ => {
                return Err(Error::InvalidParams(
                    "use either --int-bound or --num-bound [--den-bound]".into(),
                ))
            }
        };
        if numerator == 0 || denominator == 0 {
            return Err(Error::InvalidParams("bounds must be positive".into()));
        }
        let bounds = BruteForceBounds {
            numerator,
            denominator,
            signed: job.signed,
        };
        let found = brute_force_quadruples(&q, bounds);
        if format == Format::Csv {
            csv_row(out, &["q", "a", "b", "c", "d"].map(String::from))?;
        }
        let mut emitted = 0;
        for quad in &found {
            let cert = quad.certificate();
            if !cert.pass {
                continue;
            }
            emitted += 1;
            let mut row = vec![format_rational(&q)];
            row.extend(quad.entries().iter().map(format_rational));
            match format {
                Format::Json => json_line(
                    out,
                    &json!({"q": row[0], "a": row[1], "b": row[2], "c": row[3], "d": row[4], "pass": true}),
                )?,
                Format::Csv => csv_row(out, &row)?,
            }
        }
        return Ok(if emitted > 0 { EXIT_OK } else { EXIT_FALSE });
    }
    let m = parse_rational(
        job.m
            .ok_or_else(|| Error::InvalidParams("--m is required unless --quadruples".into()))?,
    )?;
    let bound = HeightBound::new(job.height)?;
    let points = search_d_points(&q, &m, bound)?;
    if format == Format::Csv {
        csv_row(out, &["x", "y"].map(String::from))?;
    }
    for p in &points {
        match format {
            Format::Json => json_line(out, &serde_json::to_value(p).expect("point serializes"))?,
            Format::Csv => csv_row(out, &[format_rational(&p.x), format_rational(&p.y)])?,
        }
    }
    Ok(if points.is_empty() {
        EXIT_FALSE
    } else {
        EXIT_OK
    })
}
