use std::fmt::Write as _;

use gompertz::approximants::{approx_table, empirical_target_sign, error_decay_report, ApproximantRow, Corollary};
use gompertz::exactmath::BernoulliConvention;
use gompertz::reference::{delta_reference, BigFloat, DeltaMethod, PrecisionContext};
use gompertz::verify::{
    calibrate, run_identity_suite, theorem_partial_sums, IdentityReport, SuiteConfig, SumPath, Verdict,
};
use gompertz::{BigRat, Error};
use serde::Serialize;

use crate::output::{csv_string, json_string};
use crate::{Common, ConventionArg, Format, Method, Path};

pub struct Report {
    pub body: String,
    /// False when a verification failed; the body is still emitted.
    pub ok: bool,
}

pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome = Result<Report, Failure>;

fn context(common: &Common) -> Result<PrecisionContext, Failure> {
    PrecisionContext::new(common.digits).map_err(|e| Failure::Usage(format!("--digits: {e}")))
}

fn render(v: &BigFloat, digits: u32) -> String {
    v.to_decimal_string(digits)
}

fn sign_char(s: i8) -> &'static str {
    if s < 0 {
        "-"
    } else {
        "+"
    }
}

const UNDEFINED: &str = "undefined";

pub fn delta(common: &Common, method: Method) -> Outcome {
    let ctx = context(common)?;
    let (label, m) = match method {
        Method::Quadrature => ("quadrature", DeltaMethod::Quadrature),
        Method::E1 => ("e1", DeltaMethod::ETimesE1),
        Method::Cross => ("cross", DeltaMethod::CrossValidated),
    };
    let value = render(&delta_reference(&ctx, m)?, common.digits);
    let body = match common.format {
        Format::Text => format!("delta = {value}\nmethod = {label}\ndigits = {}\n", common.digits),
        Format::Csv => csv_string(
            &["method", "digits", "delta"],
            [[label.to_string(), common.digits.to_string(), value]],
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                command: &'a str,
                method: &'a str,
                digits: u32,
                delta: String,
            }
            json_string(&Out {
                command: "delta",
                method: label,
                digits: common.digits,
                delta: value,
            })
        }
    };
    Ok(Report { body, ok: true })
}

#[derive(Serialize)]
struct ApproxRowOut {
    m: u32,
    a: String,
    b: String,
    ratio: Option<String>,
    abs_error: Option<String>,
}

fn approx_row(row: &ApproximantRow, digits: u32) -> ApproxRowOut {
    ApproxRowOut {
        m: row.m,
        a: row.a.to_string(),
        b: row.b.to_string(),
        ratio: row.ratio.as_ref().map(|v| render(v, digits)),
        abs_error: row.abs_error.as_ref().map(|v| render(v, digits)),
    }
}

pub fn approx(common: &Common, corollary: u8, r: u32, max_m: u32) -> Outcome {
    let family =
        Corollary::from_number(corollary).ok_or_else(|| Failure::Usage("--corollary must be 1 or 2".into()))?;
    if r < family.min_r() {
        return Err(Failure::Usage(format!(
            "--r {r} is out of range for --corollary {corollary} (need r >= {})",
            family.min_r()
        )));
    }
    if max_m < r {
        return Err(Failure::Usage(format!("--max-m {max_m} must be >= --r {r}")));
    }
    let ctx = context(common)?;
    let rows = approx_table(family, r, max_m, &ctx)?;
    let target = sign_char(family.target_sign());
    let empirical = empirical_target_sign(&rows, &ctx).map(sign_char).unwrap_or(UNDEFINED);
    let out: Vec<ApproxRowOut> = rows.iter().map(|row| approx_row(row, common.digits)).collect();
    let body = match common.format {
        Format::Csv => csv_string(
            &["m", "a", "b", "ratio", "abs_error", "target_sign"],
            out.iter().map(|row| {
                [
                    row.m.to_string(),
                    row.a.clone(),
                    row.b.clone(),
                    row.ratio.clone().unwrap_or_else(|| UNDEFINED.into()),
                    row.abs_error.clone().unwrap_or_else(|| UNDEFINED.into()),
                    target.to_string(),
                ]
            }),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                command: &'a str,
                corollary: u8,
                r: u32,
                digits: u32,
                target_sign: &'a str,
                empirical_target_sign: &'a str,
                rows: &'a [ApproxRowOut],
            }
            json_string(&Out {
                command: "approx",
                corollary,
                r,
                digits: common.digits,
                target_sign: target,
                empirical_target_sign: empirical,
                rows: &out,
            })
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# family {corollary}, r = {r}, m = {}..={max_m}, {} digits",
                r.max(1),
                common.digits
            );
            let _ = writeln!(s, "# errors are measured against {target}delta");
            if family == Corollary::One {
                let _ = writeln!(
                    s,
                    "# note: the stated limit for this family is -delta; the ratios approach +delta"
                );
            }
            let _ = writeln!(s, "# last ratio is closest to {empirical}delta");
            let mut pairs = vec![(10, 40)];
            if max_m >= 2 {
                pairs.push((max_m / 2, max_m));
            }
            for (m1, m2, gain) in error_decay_report(&rows, &pairs).decade_gains {
                let _ = writeln!(s, "# e_{m1} / e_{m2} = {}", render(&gain, 6));
            }
            let _ = writeln!(s, "m\ta\tb\tratio\tabs_error");
            for row in &out {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}",
                    row.m,
                    row.a,
                    row.b,
                    row.ratio.as_deref().unwrap_or(UNDEFINED),
                    row.abs_error.as_deref().unwrap_or(UNDEFINED)
                );
            }
            s
        }
    };
    Ok(Report { body, ok: true })
}

pub fn theorem(common: &Common, u: &BigRat, r: u32, max_m: u32, path: Path) -> Outcome {
    if max_m < r {
        return Err(Failure::Usage(format!("--max-m {max_m} must be >= --r {r}")));
    }
    let ctx = context(common)?;
    let sum_path = match path {
        Path::Exact => SumPath::Exact,
        Path::Quadrature => SumPath::Quadrature,
    };
    let used = if sum_path == SumPath::Exact && *u == BigRat::from_integer(1.into()) {
        "exact"
    } else {
        "quadrature"
    };
    let sums = theorem_partial_sums(u, r, max_m, sum_path, &ctx)?;
    let target = ctx.rat(u);
    #[derive(Serialize)]
    struct Row {
        m: u32,
        partial_sum: String,
        abs_error: String,
    }
    let rows: Vec<Row> = sums
        .iter()
        .enumerate()
        .map(|(i, s)| Row {
            m: r + i as u32,
            partial_sum: render(s, common.digits),
            abs_error: render(&(s - &target).abs(), common.digits),
        })
        .collect();
    let body = match common.format {
        Format::Csv => csv_string(
            &["m", "partial_sum", "abs_error"],
            rows.iter()
                .map(|row| [row.m.to_string(), row.partial_sum.clone(), row.abs_error.clone()]),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                command: &'a str,
                u: String,
                r: u32,
                digits: u32,
                path: &'a str,
                rows: &'a [Row],
            }
            json_string(&Out {
                command: "theorem",
                u: u.to_string(),
                r,
                digits: common.digits,
                path: used,
                rows: &rows,
            })
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# partial sums S_m(u = {u}, r = {r}), {used} path, {} digits",
                common.digits
            );
            let _ = writeln!(s, "m\tS_m\t|S_m - u|");
            for row in &rows {
                let _ = writeln!(s, "{}\t{}\t{}", row.m, row.partial_sum, row.abs_error);
            }
            s
        }
    };
    Ok(Report { body, ok: true })
}

#[derive(Serialize)]
struct IdentityOut {
    identity: &'static str,
    params: String,
    verdict: &'static str,
    residual: Option<String>,
    lhs: Option<String>,
    rhs: Option<String>,
    tolerance: Option<String>,
    note: Option<String>,
}

fn identity_out(rep: &IdentityReport, digits: u32) -> IdentityOut {
    let (tolerance, note) = match &rep.verdict {
        Verdict::NumericPass { tolerance } => (Some(render(tolerance, 3)), None),
        Verdict::Skipped { reason } => (None, Some(reason.clone())),
        _ => (None, None),
    };
    IdentityOut {
        identity: rep.identity,
        params: rep.params_string(),
        verdict: rep.verdict.label(),
        residual: rep.residual.as_ref().map(|v| v.render(digits)),
        lhs: rep.lhs.as_ref().map(|v| v.render(digits)),
        rhs: rep.rhs.as_ref().map(|v| v.render(digits)),
        tolerance,
        note,
    }
}

pub fn identities(common: &Common, max_m: Option<u32>, numeric: bool, corrupt: bool) -> Outcome {
    let mut config = SuiteConfig {
        corrupt,
        ..SuiteConfig::default()
    };
    if let Some(m) = max_m {
        config = config.with_max_m(m);
    }
    if numeric {
        config.numeric = Some(context(common)?);
    }
    let reports = run_identity_suite(&config)?;
    let out: Vec<IdentityOut> = reports.iter().map(|r| identity_out(r, common.digits)).collect();
    let count = |label: &str| out.iter().filter(|r| r.verdict == label).count();
    let fails = count("Fail");
    let passes = count("ExactPass") + count("NumericPass");
    let skipped = count("Skipped");
    let body = match common.format {
        Format::Csv => csv_string(
            &["identity", "params", "verdict", "residual"],
            out.iter().map(|r| {
                [
                    r.identity.to_string(),
                    r.params.clone(),
                    r.verdict.to_string(),
                    r.residual.clone().unwrap_or_default(),
                ]
            }),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Summary {
                total: usize,
                passed: usize,
                failed: usize,
                skipped: usize,
            }
            #[derive(Serialize)]
            struct Out<'a> {
                command: &'a str,
                digits: u32,
                summary: Summary,
                reports: &'a [IdentityOut],
            }
            json_string(&Out {
                command: "identities",
                digits: common.digits,
                summary: Summary {
                    total: out.len(),
                    passed: passes,
                    failed: fails,
                    skipped,
                },
                reports: &out,
            })
        }
        Format::Text => {
            let mut s = String::new();
            let mut names: Vec<&str> = out.iter().map(|r| r.identity).collect();
            names.dedup();
            for name in names {
                let of = |label: &str| out.iter().filter(|r| r.identity == name && r.verdict == label).count();
                let _ = writeln!(
                    s,
                    "{name}: {} pass, {} fail, {} skipped",
                    of("ExactPass") + of("NumericPass"),
                    of("Fail"),
                    of("Skipped")
                );
            }
            for r in out
                .iter()
                .filter(|r| r.verdict != "ExactPass" && r.verdict != "NumericPass")
            {
                let _ = write!(s, "{} {} [{}]", r.verdict.to_uppercase(), r.identity, r.params);
                if let (Some(l), Some(rh), Some(res)) = (&r.lhs, &r.rhs, &r.residual) {
                    let _ = write!(s, " lhs = {l}, rhs = {rh}, residual = {res}");
                }
                if let Some(n) = &r.note {
                    let _ = write!(s, " ({n})");
                }
                s.push('\n');
            }
            let _ = writeln!(
                s,
                "total: {} checked, {passes} pass, {fails} fail, {skipped} skipped",
                out.len()
            );
            s
        }
    };
    Ok(Report { body, ok: fails == 0 })
}

const CONJECTURE_NOTES: [&str; 2] = [
    "the integral carries no differential as written; it is read as a dx-integral",
    "the coefficient index A_{k,m+1} is used exactly as written",
];

pub fn conjecture(common: &Common, us: &[BigRat], ms: &[u32], convention: ConventionArg) -> Outcome {
    let ctx = context(common)?;
    let cal = calibrate(us, ms, &ctx)?;
    let keep = |c: BernoulliConvention| match convention {
        ConventionArg::Both => true,
        ConventionArg::MinusHalf => c == BernoulliConvention::MinusHalf,
        ConventionArg::PlusHalf => c == BernoulliConvention::PlusHalf,
    };
    #[derive(Serialize)]
    struct Row {
        u: String,
        m: u32,
        convention: &'static str,
        rhs: String,
        digamma: String,
        residual: String,
    }
    let rows: Vec<Row> = cal
        .rows
        .iter()
        .filter(|r| keep(r.convention))
        .map(|r| Row {
            u: r.u.to_string(),
            m: r.m,
            convention: r.convention.label(),
            rhs: render(&r.rhs, common.digits),
            digamma: render(&r.psi, common.digits),
            residual: render(&r.residual, common.digits),
        })
        .collect();
    let calibrated = cal.calibrated.label();
    let (pu, pm) = &cal.calibration_point;
    let body = match common.format {
        Format::Csv => csv_string(
            &["u", "m", "convention", "rhs", "digamma", "residual"],
            rows.iter().map(|r| {
                [
                    r.u.clone(),
                    r.m.to_string(),
                    r.convention.to_string(),
                    r.rhs.clone(),
                    r.digamma.clone(),
                    r.residual.clone(),
                ]
            }),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Point {
                u: String,
                m: u32,
            }
            #[derive(Serialize)]
            struct Out<'a> {
                command: &'a str,
                digits: u32,
                calibrated: &'a str,
                calibration_point: Point,
                notes: [&'a str; 2],
                rows: &'a [Row],
            }
            json_string(&Out {
                command: "conjecture",
                digits: common.digits,
                calibrated,
                calibration_point: Point {
                    u: pu.to_string(),
                    m: *pm,
                },
                notes: CONJECTURE_NOTES,
                rows: &rows,
            })
        }
        Format::Text => {
            let mut s = String::new();
            for note in CONJECTURE_NOTES {
                let _ = writeln!(s, "# note: {note}");
            }
            let _ = writeln!(s, "# no convergence is asserted; residual = rhs - digamma(u)");
            let _ = writeln!(
                s,
                "# calibrated convention: {calibrated} (smaller |residual| at u = {pu}, m = {pm})"
            );
            let _ = writeln!(s, "u\tm\tconvention\trhs\tdigamma\tresidual");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.u, r.m, r.convention, r.rhs, r.digamma, r.residual
                );
            }
            s
        }
    };
    Ok(Report { body, ok: true })
}
