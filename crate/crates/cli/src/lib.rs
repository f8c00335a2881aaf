//! Command implementations behind the `hspan` binary.
//!
//! Every command writes to caller-supplied sinks and returns its exit code,
//! so the binary and the tests drive the same code.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use hspan_core::realnum::PRECISION_CAP_ENV;
use hspan_core::{
    brute_force_f, f_bounds_with, solve_f, sweep, validate_query, Backend, BoundsWindow, Error,
    PrecisionPolicy, SpanQuery, SpanResult, SpanValue, DEFAULT_ORACLE_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// The printed reference table, `EN,m,q,r,LB,ML,RV,MH,UB`.
pub const REFERENCE_TABLE: &str = include_str!("../tests/golden/reference_table.csv");

pub const TABLE_HEADER: &str = "EN,m,q,r,LB,ML,RV,MH,UB";

// Sweeps at or below this size list every query.
const VERIFY_LIST_LIMIT: usize = 16;

#[derive(Debug, Parser)]
#[command(
    name = "hspan",
    version,
    about = "Certified term counts for harmonic spans"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one query: the term count, its window and flanking sums.
    Solve(SolveArgs),
    /// Print the closed-form bound window only.
    Bounds(SolveArgs),
    /// Recompute the reference table and compare it with the printed values.
    Table,
    /// Sweep a range of queries and check every invariant.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Start denominator, at least 2.
    #[arg(long, allow_negative_numbers = true)]
    pub m: i64,
    /// Target integer, at least 1.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub q: i64,
    /// Step multiple, at least 1.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub r: i64,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// First precision in bits; doubles until the cap.
    #[arg(long, default_value_t = PrecisionPolicy::DEFAULT_START_BITS)]
    pub precision_start: u32,
    /// Use the exact brute-force oracle instead of the solver.
    #[arg(long)]
    pub oracle: bool,
    /// Significant digits for printed sums.
    #[arg(long, default_value_t = 10)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m_max: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub q_max: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub r_max: i64,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Queries whose window reaches past this many terms skip the oracle.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: u64,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::PrecisionExhausted { .. } => EXIT_PRECISION,
        _ => EXIT_INVALID,
    }
}

fn fail(err: &Error, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {err}");
    exit_code(err)
}

/// Reads the precision cap from the environment, falling back to the default.
pub fn policy_from_env(start_bits: u32) -> hspan_core::Result<PrecisionPolicy> {
    let cap = match std::env::var(PRECISION_CAP_ENV) {
        Ok(raw) => raw.trim().parse::<u32>().map_err(|_| {
            Error::InvalidPolicy(format!(
                "{PRECISION_CAP_ENV} must be a bit count (got {raw:?})"
            ))
        })?,
        Err(_) => PrecisionPolicy::DEFAULT_CAP_BITS,
    };
    PrecisionPolicy::new(start_bits, cap)
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args, stdout, stderr),
        Command::Bounds(args) => cmd_bounds(&args, stdout, stderr),
        Command::Table => cmd_table(stdout, stderr),
        Command::Verify(args) => cmd_verify(&args, stdout, stderr),
    }
}

fn provenance(v: &SpanValue) -> String {
    match v {
        SpanValue::Exact(_) => "exact".into(),
        SpanValue::Enclosure(iv) => match iv.width_log2() {
            Some(k) => format!("enclosure, width < 2^{}", k + 1),
            None => "enclosure, point".into(),
        },
    }
}

fn solve_json(res: &SpanResult, digits: usize) -> Value {
    let w = &res.window;
    json!({
        "m": res.query.m(),
        "q": res.query.q(),
        "r": res.query.r(),
        "f": res.f,
        "lb": w.lb,
        "ml": w.ml,
        "mh": w.mh,
        "ub": w.ub,
        "sum_below": res.sum_below.to_sig_decimal(digits),
        "sum_above": res.sum_above.to_sig_decimal(digits),
        "backend": res.backend.as_str(),
        "precision_bits": res.certificate.final_precision_bits,
    })
}

fn solve_oracle(query: &SpanQuery, policy: &PrecisionPolicy) -> hspan_core::Result<SpanResult> {
    let window = f_bounds_with(query, policy)?;
    let oracle = brute_force_f(query, DEFAULT_ORACLE_CAP)?;
    let erratum = (!window.contains(oracle.f)).then(|| {
        format!(
            "f = {} lies outside [{}, {}]",
            oracle.f, window.lb, window.ub
        )
    });
    Ok(SpanResult {
        query: *query,
        f: oracle.f,
        sum_below: SpanValue::Exact(oracle.sum_below),
        sum_above: SpanValue::Exact(oracle.sum_above),
        backend: Backend::Exact,
        window,
        certificate: Default::default(),
        erratum,
    })
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = validate_query(args.m, args.q, args.r).and_then(|query| {
        let policy = policy_from_env(args.precision_start)?;
        if args.oracle {
            solve_oracle(&query, &policy)
        } else {
            solve_f(&query, &policy)
        }
    });
    let res = match outcome {
        Ok(res) => res,
        Err(e) => return fail(&e, stderr),
    };
    let d = args.digits;
    let w = &res.window;
    let _ = match args.format {
        Format::Json => writeln!(stdout, "{}", solve_json(&res, d)),
        Format::Csv => writeln!(
            stdout,
            "m,q,r,f,lb,ml,mh,ub,sum_below,sum_above,backend,precision_bits\n{},{},{},{},{},{},{},{},{},{},{},{}",
            res.query.m(),
            res.query.q(),
            res.query.r(),
            res.f,
            w.lb,
            w.ml,
            w.mh,
            w.ub,
            res.sum_below.to_sig_decimal(d),
            res.sum_above.to_sig_decimal(d),
            res.backend,
            res.certificate.final_precision_bits
        ),
        Format::Plain => writeln!(
            stdout,
            "query: m = {}, q = {}, r = {}\n\
             f = {}\n\
             window: lb = {}, ml = {}, mh = {}, ub = {}\n\
             sum_below = {} ({})\n\
             sum_above = {} ({})\n\
             backend: {}\n\
             precision_bits: {}",
            res.query.m(),
            res.query.q(),
            res.query.r(),
            res.f,
            w.lb,
            w.ml,
            w.mh,
            w.ub,
            res.sum_below.to_sig_decimal(d),
            provenance(&res.sum_below),
            res.sum_above.to_sig_decimal(d),
            provenance(&res.sum_above),
            res.backend,
            res.certificate.final_precision_bits
        ),
    };
    if let Some(e) = &res.erratum {
        let _ = writeln!(stderr, "erratum: {e}");
    }
    EXIT_OK
}

fn write_window(q: &SpanQuery, w: &BoundsWindow, format: Format, out: &mut dyn Write) {
    let _ = match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "m": q.m(), "q": q.q(), "r": q.r(),
                "lb": w.lb, "ml": w.ml, "mh": w.mh, "ub": w.ub,
                "width_cap": w.width_cap,
                "precision_bits": w.precision_bits,
            })
        ),
        Format::Csv => writeln!(
            out,
            "m,q,r,lb,ml,mh,ub,width_cap,precision_bits\n{},{},{},{},{},{},{},{},{}",
            q.m(),
            q.q(),
            q.r(),
            w.lb,
            w.ml,
            w.mh,
            w.ub,
            w.width_cap,
            w.precision_bits
        ),
        Format::Plain => writeln!(
            out,
            "lb = {}\nml = {}\nmh = {}\nub = {}\nwidth_cap = {}\nprecision_bits: {}",
            w.lb, w.ml, w.mh, w.ub, w.width_cap, w.precision_bits
        ),
    };
}

pub fn cmd_bounds(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = validate_query(args.m, args.q, args.r).and_then(|query| {
        let policy = policy_from_env(args.precision_start)?;
        Ok((query, f_bounds_with(&query, &policy)?))
    });
    match outcome {
        Ok((query, w)) => {
            write_window(&query, &w, args.format, stdout);
            EXIT_OK
        }
        Err(e) => fail(&e, stderr),
    }
}

/// One reference row: `(EN, m, q, r, [LB, ML, RV, MH, UB])`.
pub type TableRow = (u32, i64, i64, i64, [u128; 5]);

pub fn parse_table(csv: &str) -> Vec<TableRow> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let cells: Vec<&str> = line.trim().split(',').collect();
            assert_eq!(cells.len(), 9, "malformed reference row {line:?}");
            let int = |i: usize| cells[i].parse::<i64>().expect("integer cell");
            let big = |i: usize| cells[i].parse::<u128>().expect("integer cell");
            (
                int(0) as u32,
                int(1),
                int(2),
                int(3),
                [big(4), big(5), big(6), big(7), big(8)],
            )
        })
        .collect()
}

/// Recomputes `[LB, ML, RV, MH, UB]` for one row.
pub fn compute_row(
    m: i64,
    q: i64,
    r: i64,
    policy: &PrecisionPolicy,
) -> hspan_core::Result<[u128; 5]> {
    let query = validate_query(m, q, r)?;
    let res = solve_f(&query, policy)?;
    let w = res.window;
    Ok([w.lb, w.ml, res.f, w.mh, w.ub])
}

pub fn cmd_table(stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let policy = match policy_from_env(PrecisionPolicy::DEFAULT_START_BITS) {
        Ok(p) => p,
        Err(e) => return fail(&e, stderr),
    };
    let reference = parse_table(REFERENCE_TABLE);
    let computed: Vec<_> = reference
        .par_iter()
        .map(|&(_, m, q, r, _)| compute_row(m, q, r, &policy))
        .collect();

    let mut out = format!("{TABLE_HEADER}\n");
    let mut diffs = Vec::new();
    const COLS: [&str; 5] = ["LB", "ML", "RV", "MH", "UB"];
    for (row, got) in reference.iter().zip(computed) {
        let (en, m, q, r, printed) = *row;
        let got = match got {
            Ok(g) => g,
            Err(e) => return fail(&e, stderr),
        };
        let cells: Vec<String> = got.iter().map(u128::to_string).collect();
        out.push_str(&format!("{en},{m},{q},{r},{}\n", cells.join(",")));
        for (i, col) in COLS.iter().enumerate() {
            if got[i] != printed[i] {
                diffs.push(format!(
                    "EN {en} {col}: computed {} printed {}",
                    got[i], printed[i]
                ));
            }
        }
    }
    let _ = stdout.write_all(out.as_bytes());
    if diffs.is_empty() {
        EXIT_OK
    } else {
        let _ = writeln!(
            stderr,
            "{} cell(s) differ from the printed table:",
            diffs.len()
        );
        for d in diffs {
            let _ = writeln!(stderr, "  {d}");
        }
        EXIT_MISMATCH
    }
}

fn percent(hit: usize, total: usize) -> String {
    if total == 0 {
        return "n/a".into();
    }
    if hit == total {
        return "100%".into();
    }
    format!("{:.1}%", 100.0 * hit as f64 / total as f64)
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if args.m_max < 2 {
        return fail(
            &Error::Domain(format!("--m-max must be at least 2 (got {})", args.m_max)),
            stderr,
        );
    }
    // Validating the largest corner checks every bound and the q*r cap.
    if let Err(e) = validate_query(args.m_max, args.q_max, args.r_max) {
        return fail(&e, stderr);
    }
    if args.jobs == Some(0) {
        return fail(&Error::Domain("--jobs must be at least 1".into()), stderr);
    }
    let policy = match policy_from_env(PrecisionPolicy::DEFAULT_START_BITS) {
        Ok(p) => p,
        Err(e) => return fail(&e, stderr),
    };

    let work = || {
        let records = sweep(
            2..=args.m_max as u64,
            1..=args.q_max as u32,
            1..=args.r_max as u32,
            &policy,
            None,
        );
        let oracle: Vec<Option<bool>> = records
            .par_iter()
            .map(|rec| {
                let (res, _) = rec.outcome.as_ref().ok()?;
                if res.window.ub > args.oracle_cap as u128 {
                    return None;
                }
                let query = validate_query(rec.m as i64, rec.q as i64, rec.r as i64).ok()?;
                Some(brute_force_f(&query, args.oracle_cap).is_ok_and(|o| o.f == res.f))
            })
            .collect();
        (records, oracle)
    };
    let (records, oracle) = match args.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => return fail(&Error::Domain(format!("thread pool: {e}")), stderr),
        },
        None => work(),
    };

    let total = records.len();
    let (mut bounds_ok, mut width_ok, mut mid_ok, mut mid_total) = (0, 0, 0, 0);
    let (mut agree, mut checked, mut errata) = (0, 0, 0);
    let mut failures = Vec::new();
    let mut error_code = EXIT_OK;
    let list = total <= VERIFY_LIST_LIMIT;

    for (rec, oracle) in records.iter().zip(&oracle) {
        let label = format!("(m={}, q={}, r={})", rec.m, rec.q, rec.r);
        let (res, rep) = match &rec.outcome {
            Ok(pair) => pair,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                error_code = error_code.max(exit_code(e));
                continue;
            }
        };
        bounds_ok += rep.bounds_hold as usize;
        width_ok += rep.window_width_ok as usize;
        if let Some(h) = rep.midpoint_holds {
            mid_total += 1;
            mid_ok += h as usize;
        }
        if let Some(a) = oracle {
            checked += 1;
            agree += *a as usize;
            if !a {
                failures.push(format!(
                    "{label}: solver f = {} disagrees with the exact oracle",
                    res.f
                ));
            }
        }
        if res.erratum.is_some() {
            errata += 1;
        }
        failures.extend(rep.details.iter().cloned());
        if list {
            let _ = writeln!(
                stdout,
                "{label} f={} bounds_hold={} midpoint_holds={} window_width_ok={}",
                res.f,
                rep.bounds_hold,
                rep.midpoint_holds
                    .map_or("n/a".to_string(), |h| h.to_string()),
                rep.window_width_ok
            );
        }
    }

    let _ = writeln!(
        stdout,
        "queries: {total}\n\
         bounds_hold: {bounds_ok}/{total}\n\
         midpoint_holds: {mid_ok}/{mid_total} (q=r=1 subset)\n\
         window_width_ok: {width_ok}/{total}\n\
         oracle agreement: {agree}/{checked} ({} above the oracle cap)\n\
         errata: {errata}\n\
         {} bounds_hold, {} midpoint_holds (q=r=1 subset)",
        total - checked,
        percent(bounds_ok, total),
        percent(mid_ok, mid_total),
    );
    for f in &failures {
        let _ = writeln!(stderr, "failed: {f}");
    }
    let invariant_failed =
        bounds_ok < total || width_ok < total || mid_ok < mid_total || agree < checked;
    if invariant_failed || errata > 0 {
        EXIT_MISMATCH
    } else {
        error_code
    }
}
