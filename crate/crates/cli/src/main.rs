use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use quadfrob::cohomology;
use quadfrob::graded::DEFAULT_MAX_COLUMNS;
use quadfrob::hilbert::{self, Algebra};
use quadfrob::matfac::{self, Variant};
use quadfrob::pushforward::{self, Multiplicity, Species, SummandKind};
use quadfrob::suites::{self, Grid, Suite};
use quadfrob::{Error, QuadricContext};

mod render;

use render::{big, kind_json, poly_json, Table};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

#[derive(Parser)]
#[command(name = "quadfrob", version, about = "Frobenius push-forwards on smooth quadrics")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Column ceiling for Macaulay matrices.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COLUMNS)]
    max_columns: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HilbertAlgebra {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
    #[value(name = "gamma")]
    Gamma,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Formula,
    Brute,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Standard,
    Primed,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function of A, B, C, or the function gamma.
    Hilbert {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, value_enum, default_value_t = HilbertAlgebra::A)]
        algebra: HilbertAlgebra,
        /// Degree range `lo..hi` (exclusive) or `lo..=hi`; defaults to the support.
        #[arg(long)]
        range: Option<String>,
        #[arg(long, value_enum, default_value_t = SourceArg::Formula)]
        source: SourceArg,
    },
    /// Decomposition of F^s_* O(t), or summand sets for s >= 2.
    Decompose {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, visible_alias = "j", allow_hyphen_values = true)]
        twist: i64,
        /// Push forward a spinor bundle of this species instead (S, Splus, Sminus).
        #[arg(long)]
        spinor: Option<String>,
    },
    /// Matrix factorization (phi, psi) and optional Frobenius pull-back.
    Matfac {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
        #[arg(long, default_value_t = 3)]
        p: u32,
        /// Pull back along x_i -> x_i^q.
        #[arg(long, default_value_t = 1)]
        q: u32,
    },
    /// dim Ext^i(a, b) between summands such as O(2), S(-1), Splus(0).
    Ext {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Single degree; all degrees 0..=n when omitted.
        #[arg(long)]
        i: Option<u32>,
    },
    /// Whether F^s_* O is tilting, with the supporting summand data.
    Tilting {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Run a verification suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        /// Largest n (or N for diff, diff-new, p^n, bl-cl).
        #[arg(long)]
        n_max: Option<u32>,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<u32>>,
        #[arg(long)]
        s_max: Option<u32>,
        #[arg(long)]
        m_max: Option<u32>,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
    Disagreement(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<Value, (Value, Failure)>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let result = dispatch(&cli);
    let (value, failure) = match result {
        Ok(Ok(v)) => (Some(v), None),
        Ok(Err((v, f))) => (Some(v), Some(f)),
        Err(f) => (None, Some(f)),
    };
    if let Some(v) = value {
        let text = match cli.format {
            Format::Json => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            Format::Tsv => Table::from_json(&v).to_string(),
        };
        // a closed pipe (e.g. `| head`) is not an error
        let _ = std::io::stdout().lock().write_all(text.as_bytes());
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Some(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
        Some(Failure::Disagreement(msg)) => {
            eprintln!("formula and brute force disagree: {msg}");
            ExitCode::from(EXIT_DISAGREEMENT)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Hilbert { n, p, s, algebra, range, source } => {
            cmd_hilbert(*n, *p, *s, *algebra, range.as_deref(), *source, cli.max_columns)
        }
        Command::Decompose { n, p, s, twist, spinor } => cmd_decompose(*n, *p, *s, *twist, spinor.as_deref()),
        Command::Matfac { m, variant, p, q } => cmd_matfac(*m, *variant, *p, *q),
        Command::Ext { n, from, to, i } => cmd_ext(*n, from, to, *i),
        Command::Tilting { n, p, s } => cmd_tilting(*n, *p, *s),
        Command::Verify { suite, n_max, p, s_max, m_max } => {
            cmd_verify(suite, *n_max, p.clone(), *s_max, *m_max, cli.max_columns)
        }
    }
}

fn parse_range(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("invalid range {text:?}; expected lo..hi or lo..=hi"));
    let (lo, hi, inclusive) = if let Some((a, b)) = text.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = text.split_once("..") {
        (a, b, false)
    } else {
        return Err(bad());
    };
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, if inclusive { hi } else { hi - 1 }))
}

fn cmd_hilbert(
    n: u32,
    p: u32,
    s: u32,
    algebra: HilbertAlgebra,
    range: Option<&str>,
    source: SourceArg,
    max_columns: usize,
) -> Result<Outcome, Failure> {
    let ctx = QuadricContext::new(n, p, s)?;
    let header = json!({"schema": 1, "n": n, "p": p, "s": s, "q": ctx.q()});
    if algebra == HilbertAlgebra::Gamma {
        let (lo, hi) = match range {
            Some(r) => parse_range(r)?,
            None => (0, ctx.q() as i64 - 1),
        };
        let rows: Vec<Value> = (lo..=hi)
            .map(|i| Ok(json!({"i": i, "gamma": big(&hilbert::gamma(&ctx, i)?)})))
            .collect::<Result<_, Error>>()?;
        let mut out = header;
        out["algebra"] = json!("gamma");
        out["rows"] = json!(rows);
        return Ok(Ok(out));
    }
    let alg = match algebra {
        HilbertAlgebra::A => Algebra::A,
        HilbertAlgebra::B => Algebra::B,
        HilbertAlgebra::C => Algebra::C,
        HilbertAlgebra::Gamma => unreachable!(),
    };
    let (lo, hi) = match range {
        Some(r) => parse_range(r)?,
        None => hilbert::support(&ctx, alg),
    };
    let mut rows = Vec::new();
    let mut mismatch = None;
    for i in lo..=hi {
        let (dim, tag): (BigInt, &str) = match source {
            SourceArg::Formula => (hilbert::formula_dim(&ctx, alg, i)?, "formula"),
            SourceArg::Brute => (hilbert::brute_dim(&ctx, alg, i, max_columns)?, "brute"),
            SourceArg::Both => {
                let f = hilbert::formula_dim(&ctx, alg, i)?;
                let b = hilbert::brute_dim(&ctx, alg, i, max_columns)?;
                if f != b {
                    mismatch.get_or_insert(format!("{alg}_{i}: formula {f}, brute {b}"));
                    rows.push(json!({"degree": i, "formula": big(&f), "brute": big(&b), "source": "disagree"}));
                    continue;
                }
                (f, "both-agree")
            }
        };
        rows.push(json!({"degree": i, "dim": big(&dim), "source": tag}));
    }
    let mut out = header;
    out["algebra"] = json!(alg.to_string());
    out["rows"] = json!(rows);
    Ok(match mismatch {
        None => Ok(out),
        Some(m) => Err((out, Failure::Disagreement(m))),
    })
}

fn cmd_decompose(n: u32, p: u32, s: u32, twist: i64, spinor: Option<&str>) -> Result<Outcome, Failure> {
    let ctx = QuadricContext::new(n, p, s)?;
    if s == 0 {
        return Err(Failure::Usage("s must be at least 1".into()));
    }
    let start = match spinor {
        None => SummandKind::Line(twist),
        Some(name) => {
            let sp = Species::parse(name).ok_or_else(|| Failure::Usage(format!("unknown species {name}")))?;
            SummandKind::Spinor(sp.validate(n)?, twist)
        }
    };
    let mut out = json!({"schema": 1, "n": n, "p": p, "s": s, "q": ctx.q(), "source": start.to_string()});
    if s == 1 && !start.is_spinor() {
        let dec = pushforward::decompose_one_step(&ctx, twist)?;
        let summands: Vec<Value> = dec
            .summands
            .iter()
            .map(|d| {
                let mut v = kind_json(&d.kind);
                v["multiplicity"] = match &d.multiplicity {
                    Multiplicity::Known(m) => big(m),
                    Multiplicity::Unknown => json!("unknown"),
                };
                v
            })
            .collect();
        out["exact"] = json!(true);
        out["summands"] = json!(summands);
        out["rank_check"] = dec.total_rank().as_ref().map(big).unwrap_or(Value::Null);
        out["expected_rank"] = big(&num_traits::Pow::pow(BigInt::from(p), n));
    } else {
        let cl = pushforward::summand_closure(&ctx, s, start)?;
        let with_unknown = |set: &std::collections::BTreeSet<SummandKind>| -> Vec<Value> {
            set.iter()
                .map(|k| {
                    let mut v = kind_json(k);
                    v["multiplicity"] = json!("unknown");
                    v
                })
                .collect()
        };
        out["exact"] = json!(false);
        out["certain"] = json!(with_unknown(&cl.certain));
        out["possible"] = json!(with_unknown(&cl.possible));
    }
    Ok(Ok(out))
}

fn cmd_matfac(m: u32, variant: VariantArg, p: u32, q: u32) -> Result<Outcome, Failure> {
    let prime = quadfrob::algebra::Prime::new(p)?;
    let variant = match variant {
        VariantArg::Standard => Variant::Standard,
        VariantArg::Primed => Variant::Primed,
    };
    if q == 0 {
        return Err(Failure::Usage("q must be positive".into()));
    }
    let pair = matfac::build(m, variant, prime)?;
    let pair = if q == 1 { pair } else { matfac::frobenius_pullback(&pair, q) };
    let matrix = |mat: &matfac::PolyMatrix| -> Value {
        json!(mat.iter().map(|row| row.iter().map(poly_json).collect::<Vec<_>>()).collect::<Vec<_>>())
    };
    let verified = matfac::verify(&pair);
    let out = json!({
        "schema": 1,
        "m": m,
        "variant": variant.to_string(),
        "p": p,
        "q": q,
        "size": pair.size(),
        "nvars": pair.nvars(),
        "form": poly_json(&pair.form),
        "phi": matrix(&pair.phi),
        "psi": matrix(&pair.psi),
        "verified": verified,
    });
    Ok(if verified { Ok(out) } else { Err((out, Failure::Verification("phi psi != form I".into()))) })
}

fn parse_kind(text: &str, n: u32) -> Result<SummandKind, Failure> {
    let bad = || Failure::Usage(format!("invalid summand {text:?}; expected O(t), S(t), Splus(t) or Sminus(t)"));
    let (name, rest) = text.trim().split_once('(').ok_or_else(bad)?;
    let twist: i64 = rest.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    if name == "O" {
        return Ok(SummandKind::Line(twist));
    }
    let sp = Species::parse(name).ok_or_else(bad)?;
    Ok(SummandKind::Spinor(sp.validate(n)?, twist))
}

fn cmd_ext(n: u32, from: &str, to: &str, i: Option<u32>) -> Result<Outcome, Failure> {
    let (a, b) = (parse_kind(from, n)?, parse_kind(to, n)?);
    let degrees: Vec<u32> = match i {
        Some(i) => vec![i],
        None => (0..=n).collect(),
    };
    let rows: Vec<Value> = degrees
        .into_iter()
        .map(|i| Ok(json!({"i": i, "dim": big(&cohomology::ext_dim(n, a, b, i)?)})))
        .collect::<Result<_, Error>>()?;
    Ok(Ok(json!({"schema": 1, "n": n, "from": a.to_string(), "to": b.to_string(), "rows": rows})))
}

fn cmd_tilting(n: u32, p: u32, s: u32) -> Result<Outcome, Failure> {
    let r = cohomology::tilting_decision(n, p, s)?;
    let kinds = |set: &std::collections::BTreeSet<SummandKind>| -> Vec<Value> { set.iter().map(kind_json).collect() };
    let out = json!({
        "schema": 1,
        "n": n,
        "p": p,
        "s": s,
        "verdict": r.verdict.to_string(),
        "confirmed": r.confirmed,
        "certain": kinds(&r.closure.certain),
        "possible": kinds(&r.closure.possible),
        "possible_quasi_exceptional": r.possible_quasi_exceptional,
        "certain_generates": r.certain_generates,
        "obstruction": r.obstruction.map(|(a, b, i)| json!({"from": a.to_string(), "to": b.to_string(), "i": i})),
    });
    Ok(if r.confirmed {
        Ok(out)
    } else {
        Err((out, Failure::Verification("verdict not confirmed by summand data".into())))
    })
}

fn cmd_verify(
    name: &str,
    n_max: Option<u32>,
    primes: Option<Vec<u32>>,
    s_max: Option<u32>,
    m_max: Option<u32>,
    max_columns: usize,
) -> Result<Outcome, Failure> {
    let selected: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(name).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            Failure::Usage(format!("unknown suite {name}; available: all, {}", names.join(", ")))
        })?]
    };
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    for suite in selected {
        let mut grid = Grid::default_for(suite);
        if let Some(max) = n_max {
            let lo = grid.dims.first().copied().unwrap_or(1);
            grid.dims = (lo..=max).collect();
        }
        if let Some(ps) = &primes {
            grid.primes = ps.clone();
        }
        if let Some(max) = s_max {
            grid.s_values = (1..=max).collect();
        }
        if let Some(max) = m_max {
            grid.m_max = max;
        }
        grid.max_columns = max_columns;
        let report = suites::run(suite, &grid)?;
        if !report.passed() {
            failed.push(format!("{suite}: {} of {} cases", report.failures(), report.cases.len()));
        }
        let cases: Vec<Value> = report
            .cases
            .iter()
            .map(|c| json!({"case": c.label, "status": if c.passed { "pass" } else { "fail" }, "detail": c.detail}))
            .collect();
        reports.push(json!({
            "suite": suite.name(),
            "passed": report.passed(),
            "cases": cases,
            "failures": report.failures(),
            "notes": report.notes,
        }));
    }
    let out = json!({"schema": 1, "suites": reports});
    Ok(if failed.is_empty() { Ok(out) } else { Err((out, Failure::Verification(failed.join("; ")))) })
}
