mod input;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ballquot_core::classify::{invariants, partition_checked, CommensurabilityInvariant};
use ballquot_core::conditions::{enumerate_types, TypeFilter};
use ballquot_core::covering::is_arithmetic;
use ballquot_core::dataset::Dataset;
use ballquot_core::euler::bmy_sweep;
use ballquot_core::lyapunov::spectrum;
use ballquot_core::par::{self, ExecMode};
use ballquot_core::rational::{fmt_q, Q};
use ballquot_core::record::{analyze, AnalysisRecord};
use ballquot_core::table::reproduce;
use ballquot_core::CoveringType;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::input::{parse_type, InputError};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID_TYPE: u8 = 2;
const EXIT_NOT_LATTICE: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    Int,
    Sigmaint,
    Nonarithmetic,
}

impl From<Filter> for TypeFilter {
    fn from(f: Filter) -> Self {
        match f {
            Filter::Int => TypeFilter::Int,
            Filter::Sigmaint => TypeFilter::SigmaInt,
            Filter::Nonarithmetic => TypeFilter::NonArithmetic,
        }
    }
}

/// Exact Lyapunov spectra and orbifold invariants of ball quotients from
/// cyclic coverings y^d = prod (x - x_i)^{a_i}.
///
/// Covering types are written `d;a1,a2,...,aN`, for example `12;3,3,5,6,7`.
/// Whitespace around numbers is ignored.
///
/// Exit codes: 0 success, 1 failed check, 2 invalid type or usage,
/// 3 the type satisfies neither INT nor Sigma-INT.
#[derive(Debug, Parser)]
#[command(name = "ballquot", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for the random BMY trials.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest degree d for enumerate.
    #[arg(long, global = true, default_value_t = 12)]
    max_d: u64,
    /// Number of branch points N for enumerate.
    #[arg(long, global = true, default_value_t = 5)]
    n_points: usize,
    /// Type filter for enumerate.
    #[arg(long, global = true, value_enum, default_value_t = Filter::Sigmaint)]
    filter: Filter,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full analysis of one covering type.
    Analyze {
        /// Covering type `d;a1,...,aN`.
        #[arg(value_name = "TYPE", allow_hyphen_values = true)]
        ty: String,
    },
    /// Recompute the reference table and diff it cell by cell.
    ///
    /// CSV columns: row,input,condition,model,parabolic,genus,dim_p,dim_u,spectrum,relative_euler,status
    Table {
        /// Reference rows in TOML instead of the builtin ones.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// List covering types with d <= --max-d passing --filter.
    Enumerate {
        /// Smallest degree to list, for resuming a sweep.
        #[arg(long, default_value_t = 2)]
        from_d: u64,
    },
    /// Check 3 e_orb = (K + R)^2 on seeded random weight quintuples.
    Bmy {
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
    /// Group covering types by equal commensurability invariants.
    Classify {
        /// One type per line (`#` starts a comment); the builtin rows if omitted.
        file: Option<PathBuf>,
    },
}

fn set(v: &[Q]) -> String {
    format!("{{{}}}", v.iter().map(fmt_q).collect::<Vec<_>>().join(", "))
}

fn opt_set(v: &Option<Vec<Q>>) -> String {
    v.as_deref().map(set).unwrap_or_else(|| "-".into())
}

fn csv_writer() -> csv::Writer<io::Stdout> {
    csv::Writer::from_writer(io::stdout())
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_analyze(cli: &Cli, ty: &str) -> Result<u8, String> {
    let ct = match parse_type(ty) {
        Ok(ct) => ct,
        Err(e) => {
            eprintln!("{ty}: {e}");
            return Ok(EXIT_INVALID_TYPE);
        }
    };
    let rec = analyze(&ct).map_err(|e| format!("{ct}: {e}"))?;
    match cli.format {
        Format::Json => print_json(&rec),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["k", "mu", "signature", "kind", "lambda"]).map_err(|e| e.to_string())?;
            for c in &rec.conjugates {
                let kind = serde_json::to_value(c.kind).unwrap().as_str().unwrap_or_default().to_string();
                w.write_record([
                    c.k.to_string(),
                    c.mu.iter().map(fmt_q).collect::<Vec<_>>().join(" "),
                    format!("({},{})", c.signature[0], c.signature[1]),
                    kind,
                    c.lambda.as_ref().map(fmt_q).unwrap_or_default(),
                ])
                .map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Table => print_record(&rec),
    }
    Ok(if rec.lattice { 0 } else { EXIT_NOT_LATTICE })
}

fn print_record(rec: &AnalysisRecord) {
    let c = &rec.condition;
    let mut cond = c.tag.clone();
    if let Some(s) = &c.symmetry_set {
        cond += &format!(" on {{{}}}", s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    }
    println!("type            {}", rec.input);
    println!("condition       {cond}");
    println!("parabolic       {}", if c.parabolic.is_empty() { "-".into() } else { c.parabolic.join(" ") });
    println!("contracted      {}", if c.contracted.is_empty() { "-".into() } else { c.contracted.join(" ") });
    println!("model           {}", rec.model.as_deref().unwrap_or("-"));
    println!("genus           {}", rec.genus);
    println!("dim P, dim U    {}, {}", rec.dim_p, rec.dim_u);
    println!("trace field     Q(cos 2pi/{}), degree {}", rec.trace_field.canonical_d, rec.trace_field.degree);
    let arith = match rec.arithmetic {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    };
    println!("arithmetic      {arith}");
    println!();
    println!("{:>4}  {:<32} {:<10} {:<18} lambda", "k", "mu(k)", "signature", "kind");
    for cj in &rec.conjugates {
        let mu = cj.mu.iter().map(fmt_q).collect::<Vec<_>>().join(" ");
        let kind = serde_json::to_value(cj.kind).unwrap().as_str().unwrap_or_default().to_string();
        let lambda = cj.lambda.as_ref().map(fmt_q).unwrap_or_else(|| "-".into());
        println!("{:>4}  {:<32} {:<10} {:<18} {}", cj.k, mu, format!("({},{})", cj.signature[0], cj.signature[1]), kind, lambda);
    }
    println!();
    if rec.lattice {
        println!("spectrum        {}", set(&rec.spectrum));
        println!("relative Euler  {}", opt_set(&rec.relative_euler));
    } else {
        println!("spectrum        not computed: neither INT nor Sigma-INT holds");
    }
    if let Some(e) = &rec.euler {
        let verdict = if e.bmy { "equality holds" } else { "equality FAILS" };
        println!("e_orb           {}", fmt_q(&e.e_orb));
        println!("(K+R)^2         {}  ({verdict})", fmt_q(&e.c1_sq));
    }
}

fn cmd_table(cli: &Cli, dataset: Option<&PathBuf>) -> Result<u8, String> {
    let ds = match dataset {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Dataset::from_toml_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => Dataset::builtin(),
    };
    let out = reproduce(&ds);
    let matched = out.iter().filter(|r| r.ok()).count();
    match cli.format {
        Format::Json => print_json(&out),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record([
                "row", "input", "condition", "model", "parabolic", "genus", "dim_p", "dim_u", "spectrum",
                "relative_euler", "status",
            ])
            .map_err(|e| e.to_string())?;
            for r in &out {
                let status = if r.ok() { "match" } else { "mismatch" };
                let cells: Vec<String> = match &r.computed {
                    Some(c) => vec![
                        c.condition.clone(),
                        c.model.clone(),
                        c.parabolic.join(" "),
                        c.genus.to_string(),
                        c.dim_p.to_string(),
                        c.dim_u.to_string(),
                        format!("{{{}}}", c.spectrum.join(", ")),
                        c.relative_euler.as_ref().map(|v| format!("{{{}}}", v.join(", "))).unwrap_or_default(),
                    ],
                    None => vec![String::new(); 8],
                };
                let mut row = vec![r.index.to_string(), r.input.clone()];
                row.extend(cells);
                row.push(status.into());
                w.write_record(&row).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Table => {
            println!(
                "{:>3}  {:<18} {:<5} {:<7} {:<5} {:>5} {:>5} {:>5}  {:<26} {:<22} status",
                "row", "type", "cond", "model", "cusp", "genus", "dimP", "dimU", "spectrum", "relative Euler"
            );
            for r in &out {
                let status = if r.ok() { "ok" } else { "MISMATCH" };
                match &r.computed {
                    Some(c) => println!(
                        "{:>3}  {:<18} {:<5} {:<7} {:<5} {:>5} {:>5} {:>5}  {:<26} {:<22} {status}",
                        r.index,
                        r.input,
                        c.condition,
                        c.model,
                        if c.parabolic.is_empty() { "-".into() } else { c.parabolic.join(" ") },
                        c.genus,
                        c.dim_p,
                        c.dim_u,
                        format!("{{{}}}", c.spectrum.join(", ")),
                        c.relative_euler.as_ref().map(|v| format!("{{{}}}", v.join(", "))).unwrap_or_else(|| "-".into()),
                    ),
                    None => println!("{:>3}  {:<18} {status}", r.index, r.input),
                }
            }
            println!("{matched}/{} rows match", out.len());
        }
    }
    for r in &out {
        if let Some(e) = &r.error {
            eprintln!("row {}: {e}", r.index);
        }
        for m in &r.mismatches {
            eprintln!("row {}, column {}: expected {}, computed {}", m.row, m.column, m.expected, m.computed);
        }
    }
    Ok(if matched == out.len() { 0 } else { EXIT_FAILURE })
}

fn cmd_enumerate(cli: &Cli, from_d: u64) -> Result<u8, String> {
    let types: Vec<CoveringType> = enumerate_types(cli.max_d, cli.n_points, cli.filter.into())
        .into_iter()
        .filter(|c| c.d() >= from_d)
        .collect();
    let rows = par::map(ExecMode::default(), types, |ct| {
        let arithmetic = is_arithmetic(&ct).ok();
        let spec = spectrum(&ct).map(|s| s.distinct_nonnegative).map_err(|e| e.to_string());
        let rec = analyze(&ct).ok();
        (ct, arithmetic, spec, rec)
    });
    let tag = |a: Option<bool>| match a {
        Some(true) => "arithmetic",
        Some(false) => "non-arithmetic",
        None => "-",
    };
    match cli.format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(ct, a, s, rec)| {
                    json!({
                        "input": ct.to_string(),
                        "condition": rec.as_ref().map(|r| r.condition.tag.clone()),
                        "model": rec.as_ref().and_then(|r| r.model.clone()),
                        "arithmetic": a,
                        "spectrum": s.as_ref().ok().map(|v| v.iter().map(fmt_q).collect::<Vec<_>>()),
                        "error": s.as_ref().err(),
                    })
                })
                .collect();
            print_json(&v);
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["d", "a", "condition", "model", "arithmetic", "spectrum"]).map_err(|e| e.to_string())?;
            for (ct, a, s, rec) in &rows {
                w.write_record([
                    ct.d().to_string(),
                    ct.exponents().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                    rec.as_ref().map(|r| r.condition.tag.clone()).unwrap_or_default(),
                    rec.as_ref().and_then(|r| r.model.clone()).unwrap_or_default(),
                    tag(*a).into(),
                    s.as_ref().map(|v| set(v)).unwrap_or_else(|e| format!("error: {e}")),
                ])
                .map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Table => {
            for (ct, a, s, rec) in &rows {
                println!(
                    "{:<22} {:<5} {:<8} {:<15} {}",
                    ct.to_string(),
                    rec.as_ref().map(|r| r.condition.tag.as_str()).unwrap_or("-"),
                    rec.as_ref().and_then(|r| r.model.as_deref()).unwrap_or("-"),
                    tag(*a),
                    s.as_ref().map(|v| set(v)).unwrap_or_else(|e| format!("not computed: {e}")),
                );
            }
            if !rows.is_empty() {
                println!("{} types", rows.len());
            }
        }
    }
    Ok(0)
}

fn cmd_bmy(cli: &Cli, trials: u64) -> Result<u8, String> {
    let s = bmy_sweep(trials, cli.seed).map_err(|e| e.to_string())?;
    let holds = s.holds();
    match cli.format {
        Format::Json => print_json(&json!({
            "seed": s.seed,
            "trials": s.trials.len(),
            "holds": holds,
            "with_contracted": s.with_contracted(),
            "with_parabolic": s.with_parabolic(),
            "failures": s.failures().iter().map(|t| t.mu.iter().map(fmt_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["trial", "mu", "contracted", "parabolic", "e_orb", "c1_sq", "holds"])
                .map_err(|e| e.to_string())?;
            for t in &s.trials {
                w.write_record([
                    t.index.to_string(),
                    t.mu.iter().map(fmt_q).collect::<Vec<_>>().join(" "),
                    t.contracted.to_string(),
                    t.parabolic.to_string(),
                    fmt_q(&t.report.e_orb),
                    fmt_q(&t.report.c1_sq),
                    t.report.bmy_holds.to_string(),
                ])
                .map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Table => {
            for t in s.failures() {
                println!("FAIL trial {}: mu = {}", t.index, set(&t.mu));
            }
            println!(
                "{holds}/{} trials satisfy 3 e_orb = (K+R)^2 (seed {}, {} with a contracted pair, {} with a parabolic pair)",
                s.trials.len(),
                s.seed,
                s.with_contracted(),
                s.with_parabolic()
            );
        }
    }
    Ok(if holds == s.trials.len() { 0 } else { EXIT_FAILURE })
}

struct Member {
    label: String,
    ct: CoveringType,
}

fn read_members(path: &PathBuf) -> Result<Vec<Member>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut members = Vec::new();
    let mut skipped = 0;
    for (n, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match parse_type(body) {
            Ok(ct) => members.push(Member { label: format!("line {}", n + 1), ct }),
            Err(e @ (InputError::Parse { .. } | InputError::Invalid(_))) => {
                eprintln!("{}:{}: {e}", path.display(), n + 1);
                skipped += 1;
            }
        }
    }
    if skipped > 0 {
        eprintln!("{skipped} line(s) skipped");
    }
    Ok(members)
}

fn cmd_classify(cli: &Cli, file: Option<&PathBuf>) -> Result<u8, String> {
    let (members, known, heading) = match file {
        None => {
            let ds = Dataset::builtin();
            let members = ds
                .surface_rows()
                .iter()
                .map(|r| Member { label: format!("row {}", r.index), ct: r.covering_type().unwrap() })
                .collect::<Vec<_>>();
            (members, ds.known_edges(), "commensurability class")
        }
        Some(p) => (read_members(p)?, Vec::new(), "invariant-equal class"),
    };
    // types without computable invariants are reported and left out
    let mut kept = Vec::new();
    for m in members {
        match invariants(&m.ct) {
            Ok(inv) => kept.push((m, inv)),
            Err(e) => eprintln!("{} ({}): {e}", m.label, m.ct),
        }
    }
    let cts: Vec<CoveringType> = kept.iter().map(|(m, _)| m.ct.clone()).collect();
    let classes = partition_checked(&cts, &known).map_err(|e| e.to_string())?;
    let describe = |inv: &CommensurabilityInvariant| {
        json!({
            "trace_field": {"canonical_d": inv.trace_field.canonical_d, "degree": inv.trace_field.degree},
            "spectrum": inv.spectrum.iter().map(fmt_q).collect::<Vec<_>>(),
            "relative_euler": inv.relative_euler_set.as_ref().map(|v| v.iter().map(fmt_q).collect::<Vec<_>>()),
            "cocompact": inv.cocompact,
        })
    };
    match cli.format {
        Format::Json => {
            let v: Vec<_> = classes
                .iter()
                .map(|c| {
                    json!({
                        "members": c.iter().map(|&i| kept[i].0.label.clone()).collect::<Vec<_>>(),
                        "inputs": c.iter().map(|&i| kept[i].0.ct.to_string()).collect::<Vec<_>>(),
                        "invariant": describe(&kept[c[0]].1),
                    })
                })
                .collect();
            print_json(&v);
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["class", "member", "input", "canonical_d", "spectrum", "relative_euler", "cocompact"])
                .map_err(|e| e.to_string())?;
            for (n, c) in classes.iter().enumerate() {
                for &i in c {
                    let (m, inv) = &kept[i];
                    w.write_record([
                        (n + 1).to_string(),
                        m.label.clone(),
                        m.ct.to_string(),
                        inv.trace_field.canonical_d.to_string(),
                        set(&inv.spectrum),
                        opt_set(&inv.relative_euler_set),
                        inv.cocompact.to_string(),
                    ])
                    .map_err(|e| e.to_string())?;
                }
            }
            w.flush().map_err(|e| e.to_string())?;
        }
        Format::Table => {
            for (n, c) in classes.iter().enumerate() {
                let inv = &kept[c[0]].1;
                let names: Vec<String> = c.iter().map(|&i| format!("{} ({})", kept[i].0.label, kept[i].0.ct)).collect();
                println!("{heading} {}: {}", n + 1, names.join(", "));
                println!(
                    "    field Q(cos 2pi/{}) of degree {}, spectrum {}, relative Euler {}, {}",
                    inv.trace_field.canonical_d,
                    inv.trace_field.degree,
                    set(&inv.spectrum),
                    opt_set(&inv.relative_euler_set),
                    if inv.cocompact { "cocompact" } else { "cusped" }
                );
            }
            println!("{} classes", classes.len());
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Analyze { ty } => cmd_analyze(cli, ty),
        Command::Table { dataset } => cmd_table(cli, dataset.as_ref()),
        Command::Enumerate { from_d } => cmd_enumerate(cli, *from_d),
        Command::Bmy { trials } => cmd_bmy(cli, *trials),
        Command::Classify { file } => cmd_classify(cli, file.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
