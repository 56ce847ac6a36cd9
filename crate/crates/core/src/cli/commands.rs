use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::{
    BoundArgs, Cli, Command, ConstructArgs, EstimateArgs, Family, Format, OracleArgs, ScanArgs,
    Table1Args, EXIT_OK, EXIT_VIOLATIONS,
};
use crate::bounds::{
    corollary2_check, gv_check, lll_bound, theorem1_bound, ArithMode, BoundConfig, BoundReport,
};
use crate::codecs::{catalog, emit_alist, parse_matrix, CATALOG_NAMES};
use crate::construct::{estimate_z, las_vegas_minimal, sample_and_repair, ConstructionResult};
use crate::error::Error;
use crate::gf2::{minimum_distance, Distance, LinearCode};
use crate::oracle::{exact_collective, exact_plain, SearchMode};
use crate::trapscan::{scan_with, ScanOptions, SizeRange, TrapProfile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

type Outcome = std::result::Result<i32, CliError>;

pub const TABLE1_N: u64 = 2640;
pub const TABLE1_K: u64 = 1320;
pub const TABLE1_ROWS: [(u64, u64); 4] = [(6, 5), (8, 5), (12, 5), (14, 5)];

pub fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let ctx = Ctx { cli, out, err };
    match &cli.command {
        Command::Bound(a) => bound(ctx, a),
        Command::Scan(a) => scan(ctx, a, stdin),
        Command::Construct(a) => construct(ctx, a),
        Command::Oracle(a) => oracle(ctx, a),
        Command::Estimate(a) => estimate(ctx, a),
        Command::Table1(a) => table1(ctx, a),
        Command::Catalog => list_catalog(ctx),
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn format(&self) -> Format {
        self.cli.format
    }

    fn budgets(&self) -> Value {
        json!({
            "scan_warn": self.cli.scan_warn.to_string(),
            "enum_limit": self.cli.enum_limit,
            "oracle_budget": self.cli.oracle_budget.to_string(),
        })
    }

    /// The JSON document every command prints in `--format json`.
    fn envelope(
        &mut self,
        command: &str,
        seed: Option<u64>,
        mode: Option<ArithMode>,
        assumptions: &[String],
        result: impl Serialize,
    ) -> Result<(), CliError> {
        let doc = json!({
            "command": command,
            "seed": seed,
            "mode": mode,
            "assumptions": assumptions,
            "budgets": self.budgets(),
            "result": result,
        });
        serde_json::to_writer_pretty(&mut *self.out, &doc)?;
        writeln!(self.out)?;
        Ok(())
    }

    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(&mut *self.out);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Uses `seed` or draws one, announcing a drawn seed on stderr.
    fn seed(&mut self, seed: Option<u64>) -> Result<u64, CliError> {
        Ok(match seed {
            Some(s) => s,
            None => {
                let s = rand::random();
                writeln!(self.err, "seed: {s} (drawn from the OS)")?;
                s
            }
        })
    }
}

fn need(v: Option<u64>, flag: &str, family: &str) -> Result<u64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--family {family} needs {flag}")))
}

fn report_row(r: &BoundReport) -> Vec<String> {
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    vec![
        format!("{:?}", r.family).to_lowercase(),
        r.n.to_string(),
        r.k.to_string(),
        r.a.to_string(),
        r.b.to_string(),
        r.value.to_string(),
        opt(r.optimizer_t),
        opt(r.lll_m),
        r.mode.to_string(),
    ]
}

const REPORT_HEADER: [&str; 9] = ["family", "n", "k", "a", "b", "value", "optimizer_t", "lll_m", "mode"];

fn print_report(ctx: &mut Ctx<'_>, r: &BoundReport) -> Outcome {
    match ctx.format() {
        Format::Json => ctx.envelope("bound", None, Some(r.mode), &r.assumptions, r)?,
        Format::Csv => ctx.csv(&REPORT_HEADER, &[report_row(r)])?,
        Format::Human => {
            let name = format!("{:?}", r.family).to_lowercase();
            writeln!(ctx.out, "{name} bound: {}", r.value)?;
            writeln!(ctx.out, "  n = {}, k = {}, a = {}, b = {}", r.n, r.k, r.a, r.b)?;
            if let Some(t) = r.optimizer_t {
                writeln!(ctx.out, "  optimizer t: {t}")?;
            }
            if let Some(m) = r.lll_m {
                writeln!(ctx.out, "  local-lemma m: {m}")?;
            }
            if let Some(e) = &r.expectation_breakdown {
                writeln!(ctx.out, "  E[repair mass]: {}", e.repair_mass)?;
                writeln!(ctx.out, "  E[rank deficiency]: {}", e.rank_deficiency)?;
            }
            writeln!(ctx.out, "  mode: {}", r.mode)?;
            for a in &r.assumptions {
                writeln!(ctx.out, "  assumption: {a}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn bound(mut ctx: Ctx<'_>, args: &BoundArgs) -> Outcome {
    let distance = args.d.map_or(Distance::Unknown, |d| Distance::Exact(d as usize));
    let cfg = BoundConfig::with_mode(args.mode.into());
    match args.family {
        Family::Theorem1 => {
            let a = need(args.a, "-a", "theorem1")?;
            let b = need(args.b, "-b", "theorem1")?;
            let r = theorem1_bound(args.n, args.k, a, b, distance, &cfg)?;
            print_report(&mut ctx, &r)
        }
        Family::Lll => {
            let a = need(args.a, "-a", "lll")?;
            let b = need(args.b, "-b", "lll")?;
            let r = lll_bound(args.n, args.k, a, b, distance)?;
            print_report(&mut ctx, &r)
        }
        Family::Corollary2 => {
            let a = need(args.a, "-a", "corollary2")?;
            let b = need(args.b, "-b", "corollary2")?;
            let c = corollary2_check(args.n, args.k, a, b, distance, &cfg)?;
            match ctx.format() {
                Format::Json => ctx.envelope("bound", None, Some(c.mode), &c.assumptions, &c)?,
                Format::Csv => ctx.csv(
                    &["family", "n", "k", "a", "b", "holds", "lhs", "mode"],
                    &[vec![
                        "corollary2".into(),
                        args.n.to_string(),
                        args.k.to_string(),
                        a.to_string(),
                        b.to_string(),
                        c.holds.to_string(),
                        c.lhs.to_string(),
                        c.mode.to_string(),
                    ]],
                )?,
                Format::Human => {
                    writeln!(ctx.out, "corollary2: holds = {}", c.holds)?;
                    writeln!(ctx.out, "  lhs: {}", c.lhs)?;
                    writeln!(ctx.out, "  mode: {}", c.mode)?;
                    for a in &c.assumptions {
                        writeln!(ctx.out, "  assumption: {a}")?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Family::Gv => {
            let d = need(args.d, "-d", "gv")?;
            let holds = gv_check(args.n, args.k, d)?;
            let result = json!({"n": args.n, "k": args.k, "d": d, "holds": holds});
            match ctx.format() {
                Format::Json => ctx.envelope("bound", None, Some(ArithMode::Exact), &[], result)?,
                Format::Csv => ctx.csv(
                    &["family", "n", "k", "d", "holds"],
                    &[vec![
                        "gv".into(),
                        args.n.to_string(),
                        args.k.to_string(),
                        d.to_string(),
                        holds.to_string(),
                    ]],
                )?,
                Format::Human => writeln!(
                    ctx.out,
                    "gv: holds = {holds} (n = {}, k = {}, d = {d})",
                    args.n, args.k
                )?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }
}

fn scan(mut ctx: Ctx<'_>, args: &ScanArgs, stdin: &mut dyn Read) -> Outcome {
    let h = parse_matrix(&read_input(&args.input, stdin)?)?;
    let profile = TrapProfile::new(args.a, args.b)?;
    let opts = ScanOptions {
        sizes: if args.exact_size {
            SizeRange::Exactly
        } else {
            SizeRange::Collective
        },
        cap: args.cap,
        warn_threshold: ctx.cli.scan_warn,
        parallel: true,
    };
    let report = scan_with(&h, profile, &opts);
    match ctx.format() {
        Format::Json => ctx.envelope("scan", None, None, &[], &report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .violations
                .iter()
                .map(|v| {
                    let cols: Vec<String> = v.subset.iter().map(ToString::to_string).collect();
                    vec![cols.join(" "), v.subset.len().to_string(), v.odd_count.to_string()]
                })
                .collect();
            ctx.csv(&["subset", "size", "odd_rows"], &rows)?;
        }
        Format::Human => {
            for w in &report.warnings {
                writeln!(ctx.err, "warning: {w}")?;
            }
            let what = if args.exact_size { "size" } else { "sizes up to" };
            writeln!(
                ctx.out,
                "{} x {} matrix, {what} a = {}, b = {}: {} subsets scanned",
                h.rows(),
                h.cols(),
                args.a,
                args.b,
                report.scanned_subsets
            )?;
            if report.clean {
                writeln!(ctx.out, "clean")?;
            } else {
                writeln!(ctx.out, "{} violations (columns 0-based)", report.violations.len())?;
                for v in &report.violations {
                    writeln!(ctx.out, "  {:?}: {} odd rows", v.subset, v.odd_count)?;
                }
                if report.truncated {
                    writeln!(ctx.out, "  stopped at cap {}", args.cap.unwrap_or(0))?;
                }
            }
        }
    }
    Ok(if report.clean { EXIT_OK } else { EXIT_VIOLATIONS })
}

/// Catalog name first, then a matrix file.
fn load_code(spec: &str, enum_limit: u32) -> Result<(LinearCode, Vec<String>), CliError> {
    match catalog(spec) {
        Ok(entry) => {
            let note = format!("{}: {}", entry.name, entry.provenance);
            return Ok((entry.into_code()?, vec![note]));
        }
        Err(Error::UnknownCode(_)) if Path::new(spec).is_file() => {}
        Err(e) => return Err(e.into()),
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("{spec}: {e}")))?;
    let code = LinearCode::from_parity_check(&parse_matrix(&text)?, Distance::Unknown)?;
    if code.k() == 0 || code.k() > enum_limit as usize {
        let note = format!(
            "minimum distance not computed (k = {}, enumeration limit {enum_limit}); a <= d - 1 unchecked",
            code.k()
        );
        return Ok((code, vec![note]));
    }
    let d = minimum_distance(&code, enum_limit)?;
    let note = format!("minimum distance {d} found by enumerating 2^{} codewords", code.k());
    Ok((code.with_distance(Distance::Exact(d)), vec![note]))
}

fn meta_row(r: &ConstructionResult) -> Vec<String> {
    let m = r.metadata();
    vec![
        m.seed.to_string(),
        m.rows.to_string(),
        m.cols.to_string(),
        m.sampled_rows.to_string(),
        m.repair_rows_added.to_string(),
        m.attempts.to_string(),
    ]
}

fn construct(mut ctx: Ctx<'_>, args: &ConstructArgs) -> Outcome {
    let (code, assumptions) = load_code(&args.code, ctx.cli.enum_limit)?;
    let profile = TrapProfile::new(args.a, args.b)?;
    let seed = ctx.seed(args.seed)?;
    let result = if args.las_vegas {
        las_vegas_minimal(&code, profile, seed, args.max_attempts)?
    } else {
        let t = args.t.unwrap_or(code.redundancy().max(1));
        sample_and_repair(&code, profile, t, seed, args.max_repair)?
    };
    let alist = emit_alist(&result.matrix);
    match ctx.format() {
        Format::Json => {
            let body = json!({
                "metadata": result.metadata(),
                "matrix": &result.matrix,
                "alist": alist,
            });
            ctx.envelope("construct", Some(seed), None, &assumptions, body)?
        }
        Format::Csv => ctx.csv(
            &["seed", "rows", "cols", "sampled_rows", "repair_rows_added", "attempts"],
            &[meta_row(&result)],
        )?,
        Format::Human => {
            ctx.out.write_all(alist.as_bytes())?;
            let m = result.metadata();
            writeln!(
                ctx.err,
                "seed {}: {} rows ({} sampled, {} appended) after {} attempt(s)",
                m.seed, m.rows, m.sampled_rows, m.repair_rows_added, m.attempts
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn oracle(mut ctx: Ctx<'_>, args: &OracleArgs) -> Outcome {
    let (code, mut assumptions) = load_code(&args.code, ctx.cli.enum_limit)?;
    let profile = TrapProfile::new(args.a, args.b)?;
    let mode = if args.multiset {
        SearchMode::Multiset
    } else {
        SearchMode::Distinct
    };
    let max_rows = match args.max_rows {
        Some(r) => r,
        None => {
            let r = theorem1_bound(
                code.n() as u64,
                code.k() as u64,
                args.a as u64,
                args.b as u64,
                code.distance(),
                &BoundConfig::default(),
            )?;
            assumptions.push(format!("max rows defaults to the theorem1 bound {}", r.value));
            r.value as usize
        }
    };
    let budget = ctx.cli.oracle_budget;
    let r = if args.collective {
        exact_collective(&code, profile, max_rows, mode, budget)?
    } else {
        exact_plain(&code, args.a, args.b, max_rows, mode, budget)?
    };
    match ctx.format() {
        Format::Json => ctx.envelope("oracle", None, None, &assumptions, &r)?,
        Format::Csv => ctx.csv(
            &["value", "mode", "collective", "candidates", "max_rows"],
            &[vec![
                r.value.to_string(),
                format!("{mode:?}").to_lowercase(),
                args.collective.to_string(),
                r.search_space.candidates.to_string(),
                max_rows.to_string(),
            ]],
        )?,
        Format::Human => {
            let kind = if args.collective { "collective" } else { "plain" };
            writeln!(ctx.out, "{kind} trapping redundancy: {}", r.value)?;
            writeln!(
                ctx.out,
                "  searched {} selections of {} nonzero dual codewords, {}..={} rows",
                format!("{mode:?}").to_lowercase(),
                r.search_space.candidates, r.search_space.min_rows, max_rows
            )?;
            writeln!(ctx.out, "  witness:")?;
            for row in r.witness.row_vectors() {
                writeln!(ctx.out, "    {row}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn estimate(mut ctx: Ctx<'_>, args: &EstimateArgs) -> Outcome {
    let (code, assumptions) = load_code(&args.code, ctx.cli.enum_limit)?;
    let profile = TrapProfile::new(args.a, args.b)?;
    let seed = ctx.seed(args.seed)?;
    let e = estimate_z(&code, profile, args.t, args.trials, seed, args.budget)?;
    match ctx.format() {
        Format::Json => ctx.envelope("estimate", Some(seed), None, &assumptions, &e)?,
        Format::Csv => ctx.csv(
            &["seed", "t", "trials", "mean", "stderr"],
            &[vec![
                seed.to_string(),
                args.t.to_string(),
                e.trials.to_string(),
                e.mean.to_string(),
                e.stderr.to_string(),
            ]],
        )?,
        Format::Human => {
            writeln!(
                ctx.out,
                "E[Z_{}] ~ {:.6} +- {:.6} ({} trials, seed {seed})",
                args.t, e.mean, e.stderr, e.trials
            )?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Table1Row {
    a: u64,
    b: u64,
    trivial_lower_bound: u64,
    theorem1: u64,
    lll: u64,
}

fn table1(mut ctx: Ctx<'_>, args: &Table1Args) -> Outcome {
    let cfg = BoundConfig::with_mode(args.mode.into());
    let mut rows = Vec::new();
    let mut assumptions = Vec::new();
    let mut exact = true;
    for (a, b) in TABLE1_ROWS {
        let t1 = theorem1_bound(TABLE1_N, TABLE1_K, a, b, Distance::Unknown, &cfg)?;
        let lll = lll_bound(TABLE1_N, TABLE1_K, a, b, Distance::Unknown)?;
        exact &= t1.mode == ArithMode::Exact;
        for s in t1.assumptions.iter().chain(&lll.assumptions) {
            if !assumptions.contains(s) {
                assumptions.push(s.clone());
            }
        }
        rows.push(Table1Row {
            a,
            b,
            trivial_lower_bound: TABLE1_N - TABLE1_K,
            theorem1: t1.value,
            lll: lll.value,
        });
    }
    let mode = if exact {
        ArithMode::Exact
    } else {
        ArithMode::Certified
    };
    match ctx.format() {
        Format::Json => ctx.envelope("table1", None, Some(mode), &assumptions, &rows)?,
        Format::Csv => {
            let data: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    [r.a, r.b, r.trivial_lower_bound, r.theorem1, r.lll]
                        .iter()
                        .map(ToString::to_string)
                        .collect()
                })
                .collect();
            ctx.csv(&["a", "b", "trivial_lower_bound", "theorem1", "lll"], &data)?;
        }
        Format::Human => {
            writeln!(ctx.out, "Margulis parameters n = {TABLE1_N}, k = {TABLE1_K}")?;
            writeln!(ctx.out, "{:>3} {:>3} {:>7} {:>9} {:>6}", "a", "b", "n-k", "theorem1", "lll")?;
            for r in &rows {
                writeln!(
                    ctx.out,
                    "{:>3} {:>3} {:>7} {:>9} {:>6}",
                    r.a, r.b, r.trivial_lower_bound, r.theorem1, r.lll
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn list_catalog(mut ctx: Ctx<'_>) -> Outcome {
    let mut entries = Vec::new();
    for &name in CATALOG_NAMES {
        let probe = name.replace("<n>", "3");
        let e = catalog(&probe)?;
        let fixed = probe == name;
        entries.push(json!({
            "name": name,
            "n": if fixed { json!(e.n) } else { json!(null) },
            "k": if fixed { json!(e.k) } else { json!(null) },
            "distance": if fixed { json!(e.distance) } else { json!(null) },
            "has_matrix": e.has_matrix(),
            "provenance": if fixed { e.provenance.clone() } else { name.to_string() },
        }));
    }
    match ctx.format() {
        Format::Json => ctx.envelope("catalog", None, None, &[], &entries)?,
        Format::Csv | Format::Human => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    let field = |k: &str| match &e[k] {
                        Value::Null => "-".to_string(),
                        Value::Object(o) => o.get("d").map_or("unknown".into(), |d| d.to_string()),
                        v => v.to_string().trim_matches('"').to_string(),
                    };
                    vec![field("name"), field("n"), field("k"), field("distance")]
                })
                .collect();
            if ctx.format() == Format::Csv {
                ctx.csv(&["name", "n", "k", "d"], &rows)?;
            } else {
                for r in rows {
                    writeln!(ctx.out, "{:<18} n={:<5} k={:<5} d={}", r[0], r[1], r[2], r[3])?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}
