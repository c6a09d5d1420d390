use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eaqec::catalog::{catalog, lookup};
use eaqec::circulant::{scan, ScanOptions};
use eaqec::code::{analyze, validate};
use eaqec::io::{
    parse_check_matrix, parse_check_matrix_unchecked, parse_logical_matrix, write_check_matrix, ReportJson,
};
use eaqec::search::{exhaustive_optimize, random_search, CandidateOrder, EbitPolicy, OptimizationResult, SearchSpec};
use eaqec::{count_partner_subspaces, synthesize_encoding, Error, SimplifiedCheckMatrix, SymplecticFrame};

#[derive(Parser)]
#[command(name = "eaqec", version, about = "Entanglement-assisted stabilizer code toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    /// Worker threads for exhaustive searches and scans.
    #[arg(long, global = true, env = "EAQEC_THREADS")]
    threads: Option<usize>,
    /// Report elapsed times as 0 so repeated runs give identical output.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    PartnerFirst,
    SelectionFirst,
}

#[derive(Subcommand)]
enum Command {
    /// Parameters, distance and weight enumerator of a code.
    Distance { code: String },
    /// Number of ebits and logical qubits.
    Ebits { code: String },
    /// Check the commutation structure of a check matrix, and optionally its logicals.
    Validate {
        code: String,
        #[arg(long)]
        logical: Option<PathBuf>,
    },
    /// Best distance over encoding operators with `c` ebits.
    Optimize {
        code: String,
        #[arg(long)]
        c: usize,
        /// Enumerate every candidate instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Refuse exhaustive searches larger than this many candidates.
        #[arg(long, default_value_t = eaqec::search::DEFAULT_MAX_COST)]
        max_cost: u128,
        #[arg(long, value_enum, default_value_t = Order::PartnerFirst)]
        order: Order,
        /// Trials when sampling.
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Merit-guided random search.
    RandomSearch {
        code: String,
        #[arg(long)]
        c: usize,
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw every trial from the base code rather than the incumbent.
        #[arg(long)]
        restart: bool,
        /// Stop once this distance is reached (default: the singleton bound).
        #[arg(long)]
        target: Option<usize>,
        /// Keep the ebits on the first `c` slots instead of drawing them.
        #[arg(long)]
        fixed_ebits: bool,
    },
    /// Scan circulant check matrices built from every seed of length 2n.
    CirculantScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rmin: Option<usize>,
        #[arg(long)]
        rmax: Option<usize>,
        /// Report every achieved (k, d, c) rather than the best d per (k, c).
        #[arg(long)]
        full: bool,
        /// Keep reversed seeds as separate classes.
        #[arg(long)]
        no_reverse_dedup: bool,
        #[arg(long)]
        min_k: Option<usize>,
        /// Allow n >= 8, which can take minutes.
        #[arg(long)]
        allow_long: bool,
    },
    /// Synthesize an encoding circuit.
    Synth {
        code: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Number of partner subspaces N(r, c).
    Nrc {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: usize,
    },
    /// Built-in codes.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

enum Failure {
    Validation(String),
    Cost(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CostExceeded { .. } => Failure::Cost(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_code(arg: &str, strict: bool) -> Result<SimplifiedCheckMatrix, Failure> {
    if let Some(name) = arg.strip_prefix("catalog:") {
        return Ok(lookup(name)?.check);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Failure::Validation(format!("{arg}: {e}")))?;
    let parsed = if strict {
        parse_check_matrix(&text)
    } else {
        parse_check_matrix_unchecked(&text)
    };
    parsed.map_err(|e| Failure::Validation(format!("{arg}: {e}")))
}

struct Ctx {
    format: Format,
    threads: Option<usize>,
    no_timing: bool,
}

impl Ctx {
    fn millis(&self, d: std::time::Duration) -> u64 {
        if self.no_timing {
            0
        } else {
            d.as_millis() as u64
        }
    }
}

fn print_csv<T: Serialize>(rows: &[T]) -> Outcome {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    Ok(())
}

fn distance(ctx: &Ctx, code: &str) -> Outcome {
    let h = read_code(code, true)?;
    let start = Instant::now();
    let rep = analyze(&h)?;
    let report = ReportJson::new(&rep, ctx.millis(start.elapsed()));
    match ctx.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                k: usize,
                c: usize,
                d: usize,
                degenerate: bool,
                singleton_saturated: bool,
                elapsed_ms: u64,
            }
            print_csv(&[Row {
                n: report.n,
                k: report.k,
                c: report.c,
                d: report.d,
                degenerate: report.degenerate,
                singleton_saturated: report.singleton_saturated,
                elapsed_ms: report.elapsed_ms,
            }])?;
        }
        Format::Human => {
            println!("{}", rep.params);
            println!("degenerate: {}", rep.params.degenerate);
            println!("singleton saturated: {}", rep.singleton_saturated);
            let terms: Vec<String> = rep.enumerator.0.iter().map(u64::to_string).collect();
            println!("weight enumerator: {}", terms.join(" "));
        }
    }
    Ok(())
}

fn ebits(ctx: &Ctx, code: &str) -> Outcome {
    let h = read_code(code, true)?;
    #[derive(Serialize)]
    struct Row {
        n: usize,
        m: usize,
        c: usize,
        k: usize,
    }
    let row = Row {
        n: h.n(),
        m: h.rows(),
        c: h.ebits(),
        k: h.k()?,
    };
    match ctx.format {
        Format::Json => print_json(&row),
        Format::Csv => print_csv(&[row]),
        Format::Human => {
            println!("c = {} (n = {}, m = {}, k = {})", row.c, row.n, row.m, row.k);
            Ok(())
        }
    }
}

fn run_validate(ctx: &Ctx, code: &str, logical: Option<&Path>) -> Outcome {
    let h = read_code(code, false)?;
    let l = match logical {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Some(parse_logical_matrix(&text).map_err(|e| Failure::Validation(format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    let violations = validate(&h, l.as_ref());
    let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
    match ctx.format {
        Format::Json => print_json(&serde_json::json!({ "valid": lines.is_empty(), "violations": lines }))?,
        _ if lines.is_empty() => println!("valid"),
        _ => {}
    }
    if lines.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(lines.join("\n")))
    }
}

#[derive(Serialize)]
struct OptimizeRow {
    c: usize,
    d_opt: usize,
    #[serde(rename = "N_opt")]
    n_opt: u128,
    total: u128,
    elapsed: u64,
}

fn search_spec(ctx: &Ctx, code: &str, c: usize) -> Result<SearchSpec, Failure> {
    let h = read_code(code, true)?;
    let frame = SymplecticFrame::from_code(&h)?;
    let mut spec = SearchSpec::new(frame, c)?;
    spec.threads = ctx.threads;
    Ok(spec)
}

fn report_search(ctx: &Ctx, r: &OptimizationResult, exhaustive: bool) -> Outcome {
    let row = OptimizeRow {
        c: r.c,
        d_opt: r.d_opt,
        n_opt: r.n_opt,
        total: r.total,
        elapsed: ctx.millis(r.elapsed),
    };
    match ctx.format {
        Format::Csv => print_csv(&[row])?,
        Format::Json => print_json(&serde_json::json!({
            "c": row.c,
            "d_opt": row.d_opt,
            "N_opt": row.n_opt.to_string(),
            "total": row.total.to_string(),
            "degenerate_optima": r.degenerate_optima.to_string(),
            "trials_to_best": r.trials_to_best,
            "elapsed_ms": row.elapsed,
        }))?,
        Format::Human => {
            if exhaustive {
                println!(
                    "c={} d_opt={} N_opt={} of {} candidates ({} degenerate), {} ms",
                    row.c, row.d_opt, row.n_opt, row.total, r.degenerate_optima, row.elapsed
                );
            } else {
                println!(
                    "c={} best d={} first reached at trial {} of {}, {} ms",
                    row.c,
                    row.d_opt,
                    r.trials_to_best.unwrap_or(0),
                    row.total,
                    row.elapsed
                );
            }
            if let Some(ex) = r.exemplars.first() {
                println!("{} with ebit slots {:?}", ex.report.params, ex.ebits.slots());
                print!("{}", write_check_matrix(&ex.check));
            }
        }
    }
    Ok(())
}

fn circulant_scan(ctx: &Ctx, opts: ScanArgs) -> Outcome {
    let ScanArgs {
        n,
        rmin,
        rmax,
        full,
        no_reverse_dedup,
        min_k,
        allow_long,
    } = opts;
    if n >= 8 && !allow_long {
        return Err(Failure::Validation(format!(
            "n = {n} scans take minutes; pass --allow-long"
        )));
    }
    let mut o = ScanOptions::new(n);
    o.r_min = rmin.unwrap_or(o.r_min);
    o.r_max = rmax.unwrap_or(o.r_max);
    o.all_tuples = full;
    o.dedup_reverse = !no_reverse_dedup;
    o.min_k = min_k;
    o.threads = ctx.threads;
    let rows = scan(n, &o)?;
    #[derive(Serialize)]
    struct Row {
        n: usize,
        r: usize,
        k: usize,
        c: usize,
        d: usize,
        seed_hex: String,
        degenerate: bool,
        saturates_singleton: bool,
    }
    let out: Vec<Row> = rows
        .iter()
        .map(|e| Row {
            n: e.n,
            r: e.r,
            k: e.k,
            c: e.c,
            d: e.d,
            seed_hex: e.seed_hex(),
            degenerate: e.degenerate,
            saturates_singleton: e.saturates_singleton,
        })
        .collect();
    match ctx.format {
        Format::Csv => print_csv(&out),
        Format::Json => print_json(&rows),
        Format::Human => {
            for e in &rows {
                let mut flags = Vec::new();
                if e.degenerate {
                    flags.push("degenerate");
                }
                if e.saturates_singleton {
                    flags.push("saturates singleton");
                }
                if e.beats_standard {
                    flags.push("beats standard");
                }
                println!(
                    "[[{},{},{};{}]]  r={} seed={}  {}",
                    e.n,
                    e.k,
                    e.d,
                    e.c,
                    e.r,
                    e.seed_hex(),
                    flags.join(", ")
                );
            }
            Ok(())
        }
    }
}

struct ScanArgs {
    n: usize,
    rmin: Option<usize>,
    rmax: Option<usize>,
    full: bool,
    no_reverse_dedup: bool,
    min_k: Option<usize>,
    allow_long: bool,
}

fn synth(code: &str, out: &Path) -> Outcome {
    let h = read_code(code, true)?;
    let s = synthesize_encoding(&h)?;
    let mut f = std::fs::File::create(out)?;
    f.write_all(s.circuit.to_text().as_bytes())?;
    println!(
        "{} gates on {} qubits, {} ebits, written to {}",
        s.circuit.gates().len(),
        h.n(),
        s.ebits,
        out.display()
    );
    Ok(())
}

fn show_catalog(ctx: &Ctx, action: Option<CatalogAction>) -> Outcome {
    match action.unwrap_or(CatalogAction::List) {
        CatalogAction::List => {
            #[derive(Serialize)]
            struct Row {
                name: String,
                n: usize,
                k: usize,
                d: usize,
                c: usize,
                provenance: String,
            }
            let rows: Vec<Row> = catalog()
                .into_iter()
                .map(|e| Row {
                    name: e.name,
                    n: e.expected.0,
                    k: e.expected.1,
                    d: e.expected.2,
                    c: e.expected.3,
                    provenance: format!("{:?}", e.provenance).to_lowercase(),
                })
                .collect();
            match ctx.format {
                Format::Csv => print_csv(&rows),
                Format::Json => print_json(&rows),
                Format::Human => {
                    for r in rows {
                        println!("{:<20} [[{},{},{};{}]]  {}", r.name, r.n, r.k, r.d, r.c, r.provenance);
                    }
                    Ok(())
                }
            }
        }
        CatalogAction::Show { name } => {
            let e = lookup(&name)?;
            println!("# {}", e.description);
            if !e.d_std.is_empty() {
                let notes: Vec<String> = e.d_std.iter().map(|(c, d)| format!("c={c}:{d}")).collect();
                println!("# best standard [[n+c,k]] distance: {}", notes.join(" "));
            }
            print!("{}", write_check_matrix(&e.check));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx {
        format: cli.format,
        threads: cli.threads,
        no_timing: cli.no_timing,
    };
    match cli.command {
        Command::Distance { code } => distance(&ctx, &code),
        Command::Ebits { code } => ebits(&ctx, &code),
        Command::Validate { code, logical } => run_validate(&ctx, &code, logical.as_deref()),
        Command::Optimize {
            code,
            c,
            exhaustive,
            max_cost,
            order,
            iters,
            seed,
        } => {
            let mut spec = search_spec(&ctx, &code, c)?;
            spec.max_cost = max_cost;
            spec.order = match order {
                Order::PartnerFirst => CandidateOrder::PartnerFirst,
                Order::SelectionFirst => CandidateOrder::SelectionFirst,
            };
            if exhaustive {
                report_search(&ctx, &exhaustive_optimize(&spec)?, true)
            } else {
                spec.budget = iters;
                spec.seed = seed;
                spec.ebits = EbitPolicy::Random;
                report_search(&ctx, &random_search(&spec)?, false)
            }
        }
        Command::RandomSearch {
            code,
            c,
            iters,
            seed,
            restart,
            target,
            fixed_ebits,
        } => {
            let mut spec = search_spec(&ctx, &code, c)?;
            spec.budget = iters;
            spec.seed = seed;
            spec.restart = restart;
            spec.target_distance = target;
            if !fixed_ebits {
                spec.ebits = EbitPolicy::Random;
            }
            report_search(&ctx, &random_search(&spec)?, false)
        }
        Command::CirculantScan {
            n,
            rmin,
            rmax,
            full,
            no_reverse_dedup,
            min_k,
            allow_long,
        } => circulant_scan(
            &ctx,
            ScanArgs {
                n,
                rmin,
                rmax,
                full,
                no_reverse_dedup,
                min_k,
                allow_long,
            },
        ),
        Command::Synth { code, out } => synth(&code, &out),
        Command::Nrc { r, c } => {
            let v = count_partner_subspaces(r, c)?;
            match ctx.format {
                Format::Json => println!("{{\"r\": {r}, \"c\": {c}, \"N\": \"{v}\"}}"),
                Format::Csv => println!("r,c,N\n{r},{c},{v}"),
                Format::Human => println!("{v}"),
            }
            Ok(())
        }
        Command::Catalog { action } => show_catalog(&ctx, action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cost(msg)) => {
            eprintln!("error: {msg}; raise --max-cost to run it anyway");
            ExitCode::from(3)
        }
    }
}
