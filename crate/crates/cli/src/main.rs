use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lensforge::blowup::{enumerate_fillings, BlowupTuple, Filling};
use lensforge::corpus::{check_pair, coprime_pairs, PairCheck};
use lensforge::cycles::{bo_cycles, compare_cycles, filling_diagram, verify_prop52, Conventions};
use lensforge::fgroup::Sign;
use lensforge::germ::{artin_diagram, decorated_germ, scott_induction_check};
use lensforge::incidence::{filling_invariants, incidence_readoff, is_cqs};
use rayon::prelude::*;
use serde_json::json;

mod render;

#[derive(Parser)]
#[command(
    name = "lensforge",
    version,
    about = "Stein fillings of lens spaces as wiring diagrams and Lefschetz fibrations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every filling of L(p,q)
    Fillings {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        out: Output,
    },
    /// Draw the wiring diagram of one filling
    Diagram {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Vanishing cycles of one filling from both constructions
    Cycles {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        tuple: Tuple,
        #[command(flatten)]
        conv: Chirality,
        #[command(flatten)]
        out: Output,
    },
    /// Incidence matrix of one filling (CSV unless --json)
    Incidence {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        tuple: Tuple,
        /// Also print Euler characteristic, homology and the pi_1 presentation
        #[arg(long)]
        homology: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run every check over all coprime pairs up to --pmax
    Verify {
        #[arg(long, value_name = "N")]
        pmax: u64,
        #[command(flatten)]
        conv: Chirality,
        #[command(flatten)]
        out: Output,
    },
    /// Artin filling, decorated germ and the Scott induction replay
    Artin {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Pair {
    #[arg(short = 'p')]
    p: u64,
    #[arg(short = 'q')]
    q: u64,
}

#[derive(Args)]
struct Tuple {
    /// Blowup tuple, e.g. 2,1,4,1,2
    #[arg(long = "n", value_delimiter = ',', required = true, num_args = 1..)]
    n: Vec<u64>,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Chirality {
    /// Override the half-twist sign convention (1 or -1)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    chirality: Option<Sign>,
}

impl Chirality {
    fn conventions(&self) -> Conventions {
        match self.chirality {
            Some(s) => Conventions::CALIBRATED.with_chirality(s),
            None => Conventions::CALIBRATED,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
    Json,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "1" | "+1" => Ok(Sign::Plus),
        "-1" => Ok(Sign::Minus),
        _ => Err(format!("expected 1 or -1, got {s}")),
    }
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<lensforge::Error> for Failure {
    fn from(e: lensforge::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: &Output, text: &str) -> CmdResult {
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn filling(pair: &Pair, tuple: &Tuple) -> Result<Filling, Failure> {
    Ok(Filling::new(
        pair.p,
        pair.q,
        BlowupTuple::new(tuple.n.clone()),
    )?)
}

fn cmd_fillings(pair: &Pair, out: &Output) -> CmdResult {
    let fs = enumerate_fillings(pair.p, pair.q)?;
    if out.json {
        let rows: Vec<_> = fs
            .iter()
            .map(|f| {
                json!({
                    "n": f.n.0,
                    "m": f.m,
                    "sequence": f.sequence.steps().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "cycles": f.k() - 1 + f.m.iter().sum::<u64>() as usize,
                })
            })
            .collect();
        let doc = json!({ "p": pair.p, "q": pair.q, "b": fs.first().map(|f| f.b.entries().to_vec()), "fillings": rows });
        return emit(out, &pretty(&doc));
    }
    let mut text = String::new();
    if let Some(f) = fs.first() {
        text.push_str(&format!(
            "L({},{}): b = {}, {} fillings\n",
            pair.p,
            pair.q,
            f.b,
            fs.len()
        ));
    }
    for f in &fs {
        let cycles = f.k() - 1 + f.m.iter().sum::<u64>() as usize;
        let m = f.m.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        text.push_str(&format!(
            "n={}  m=({m})  cycles={cycles}  seq={}\n",
            f.n, f.sequence
        ));
    }
    emit(out, &text)
}

fn cmd_diagram(pair: &Pair, tuple: &Tuple, format: Format, out: &Output) -> CmdResult {
    let f = filling(pair, tuple)?;
    let w = filling_diagram(&f)?;
    let text = match (format, out.json) {
        (Format::Json, _) | (_, true) => format!("{}\n", w.to_json()),
        (Format::Ascii, _) => render::ascii(&w),
        (Format::Svg, _) => render::svg(&w)?,
    };
    emit(out, &text)
}

fn cmd_cycles(pair: &Pair, tuple: &Tuple, conv: Conventions, out: &Output) -> CmdResult {
    let f = filling(pair, tuple)?;
    let report = verify_prop52(&f, conv)?;
    if out.json {
        emit(out, &pretty(&serde_json::to_value(&report).expect("json")))?;
    } else {
        let (ps, _, _) = compare_cycles(&f, conv)?;
        let bo = bo_cycles(&f.sequence, &f.b, conv)?;
        let mut text = String::from("marked-point cycles (leftmost factor first):\n");
        for (c, chk) in ps.cycles.iter().zip(report.cycles.iter().rev()) {
            let form = c
                .form()
                .map(|f| f.to_string())
                .unwrap_or_else(|| "?".into());
            let mark = if chk.matches { "ok" } else { "MISMATCH" };
            text.push_str(&format!(
                "  V({:<6}) {:<28} {:<20} {mark}\n",
                c.label,
                c.class.to_string(),
                form
            ));
        }
        text.push_str("stabilization and surgery cycles:\n");
        for c in &bo.cycles {
            let form = c
                .form()
                .map(|f| f.to_string())
                .unwrap_or_else(|| "?".into());
            text.push_str(&format!(
                "  {:<8} {:<28} {form}\n",
                c.label,
                c.class.to_string()
            ));
        }
        text.push_str(&format!("monodromy agrees: {}\n", report.monodromy_ok));
        emit(out, &text)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{}/{} n={}", f.p, f.q, f.n)))
    }
}

fn cmd_incidence(pair: &Pair, tuple: &Tuple, homology: bool, out: &Output) -> CmdResult {
    let f = filling(pair, tuple)?;
    let w = filling_diagram(&f)?;
    let mat = incidence_readoff(&w);
    let cqs = f.k() < 2 || is_cqs(&mat);
    let relators: Vec<_> = if homology {
        let (ps, _, _) = compare_cycles(&f, Conventions::CALIBRATED)?;
        ps.cycles.iter().map(|c| c.class.word().clone()).collect()
    } else {
        Vec::new()
    };
    let inv = filling_invariants(&mat, &relators)?;
    if out.json {
        let mut doc = json!({ "matrix": mat.to_json(), "cqs": cqs });
        if homology {
            doc["invariants"] = serde_json::to_value(&inv).expect("json");
        }
        return emit(out, &pretty(&doc));
    }
    let mut text = mat.to_csv();
    if homology {
        let h1 = if inv.h1.is_empty() {
            "0".to_string()
        } else {
            format!("{:?}", inv.h1)
        };
        text.push_str(&format!(
            "# euler = {} (sum m = {})\n",
            inv.euler,
            f.m.iter().sum::<u64>()
        ));
        text.push_str(&format!("# h1 = {h1}\n# h2_rank = {}\n", inv.h2_rank));
        text.push_str(&format!(
            "# smith = {}\n",
            serde_json::to_string(&inv.smith).expect("json")
        ));
        let rels: Vec<String> = inv.pi1.relators.iter().map(|r| r.to_string()).collect();
        text.push_str(&format!(
            "# pi1 = <g1..g{} | {}>\n",
            inv.pi1.generators,
            rels.join(", ")
        ));
    }
    text.push_str(&format!("# cqs = {cqs}\n"));
    emit(out, &text)
}

fn cmd_verify(pmax: u64, conv: Conventions, out: &Output) -> CmdResult {
    if pmax < 2 {
        return Err(Failure::Usage("--pmax must be at least 2".into()));
    }
    let pairs = coprime_pairs(pmax);
    let results: Vec<Result<PairCheck, lensforge::Error>> = pairs
        .par_iter()
        .map(|&(p, q)| check_pair(p, q, conv))
        .collect();
    let mut checks = Vec::with_capacity(results.len());
    for r in results {
        checks.push(r?);
    }
    let failures: Vec<String> = checks.iter().flat_map(|c| c.failures()).collect();
    let fillings: usize = checks.iter().map(|c| c.fillings.len()).sum();
    let passed = failures.is_empty();
    if out.json || out.out.is_some() {
        let reports: Vec<_> = checks
            .iter()
            .flat_map(|c| c.fillings.iter().map(|f| &f.report))
            .collect();
        let doc = json!({
            "pmax": pmax,
            "pairs": checks.len(),
            "fillings": fillings,
            "conventions": conv,
            "passed": passed,
            "failures": failures,
            "reports": reports,
        });
        emit(out, &pretty(&doc))?;
    }
    if !out.json {
        println!(
            "pairs={} fillings={} failures={}",
            checks.len(),
            fillings,
            failures.len()
        );
        for f in failures.iter().take(20) {
            println!("FAIL {f}");
        }
    }
    match failures.first() {
        None => Ok(()),
        Some(f) => Err(Failure::Verification(f.clone())),
    }
}

fn cmd_artin(pair: &Pair, out: &Output) -> CmdResult {
    let w = artin_diagram(pair.p, pair.q)?;
    let mat = incidence_readoff(&w);
    let cqs = w.k < 2 || is_cqs(&mat);
    let germ = decorated_germ(pair.p, pair.q)?;
    let scott = scott_induction_check(pair.p, pair.q)?;
    let inv = filling_invariants(&mat, &[])?;
    if out.json {
        let doc = json!({
            "matrix": mat.to_json(),
            "cqs": cqs,
            "germ": germ,
            "scott": { "passed": scott.passed(), "steps": scott.steps },
            "euler": inv.euler,
            "h1": inv.h1,
            "h2_rank": inv.h2_rank,
        });
        emit(out, &pretty(&doc))?;
    } else {
        let mut text = mat.to_csv();
        text.push_str(&format!("# cqs = {cqs}\n"));
        text.push_str(&format!(
            "# germ: {} branches, l = {:?}\n",
            germ.branches, germ.l
        ));
        for (i, row) in germ.orders.iter().enumerate() {
            text.push_str(&format!("#   o[{}] = {:?}\n", i + 1, row));
        }
        for s in &scott.steps {
            let ok = s.diagram_ok && s.germ_ok;
            text.push_str(&format!(
                "# ({}) {} -> {}: {}\n",
                s.op,
                s.from,
                s.to,
                if ok { "ok" } else { "FAIL" }
            ));
        }
        text.push_str(&format!(
            "# h1 trivial = {}, h2_rank = {}\n",
            inv.h1_trivial(),
            inv.h2_rank
        ));
        emit(out, &text)?;
    }
    match scott.first_failure() {
        Some(s) => Err(Failure::Verification(format!(
            "scott step {} -> {}",
            s.from, s.to
        ))),
        None if !cqs => Err(Failure::Verification("artin matrix is not CQS".into())),
        None => Ok(()),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("LENSFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "LENSFORGE_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match &cli.command {
        Command::Fillings { pair, out } => cmd_fillings(pair, out),
        Command::Diagram {
            pair,
            tuple,
            format,
            out,
        } => cmd_diagram(pair, tuple, *format, out),
        Command::Cycles {
            pair,
            tuple,
            conv,
            out,
        } => cmd_cycles(pair, tuple, conv.conventions(), out),
        Command::Incidence {
            pair,
            tuple,
            homology,
            out,
        } => cmd_incidence(pair, tuple, *homology, out),
        Command::Verify { pmax, conv, out } => cmd_verify(*pmax, conv.conventions(), out),
        Command::Artin { pair, out } => cmd_artin(pair, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
