//! `lodim`: command-line front end. Every command prints one JSON document
//! on stdout and its wall time on stderr.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lodim::cells::decompose;
use lodim::dimension::dim_with_witness;
use lodim::dimrank::dimension_rank;
use lodim::discl::{definable_set_rank, discl_member, discl_witness, SymbolicReal};
use lodim::qe::{decide, eliminate};
use lodim::suites::run_named;
use lodim::topology::{closure_of, frontier, interior};
use lodim::{DefinableSet, Error, Result, Var};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "lodim", version, about = "Dimension theory for mixed real-integer linear arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Clone)]
struct SetArgs {
    /// Formula in the input grammar, e.g. "floor(x) = x and y > 0".
    formula: String,
    /// Ambient variables in order, comma separated.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Parameter symbols, comma separated.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Projection dimension with a witnessing projection.
    Dim(SetArgs),
    /// Quantifier-free equivalent.
    Qe(SetArgs),
    /// Truth value of a sentence.
    Decide(SetArgs),
    Interior(SetArgs),
    Closure(SetArgs),
    Frontier(SetArgs),
    /// Certified decomposition into quasi-special cells.
    Decompose(SetArgs),
    /// Dimension rank, optionally with its certified chain.
    Dimrank {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        emit_chain: bool,
    },
    /// Rank of the set, optionally with a generic point.
    Rank {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Discrete-closure membership of a symbolic real.
    Discl {
        action: DisclAction,
        /// Floor-free term over the parameter symbols, e.g. "alpha + 1/2".
        term: String,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Symbols to take the closure over.
        #[arg(long, value_delimiter = ',')]
        over: Vec<String>,
    },
    /// Run a seeded law suite.
    Suite {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
        /// `matroid` or `discl`, for the pregeometry suite.
        #[arg(long)]
        oracle: Option<String>,
        /// Corpus file replacing the built-in corpus.
        #[arg(long)]
        corpus: Option<std::path::PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DisclAction {
    Member,
    Witness,
}

struct Output {
    command: &'static str,
    input: Value,
    result: Value,
    witness: Value,
    certificates: Vec<String>,
    /// Exit code when the command itself succeeded.
    code: u8,
}

impl Output {
    fn new(command: &'static str, input: Value, result: Value) -> Self {
        Output { command, input, result, witness: Value::Null, certificates: vec![], code: 0 }
    }
}

fn set_of(a: &SetArgs) -> Result<DefinableSet> {
    let vars: Vec<&str> = a.vars.iter().map(String::as_str).collect();
    let params: Vec<&str> = a.params.iter().map(String::as_str).collect();
    lodim::parse(&a.formula, &vars, &params)
}

fn input_of(a: &SetArgs) -> Value {
    json!({ "formula": a.formula, "vars": a.vars, "params": a.params })
}

fn text(s: &DefinableSet) -> Value {
    Value::String(s.formula.to_string())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cmd: Command) -> Result<Output> {
    Ok(match cmd {
        Command::Dim(a) => {
            let d = dim_with_witness(&set_of(&a)?)?;
            let mut out = Output::new("dim", input_of(&a), to_value(&d));
            if d.dim.finite().is_some() {
                out.certificates.push("set is nonempty".into());
            }
            if !d.witness_projection.is_empty() {
                out.certificates.push(format!("projection onto {:?} has nonempty interior", d.witness_projection));
            }
            out
        }
        Command::Qe(a) => Output::new("qe", input_of(&a), text(&eliminate(&set_of(&a)?)?)),
        Command::Decide(a) => Output::new("decide", input_of(&a), Value::Bool(decide(&set_of(&a)?)?)),
        Command::Interior(a) => Output::new("interior", input_of(&a), text(&interior(&set_of(&a)?)?)),
        Command::Closure(a) => Output::new("closure", input_of(&a), text(&closure_of(&set_of(&a)?)?)),
        Command::Frontier(a) => Output::new("frontier", input_of(&a), text(&frontier(&set_of(&a)?)?)),
        Command::Decompose(a) => {
            let dec = decompose(&set_of(&a)?)?;
            let mut out = Output::new("decompose", input_of(&a), to_value(&dec.cells));
            out.certificates = dec.certificates;
            out
        }
        Command::Dimrank { set, emit_chain } => {
            let s = set_of(&set)?;
            let (d, chain) = dimension_rank(&s)?;
            let mut result = json!({ "D": d });
            let mut out = Output::new("dimrank", input_of(&set), Value::Null);
            if let Some(c) = &chain {
                for i in 1..c.sets.len() {
                    out.certificates.extend([
                        format!("Y{i} nonempty"),
                        format!("Y{i} contained in Y{}", i - 1),
                        format!("Y{i} closed in Y{}", i - 1),
                        format!("Y{i} has empty interior in Y{}", i - 1),
                    ]);
                }
                out.certificates.push(format!("dim equals chain length {}", c.len()));
                if emit_chain {
                    result["chain"] = to_value(c);
                }
            }
            out.result = result;
            out
        }
        Command::Rank { set, witness } => {
            let (d, w) = definable_set_rank(&set_of(&set)?)?;
            let mut out = Output::new("rank", input_of(&set), json!({ "rank": d }));
            if let Some(w) = w {
                out.certificates.push("generic point lies in the set".into());
                out.certificates.push(format!("generic point has infinitesimal rank {}", w.claimed_rank));
                if witness {
                    out.witness = to_value(&w);
                }
            }
            out
        }
        Command::Discl { action, term, params, over } => {
            let declared: Vec<Var> = params.iter().map(|p| Var::new(p)).collect();
            let over: Vec<Var> = over.iter().map(|p| Var::new(p)).collect();
            let b = SymbolicReal::parse(&term, &declared.iter().cloned().collect())?;
            let input = json!({ "term": term, "params": params, "over": over.iter().map(|v| v.name()).collect::<Vec<_>>() });
            match action {
                DisclAction::Member => Output::new("discl member", input, json!({ "member": discl_member(&b, &declared, &over)? })),
                DisclAction::Witness => {
                    let w = discl_witness(&b, &declared, &over)?;
                    let mut out = Output::new("discl witness", input, json!({ "member": true }));
                    out.witness = json!({ "vars": ["x"], "formula": w.formula.to_string() });
                    out.certificates = vec!["witness is discrete".into(), "witness is closed".into(), "witness contains the term".into()];
                    out
                }
            }
        }
        Command::Suite { suite, seed, cases, oracle, corpus } => {
            let corpus = match corpus {
                Some(path) => {
                    let t = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
                    Some(lodim::corpus::parse_corpus(&t)?)
                }
                None => None,
            };
            let report = run_named(&suite, seed, cases, oracle.as_deref(), corpus)?;
            let input = json!({ "suite": suite, "seed": seed, "cases": cases, "oracle": oracle });
            let mut out = Output::new("suite", input, to_value(&report));
            out.code = if report.passed() { 0 } else { 3 };
            out
        }
    })
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
    let start = Instant::now();
    let result = run(cli.command);
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(out) => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": out.command,
                "input": out.input,
                "result": out.result,
                "witness": out.witness,
                "certificates": out.certificates,
            });
            let s = if cli.json { serde_json::to_string_pretty(&doc) } else { serde_json::to_string(&doc) };
            println!("{}", s.expect("serializable"));
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
