use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use degmatch::coloring::{greedy_color, verify_coloring, EdgeOrder, GreedyOptions};
use degmatch::decomposition::{build_nice_decomposition, validate_decomposition};
use degmatch::io::{parse_graph, parse_weights, serialize_dimacs, serialize_graph6, Format};
use degmatch::oracle::{
    brute_chromatic_index_r, brute_degenerate_states, brute_nu_r, brute_nu_variants, OracleLimits,
};
use degmatch::survey::{degree_minus_one_probe, run_suite, write_bench_csv, Suite};
use degmatch::{dp, generate, mcs_order, Edge, Error, Family, GeneratorSpec, Graph};

/// Degenerate matchings and edge colorings. Vertex ids in JSON output are
/// 1-based, like the DIMACS and weight files.
#[derive(Parser)]
#[command(name = "degmatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Auto,
    Graph6,
    Dimacs,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Graph6,
    Dimacs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    Seed,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleWhat {
    Nur,
    Chi,
    Variants,
    States,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Graph file (graph6 or DIMACS edge list); `-` reads stdin.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    format: InputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum r-degenerate matching of a chordal graph.
    Nur {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Lines `u v w`, 1-based ids; w is an integer, decimal or fraction.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        emit_matching: bool,
    },
    /// Greedy r-degenerate edge coloring.
    Color {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, value_enum, default_value = "lex")]
        order: Order,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Palette Δ, at least the maximum degree.
        #[arg(long)]
        delta_override: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
    /// Exhaustive reference values for small graphs.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, value_enum)]
        what: OracleWhat,
        /// Decomposition node for `--what states`; all nodes if omitted.
        #[arg(long)]
        node: Option<usize>,
    },
    /// Generate a graph.
    Gen {
        /// Family name, e.g. k-tree or random-chordal.
        #[arg(long, required_unless_present = "spec")]
        family: Option<String>,
        /// JSON generator spec instead of flags.
        #[arg(long, conflicts_with = "family")]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        delta_cap: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "graph6")]
        out_format: OutputFormat,
    },
    /// Chordality test, with a decomposition check when chordal.
    CheckChordal {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Run a suite file through every cross-check.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare ν_{Δ−1} with the perfect-matching rule on all small connected graphs.
    Probe {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    input_digest: Option<String>,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
    timing_ms: u64,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::NotChordal(_) => (2, "not-chordal"),
            Error::Parse(_)
            | Error::UnknownVertex { .. }
            | Error::SelfLoop(_)
            | Error::DuplicateEdge(..)
            | Error::NotAnEdge(..)
            | Error::InvalidParameter(_) => (3, "parse"),
            Error::LimitsExceeded(_) => (4, "limits"),
            _ => (5, "internal"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 3,
        kind: "parse",
        message: format!("{}: {e}", path.display()),
    }
}

fn internal(message: String) -> Failure {
    Failure {
        code: 5,
        kind: "internal",
        message,
    }
}

type Outcome = Result<Value, Failure>;

fn read_bytes(path: &Path, digest: &mut Sha256) -> Result<String, Failure> {
    let mut buf = Vec::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| io_failure(path, e))?;
    } else {
        buf = fs::read(path).map_err(|e| io_failure(path, e))?;
    }
    digest.update(&buf);
    String::from_utf8(buf)
        .map_err(|_| Failure::from(Error::Parse(format!("{} is not UTF-8", path.display()))))
}

fn load(input: &InputArgs, digest: &mut Sha256) -> Result<Graph, Failure> {
    let text = read_bytes(&input.input, digest)?;
    let format = match input.format {
        InputFormat::Auto => None,
        InputFormat::Graph6 => Some(Format::Graph6),
        InputFormat::Dimacs => Some(Format::Dimacs),
    };
    Ok(parse_graph(&text, format)?)
}

fn one_based(e: &Edge) -> [usize; 2] {
    [e.0 + 1, e.1 + 1]
}

fn graph_summary(g: &Graph) -> Value {
    json!({"n": g.n(), "m": g.m(), "delta": g.max_degree()})
}

fn run(cmd: &Command, digest: &mut Sha256, used_input: &mut bool) -> Outcome {
    *used_input = !matches!(cmd, Command::Probe { .. });
    match cmd {
        Command::Nur {
            input,
            r,
            weights,
            emit_matching,
        } => {
            let g = load(input, digest)?;
            let graph = graph_summary(&g);
            let (value, matching, stats) = match weights {
                Some(path) => {
                    let text = read_bytes(path, digest)?;
                    let wg = parse_weights(g, &text)?;
                    let sol = dp::nu_r_weighted(&wg, *r)?;
                    (json!(sol.value.to_string()), sol.matching, sol.stats)
                }
                None => {
                    let sol = dp::nu_r(&g, *r)?;
                    (json!(sol.value), sol.matching, sol.stats)
                }
            };
            let mut out = json!({
                "graph": graph,
                "r": r,
                "nu_r": value,
                "dp": {"nodes": stats.nodes, "max_table": stats.max_table},
            });
            if *emit_matching {
                out["matching"] = json!(matching.edges().iter().map(one_based).collect::<Vec<_>>());
            }
            Ok(out)
        }
        Command::Color {
            input,
            r,
            order,
            seed,
            delta_override,
            verify,
        } => {
            let g = load(input, digest)?;
            let opts = GreedyOptions {
                order: match order {
                    Order::Lex => EdgeOrder::Lexicographic,
                    Order::Seed => EdgeOrder::Shuffled(*seed),
                },
                delta: *delta_override,
                check_each_step: false,
            };
            let res = greedy_color(&g, *r, &opts)?;
            let verified = if *verify {
                if let Err(v) = verify_coloring(&g, &res.coloring, *r) {
                    return Err(internal(format!("coloring failed verification: {v:?}")));
                }
                Some(true)
            } else {
                None
            };
            let colors: Vec<Value> = g
                .edges()
                .iter()
                .map(|e| {
                    let [u, v] = one_based(e);
                    json!([u, v, res.coloring.color_of(*e)])
                })
                .collect();
            Ok(json!({
                "graph": graph_summary(&g),
                "r": r,
                "K": res.palette.k,
                "palette_delta": res.palette.delta,
                "colors_used": res.coloring.colors_used(),
                "max_color": res.coloring.max_color(),
                "max_f1": res.max_f1,
                "max_f2": res.max_f2,
                "verified": verified,
                "coloring": colors,
            }))
        }
        Command::Oracle {
            input,
            r,
            what,
            node,
        } => {
            let g = load(input, digest)?;
            let graph = graph_summary(&g);
            let result = match what {
                OracleWhat::Nur => json!({"nu_r": brute_nu_r(&g, *r, &OracleLimits::matching())?}),
                OracleWhat::Chi => {
                    json!({"chi_r": brute_chromatic_index_r(&g, *r, &OracleLimits::chromatic())?})
                }
                OracleWhat::Variants => {
                    serde_json::to_value(brute_nu_variants(&g, &OracleLimits::matching())?)
                        .map_err(|e| internal(e.to_string()))?
                }
                OracleWhat::States => {
                    let limits = OracleLimits::states();
                    limits.check(&g)?;
                    let d = build_nice_decomposition(&g, &mcs_order(&g)?)?;
                    let nodes: Vec<usize> = match node {
                        Some(t) if *t < d.len() => vec![*t],
                        Some(t) => {
                            return Err(Error::InvalidParameter(format!(
                                "node {t} out of range 0..{}",
                                d.len()
                            ))
                            .into())
                        }
                        None => (0..d.len()).collect(),
                    };
                    let mut tables = Vec::new();
                    for t in nodes {
                        let states = brute_degenerate_states(&g, &d, *r, t, &limits)?;
                        let shift = |vs: &[usize]| vs.iter().map(|v| v + 1).collect::<Vec<_>>();
                        tables.push(json!({
                            "node": t,
                            "bag": shift(&d.node(t).bag),
                            "states": states
                                .iter()
                                .map(|(s, n, k)| json!({"s": shift(s), "n": shift(n), "k": k}))
                                .collect::<Vec<_>>(),
                        }));
                    }
                    json!({ "nodes": tables })
                }
            };
            Ok(json!({"graph": graph, "r": r, "values": result}))
        }
        Command::Gen {
            family,
            spec,
            n,
            k,
            a,
            b,
            p,
            delta_cap,
            seed,
            out,
            out_format,
        } => {
            let spec = match spec {
                Some(path) => {
                    let text = read_bytes(path, &mut Sha256::new())?;
                    serde_json::from_str::<GeneratorSpec>(&text)
                        .map_err(|e| Failure::from(Error::Parse(format!("generator spec: {e}"))))?
                }
                None => {
                    let family: Family = family.as_deref().unwrap_or_default().parse()?;
                    GeneratorSpec {
                        family,
                        n: *n,
                        k: *k,
                        a: *a,
                        b: *b,
                        p: *p,
                        delta_cap: *delta_cap,
                        seed: *seed,
                    }
                }
            };
            let spec_json = serde_json::to_value(&spec).map_err(|e| internal(e.to_string()))?;
            digest.update(spec_json.to_string().as_bytes());
            let g = generate(&spec)?;
            let text = match out_format {
                OutputFormat::Graph6 => serialize_graph6(&g) + "\n",
                OutputFormat::Dimacs => serialize_dimacs(&g),
            };
            let mut result = json!({"spec": spec_json, "graph": graph_summary(&g), "graph6": serialize_graph6(&g)});
            if let Some(path) = out {
                fs::write(path, text).map_err(|e| internal(format!("{}: {e}", path.display())))?;
                result["out"] = json!(path.display().to_string());
            }
            Ok(result)
        }
        Command::CheckChordal { input } => {
            let g = load(input, digest)?;
            let mut result = json!({"graph": graph_summary(&g)});
            match mcs_order(&g) {
                Ok(peo) => {
                    let d = build_nice_decomposition(&g, &peo)?;
                    result["chordal"] = json!(true);
                    result["peo"] = json!(peo.order().iter().map(|v| v + 1).collect::<Vec<_>>());
                    result["decomposition"] = json!({
                        "nodes": d.len(),
                        "max_bag": d.max_bag(),
                        "valid": validate_decomposition(&g, &d).is_ok(),
                    });
                }
                Err(Error::NotChordal(why)) => {
                    result["chordal"] = json!(false);
                    result["reason"] = json!(why);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(result)
        }
        Command::Bench { suite, jobs, out } => {
            let text = read_bytes(suite, digest)?;
            let suite: Suite = serde_json::from_str(&text)
                .map_err(|e| Failure::from(Error::Parse(format!("suite: {e}"))))?;
            let (rows, summary) = run_suite(&suite, *jobs)?;
            if let Some(path) = out {
                let file = fs::File::create(path)
                    .map_err(|e| internal(format!("{}: {e}", path.display())))?;
                write_bench_csv(&rows, file)?;
            }
            if summary.disagreements > 0 {
                let ids: Vec<&str> = rows
                    .iter()
                    .filter(|r| !r.agree)
                    .map(|r| r.graph_id.as_str())
                    .collect();
                return Err(internal(format!(
                    "{} disagreeing rows: {}",
                    ids.len(),
                    ids.join(", ")
                )));
            }
            serde_json::to_value(summary).map_err(|e| internal(e.to_string()))
        }
        Command::Probe { max_n } => serde_json::to_value(degree_minus_one_probe(*max_n)?)
            .map_err(|e| internal(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let started = Instant::now();
    let mut digest = Sha256::new();
    let mut used_input = false;
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        run(&cli.command, &mut digest, &mut used_input)
    }))
    .unwrap_or_else(|panic| {
        let message = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(internal(message))
    });
    let (result, error, code) = match outcome {
        Ok(v) => (Some(v), None, 0),
        Err(f) => {
            eprintln!("error: {}", f.message);
            (
                None,
                Some(json!({"kind": f.kind, "message": f.message, "exit_code": f.code})),
                f.code,
            )
        }
    };
    let report = RunReport {
        command: std::env::args().skip(1).collect(),
        input_digest: used_input.then(|| hex::encode(digest.finalize())),
        version: env!("CARGO_PKG_VERSION"),
        result,
        error,
        timing_ms: started.elapsed().as_millis() as u64,
    };
    match serde_json::to_string_pretty(&report) {
        Ok(text) => {
            use std::io::Write;
            // a closed pipe is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
        Err(_) => return ExitCode::from(5),
    }
    ExitCode::from(code)
}
