use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use galaxies_core::checks::run_all;
use galaxies_core::filters::{FilterVerdict, UltrafilterOracle};
use galaxies_core::galaxies0::{chain_thm42, Budgets, Closeness, Limited};
use galaxies_core::galaxies1::{chain_thm112, classify_at, Level};
use galaxies_core::graphone::solver::solve;
use galaxies_core::graphone::{builtins as one_builtins, OneGraphPresentation};
use galaxies_core::graphzero::{builtins as zero_builtins, parse_edits, GraphPresentation};
use galaxies_core::literal::parse_hypernode_literal;
use galaxies_core::metric::SearchOnly;
use galaxies_core::report::ChainReport;
use galaxies_core::ultrapower::{hyperdistance, Hypernode};
use galaxies_core::{Error, Metric, NodeRef};
use serde_json::json;

const EXIT_UNDETERMINED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Parser)]
#[command(name = "galaxies", version, about = "Distances, galaxies and galaxy chains of nonstandard graph enlargements")]
struct Cli {
    /// Builtin presentation name (see export-builtin --list).
    #[arg(long, global = true)]
    builtin: Option<String>,
    /// Presentation JSON file.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Ultrafilter oracle: `frechet` or `residues=m1:r1,...`.
    #[arg(long, global = true, default_value = "frechet")]
    oracle: String,
    /// Search radius and solver budget.
    #[arg(long, global = true, default_value_t = 64)]
    budget: usize,
    /// Chain depth on each side.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Closeness witnesses are reported for m = 1..=m-max.
    #[arg(long = "m-max", global = true, default_value_t = 32)]
    m_max: u64,
    /// Largest k tried for limited distance.
    #[arg(long = "k-max", global = true, default_value_t = 64)]
    k_max: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 2 when any verdict is undetermined.
    #[arg(long, global = true)]
    strict: bool,
    /// Edits for grid2d_edited: `add:A/B;del:C/D`.
    #[arg(long, global = true)]
    edits: Option<String>,
    /// Ignore closed-form distances and search.
    #[arg(long, global = true)]
    solver: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance between two nodes.
    Dist { x: String, y: String },
    /// Walk distance between two nodes of a 1-graph.
    Wdist { x: String, y: String },
    /// Hyperdistance between two hypernode literals.
    Hyperdist { a: String, b: String },
    /// Partition hypernodes into galaxies.
    Classify {
        #[arg(long, value_enum, default_value_t = LevelArg::Zero)]
        level: LevelArg,
        #[arg(required = true)]
        hypernodes: Vec<String>,
    },
    /// Chain of galaxies ordered by closeness around the galaxy of `v`.
    Chain { x: String, v: String },
    /// Run the catalog property checks.
    VerifyExamples,
    /// Print a builtin presentation as JSON.
    ExportBuiltin {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        list: bool,
    },
    /// Render and recheck a chain report written by `chain --json`.
    Report { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Zero,
    One,
}

enum Graph {
    Zero(GraphPresentation),
    One(OneGraphPresentation),
}

impl Graph {
    fn metric(&self) -> &dyn Metric {
        match self {
            Graph::Zero(g) => g,
            Graph::One(g) => g,
        }
    }

    fn name(&self) -> &str {
        self.metric().name()
    }
}

/// What a command produced: text and JSON forms, and whether any verdict
/// was left undetermined.
struct Output {
    text: String,
    json: serde_json::Value,
    undetermined: bool,
    status: u8,
}

impl Output {
    fn new(text: String, json: serde_json::Value) -> Self {
        Output { text, json, undetermined: false, status: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Json(_) => EXIT_USAGE,
        Error::Defect(_) | Error::Overflow(_) => EXIT_SOFTWARE,
        Error::Unresolved { .. } => EXIT_UNDETERMINED,
        _ => EXIT_DATA,
    }
}

fn load(cli: &Cli) -> Result<Graph, Error> {
    let edits = match &cli.edits {
        Some(s) => parse_edits(s)?,
        None => vec![],
    };
    match (&cli.builtin, &cli.graph) {
        (Some(_), Some(_)) => Err(Error::Parse("give either --builtin or --graph, not both".into())),
        (None, None) => Err(Error::Parse("a graph is required: --builtin=NAME or --graph=FILE".into())),
        (Some(name), None) => {
            if zero_builtins::NAMES.contains(&name.as_str()) {
                Ok(Graph::Zero(zero_builtins::builtin_with_edits(name, &edits)?))
            } else if one_builtins::NAMES.contains(&name.as_str()) {
                if !edits.is_empty() {
                    return Err(Error::Precondition(format!("builtin {name} does not accept edits")));
                }
                Ok(Graph::One(one_builtins::builtin(name)?))
            } else {
                Err(Error::Parse(format!("unknown builtin {name:?}")))
            }
        }
        (None, Some(path)) => {
            if !edits.is_empty() {
                return Err(Error::Precondition("--edits applies to builtins; list edits in the file instead".into()));
            }
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let v: serde_json::Value = serde_json::from_str(&text)?;
            if v.get("sections").is_some() {
                Ok(Graph::One(OneGraphPresentation::from_json(&text)?))
            } else {
                Ok(Graph::Zero(GraphPresentation::from_json(&text)?))
            }
        }
    }
}

fn node(s: &str) -> Result<NodeRef, Error> {
    s.parse()
}

fn hypernode(m: &dyn Metric, s: &str, o: &UltrafilterOracle) -> Result<Hypernode, Error> {
    Hypernode::new(m, parse_hypernode_literal(s)?, o)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let o: UltrafilterOracle = cli.oracle.parse()?;
    let bud = Budgets { budget: cli.budget, k_max: cli.k_max, m_max: cli.m_max };
    match &cli.cmd {
        Cmd::ExportBuiltin { list: true, .. } => {
            let names: Vec<&str> = zero_builtins::NAMES.iter().chain(one_builtins::NAMES.iter()).copied().collect();
            Ok(Output::new(names.join("\n"), json!(names)))
        }
        Cmd::ExportBuiltin { name, out, .. } => {
            let name = name.as_deref().ok_or_else(|| Error::Parse("export-builtin needs a builtin name".into()))?;
            let edits = match &cli.edits {
                Some(s) => parse_edits(s)?,
                None => vec![],
            };
            let text = if zero_builtins::NAMES.contains(&name) {
                zero_builtins::builtin_with_edits(name, &edits)?.to_json()?
            } else if one_builtins::NAMES.contains(&name) {
                one_builtins::builtin(name)?.to_json()?
            } else {
                return Err(Error::Parse(format!("unknown builtin {name:?}")));
            };
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
                    Ok(Output::new(format!("wrote {}", path.display()), json!({ "written": path })))
                }
                None => Ok(Output::new(text.clone(), serde_json::from_str(&text)?)),
            }
        }
        Cmd::VerifyExamples => {
            let outcomes = run_all(&bud);
            let mut text = String::new();
            for c in &outcomes {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                text.push_str(&format!("{mark}  {:<24} {}  [{}]\n", c.graph, c.claim, c.detail));
            }
            let failed = outcomes.iter().filter(|c| !c.pass).count();
            text.push_str(&format!("{} of {} checks passed", outcomes.len() - failed, outcomes.len()));
            let mut out = Output::new(text, json!(outcomes));
            if failed > 0 {
                out.status = EXIT_SOFTWARE;
            }
            Ok(out)
        }
        Cmd::Report { file } => {
            let text = fs::read_to_string(file).map_err(|e| Error::Parse(format!("cannot read {}: {e}", file.display())))?;
            let r: ChainReport = serde_json::from_str(&text)?;
            let mut out = Output::new(r.to_text(), serde_json::to_value(&r)?);
            if !r.recheck() {
                out.text.push_str("\nrecorded verdicts contradict the valid flag");
                out.status = EXIT_DATA;
            }
            Ok(out)
        }
        _ => run_on_graph(cli, &load(cli)?, &o, &bud),
    }
}

fn run_on_graph(cli: &Cli, graph: &Graph, o: &UltrafilterOracle, bud: &Budgets) -> Result<Output, Error> {
    let search = SearchOnly(graph.metric());
    let m: &dyn Metric = if cli.solver { &search } else { graph.metric() };
    match &cli.cmd {
        Cmd::Dist { x, y } => {
            let (x, y) = (node(x)?, node(y)?);
            let d = m.dist(&x, &y, bud.budget)?;
            Ok(Output::new(d.to_string(), json!({ "x": x.to_string(), "y": y.to_string(), "dist": d.to_string() })))
        }
        Cmd::Wdist { x, y } => {
            let Graph::One(g) = graph else {
                return Err(Error::Precondition(format!("wdist needs a 1-graph; {} is a 0-graph", graph.name())));
            };
            let (x, y) = (node(x)?, node(y)?);
            if cli.solver {
                let s = solve(g, &x, &y, bud.budget)?;
                let walk: Vec<String> = s.geodesic.nodes.iter().map(|n| n.to_string()).collect();
                let text = format!("{}\ngeodesic: {}", s.dist, walk.join(" -> "));
                let j = json!({ "x": x.to_string(), "y": y.to_string(), "dist": s.dist.to_string(), "geodesic": walk, "settled": s.stats.settled });
                Ok(Output::new(text, j))
            } else {
                let d = g.wdistance(&x, &y, bud.budget)?;
                Ok(Output::new(d.to_string(), json!({ "x": x.to_string(), "y": y.to_string(), "dist": d.to_string() })))
            }
        }
        Cmd::Hyperdist { a, b } => {
            let (ha, hb) = (hypernode(m, a, o)?, hypernode(m, b, o)?);
            let d = hyperdistance(m, &ha, &hb, bud.budget)?;
            let first: Vec<String> = (0..8).map(|n| d.at(n).map(|v| v.to_string())).collect::<Result<_, _>>()?;
            let text = format!("{d}\nfirst values: {}", first.join(" "));
            Ok(Output::new(text, json!({ "profile": d, "first_values": first })))
        }
        Cmd::Classify { level, hypernodes } => {
            let level = match level {
                LevelArg::Zero => Level::ZeroGalaxy,
                LevelArg::One => Level::OneGalaxy,
            };
            let hs = hypernodes.iter().map(|s| hypernode(m, s, o)).collect::<Result<Vec<_>, _>>()?;
            let r = classify_at(m, &hs, level, o, bud)?;
            let mut text = String::new();
            for (i, c) in r.classes.iter().enumerate() {
                let members: Vec<&str> = c.iter().map(|&k| hypernodes[k].as_str()).collect();
                text.push_str(&format!("galaxy {i}: {}\n", members.join("  ")));
            }
            for (i, j) in &r.unresolved {
                text.push_str(&format!("undetermined: {} vs {}\n", hypernodes[*i], hypernodes[*j]));
            }
            for (i, j) in &r.conflicts {
                text.push_str(&format!("conflict: {} and {} share a class but are not limitedly distant\n", hypernodes[*i], hypernodes[*j]));
            }
            let mut out = Output::new(text.trim_end().to_string(), serde_json::to_value(&r)?);
            out.undetermined = !r.unresolved.is_empty();
            Ok(out)
        }
        Cmd::Chain { x, v } => {
            let (hx, hv) = (hypernode(m, x, o)?, hypernode(m, v, o)?);
            let chain = match graph {
                Graph::Zero(g) => chain_thm42(g, &hx, &hv, cli.depth, o, bud)?,
                Graph::One(g) => chain_thm112(g, &hx, &hv, cli.depth, o, bud)?,
            };
            let r = ChainReport::from_chain(graph.name(), &chain, 8)?;
            let undetermined = r.adjacent.iter().any(|a| {
                a.answer == Closeness::Undetermined || a.witnesses.iter().any(|(_, w)| *w == FilterVerdict::Undetermined)
            }) || r.distinct.iter().any(|(_, _, l)| *l == Limited::Undetermined);
            let mut out = Output::new(r.to_text().trim_end().to_string(), serde_json::to_value(&r)?);
            out.undetermined = undetermined;
            if !r.valid && !undetermined {
                out.status = EXIT_SOFTWARE;
            }
            Ok(out)
        }
        _ => unreachable!("graph-free commands are handled by run"),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&out.json).expect("serializable output"));
            } else if !out.text.is_empty() {
                emit(&out.text);
            }
            if out.undetermined {
                eprintln!("note: some verdicts are undetermined under oracle {}", cli.oracle);
                if cli.strict {
                    return ExitCode::from(EXIT_UNDETERMINED);
                }
            }
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == EXIT_UNDETERMINED && !cli.strict {
                // an unresolved search is a verdict, not a failure
                if cli.json {
                    emit(&json!({ "undetermined": true, "detail": e.to_string() }).to_string());
                } else {
                    emit("undetermined");
                }
                return ExitCode::SUCCESS;
            }
            ExitCode::from(code)
        }
    }
}
