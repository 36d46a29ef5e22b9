//! `signedflow`: classify signed eulerian multigraphs by flow number,
//! construct and verify flow certificates, and cross-check against brute
//! force. Exit codes: 0 success, 1 domain errors (invalid graph, failed
//! verification, disagreement), 2 usage errors.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use signedflow::classify::flow_number;
use signedflow::groups::GroupSpec;
use signedflow::io::{
    classification_report, classification_summary, parse_flow, parse_graph,
    render_verify_report, serialize_flow, serialize_graph, sweep_csv,
};
use signedflow::oracle::{
    brute_force_flow_number, brute_force_group_flow, brute_force_triply_odd, enumerate_graphs,
    sweep_with_budget, EnumSpec,
};
use signedflow::SignedMultigraph;

#[derive(Parser)]
#[command(
    name = "signedflow",
    version,
    about = "Flow numbers of signed eulerian multigraphs: classification, \
             machine-checkable certificates, and brute-force cross-validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a graph: flow number 2, 3, 4, or none, with its witness
    Classify {
        /// Graph file
        file: PathBuf,
        /// Also print the certifying flow in the flow file format
        #[arg(long)]
        certificate: bool,
    },
    /// Construct a flow certificate matching the graph's flow number
    Construct {
        /// Graph file
        file: PathBuf,
        /// Output flow file ('-' for stdout)
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a flow file against its graph and print the verification report
    Verify {
        /// Graph file
        graph: PathBuf,
        /// Flow file
        flow: PathBuf,
        /// Additionally require every |value| <= K (integer flows only)
        #[arg(long, value_name = "K")]
        max_abs: Option<u64>,
    },
    /// Switch the graph at a vertex set and write the resulting graph
    Switch {
        /// Graph file
        file: PathBuf,
        /// Comma-separated vertex ids to switch at
        #[arg(long, value_delimiter = ',', value_name = "V1,V2,…", required = true)]
        at: Vec<usize>,
        /// Output graph file ('-' for stdout)
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a named prototype graph
    ///
    /// Names and parameters: neg-loop | pos-loop | neg-digon | bouquet K |
    /// phi4-prototype | barbell L1 L2 P | six-regular-antibalanced N.
    /// The prototypes are deterministic stand-ins built from the defining
    /// properties of their classes (smallest flow-number-2/3/4 members and
    /// the no-flow witness), not transcriptions of any particular drawing.
    Gen {
        /// Generator name
        name: String,
        /// Integer parameters, if the generator takes any
        params: Vec<usize>,
        /// Output graph file ('-' for stdout)
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Brute-force ground truth: exhaustive searches and the agreement sweep
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Stream every signed multigraph within the bounds as graph files
    Enumerate {
        /// Vertex counts run from 1 to N
        #[arg(long, value_name = "N")]
        max_vertices: usize,
        /// Edge counts run from 0 to M
        #[arg(long, value_name = "M")]
        max_edges: usize,
        /// Keep only connected even-degree graphs with at least one edge
        #[arg(long)]
        eulerian: bool,
        /// Keep only connected graphs
        #[arg(long)]
        connected: bool,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive integer flow-number search over k = 2..=K
    FlowNumber {
        /// Graph file
        file: PathBuf,
        /// Largest k to try
        #[arg(long, value_name = "K", default_value_t = 6)]
        max_k: u32,
    },
    /// Exhaustive nowhere-zero flow search over a finite group
    GroupFlow {
        /// Graph file
        file: PathBuf,
        /// Group spec: Z<n> or Z<n>xZ<m>…, e.g. Z3 or Z2xZ4
        #[arg(long, value_name = "SPEC")]
        group: String,
    },
    /// Decide triply-oddness by checking all three-part edge assignments
    TriplyOdd {
        /// Graph file
        file: PathBuf,
    },
    /// Stream the classifier-vs-oracle agreement CSV over all small
    /// connected eulerian graphs; exits 1 if any row disagrees
    Sweep {
        /// Vertex counts run from 1 to N
        #[arg(long, value_name = "N", default_value_t = 3)]
        max_vertices: usize,
        /// Edge counts run from 0 to M
        #[arg(long, value_name = "M", default_value_t = 6)]
        max_edges: usize,
        /// Largest k the brute force tries
        #[arg(long, value_name = "K", default_value_t = 6)]
        max_k: u32,
        /// Node budget for the classifier's bounded searches
        #[arg(long, value_name = "NODES")]
        budget: Option<u64>,
    },
}

/// A failed run, tagged with which exit code it deserves.
enum Failure {
    /// Invalid graph, failed verification, disagreement: exit 1.
    Domain(String),
    /// Bad parameters: exit 2.
    Usage(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE by default, which turns `signedflow … | head` into
    // a broken-pipe panic; restore the usual filter-tool behaviour instead.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<SignedMultigraph, Failure> {
    parse_graph(&read_file(path)?)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

/// Writes to the path, or to stdout when the path is `-`.
fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    if path == Path::new("-") {
        print!("{text}");
        std::io::stdout().flush().ok();
        return Ok(());
    }
    std::fs::write(path, text)
        .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify { file, certificate } => {
            let g = load_graph(&file)?;
            let class = flow_number(&g).map_err(domain)?;
            if certificate {
                print!("{}", classification_report(&class).map_err(domain)?);
            } else {
                print!("{}", classification_summary(&class));
            }
            Ok(())
        }
        Command::Construct { file, output } => {
            let g = load_graph(&file)?;
            let class = flow_number(&g).map_err(domain)?;
            let Some(cert) = &class.certificate else {
                return Err(Failure::Domain(format!(
                    "the graph admits no flow ({})",
                    classification_summary(&class).trim().replace('\n', ", ")
                )));
            };
            write_output(&output, &serialize_flow(cert.flow()).map_err(domain)?)?;
            eprintln!(
                "flow-number: {}",
                class.verdict.flow_number().expect("certificate implies a number")
            );
            Ok(())
        }
        Command::Verify { graph, flow, max_abs } => {
            let g = load_graph(&graph)?;
            let f = parse_flow(&read_file(&flow)?, &g)
                .map_err(|e| Failure::Domain(format!("{}: {e}", flow.display())))?;
            let report = f.verify(&g).map_err(domain)?;
            print!("{}", render_verify_report(&report));
            let mut ok = report.is_nowhere_zero_flow();
            if let Some(bound) = max_abs {
                let within = match report.max_abs {
                    Some(actual) => actual <= bound,
                    None => false,
                };
                println!("max-abs-bound: {}", if within { "ok" } else { "exceeded" });
                ok = ok && within;
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Domain("verification failed".into()))
            }
        }
        Command::Switch { file, at, output } => {
            let g = load_graph(&file)?;
            let set: BTreeSet<usize> = at.into_iter().collect();
            let switched = g.switch(&set).map_err(domain)?;
            write_output(&output, &serialize_graph(&switched))
        }
        Command::Gen { name, params, output } => {
            let g = signedflow::generators::generate(&name, &params)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            write_output(&output, &serialize_graph(&g))
        }
        Command::Oracle(oracle) => run_oracle(oracle),
        Command::Enumerate {
            max_vertices,
            max_edges,
            eulerian,
            connected,
        } => {
            let spec = EnumSpec::new(max_vertices, max_edges, eulerian, connected)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            for (i, g) in enumerate_graphs(&spec).enumerate() {
                if i > 0 {
                    println!();
                }
                println!("# graph {i}");
                print!("{}", serialize_graph(&g));
            }
            Ok(())
        }
    }
}

fn run_oracle(command: OracleCommand) -> Result<(), Failure> {
    match command {
        OracleCommand::FlowNumber { file, max_k } => {
            let g = load_graph(&file)?;
            let verdict = brute_force_flow_number(&g, max_k).map_err(domain)?;
            match verdict {
                Some(k) => println!("flow-number: {k}"),
                None => println!("flow-number: none"),
            }
            Ok(())
        }
        OracleCommand::GroupFlow { file, group } => {
            let g = load_graph(&file)?;
            let spec: GroupSpec = group
                .parse()
                .map_err(|e: signedflow::Error| Failure::Usage(e.to_string()))?;
            match brute_force_group_flow(&g, &spec).map_err(domain)? {
                Some(f) => {
                    println!("group-flow: present");
                    print!("{}", serialize_flow(&f).map_err(domain)?);
                }
                None => println!("group-flow: absent"),
            }
            Ok(())
        }
        OracleCommand::TriplyOdd { file } => {
            let g = load_graph(&file)?;
            let present = brute_force_triply_odd(&g).map_err(domain)?;
            println!("triply-odd: {}", if present { "yes" } else { "no" });
            Ok(())
        }
        OracleCommand::Sweep {
            max_vertices,
            max_edges,
            max_k,
            budget,
        } => {
            let spec = EnumSpec::new(max_vertices, max_edges, true, false)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let budget =
                budget.unwrap_or(signedflow::decompose::DEFAULT_TRIPLY_ODD_BUDGET);
            let rows = sweep_with_budget(&spec, max_k, budget).map_err(domain)?;
            print!("{}", sweep_csv(&rows));
            let disagreements = rows.iter().filter(|r| !r.agrees()).count();
            if disagreements > 0 {
                return Err(Failure::Domain(format!(
                    "{disagreements} disagreement row(s)"
                )));
            }
            Ok(())
        }
    }
}
