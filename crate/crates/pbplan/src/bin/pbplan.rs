//! Command-line surface: generators, verifiers, incentive algorithms,
//! threshold search and price reports over the JSON document formats.
//!
//! Exit status: 0 on success (motivating / feasible / found), 1 on a negative
//! verdict (not motivating / infeasible / nothing found), 2 on errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pbplan::agent::{
    is_motivating_fixed, is_motivating_uncertain, is_motivating_variable, verdict_report, Verdict,
};
use pbplan::bias::{parse_bias_set, serialize_bias_set, BiasSet};
use pbplan::families::{
    alice_bob_bias_set, brute_force_schedule, extract_schedule, gen_alice_bob, gen_pou_family,
    gen_pov_family, gen_random_dag, gen_vs_reduction, parse_reduction_meta, pou_bias_set,
    pov_bias_set, schedule_configuration, serialize_reduction_meta, Schedule, VSInstance,
};
use pbplan::graph::{
    parse_configuration, parse_graph, serialize_configuration, serialize_graph, CostConfiguration,
    TaskGraph,
};
use pbplan::incentives::{
    cns_configuration, cns_threshold, decide_cns, sweep_configurations, uncertain_approx,
    variable_approx, SweepMode,
};
use pbplan::num::{decimal_string, format_rational, parse_rational, rat_int, Rational};
use pbplan::report::{run_price_report, PriceMode};

#[derive(Parser)]
#[command(name = "pbplan", version, about = "Present-biased planning on task graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance families as graph documents
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Check whether a (configured) graph is motivating
    Verify(VerifyArgs),
    /// Run the approximation algorithms and emit a certified configuration
    Approx(ApproxArgs),
    /// Decide critical node sets or search the optimal reward (needs 1 in B)
    Cns(CnsArgs),
    /// Emit a certified price-of-uncertainty/variability report as CSV
    Price(PriceArgs),
    /// Exhaustive grid sweep over small configuration supports
    Sweep(SweepArgs),
    /// Vector-scheduling reduction pipeline
    ReduceVs {
        #[command(subcommand)]
        step: ReduceStep,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// The running two-runner scenario (7 nodes, 9 edges)
    AliceBob {
        /// Bias offset eps with 0 < eps <= 1/54
        #[arg(long, default_value = "1/54")]
        eps: String,
        #[command(flatten)]
        out: GenOut,
    },
    /// Price-of-uncertainty family (main path plus one shortcut)
    Pou {
        /// Parameter a with 0 < a <= 3/8 and 4/a integral
        #[arg(long)]
        a: String,
        #[command(flatten)]
        out: GenOut,
    },
    /// Price-of-variability family (unit main path, shared shortcut exit)
    Pov {
        /// Parameter a with 0 < a < 1/2 and 1/a integral
        #[arg(long)]
        a: String,
        #[command(flatten)]
        out: GenOut,
    },
    /// Seeded random normalized DAG
    Random {
        #[arg(long)]
        seed: u64,
        /// Upper bound on the node count
        #[arg(long, default_value_t = 12)]
        nodes: usize,
        /// Largest cost denominator
        #[arg(long, default_value_t = 6)]
        cost_den: u32,
        #[command(flatten)]
        out: GenOut,
    },
}

#[derive(Args)]
struct GenOut {
    /// Write the graph document here (stdout otherwise)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the family's bias set document
    #[arg(long)]
    bias_out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Fixed,
    Uncertain,
    Variable,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Optional cost configuration applied before checking
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Fixed bias (mode fixed)
    #[arg(long)]
    beta: Option<String>,
    /// Bias set document (modes uncertain/variable)
    #[arg(long)]
    bias: Option<PathBuf>,
    #[arg(long)]
    reward: String,
    /// Write the verdict report here (stdout otherwise)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    bias: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Write the configuration document here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CnsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    bias: PathBuf,
    /// Decide feasibility at this reward
    #[arg(long)]
    reward: Option<String>,
    /// Search the optimal reward instead of deciding at one
    #[arg(long)]
    threshold: bool,
    /// Bracket width for the threshold search
    #[arg(long, default_value = "1/1099511627776")]
    tol: String,
    /// Write the fencing configuration here (feasible decisions only)
    #[arg(long)]
    config_out: Option<PathBuf>,
}

#[derive(Args)]
struct PriceArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    bias: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Instance label for the report rows
    #[arg(long, default_value = "instance")]
    instance: String,
    #[arg(long, default_value = "1/1099511627776")]
    tol: String,
    /// Write the CSV here (stdout otherwise)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    bias: PathBuf,
    #[arg(long)]
    reward: String,
    /// Comma-separated edge indices carrying extras (at most three)
    #[arg(long)]
    edges: String,
    /// Grid step for each extra
    #[arg(long)]
    grid: String,
    /// Upper bound on each extra
    #[arg(long)]
    cap: String,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Enumeration budget
    #[arg(long, default_value_t = 1_000_000)]
    budget: u128,
}

#[derive(Subcommand)]
enum ReduceStep {
    /// Build the reduction graph, bias set and metadata for a VS instance
    Build {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        bias_out: Option<PathBuf>,
    },
    /// Brute-force the optimal schedule of a VS instance
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Translate a schedule into a motivating configuration
    Schedule {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        /// Comma-separated machine per job, 0-based (e.g. 0,0,1)
        #[arg(long)]
        assign: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover a schedule from a motivating configuration
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        reward: String,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    machines: usize,
    /// Comma-separated 0-1 job vectors, e.g. 01,10,11
    #[arg(long)]
    jobs: String,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<TaskGraph, String> {
    parse_graph(&read(path)?).map_err(|e| e.to_string())
}

fn load_bias(path: &Path) -> Result<BiasSet, String> {
    parse_bias_set(&read(path)?).map_err(|e| e.to_string())
}

fn load_config(path: &Path) -> Result<CostConfiguration, String> {
    parse_configuration(&read(path)?).map_err(|e| e.to_string())
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn parse_instance(args: &InstanceArgs) -> Result<VSInstance, String> {
    let mut jobs = Vec::new();
    for part in args.jobs.split(',') {
        let row: Result<Vec<u8>, String> = part
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(format!("job entry {other:?} is not 0 or 1")),
            })
            .collect();
        jobs.push(row?);
    }
    VSInstance::new(args.machines, jobs).map_err(|e| e.to_string())
}

fn pq(value: &Rational) -> String {
    format!("{} ({})", format_rational(value), decimal_string(value))
}

/// 0 motivating/feasible/found, 1 otherwise.
fn status(positive: bool) -> u8 {
    if positive {
        0
    } else {
        1
    }
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { family } => run_gen(family),
        Command::Verify(args) => run_verify(args),
        Command::Approx(args) => run_approx(args),
        Command::Cns(args) => run_cns(args),
        Command::Price(args) => run_price(args),
        Command::Sweep(args) => run_sweep(args),
        Command::ReduceVs { step } => run_reduce(step),
    }
}

fn emit_family(graph: &TaskGraph, bias: Option<BiasSet>, out: &GenOut) -> Result<u8, String> {
    write_or_print(&out.out, &serialize_graph(graph))?;
    if let Some(path) = &out.bias_out {
        let bias = bias.ok_or_else(|| "this family has no canonical bias set".to_string())?;
        fs::write(path, serialize_bias_set(&bias))
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(0)
}

fn run_gen(family: GenFamily) -> Result<u8, String> {
    match family {
        GenFamily::AliceBob { eps, out } => {
            let eps = rational(&eps)?;
            let graph = gen_alice_bob(&eps).map_err(|e| e.to_string())?;
            let bias = alice_bob_bias_set(&eps).map_err(|e| e.to_string())?;
            emit_family(&graph, Some(bias), &out)
        }
        GenFamily::Pou { a, out } => {
            let a = rational(&a)?;
            let graph = gen_pou_family(&a).map_err(|e| e.to_string())?;
            let bias = pou_bias_set(&a).map_err(|e| e.to_string())?;
            emit_family(&graph, Some(bias), &out)
        }
        GenFamily::Pov { a, out } => {
            let a = rational(&a)?;
            let graph = gen_pov_family(&a).map_err(|e| e.to_string())?;
            let bias = pov_bias_set(&a).map_err(|e| e.to_string())?;
            emit_family(&graph, Some(bias), &out)
        }
        GenFamily::Random {
            seed,
            nodes,
            cost_den,
            out,
        } => {
            let graph = gen_random_dag(seed, nodes, cost_den).map_err(|e| e.to_string())?;
            emit_family(&graph, None, &out)
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<u8, String> {
    let mut graph = load_graph(&args.graph)?;
    if let Some(path) = &args.config {
        let configuration = load_config(path)?;
        graph = graph.apply(&configuration).map_err(|e| e.to_string())?;
    }
    let reward = rational(&args.reward)?;
    let verdict: Verdict = match args.mode {
        Mode::Fixed => {
            let beta = args
                .beta
                .as_deref()
                .ok_or_else(|| "mode fixed needs --beta".to_string())?;
            let beta = rational(beta)?;
            is_motivating_fixed(&graph, &beta, &reward).map_err(|e| e.to_string())?
        }
        Mode::Uncertain | Mode::Variable => {
            let bias = args
                .bias
                .as_deref()
                .ok_or_else(|| "modes uncertain/variable need --bias".to_string())?;
            let set = load_bias(bias)?;
            match args.mode {
                Mode::Uncertain => {
                    is_motivating_uncertain(&graph, &set, &reward).map_err(|e| e.to_string())?
                }
                _ => is_motivating_variable(&graph, &set, &reward).map_err(|e| e.to_string())?,
            }
        }
    };
    write_or_print(&args.out, &verdict_report(&graph, &verdict))?;
    Ok(status(verdict.motivating))
}

fn run_approx(args: ApproxArgs) -> Result<u8, String> {
    let graph = load_graph(&args.graph)?;
    let set = load_bias(&args.bias)?;
    let (result, verdict) = match args.mode {
        Mode::Uncertain => {
            let result = uncertain_approx(&graph, &set).map_err(|e| e.to_string())?;
            let configured = graph.apply(&result.configuration).map_err(|e| e.to_string())?;
            let verdict = is_motivating_uncertain(&configured, &set, &result.reward)
                .map_err(|e| e.to_string())?;
            (result, verdict)
        }
        Mode::Variable => {
            let result = variable_approx(&graph, &set).map_err(|e| e.to_string())?;
            let configured = graph.apply(&result.configuration).map_err(|e| e.to_string())?;
            let verdict = is_motivating_variable(&configured, &set, &result.reward)
                .map_err(|e| e.to_string())?;
            (result, verdict)
        }
        Mode::Fixed => return Err("approx modes are uncertain or variable".into()),
    };
    if !verdict.motivating {
        return Err("internal error: approximation output failed verification".into());
    }
    println!("alpha:  {}", pq(&result.alpha));
    println!("lower:  {}", pq(&result.lower));
    println!("reward: {} (verified)", pq(&result.reward));
    if let Some(path) = &args.out {
        fs::write(path, serialize_configuration(&result.configuration))
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    } else {
        println!("{}", serialize_configuration(&result.configuration));
    }
    Ok(0)
}

fn run_cns(args: CnsArgs) -> Result<u8, String> {
    let graph = load_graph(&args.graph)?;
    let set = load_bias(&args.bias)?;
    if args.threshold {
        let tol = rational(&args.tol)?;
        let result = cns_threshold(&graph, &set, &tol).map_err(|e| e.to_string())?;
        match &result.exact {
            Some(exact) => println!("threshold: {} (exact)", pq(exact)),
            None => println!(
                "threshold in [{}, {}]",
                format_rational(&result.lo),
                format_rational(&result.hi)
            ),
        }
        return Ok(0);
    }
    let reward = args
        .reward
        .as_deref()
        .ok_or_else(|| "cns needs --reward or --threshold".to_string())?;
    let reward = rational(reward)?;
    let table = decide_cns(&graph, &set, &reward).map_err(|e| e.to_string())?;
    if !table.feasible {
        println!("infeasible at reward {}", pq(&reward));
        return Ok(1);
    }
    let witness: BTreeSet<_> = table.witness();
    println!(
        "feasible at reward {} with {} of {} nodes",
        pq(&reward),
        witness.len(),
        graph.node_count()
    );
    if let Some(path) = &args.config_out {
        let configuration =
            cns_configuration(&graph, &witness, &reward).map_err(|e| e.to_string())?;
        fs::write(path, serialize_configuration(&configuration))
            .map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(0)
}

fn run_price(args: PriceArgs) -> Result<u8, String> {
    let graph = load_graph(&args.graph)?;
    let set = load_bias(&args.bias)?;
    let mode = match args.mode {
        Mode::Uncertain => PriceMode::Uncertain,
        Mode::Variable => PriceMode::Variable,
        Mode::Fixed => return Err("price modes are uncertain or variable".into()),
    };
    let tol = rational(&args.tol)?;
    let report =
        run_price_report(&graph, &set, mode, &args.instance, &tol).map_err(|e| e.to_string())?;
    write_or_print(&args.out, report.to_csv().trim_end())?;
    Ok(0)
}

fn run_sweep(args: SweepArgs) -> Result<u8, String> {
    let graph = load_graph(&args.graph)?;
    let set = load_bias(&args.bias)?;
    let reward = rational(&args.reward)?;
    let grid = rational(&args.grid)?;
    let cap = rational(&args.cap)?;
    let edges: Result<Vec<usize>, String> = args
        .edges
        .split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|e| format!("edge index {part:?}: {e}"))
        })
        .collect();
    let mode = match args.mode {
        Mode::Uncertain => SweepMode::Uncertain,
        Mode::Variable => SweepMode::Variable,
        Mode::Fixed => return Err("sweep modes are uncertain or variable".into()),
    };
    let found = sweep_configurations(&graph, &edges?, &grid, &cap, &set, &reward, mode, args.budget)
        .map_err(|e| e.to_string())?;
    println!(
        "{} at reward {}",
        if found { "found" } else { "none" },
        pq(&reward)
    );
    Ok(status(found))
}

fn run_reduce(step: ReduceStep) -> Result<u8, String> {
    match step {
        ReduceStep::Build {
            instance,
            out,
            meta,
            bias_out,
        } => {
            let instance = parse_instance(&instance)?;
            let (graph, bias, meta_doc) = gen_vs_reduction(&instance).map_err(|e| e.to_string())?;
            fs::write(&out, serialize_graph(&graph))
                .map_err(|e| format!("writing {}: {e}", out.display()))?;
            fs::write(&meta, serialize_reduction_meta(&meta_doc))
                .map_err(|e| format!("writing {}: {e}", meta.display()))?;
            if let Some(path) = bias_out {
                fs::write(&path, serialize_bias_set(&bias))
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
            }
            println!(
                "built reduction graph: {} nodes, {} edges",
                graph.node_count(),
                graph.edge_count()
            );
            Ok(0)
        }
        ReduceStep::Solve { instance, budget } => {
            let instance = parse_instance(&instance)?;
            let best = brute_force_schedule(&instance, budget).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string(&best).expect("schedule serialization"));
            Ok(0)
        }
        ReduceStep::Schedule {
            graph,
            meta,
            assign,
            out,
        } => {
            let graph = load_graph(&graph)?;
            let meta = parse_reduction_meta(&read(&meta)?).map_err(|e| e.to_string())?;
            let assignment: Result<Vec<usize>, String> = assign
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<usize>()
                        .map_err(|e| format!("assignment {part:?}: {e}"))
                })
                .collect();
            let instance = meta.instance().map_err(|e| e.to_string())?;
            let schedule = Schedule::new(&instance, assignment?).map_err(|e| e.to_string())?;
            let (configuration, reward) =
                schedule_configuration(&graph, &meta, &schedule).map_err(|e| e.to_string())?;
            println!("makespan: {}", schedule.makespan);
            println!("reward:   {}", pq(&reward));
            match out {
                Some(path) => fs::write(&path, serialize_configuration(&configuration))
                    .map_err(|e| format!("writing {}: {e}", path.display()))?,
                None => println!("{}", serialize_configuration(&configuration)),
            }
            Ok(0)
        }
        ReduceStep::Extract {
            graph,
            meta,
            config,
            reward,
        } => {
            let graph = load_graph(&graph)?;
            let meta = parse_reduction_meta(&read(&meta)?).map_err(|e| e.to_string())?;
            let configuration = load_config(&config)?;
            let reward = rational(&reward)?;
            let schedule = extract_schedule(&graph, &meta, &configuration, &reward)
                .map_err(|e| e.to_string())?;
            let bound = rat_int(2) * &reward / rat_int(meta.ell as i64);
            println!("{}", serde_json::to_string(&schedule).expect("schedule serialization"));
            println!("makespan bound 2r/l: {}", pq(&bound));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
