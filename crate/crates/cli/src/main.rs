use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdpsync::cycles::{delta, delta_bruteforce, BRUTEFORCE_LIMIT};
use mdpsync::decide::{
    bounded_cycle_search, decide, Answer, DecideConfig, Verdict, DEFAULT_NODE_CAP,
};
use mdpsync::io::format::{mdp_to_json, parse_mdp, CycleDocument, StrategyDocument};
use mdpsync::io::generate::{gen_cerny, gen_random};
use mdpsync::io::report::{family_names, ConfigEcho, EmpiricalSummary, Report};
use mdpsync::io::syncword::shortest_sync_word;
use mdpsync::simulate::{
    check_sync, default_epsilon, default_horizon, simulate, DistributionTrace, Policy,
    UniformPolicy,
};
use mdpsync::synthesize::strategy_from_witness;
use mdpsync::{Mdp, Mode, Objective};
use thiserror::Error;

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Data(#[from] mdpsync::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Data(_) => EXIT_DATA,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "mdpsync",
    version,
    about = "Synchronizing strategies for Markov decision processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model document; violations go to standard error.
    Validate {
        /// Model file, or `-` for standard input.
        #[arg(default_value = "-")]
        file: PathBuf,
    },
    /// Decide whether a synchronizing strategy exists.
    Decide(DecideArgs),
    /// Decide, then write the witness strategy and check it by simulation.
    Synthesize {
        #[command(flatten)]
        decide: DecideArgs,
        #[arg(long)]
        strategy_out: Option<PathBuf>,
    },
    /// Propagate the state distribution under a strategy.
    Simulate(SimulateArgs),
    /// Reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Generate model documents.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Shortest synchronizing word of a deterministic model.
    Syncword {
        #[arg(default_value = "-")]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Blind,
    Perfect,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Blind => Mode::Blind,
            ModeArg::Perfect => Mode::Perfect,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Strong,
    Weak,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Strong => Objective::Strong,
            ObjectiveArg::Weak => Objective::Weak,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    /// Relation search over the subset construction (complete).
    Relation,
    /// Cycles up to `--bound` letters (reference oracle).
    Bounded,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(default_value = "-")]
    file: PathBuf,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value = "relation")]
    algorithm: Algorithm,
    /// Maximum cycle length for the bounded algorithm.
    #[arg(long, default_value_t = 12)]
    bound: usize,
    /// Search nodes allowed per anchor cell.
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(default_value = "-")]
    file: PathBuf,
    /// Strategy document to play.
    #[arg(long, conflicts_with = "uniform", required_unless_present = "uniform")]
    strategy: Option<PathBuf>,
    /// Play every action with equal probability instead.
    #[arg(long)]
    uniform: bool,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Window for the weak check; defaults to the strategy period.
    #[arg(long)]
    window: Option<usize>,
    /// Write a `step,norm` table here.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Recurrent family of a cycle, by both algorithms.
    Delta {
        #[arg(default_value = "-")]
        file: PathBuf,
        /// Cycle document as inline JSON, or `@path`.
        #[arg(long)]
        cycle: String,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Černý automaton.
    Cerny {
        #[arg(short)]
        n: usize,
    },
    /// Seeded random model.
    Random {
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
        #[arg(long, default_value_t = 2)]
        branching: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_text(path: &Path) -> CliResult<String> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_text(p, text),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn load(path: &Path) -> CliResult<Mdp> {
    Ok(parse_mdp(&read_text(path)?)?)
}

fn answer_code(a: Answer) -> u8 {
    match a {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::InconclusiveLimit => 2,
    }
}

fn run_decide(args: &DecideArgs) -> CliResult<(Mdp, Verdict, ConfigEcho)> {
    let mdp = load(&args.file)?;
    let (mode, objective) = (args.mode.into(), args.objective.into());
    let (verdict, algorithm, bound, node_cap) = match args.algorithm {
        Algorithm::Relation => (
            decide(
                &mdp,
                mode,
                objective,
                &DecideConfig {
                    node_cap: args.node_cap,
                },
            ),
            "relation",
            None,
            Some(args.node_cap),
        ),
        Algorithm::Bounded => (
            bounded_cycle_search(&mdp, mode, objective, args.bound),
            "bounded",
            Some(args.bound),
            None,
        ),
    };
    let config = ConfigEcho {
        input: Some(args.file.display().to_string()),
        mode,
        objective,
        algorithm: algorithm.into(),
        bound,
        node_cap,
    };
    Ok((mdp, verdict, config))
}

fn cmd_validate(file: &Path) -> CliResult<u8> {
    let mdp = match load(file) {
        Err(CliError::Data(mdpsync::Error::InvalidModel(violations))) => {
            for v in violations {
                eprintln!("{v}");
            }
            return Ok(EXIT_DATA);
        }
        other => other?,
    };
    for w in mdp.validate() {
        eprintln!("warning: {w}");
    }
    println!(
        "valid: {} states, {} actions",
        mdp.num_states(),
        mdp.num_actions()
    );
    Ok(0)
}

fn cmd_decide(args: &DecideArgs) -> CliResult<u8> {
    let (mdp, verdict, config) = run_decide(args)?;
    let report = Report::new(&mdp, &verdict, config);
    emit(args.out.as_deref(), &report.to_json())?;
    Ok(answer_code(verdict.answer))
}

fn cmd_synthesize(args: &DecideArgs, strategy_out: Option<&Path>) -> CliResult<u8> {
    let (mdp, verdict, config) = run_decide(args)?;
    let mut report = Report::new(&mdp, &verdict, config);
    if let Some(w) = verdict
        .witness
        .as_ref()
        .filter(|_| verdict.answer == Answer::Yes)
    {
        let st = strategy_from_witness(&mdp, w, verdict.mode, verdict.objective)?;
        if let Some(p) = strategy_out {
            write_text(p, &StrategyDocument::from_strategy(&mdp, &st).to_json())?;
        }
        let horizon = default_horizon(&mdp, &st);
        let trace = simulate(&mdp, &st, horizon);
        let check = check_sync(
            &trace,
            verdict.objective,
            default_epsilon(&mdp),
            st.period().len(),
        );
        report = report
            .with_strategy(&mdp, &st)
            .with_empirical(EmpiricalSummary::new(&check, horizon));
    }
    emit(args.out.as_deref(), &report.to_json())?;
    Ok(answer_code(verdict.answer))
}

fn trace_table(trace: &DistributionTrace) -> String {
    let mut s = String::from("step,norm\n");
    for (k, x) in trace.norms().iter().enumerate() {
        s.push_str(&format!("{k},{}\n", significant(*x, 12)));
    }
    s
}

/// `x` rounded to `digits` significant digits, without trailing zeros.
fn significant(x: f64, digits: usize) -> String {
    let s = format!("{:.*e}", digits - 1, x);
    let v: f64 = s.parse().expect("formatted float parses");
    v.to_string()
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult<u8> {
    let mdp = load(&args.file)?;
    let (policy, horizon, window): (Box<dyn Policy>, usize, usize) = match &args.strategy {
        Some(p) => {
            let st = StrategyDocument::from_json(&read_text(p)?)?.to_strategy(&mdp)?;
            let h = default_horizon(&mdp, &st);
            let w = st.period().len();
            (Box::new(st), h, w)
        }
        None => (
            Box::new(UniformPolicy {
                num_actions: mdp.num_actions(),
            }),
            5000,
            1,
        ),
    };
    let steps = args.steps.unwrap_or(horizon);
    let epsilon = args.epsilon.unwrap_or_else(|| default_epsilon(&mdp));
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(CliError::Usage(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let window = args.window.unwrap_or(window).max(1);
    let trace = simulate(&mdp, policy.as_ref(), steps);
    if let Some(p) = &args.trace_out {
        write_text(p, &trace_table(&trace))?;
    }
    let summaries: Vec<EmpiricalSummary> = [Objective::Strong, Objective::Weak]
        .into_iter()
        .map(|obj| EmpiricalSummary::new(&check_sync(&trace, obj, epsilon, window), steps))
        .collect();
    let doc = serde_json::json!({
        "steps": steps,
        "final_norm": trace.norms()[steps],
        "checks": summaries,
    });
    emit(
        None,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializes")
        ),
    )?;
    Ok(0)
}

fn cmd_oracle_delta(file: &Path, cycle: &str) -> CliResult<u8> {
    let mdp = load(file)?;
    let text = match cycle.strip_prefix('@') {
        Some(p) => read_text(Path::new(p))?,
        None => cycle.to_string(),
    };
    let cyc = CycleDocument::from_json(&text)?.to_cycle(&mdp)?;
    let fast = delta(&mdp, &cyc);
    let (brute, agree) = match delta_bruteforce(&mdp, &cyc, BRUTEFORCE_LIMIT) {
        Ok(b) => {
            let agree = b == fast;
            (Some(family_names(&mdp, &b)), Some(agree))
        }
        Err(mdpsync::Error::OracleScope { .. }) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let doc = serde_json::json!({
        "relation": family_names(&mdp, &fast),
        "bruteforce": brute,
        "agree": agree,
    });
    emit(
        None,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializes")
        ),
    )?;
    Ok(if agree == Some(false) { 1 } else { 0 })
}

fn cmd_syncword(file: &Path) -> CliResult<u8> {
    let mdp = load(file)?;
    match shortest_sync_word(&mdp)? {
        Some(word) => {
            let names: Vec<&str> = word.iter().map(|a| mdp.action_name(*a)).collect();
            println!("length {}: {}", word.len(), names.join(" "));
            Ok(0)
        }
        None => {
            println!("none");
            Ok(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Decide(args) => cmd_decide(&args),
        Command::Synthesize {
            decide,
            strategy_out,
        } => cmd_synthesize(&decide, strategy_out.as_deref()),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Oracle(OracleCommand::Delta { file, cycle }) => cmd_oracle_delta(&file, &cycle),
        Command::Gen(GenCommand::Cerny { n }) => {
            emit(None, &mdp_to_json(&gen_cerny(n)?))?;
            Ok(0)
        }
        Command::Gen(GenCommand::Random {
            states,
            actions,
            branching,
            seed,
        }) => {
            emit(
                None,
                &mdp_to_json(&gen_random(states, actions, branching, seed)?),
            )?;
            Ok(0)
        }
        Command::Syncword { file } => cmd_syncword(&file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(0.5, 12), "0.5");
        assert_eq!(significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(significant(0.99999999999999, 12), "1");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
