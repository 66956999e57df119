//! Argument parsing, configuration resolution and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, CommandFactory, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::commands::{self, Context};
use crate::config::{resolve, ConfigFile};
use crate::error::CliError;

pub const COMMANDS: [&str; 8] =
    ["ingest", "analyze", "train-text-clf", "train-image-probe", "listen", "rerank", "eval", "report"];

#[derive(Debug, Parser)]
#[command(name = "aec", version, about = "Affective explanation captioning toolkit", propagate_version = true)]
pub struct Cli {
    /// TOML config file; flags override `[command]` tables, which override top-level keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Silence progress messages.
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    pub quiet: bool,
    /// Print a machine-readable description of every command and flag.
    #[arg(long)]
    pub help_json: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    Ingest(commands::ingest::IngestArgs),
    Analyze(commands::analyze::AnalyzeArgs),
    TrainTextClf(commands::train_text_clf::TrainTextClfArgs),
    TrainImageProbe(commands::train_image_probe::TrainImageProbeArgs),
    Listen(commands::listen::ListenArgs),
    Rerank(commands::rerank::RerankArgs),
    Eval(commands::eval::EvalArgs),
    Report(commands::report::ReportArgs),
}

/// Machine-readable description of the command-line surface.
pub fn help_json() -> Value {
    fn args(cmd: &clap::Command) -> Vec<Value> {
        cmd.get_arguments()
            .filter(|a| a.get_id() != "help" && a.get_id() != "version")
            .map(|a| {
                let takes_value = a.get_action().takes_values();
                json!({
                    "name": a.get_id().as_str(),
                    "long": a.get_long(),
                    "help": a.get_help().map(|h| h.to_string()),
                    "required": a.is_required_set(),
                    "takes_value": takes_value,
                    "multiple": takes_value && a.get_num_args().is_some_and(|n| n.max_values() > 1),
                    "global": a.is_global_set(),
                    "possible_values": a.get_possible_values().iter().map(|v| v.get_name().to_string()).collect::<Vec<_>>(),
                })
            })
            .collect()
    }
    let root = Cli::command();
    json!({
        "name": root.get_name(),
        "version": crate::header::TOOL_VERSION,
        "about": root.get_about().map(|h| h.to_string()),
        "exit_codes": {"0": "success", "1": "usage error", "2": "data error"},
        "global_args": args(&root),
        "commands": root.get_subcommands().map(|c| json!({
            "name": c.get_name(),
            "about": c.get_about().map(|h| h.to_string()),
            "args": args(c),
        })).collect::<Vec<_>>(),
    })
}

fn dispatch(
    command: Command,
    file: Option<&ConfigFile>,
    global: &Map<String, Value>,
    ctx: &Context,
) -> Result<(), CliError> {
    use commands::*;
    match command {
        Command::Ingest(a) => ingest::run(&resolve("ingest", file, global, &a)?, ctx),
        Command::Analyze(a) => analyze::run(&resolve("analyze", file, global, &a)?, ctx),
        Command::TrainTextClf(a) => train_text_clf::run(&resolve("train-text-clf", file, global, &a)?, ctx),
        Command::TrainImageProbe(a) => train_image_probe::run(&resolve("train-image-probe", file, global, &a)?, ctx),
        Command::Listen(a) => listen::run(&resolve("listen", file, global, &a)?, ctx),
        Command::Rerank(a) => rerank::run(&resolve("rerank", file, global, &a)?, ctx),
        Command::Eval(a) => eval::run(&resolve("eval", file, global, &a)?, ctx),
        Command::Report(a) => report::run(&resolve("report", file, global, &a)?, ctx),
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if cli.help_json {
        println!("{}", serde_json::to_string_pretty(&help_json()).expect("help serializes"));
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(CliError::usage(format!("expected a command: {}", COMMANDS.join(", "))));
    };
    let file = cli.config.as_deref().map(ConfigFile::load).transpose()?;
    let mut global = Map::new();
    if let Some(seed) = cli.seed {
        global.insert("seed".into(), seed.into());
    }
    let ctx = Context { quiet: cli.quiet };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(command, file.as_ref(), &global, &ctx))
}

/// Run the tool on `argv` (program name first) and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("aec: {e}");
            e.exit_code()
        }
    }
}
