use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use strux_core::adapters::{run_bench, scan_corpus};
use strux_core::escapes::{compress_runs, expand_escapes};
use strux_core::indent::{decode_indent, encode_indent, IndentConfig};
use strux_core::transforms::{pipeline, pipeline_inverse};
use strux_core::{dialect, tokenize, Dialect, Error, OpSet, Profile, Style};

const DIALECT_PATH_VAR: &str = "STRUX_DIALECT_PATH";

#[derive(Parser)]
#[command(name = "strux", version, about = "Transcode bracket notations, quantity escapes and indentation controls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Collapse the input with the enabled rewrites.
    Transform(TransformArgs),
    /// Undo `transform` run with the same flags.
    Restore(TransformArgs),
    /// Print token counts and nesting statistics.
    Stats(StatsArgs),
    /// Transform and report sizes, optionally through external compressors.
    Bench(BenchArgs),
    /// Convert between space indentation and control bytes.
    Indent {
        #[command(subcommand)]
        action: IndentAction,
    },
    /// Expand or create quantity escapes.
    Escape {
        #[command(subcommand)]
        action: EscapeAction,
    },
    /// Inspect dialects.
    Dialect {
        #[command(subcommand)]
        action: DialectAction,
    },
}

#[derive(Args)]
struct DialectArg {
    /// Built-in name, a NAME.dialect file in $STRUX_DIALECT_PATH, or a path.
    #[arg(long, default_value = "default")]
    dialect: String,
}

#[derive(Args)]
struct IoArgs {
    /// Input file; standard input when absent.
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Table,
    Prose,
}

#[derive(Args)]
struct ProfileArgs {
    /// Comma-separated rewrites: sep, colon, opening, ucb (or `both`, `none`).
    #[arg(long, default_value = "sep,colon")]
    ops: String,
    #[arg(long, value_enum, default_value_t = StyleArg::Table)]
    style: StyleArg,
    /// Deepest separator written by the separator rewrite.
    #[arg(long, default_value_t = 1)]
    fold_depth: u32,
    /// Only childless last children become colons or open marks.
    #[arg(long)]
    terminal_only: bool,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    dialect: DialectArg,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    dialect: DialectArg,
    /// Files to scan in parallel; standard input when none are given.
    paths: Vec<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    dialect: DialectArg,
    #[command(flatten)]
    profile: ProfileArgs,
    /// Filter program measured on both texts, e.g. `gzip -9`. Repeatable.
    #[arg(long = "compress-cmd")]
    compress_cmd: Vec<String>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IndentArgs {
    /// Spaces per indentation level.
    #[arg(long, default_value_t = 4)]
    unit: usize,
    /// Reject indentation that is not a whole number of units, and tabs.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Subcommand)]
enum IndentAction {
    Encode(IndentArgs),
    Decode(IndentArgs),
}

#[derive(Subcommand)]
enum EscapeAction {
    Expand(IoArgs),
    Compress {
        /// Shortest run replaced by an escape.
        #[arg(long, default_value_t = 4)]
        min_run: usize,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum DialectAction {
    /// Built-in dialect names.
    List,
    /// Print a dialect in the config file format.
    Show {
        #[arg(default_value = "default")]
        name: String,
    },
}

/// Exit status 2 is a usage problem, 1 is bad input.
enum Failure {
    Usage(String),
    Input(String),
}

impl Failure {
    fn from_core(err: Error, source: Option<&Path>) -> Self {
        let msg = match source {
            Some(p) => format!("{}: {err}", p.display()),
            None => err.to_string(),
        };
        match err {
            Error::Profile(_) | Error::Dialect(_) => Failure::Usage(msg),
            _ => Failure::Input(msg),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, Failure> {
    match path {
        Some(p) => std::fs::read(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> CmdResult {
    let result = match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|()| out.flush())
        }
    };
    result.map_err(|e| Failure::Input(format!("writing output: {e}")))
}

fn load_dialect(arg: &DialectArg) -> Result<Dialect, Failure> {
    let dir = std::env::var_os(DIALECT_PATH_VAR).map(PathBuf::from);
    Dialect::resolve(&arg.dialect, dir.as_deref()).map_err(|e| Failure::Usage(format!("dialect `{}`: {e}", arg.dialect)))
}

fn build_profile(args: &ProfileArgs) -> Result<Profile, Failure> {
    let enabled: OpSet = args.ops.parse().map_err(|e: strux_core::ProfileError| Failure::Usage(e.to_string()))?;
    let profile = Profile {
        style: match args.style {
            StyleArg::Table => Style::Table,
            StyleArg::Prose => Style::Prose,
        },
        enabled,
        fold_depth: args.fold_depth,
        colon_only_terminal: args.terminal_only,
    };
    profile.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(profile)
}

fn cmd_transform(args: &TransformArgs, restore: bool) -> CmdResult {
    let dialect = load_dialect(&args.dialect)?;
    let profile = build_profile(&args.profile)?;
    let input = read_input(args.io.input.as_deref())?;
    let source = args.io.input.as_deref();
    let stream = tokenize(&input, &dialect).map_err(|e| Failure::from_core(e.into(), source))?;
    let out = if restore {
        pipeline_inverse(&stream, &profile)
    } else {
        pipeline(&stream, &profile)
    }
    .map_err(|e| Failure::from_core(e, source))?;
    write_output(args.io.out.as_deref(), &out.render())
}

fn cmd_stats(args: &StatsArgs) -> CmdResult {
    let dialect = load_dialect(&args.dialect)?;
    let mut text = String::new();
    if args.paths.is_empty() {
        let input = read_input(None)?;
        let stream = tokenize(&input, &dialect).map_err(|e| Failure::from_core(e.into(), None))?;
        text.push_str(&strux_core::stats(&stream).to_key_value());
    } else {
        let scan = scan_corpus(&args.paths, &dialect);
        for entry in &scan.entries {
            text.push_str(&format!("# {}\n", entry.path.display()));
            match &entry.stats {
                Ok(report) => text.push_str(&report.to_key_value()),
                Err(e) => text.push_str(&format!("error={e}\n")),
            }
        }
        if scan.entries.len() > 1 {
            text.push_str("# max depth histogram\n");
            for (depth, files) in &scan.max_depth_histogram {
                text.push_str(&format!("depth.{depth}={files}\n"));
            }
        }
        let first_failure = scan
            .failures()
            .next()
            .map(|bad| format!("{}: {}", bad.path.display(), bad.stats.as_ref().err().cloned().unwrap_or_default()));
        if let Some(msg) = first_failure {
            write_output(args.out.as_deref(), text.as_bytes())?;
            return Err(Failure::Input(msg));
        }
    }
    write_output(args.out.as_deref(), text.as_bytes())
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let dialect = load_dialect(&args.dialect)?;
    let profile = build_profile(&args.profile)?;
    let input = read_input(args.io.input.as_deref())?;
    let (_, report) = run_bench(&input, &dialect, &profile, &args.compress_cmd)
        .map_err(|e| Failure::from_core(e, args.io.input.as_deref()))?;
    for c in &report.compressed {
        if let Err(e) = c.before.as_ref().and(c.after.as_ref()) {
            eprintln!("strux: warning: compressor `{}` unavailable: {e}", c.command);
        }
    }
    let text = format!("{}\n{}", report.to_text(), report.to_key_value());
    write_output(args.io.out.as_deref(), text.as_bytes())
}

fn cmd_indent(action: &IndentAction) -> CmdResult {
    let (args, encode) = match action {
        IndentAction::Encode(a) => (a, true),
        IndentAction::Decode(a) => (a, false),
    };
    let cfg = IndentConfig {
        strict: args.strict,
        ..IndentConfig::with_unit(args.unit)
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let input = read_input(args.io.input.as_deref())?;
    let out = if encode {
        encode_indent(&input, &cfg)
    } else {
        decode_indent(&input, &cfg)
    }
    .map_err(|e| Failure::from_core(e.into(), args.io.input.as_deref()))?;
    write_output(args.io.out.as_deref(), &out)
}

fn cmd_escape(action: &EscapeAction) -> CmdResult {
    match action {
        EscapeAction::Expand(io) => {
            let input = read_input(io.input.as_deref())?;
            let out = expand_escapes(&input).map_err(|e| Failure::from_core(e.into(), io.input.as_deref()))?;
            write_output(io.out.as_deref(), &out)
        }
        EscapeAction::Compress { min_run, io } => {
            if *min_run < 2 {
                return Err(Failure::Usage("--min-run must be at least 2".into()));
            }
            let input = read_input(io.input.as_deref())?;
            write_output(io.out.as_deref(), &compress_runs(&input, *min_run))
        }
    }
}

fn cmd_dialect(action: &DialectAction) -> CmdResult {
    match action {
        DialectAction::List => {
            let names: String = dialect::BUILTIN_NAMES.iter().map(|n| format!("{n}\n")).collect();
            write_output(None, names.as_bytes())
        }
        DialectAction::Show { name } => {
            let d = load_dialect(&DialectArg { dialect: name.clone() })?;
            write_output(None, d.to_config().as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Transform(a) => cmd_transform(a, false),
        Command::Restore(a) => cmd_transform(a, true),
        Command::Stats(a) => cmd_stats(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Indent { action } => cmd_indent(action),
        Command::Escape { action } => cmd_escape(action),
        Command::Dialect { action } => cmd_dialect(action),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("strux: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("strux: {msg}");
            ExitCode::from(2)
        }
    }
}
