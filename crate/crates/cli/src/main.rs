use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sectional_cli::build::{canonical, run_construction};
use sectional_cli::materialize::Resolver;
use sectional_cli::workspace::TaskKind;
use sectional_cli::{load, run, RunOptions, Selection, Source};
use sectional_core::Error;

#[derive(Parser)]
#[command(
    name = "sectional",
    version,
    about = "Validate finite semigroupoid structures and certify the isomorphisms between their algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Tensor,
    Crossed,
    Smash,
    Quotient,
    Germ,
    Associativity,
    All,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Leave the timestamp and wall times out of the report.
    #[arg(long)]
    no_timestamp: bool,
    /// Replace every file's ring: z, q or zmod:N.
    #[arg(long)]
    ring: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every structure in each file.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Run a build task, or re-emit a structure in canonical form.
    Build {
        name: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Run the verify tasks for one theorem, or every task with `all`.
    Verify {
        #[arg(value_enum)]
        theorem: Theorem,
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run independent tasks concurrently; the report order is unchanged.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn read(paths: &[PathBuf]) -> Vec<Source> {
    paths
        .iter()
        .map(|p| Source { path: p.display().to_string(), text: std::fs::read_to_string(p).map_err(|e| e.to_string()) })
        .collect()
}

fn emit(command: &str, files: &[PathBuf], output: &Output, opts: RunOptions) -> ExitCode {
    let report =
        run(command, &read(files), &RunOptions { ring: output.ring.clone(), timestamp: !output.no_timestamp, ..opts });
    match output.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code as u8)
}

fn build(name: &str, input: &PathBuf, out: &PathBuf, ring: Option<&str>) -> ExitCode {
    let fail = |code: u8, msg: String| {
        eprintln!("sectional build: {msg}");
        ExitCode::from(code)
    };
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => return fail(2, format!("{}: {e}", input.display())),
    };
    let (ws, ring) = match load(&text, ring) {
        Ok(x) => x,
        Err(e) => return fail(2, format!("{}: {e}", input.display())),
    };
    let r = Resolver::new(&ws, ring);
    let task = (0..ws.tasks.len()).find(|&i| ws.tasks[i].kind == TaskKind::Build && ws.task_name(i) == name);
    let built = match task {
        Some(i) => run_construction(&r, &ws, i),
        None if ws.kind_of(name).is_some() => canonical(&r, &ws, name),
        None => return fail(2, format!("no build task or structure named {name:?} in {}", input.display())),
    };
    match built {
        Ok(doc) => {
            let mut json = serde_json::to_string_pretty(&doc).expect("documents serialize");
            json.push('\n');
            match std::fs::write(out, json) {
                Ok(()) => {
                    println!("wrote {} to {}", name, out.display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(2, format!("{}: {e}", out.display())),
            }
        }
        Err(e) => fail(if matches!(e.root(), Error::Structural(_)) { 2 } else { 1 }, e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { files, output } => {
            let opts = RunOptions { selection: Selection::ValidateEverything, ..RunOptions::default() };
            emit("validate", &files, &output, opts)
        }
        Command::Build { name, input, out, ring } => build(&name, &input, &out, ring.as_deref()),
        Command::Verify { theorem, input, seed, parallel, output } => {
            let name = theorem.to_possible_value().expect("no skipped variants").get_name().to_string();
            let selection = match theorem {
                Theorem::All => Selection::All,
                _ => Selection::Theorem(name.clone()),
            };
            emit(
                &format!("verify {name}"),
                &input,
                &output,
                RunOptions { selection, seed, parallel, ..RunOptions::default() },
            )
        }
    }
}
