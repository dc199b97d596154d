use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mimosa::codegen::{parse_model, DeploymentModel};
use mimosa::pipeline::{self, parse_duration};
use mimosa::simulator::parse_stimulus;
use mimosa::Diagnostic;

#[derive(Parser)]
#[command(name = "mimosac", version, about = "Mimosa compiler and simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and run all static checks.
    Check {
        file: PathBuf,
        /// Also check the network against this deployment model.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Generate a C project.
    Compile {
        file: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Run the reference simulator and print the trace.
    Sim {
        file: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        stimuli: Option<PathBuf>,
        /// Horizon, e.g. `600ms` or `2s`.
        #[arg(long, value_parser = duration)]
        until: u64,
    },
    /// Print an intermediate representation.
    DumpIr {
        file: PathBuf,
        #[arg(long, value_enum)]
        phase: IrPhase,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IrPhase {
    Normir,
    Ooir,
}

fn duration(s: &str) -> Result<u64, String> {
    parse_duration(s).ok_or_else(|| format!("'{}' is not a duration like 600ms or 1s", s))
}

enum Failure {
    Usage(String),
    Diagnostics(Vec<String>),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))
}

fn rendered(diags: Vec<Diagnostic>, path: &Path) -> Failure {
    let file = path.display().to_string();
    Failure::Diagnostics(diags.iter().map(|d| d.render(&file)).collect())
}

fn load_model(path: &Path) -> Result<DeploymentModel, Failure> {
    parse_model(&read(path)?).map_err(|e| rendered(vec![e.into()], path))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Check { file, model } => {
            let source = read(&file)?;
            let model = model.as_deref().map(load_model).transpose()?;
            pipeline::check(&source, model.as_ref()).map_err(|d| rendered(d, &file))?;
        }
        Command::Compile { file, model, output } => {
            let source = read(&file)?;
            let model = load_model(&model)?;
            let compiled = pipeline::compile(&source, Some(&model)).map_err(|d| rendered(d, &file))?;
            compiled
                .codegen(&model)
                .write_to(&output)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {}", output.display(), e)))?;
        }
        Command::Sim { file, model, stimuli, until } => {
            let source = read(&file)?;
            let model = load_model(&model)?;
            let stimulus = match &stimuli {
                Some(path) => parse_stimulus(&read(path)?).map_err(|e| rendered(vec![e.into()], path))?,
                None => Default::default(),
            };
            let compiled = pipeline::compile(&source, Some(&model)).map_err(|d| rendered(d, &file))?;
            let trace = compiled.simulate(&model, &stimulus, until).map_err(|d| {
                let blame = stimuli.clone().unwrap_or_else(|| file.clone());
                rendered(vec![d], &blame)
            })?;
            print!("{}", trace.to_text());
        }
        Command::DumpIr { file, phase } => {
            let source = read(&file)?;
            let compiled = pipeline::compile(&source, None).map_err(|d| rendered(d, &file))?;
            match phase {
                IrPhase::Normir => print!("{}", compiled.dump_normir()),
                IrPhase::Ooir => print!("{}", compiled.dump_ooir()),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("mimosac: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Diagnostics(lines)) => {
            for l in lines {
                eprintln!("{}", l);
            }
            ExitCode::from(1)
        }
    }
}
