use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use glfq_cli::{dump, run, verify_table_file, CliError, Format, InvolutionChoice, RunConfig, Suite};

#[derive(Parser)]
#[command(name = "glfq", version, about = "Exact checks on GL_n over small finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print a report.
    Run {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated suites.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        suite: Vec<Suite>,
        /// Total degree for the Hopf algebra checks.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Also write the report to this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write the character table, class table and distinction report.
    Dump {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check orthogonality of a dumped character table.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        /// Character table CSV.
        file: PathBuf,
    },
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    n: usize,
    /// Odd prime power.
    #[arg(long)]
    q: u64,
    /// Matrix entries live in F_{q^m}.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// `catalogue`, `catalogue:<index>`, or a JSON file of `{"kind", "matrix"}`.
    #[arg(long, default_value = "catalogue")]
    involution: InvolutionChoice,
    /// Largest group that may be enumerated.
    #[arg(long, default_value_t = glfq::mat::DEFAULT_ENUMERATION_BOUND)]
    bound: u64,
}

impl GroupArgs {
    fn config(self, suites: Vec<Suite>, max_degree: Option<usize>) -> RunConfig {
        RunConfig {
            involution: self.involution,
            max_degree,
            bound: self.bound,
            ..RunConfig::new(self.n, self.q, self.m, suites)
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { group, suite, max_degree, out, format } => {
            let report = run(&group.config(suite, max_degree))?;
            let body = report.render(format);
            print!("{body}");
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
                let ext = match format {
                    Format::Json => "json",
                    Format::Csv => "csv",
                    Format::Text => "txt",
                };
                let path = dir.join(format!("report.{ext}"));
                std::fs::write(&path, body).map_err(|source| CliError::Io { path, source })?;
            }
            Ok(report.exit_code())
        }
        Command::Dump { group, out } => {
            for path in dump(&group.config(vec![Suite::TheoremA], None), &out)? {
                println!("{}", path.display());
            }
            Ok(0)
        }
        Command::Verify { group, file } => {
            let table = verify_table_file(&group.config(vec![Suite::TheoremA], None), &file)?;
            println!("{}: {} irreducibles, orthogonality verified", file.display(), table.len());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let code = match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
