use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use minproj::cli::{
    emit_schema, execute, parse_ref, read_json_arg, Command, GroupRef, JobSpec, MeasureSpec,
    OutputFormat, OutputSpec, SpaceRef, SubspaceRef, EXIT_INPUT,
};
use minproj::serde_support::OperatorData;
use minproj::Result;

#[derive(Parser)]
#[command(
    name = "minproj",
    version,
    about = "Minimal projections by group averaging"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Average a projection over the group and report the result.
    Construct(JobArgs),
    /// Evaluate measures of an operator.
    Measure(JobArgs),
    /// Certify minimality of the averaged projection.
    Certify(JobArgs),
    /// Check the isometry and invariance hypotheses.
    Validate(JobArgs),
    /// Built-in worked examples.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Print a JSON schema: space, operator, group or job.
    Schema { which: String },
    /// Run a job file.
    Job {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List {
        #[command(flatten)]
        output: OutputArgs,
    },
    Run {
        name: String,
        /// Parameters as inline JSON or a file path.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl OutputArgs {
    fn spec(&self) -> OutputSpec {
        OutputSpec {
            path: self.out.clone(),
            format: self.format.into(),
        }
    }
}

/// Values are inline JSON, a catalog example name, or a path to a JSON file.
#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    subspace: Option<String>,
    #[arg(long)]
    group: Option<String>,
    /// Operator to measure, or starting projection for `construct`.
    #[arg(long)]
    operator: Option<String>,
    /// Comma-separated: op_norm, num_radius, w_seminorm, schatten:<p>.
    #[arg(long)]
    measures: Option<String>,
    /// Parameters for catalog examples named by the other flags.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

impl JobArgs {
    fn job(&self, command: Command) -> Result<JobSpec> {
        let mut job = JobSpec::new(command);
        job.space = self
            .space
            .as_deref()
            .map(|s| parse_ref(s, SpaceRef::Builtin))
            .transpose()?;
        job.subspace = self
            .subspace
            .as_deref()
            .map(|s| parse_ref(s, SubspaceRef::Builtin))
            .transpose()?;
        job.group = self
            .group
            .as_deref()
            .map(|s| parse_ref(s, GroupRef::Catalog))
            .transpose()?;
        job.operator = self
            .operator
            .as_deref()
            .map(|s| Ok::<OperatorData, minproj::Error>(serde_json::from_value(read_json_arg(s)?)?))
            .transpose()?;
        job.measures = match &self.measures {
            Some(m) => MeasureSpec::parse_list(m)?,
            None => Vec::new(),
        };
        job.params = self.params.as_deref().map(read_json_arg).transpose()?;
        job.trials = self.trials;
        job.seed = self.seed;
        job.output = self.output.spec();
        Ok(job)
    }
}

fn build(cmd: Cmd) -> Result<Option<JobSpec>> {
    Ok(Some(match cmd {
        Cmd::Construct(a) => a.job(Command::Construct)?,
        Cmd::Measure(a) => a.job(Command::Measure)?,
        Cmd::Certify(a) => a.job(Command::Certify)?,
        Cmd::Validate(a) => a.job(Command::Validate)?,
        Cmd::Catalog { action } => match action {
            CatalogCmd::List { output } => {
                let mut job = JobSpec::new(Command::Catalog);
                job.seed = Some(0);
                job.output = output.spec();
                job
            }
            CatalogCmd::Run {
                name,
                params,
                trials,
                seed,
                output,
            } => {
                let mut job = JobSpec::new(Command::Catalog);
                let params: Option<Value> = params.as_deref().map(read_json_arg).transpose()?;
                // A seed inside the params counts as the job seed.
                job.seed = seed.or_else(|| {
                    params
                        .as_ref()
                        .and_then(|p| p.get("seed"))
                        .and_then(Value::as_u64)
                });
                job.trials = trials;
                job.params = params;
                job.example = Some(name);
                job.output = output.spec();
                job
            }
        },
        Cmd::Schema { which } => {
            print!("{}", emit_schema(&which)?);
            return Ok(None);
        }
        Cmd::Job { file, out, format } => {
            let text = std::fs::read_to_string(&file).map_err(|e| {
                minproj::Error::InvalidParameter(format!("cannot read '{}': {e}", file.display()))
            })?;
            let mut job = JobSpec::from_json(&text)?;
            if out.is_some() {
                job.output.path = out;
            }
            if let Some(f) = format {
                job.output.format = f.into();
            }
            job
        }
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let code = match build(cli.command) {
        Ok(Some(job)) => execute(&job),
        Ok(None) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code as u8)
}
