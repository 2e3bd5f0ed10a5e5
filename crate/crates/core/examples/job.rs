//! Builds and runs a batch job in-process, printing the JSON report.

use minproj::cli::{
    run_job, Command, GroupRef, JobSpec, MeasureSpec, OutputFormat, SpaceRef, SubspaceRef,
};

fn main() -> minproj::Result<()> {
    let mut job = JobSpec::new(Command::Certify);
    job.space = Some(SpaceRef::Builtin("row_col_means".into()));
    job.subspace = Some(SubspaceRef::Builtin("row_col_means".into()));
    job.group = Some(GroupRef::Catalog("row_col_means".into()));
    job.measures = MeasureSpec::parse_list("op_norm,schatten:1")?;
    job.trials = Some(3);
    job.seed = Some(42);
    let outcome = run_job(&job)?;
    println!("exit code {}", outcome.exit_code);
    println!("{}", outcome.render(OutputFormat::Csv)?);
    Ok(())
}
