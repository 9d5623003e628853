use std::path::PathBuf;
use std::process::ExitCode;

use charcomplex_cli::{parse_analyses, run, Analysis, Format, RunConfig, RunError, SourceSpec};
use clap::{ArgGroup, Parser};

/// Character complexes and group-algebra derivations of finite groups and
/// presented groupoids.
#[derive(Debug, Parser)]
#[command(name = "charcomplex", version)]
#[command(group(ArgGroup::new("source").required(true).args(["group", "presentation"])))]
struct Cli {
    /// Group name (C4, D4, S3, A4, Q8, ...) or path to a JSON group descriptor.
    #[arg(long)]
    group: Option<String>,

    /// Path to a JSON presentation descriptor.
    #[arg(long)]
    presentation: Option<PathBuf>,

    /// Comma-separated: complex, exactness, derivations, bracket-table, ideal, iso, lift.
    #[arg(long, default_value = "complex,exactness")]
    analyses: String,

    #[arg(long, default_value = "json", value_parser = ["json", "csv", "text"])]
    format: String,

    /// Include character and derivation bases in the report.
    #[arg(long)]
    emit_bases: bool,

    /// Cap on generated constraint rows.
    #[arg(long, default_value_t = 5_000_000)]
    max_rows: u128,

    /// Cap on the order of generated groups.
    #[arg(long, default_value_t = charcomplex::group::DEFAULT_ORDER_CAP)]
    max_order: usize,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(cli: Cli) -> Result<RunConfig, RunError> {
    let source = match (&cli.group, &cli.presentation) {
        (Some(g), None) => SourceSpec::group_arg(g)?,
        (None, Some(p)) => SourceSpec::presentation_path(p)?,
        _ => unreachable!("clap enforces exactly one source"),
    };
    let analyses = parse_analyses(&cli.analyses).map_err(RunError::Input)?;
    let format: Format = cli.format.parse().map_err(RunError::Input)?;
    let mut config = RunConfig::new(source, analyses.into_iter().collect::<Vec<Analysis>>());
    config.format = format;
    config.emit_bases = cli.emit_bases;
    config.max_rows = cli.max_rows;
    config.max_order = cli.max_order;
    config.out = cli.out;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = config(cli).and_then(|config| {
        let report = run(&config)?;
        let text = report.render(config.format);
        match &config.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| RunError::Input(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(report.exit_code())
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let payload = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.message() }
            });
            eprintln!("{payload}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
