#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig, RTOL_ENV};
use error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    let result =
        RunConfig::resolve(kind, args, std::env::var(RTOL_ENV).ok()).and_then(|mut config| {
            let rendered = commands::run(&mut config);
            let out = config.output_path.clone();
            match rendered {
                Ok(r) => emit(out.as_deref(), &r),
                // A failed selfcheck still delivers its report.
                Err(CliError::ChecksFailed(report)) => {
                    emit(
                        out.as_deref(),
                        &commands::Rendered {
                            main: report.clone(),
                            extra: Vec::new(),
                        },
                    )?;
                    Err(CliError::ChecksFailed(report))
                }
                Err(e) => Err(e),
            }
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::ChecksFailed(_)) {
                println!("{}", e.to_json());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Writes to `--out` or stdout. Side files go next to `--out` as
/// `<stem>_<suffix>.<ext>` and are dropped when printing to stdout.
fn emit(out: Option<&Path>, rendered: &commands::Rendered) -> Result<(), CliError> {
    let Some(path) = out else {
        print!("{}", rendered.main);
        return Ok(());
    };
    write(path, &rendered.main)?;
    for (suffix, text) in &rendered.extra {
        write(&side_path(path, suffix), text)?;
    }
    Ok(())
}

fn side_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
