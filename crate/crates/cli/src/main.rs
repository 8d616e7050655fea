use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use pdboundary_cli::{run, Args, CliError, Context};

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn write_sidecar(output: &Path, args: &Args, started: f64, code: i32) -> std::io::Result<()> {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    let meta = serde_json::json!({
        "subcommand": args.subcommand.name(),
        "input": args.input.display().to_string(),
        "seed_override": args.seed,
        "tol_scale": args.tol,
        "started_unix": started,
        "finished_unix": unix_now(),
        "exit_code": code,
        "version": env!("CARGO_PKG_VERSION"),
    });
    fs::write(name, serde_json::to_string_pretty(&meta)? + "\n")
}

fn main() -> ExitCode {
    // clap's own usage-error status is 2, which is reserved for failed
    // certificates here.
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let started = unix_now();
    let ctx = Context {
        seed: args.seed,
        tol_scale: args.tol,
    };
    let result = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.input.display())))
        .and_then(|text| run(args.subcommand, &text, ctx));

    let code = match result {
        Ok(outcome) => {
            let text = outcome.artifact.render();
            let written = match &args.output {
                Some(path) => fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match (written, outcome.failure) {
                (Err(e), _) => {
                    eprintln!("error: cannot write artifact: {e}");
                    1
                }
                (Ok(()), Some(reason)) => {
                    eprintln!("failed: {reason}");
                    2
                }
                (Ok(()), None) => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    if let Some(path) = &args.output {
        if let Err(e) = write_sidecar(path, &args, started, code) {
            eprintln!("warning: cannot write metadata sidecar: {e}");
        }
    }
    ExitCode::from(code as u8)
}
