//! `tspn` command-line front end. JSON results go to stdout, diagnostics to
//! stderr. Exit codes: 0 success, 1 usage error, 2 check or certification failed.

mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Output;
use io::{usage, Failure};

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve(_) => "solve",
        Command::Transform(_) => "transform",
        Command::Check(_) => "check",
        Command::Certify(_) => "certify",
        Command::Render(_) => "render",
        Command::Gen(_) => "gen",
    }
}

fn dispatch(cli: &Cli, threads: usize) -> Result<Output, Failure> {
    if cli.svg && cli.out_dir.is_none() {
        return Err(usage("--svg needs --out-dir"));
    }
    match &cli.command {
        Command::Solve(a) => commands::solve(a, threads),
        Command::Transform(a) => commands::transform(a, threads),
        Command::Check(a) => commands::check(a),
        Command::Certify(a) => commands::certify_claim(a),
        Command::Render(a) => {
            if a.output.is_none() && cli.out_dir.is_none() {
                return Err(usage("render needs --output or --out-dir"));
            }
            commands::render(a)
        }
        Command::Gen(a) => commands::gen(a),
    }
}

fn emit(cli: &Cli, config: &serde_json::Value, out: &Output) -> Result<(), Failure> {
    let body = io::envelope(config, &out.result);
    print!("{body}");
    if let Some(dir) = &cli.out_dir {
        io::write_file(dir, "result.json", &body)?;
        for (name, text) in &out.files {
            io::write_file(dir, name, text)?;
        }
        if cli.svg {
            if let Some(scene) = &out.scene {
                let svg = tspn::instance::render_svg_string(scene);
                io::write_file(dir, &format!("{}.svg", command_name(&cli.command)), &svg)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let threads = cli.threads.filter(|&n| n > 0).unwrap_or_else(tspn::solvers::default_threads);
    let mut config = serde_json::to_value(&cli).expect("arguments serialise");
    config["threads"] = threads.into();

    let outcome = dispatch(&cli, threads).and_then(|out| emit(&cli, &config, &out));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Failure::Rejected { result: Some(result), .. } = &f {
                let body = io::envelope(&config, result);
                print!("{body}");
                if let Some(dir) = &cli.out_dir {
                    let _ = io::write_file(dir, "result.json", &body);
                }
            }
            eprintln!("tspn: {f}");
            ExitCode::from(f.code() as u8)
        }
    }
}
