mod commands;
mod config;
mod output;
mod verify;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::commands::Outcome;
use crate::config::{validate, Cli, Command, RunConfig};

/// Text output of every command except `verify` and `figures`.
pub fn render(cfg: &RunConfig) -> Outcome {
    match cfg.command {
        Command::Classify => commands::classify_cmd(cfg),
        Command::Geodesic => commands::geodesic_cmd(cfg),
        Command::Flow => commands::flow_cmd(cfg),
        Command::Actions => commands::actions_cmd(cfg),
        Command::Spectrum => commands::spectrum_cmd(cfg),
        Command::Verify | Command::Figures => unreachable!("handled in run"),
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// 0 on success, 1 when a verify check fails, 2 on bad input.
fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let cfg = match validate(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let result = match cfg.command {
        Command::Verify => {
            let checks = verify::run_suite(cfg.suite, cfg.tol, cfg.seed);
            let mut report = String::new();
            for c in &checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                report.push_str(&format!("{tag} [{}] {}: {}\n", c.module, c.name, c.detail));
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            report.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
            if let Err(msg) = write_out(&cfg.out, &report) {
                eprintln!("error: {msg}");
                return 2;
            }
            return u8::from(failed > 0);
        }
        Command::Figures => commands::figure_set(cfg.points).map_err(|e| e.to_string()).and_then(|figs| {
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
            for (name, text) in figs {
                let p = dir.join(name);
                fs::write(&p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }),
        _ => render(&cfg).map_err(|e| e.to_string()).and_then(|text| write_out(&cfg.out, &text)),
    };
    match result {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
