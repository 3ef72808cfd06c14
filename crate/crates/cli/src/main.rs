mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::{certificate, Doc, Outcome};

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn render(doc: &Doc) -> String {
    match doc {
        Doc::Json(v) => format!("{}\n", serde_json::to_string_pretty(v).expect("values serialize")),
        Doc::Text(s) => s.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(Outcome { doc, negative }) => {
            if let Err(e) = emit(&cli, &render(&doc)) {
                eprintln!("arbor: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(u8::from(negative))
        }
        Err(e) => match certificate(&e) {
            Some(c) => {
                let _ = emit(&cli, &render(&Doc::Json(c)));
                ExitCode::from(1)
            }
            None => {
                eprintln!("arbor: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
