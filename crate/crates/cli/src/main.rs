mod args;
mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::Outcome;

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Check(a) => commands::check(cli, a),
        Command::Diameter(a) => commands::diameter(a),
        Command::Lattice(a) => commands::lattice(a),
        Command::Lift(a) => commands::lift(a),
        Command::Generate(a) => commands::generate(cli, a),
        Command::Gamma(a) => commands::gamma_cmd(a),
        Command::Beta(a) => commands::beta_cmd(a),
        Command::Certify(a) => commands::certify(cli, a),
    }
}

fn render(cli: &Cli, out: &Outcome) -> anyhow::Result<String> {
    match cli.format {
        Format::Json => render::json_text(&out.value),
        Format::Table => Ok(render::table_text(&out.value)),
        Format::Csv => out.csv.clone().ok_or_else(|| anyhow::anyhow!("csv output is only available for gamma and beta")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| render(&cli, &out).map(|text| (text, out.ok)));
    match result {
        Ok((text, ok)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let verification = e
                .downcast_ref::<helly_core::Error>()
                .is_some_and(|c| matches!(c, helly_core::Error::Verification(_)));
            ExitCode::from(if verification { EXIT_VERIFICATION } else { EXIT_USAGE })
        }
    }
}
