use std::process::ExitCode;

use clap::Parser;
use latkit::commands::{execute, Cli};
use latkit::run::EXIT_INPUT;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((value, code)) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("JSON output"));
            ExitCode::from(code as u8)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
