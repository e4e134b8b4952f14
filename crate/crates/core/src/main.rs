use clap::error::ErrorKind;
use clap::Parser;

use semisize::cli::{report_diagnostic, run, RunConfig};

fn main() {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) if std::env::args().any(|a| a == "--json") => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            report_diagnostic(true, "error", "UsageError", first.trim_start_matches("error: "), 2);
            std::process::exit(2);
        }
        Err(e) => e.exit(),
    };
    std::process::exit(run(config));
}
