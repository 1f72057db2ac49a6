use clap::Parser;
use toricqh::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let outcome = run(&config);
    print!("{}", outcome.render(config.format));
    if let Some(e) = &outcome.report.error {
        eprintln!("toricqh: {}", e.message);
    }
    std::process::exit(outcome.exit_code);
}
