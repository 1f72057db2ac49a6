//! Drives the command-line front-end in-process and prints its reports.
//!
//! cargo run --example command_line

use std::path::Path;

use toricqh::cli::{run, Command, Format, RunConfig};

pub fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for (file, command) in [("o_minus_one", Command::Quantum), ("cp2", Command::Cm), ("cp2", Command::Invert), ("strip", Command::Validate)] {
        let config = RunConfig { format: Format::Text, ..RunConfig::new(command, data.join(format!("{file}.json"))) };
        let outcome = run(&config);
        println!("exit {}", outcome.exit_code);
        print!("{}", outcome.render(config.format));
        println!();
    }

    let config = RunConfig { cutoff: Some("2".into()), ..RunConfig::new(Command::Jacobian, data.join("cp1.json")) };
    print!("{}", run(&config).render(Format::Json));
}
