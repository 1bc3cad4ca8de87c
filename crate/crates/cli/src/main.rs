use clap::Parser;

use nframes_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli);
    if let Some(text) = outcome.render(cli.table) {
        println!("{text}");
    }
    if let Some(err) = &outcome.error {
        eprintln!("error: {err}");
    }
    std::process::exit(outcome.exit_code);
}
