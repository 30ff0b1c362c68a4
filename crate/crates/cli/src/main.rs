use clap::Parser;
use isw_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("iswcs: {e}");
        std::process::exit(e.exit_code());
    }
}
