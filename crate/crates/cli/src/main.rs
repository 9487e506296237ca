use clap::Parser;
use tiltbound_cli::config::Cli;

fn main() {
    let cli = Cli::parse();
    let result = tiltbound_cli::run(&cli).and_then(|(table, out)| tiltbound_cli::emit(&table, out));
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
