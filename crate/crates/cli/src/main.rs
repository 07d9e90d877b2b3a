use clap::Parser;

fn main() {
    let cli = spikerate_cli::Cli::parse();
    if let Err(e) = spikerate_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
