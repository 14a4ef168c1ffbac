use clap::Parser;

fn main() {
    let cli = flic_cli::cli::Cli::parse();
    if let Err(err) = flic_cli::cli::run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
