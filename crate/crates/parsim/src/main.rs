use clap::Parser;

fn main() {
    let cli = parsim::cli::Cli::parse();
    std::process::exit(parsim::cli::run(cli));
}
