use clap::Parser;

fn main() {
    std::process::exit(eqcob::cli::run(eqcob::cli::Cli::parse()));
}
