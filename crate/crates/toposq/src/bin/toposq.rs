use clap::Parser;

fn main() {
    let cli = toposq::cli::Cli::parse();
    std::process::exit(toposq::cli::run(cli));
}
