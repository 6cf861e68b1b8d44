use clap::Parser;

fn main() {
    let cli = hvol::cli::Cli::parse();
    std::process::exit(hvol::cli::run(&cli));
}
