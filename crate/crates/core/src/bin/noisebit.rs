use clap::Parser;

fn main() {
    let cli = noisebit::cli::Cli::parse();
    std::process::exit(noisebit::cli::run(cli));
}
