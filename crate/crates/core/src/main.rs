use clap::Parser;

fn main() {
    let cli = hbspace::cli::Cli::parse();
    std::process::exit(hbspace::cli::run(cli));
}
