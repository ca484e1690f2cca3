use clap::Parser;

fn main() {
    let cli = coopalg::cli::Cli::parse();
    std::process::exit(coopalg::cli::run(cli));
}
