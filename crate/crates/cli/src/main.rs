use clap::Parser;

fn main() {
    let cli = lcp_cli::Cli::parse();
    std::process::exit(lcp_cli::run(&cli));
}
