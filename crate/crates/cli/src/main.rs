use clap::Parser;

fn main() {
    let cli = hv_cli::Cli::parse();
    std::process::exit(hv_cli::main_with(&cli));
}
