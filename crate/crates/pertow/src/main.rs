use clap::Parser;
use pertow::cli::{render, run, Cli};

fn main() {
    let cli = Cli::parse();
    let result = run(&cli);
    print!("{}", render(&result, cli.format));
    std::process::exit(result.outcome.exit_code());
}
