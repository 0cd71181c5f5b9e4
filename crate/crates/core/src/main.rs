use clap::Parser;
use sympencil::cli::{run, Cli};

fn main() {
    let outcome = run(&Cli::parse());
    if outcome.status == sympencil::cli::EXIT_ERROR {
        eprint!("{}", outcome.report);
    } else {
        print!("{}", outcome.report);
    }
    std::process::exit(outcome.status);
}
