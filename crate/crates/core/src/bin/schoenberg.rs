use clap::Parser;
use schoenberg::cli::{run, Args};

fn main() {
    std::process::exit(run(&Args::parse()));
}
