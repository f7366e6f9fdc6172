use clap::Parser;
use conevol_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run(&cli, &mut std::io::stdin().lock());
    println!("{}", serde_json::to_string_pretty(&outcome.output).expect("JSON values serialize"));
    std::process::exit(outcome.code);
}
