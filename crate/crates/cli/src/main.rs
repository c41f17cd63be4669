mod args;
mod commands;
mod error;
mod hostspec;

use clap::Parser;

use args::Cli;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    // config echo: replaying these arguments reproduces the primary output
    let echo = serde_json::json!({
        "record": "config",
        "version": env!("CARGO_PKG_VERSION"),
        "argv": &argv[1..],
    });
    eprintln!("{echo}");
    if let Err(e) = commands::run(&cli.global, &cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
