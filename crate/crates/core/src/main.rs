use clap::Parser;
use torsionlab::cli::{output_path, run, Cli, EXIT_USAGE};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = run(&cli);
    if outcome.exit != 0 && outcome.text.starts_with("error:") {
        eprint!("{}", outcome.text);
    } else if let Some(path) = output_path(&cli) {
        if let Err(e) = std::fs::write(path, &outcome.text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            std::process::exit(EXIT_USAGE);
        }
    } else {
        print!("{}", outcome.text);
    }
    std::process::exit(outcome.exit);
}
