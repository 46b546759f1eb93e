use clap::Parser;

fn main() {
    let cli = dulac::cli::Cli::parse();
    let mut out = std::io::stdout().lock();
    match dulac::cli::run(&cli, &mut out) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
