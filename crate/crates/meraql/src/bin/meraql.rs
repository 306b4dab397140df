use clap::Parser;

fn main() {
    let cli = meraql::cli::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    std::process::exit(meraql::cli::run(&cli, &mut out));
}
