use clap::Parser;

fn main() {
    let args = amwkit::cli::CliArgs::parse();
    std::process::exit(amwkit::cli::run(&args));
}
