fn main() {
    std::process::exit(robin_cli::run(std::env::args_os()));
}
