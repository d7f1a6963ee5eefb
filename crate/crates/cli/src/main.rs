fn main() {
    std::process::exit(dehn_cli::run(std::env::args_os()));
}
