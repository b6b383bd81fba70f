fn main() {
    std::process::exit(specbound_cli::run(std::env::args_os()));
}
