fn main() {
    std::process::exit(orlicz_cli::run(std::env::args_os()));
}
