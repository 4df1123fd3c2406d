fn main() {
    std::process::exit(hypharm_cli::run(std::env::args_os()));
}
