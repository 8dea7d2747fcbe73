fn main() {
    std::process::exit(convind::cli::run(std::env::args_os()));
}
