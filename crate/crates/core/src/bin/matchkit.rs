fn main() {
    std::process::exit(matchkit::cli::main_with_args(std::env::args_os()));
}
