fn main() {
    std::process::exit(qlorentz::cli::main_with_args(std::env::args_os()));
}
