fn main() {
    std::process::exit(shapkit::cli::main_with_args(std::env::args_os()));
}
