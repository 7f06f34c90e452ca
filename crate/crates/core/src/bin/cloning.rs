fn main() {
    std::process::exit(cloning_core::cli::main_with_args(std::env::args_os()));
}
