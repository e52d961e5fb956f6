fn main() {
    std::process::exit(ordeval::cli::main_with_args(std::env::args_os()));
}
