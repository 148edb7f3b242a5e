fn main() {
    std::process::exit(partial_zeta::cli::main_with_args(std::env::args_os()));
}
