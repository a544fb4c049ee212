fn main() {
    std::process::exit(beba::cli::main_with_args(std::env::args_os()));
}
