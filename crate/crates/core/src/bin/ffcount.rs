fn main() {
    std::process::exit(ffcount::cli::main_with_args(std::env::args_os()));
}
