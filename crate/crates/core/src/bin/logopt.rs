fn main() {
    std::process::exit(logopt::cli::main_with(std::env::args_os().skip(1)));
}
