fn main() {
    std::process::exit(wba::cli::main_with_args(std::env::args_os()));
}
