fn main() {
    std::process::exit(dbp_cli::main_with_args(std::env::args_os()));
}
