fn main() {
    std::process::exit(influence_cli::main_with_args(std::env::args_os()));
}
