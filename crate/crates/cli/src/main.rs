fn main() {
    std::process::exit(furst_cli::main_with_args(std::env::args_os()));
}
