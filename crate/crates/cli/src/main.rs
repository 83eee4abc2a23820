fn main() {
    std::process::exit(colorcap_cli::main_with_args(std::env::args_os()));
}
