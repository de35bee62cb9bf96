fn main() {
    std::process::exit(ctn_core::cli::main_with_args(std::env::args_os()));
}
