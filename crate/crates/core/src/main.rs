fn main() {
    std::process::exit(mmdim_core::cli::main_with_args(std::env::args_os()));
}
