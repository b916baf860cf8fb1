fn main() {
    std::process::exit(convert_bw::cli::main_with_args(std::env::args_os()));
}
