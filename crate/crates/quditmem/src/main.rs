fn main() {
    std::process::exit(quditmem::cli::main_with_args(std::env::args_os()));
}
