fn main() {
    std::process::exit(driftfreq::cli::main_with_args(std::env::args_os()));
}
