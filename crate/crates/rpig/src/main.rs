fn main() {
    std::process::exit(rpig::cli::main_with_args(std::env::args().collect()));
}
