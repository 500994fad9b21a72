fn main() {
    std::process::exit(nbl::cli::main_with_args(std::env::args()));
}
