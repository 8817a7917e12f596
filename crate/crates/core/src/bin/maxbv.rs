fn main() {
    std::process::exit(maxbv::cli::main(std::env::args()));
}
