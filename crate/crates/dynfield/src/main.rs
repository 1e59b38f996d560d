fn main() {
    std::process::exit(dynfield::cli::run(std::env::args()));
}
