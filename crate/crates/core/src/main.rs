fn main() {
    std::process::exit(susydelta::cli::run(std::env::args()));
}
