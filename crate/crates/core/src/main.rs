fn main() {
    std::process::exit(geohamilton::cli::run(std::env::args_os()));
}
