fn main() {
    std::process::exit(gmprod::cli::run(std::env::args_os()));
}
