fn main() {
    std::process::exit(svb::cli::run(std::env::args_os()));
}
