fn main() {
    std::process::exit(x1scan::cli::run_from(std::env::args_os()));
}
