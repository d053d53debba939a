fn main() {
    std::process::exit(dpnlive::cli::run(std::env::args_os()));
}
