fn main() {
    std::process::exit(gramineq::cli::run(std::env::args_os()));
}
