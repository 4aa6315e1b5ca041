fn main() {
    std::process::exit(ept_lab::cli::run(std::env::args_os()));
}
