fn main() {
    std::process::exit(fqdyn::cli::run(std::env::args_os()));
}
