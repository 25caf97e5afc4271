fn main() {
    std::process::exit(cylproc::cli::run(std::env::args_os()));
}
