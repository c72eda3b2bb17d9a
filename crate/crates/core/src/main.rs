fn main() {
    std::process::exit(gapcert::cli::run(std::env::args_os()));
}
