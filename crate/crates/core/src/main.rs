fn main() {
    std::process::exit(cuspidal::cli::run(std::env::args_os()));
}
