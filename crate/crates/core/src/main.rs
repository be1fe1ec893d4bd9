fn main() {
    std::process::exit(fockphase::cli::run(std::env::args_os()));
}
