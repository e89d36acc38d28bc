fn main() {
    std::process::exit(qmckay::cli::run(std::env::args_os()));
}
