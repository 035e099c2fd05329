fn main() {
    std::process::exit(fontlab::cli::run(std::env::args_os()));
}
