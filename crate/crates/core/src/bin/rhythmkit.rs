fn main() {
    std::process::exit(rhythmkit::cli::run(std::env::args_os()));
}
