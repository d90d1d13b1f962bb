fn main() {
    std::process::exit(scalewave::cli::run(std::env::args_os()));
}
