fn main() {
    std::process::exit(hilfer_cli::run(std::env::args_os()));
}
