fn main() {
    std::process::exit(dwolff_cli::run(std::env::args_os()));
}
