fn main() {
    std::process::exit(frobhom_cli::run(std::env::args_os()));
}
