fn main() {
    std::process::exit(flasque_cli::run(std::env::args_os()));
}
