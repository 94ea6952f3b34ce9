fn main() {
    std::process::exit(fockforge::run_cli(std::env::args_os()));
}
