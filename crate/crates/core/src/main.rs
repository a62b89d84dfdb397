fn main() {
    std::process::exit(mcsd::harness::run_cli(std::env::args_os()));
}
