fn main() {
    std::process::exit(powernet_core::cli::run(std::env::args_os()));
}
