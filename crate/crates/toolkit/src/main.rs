fn main() {
    std::process::exit(aec_toolkit::run(std::env::args_os()));
}
