fn main() {
    std::process::exit(osl_cli::run(std::env::args_os()));
}
